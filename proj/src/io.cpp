// Copyright 2026 The gtmss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gtmss/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace gtmss {

static_assert(std::endian::native == std::endian::little, "binary density matrices assume a little-endian host");

Json to_json(const LadderSpec& spec) {
    Json j;
    j["kind"] = to_string(spec.kind);
    j["param"] = spec.param();
    j["coeffs"] = spec.coeffs;
    return j;
}

LadderSpec ladder_from_json(const Json& j) {
    try {
        const LadderKind kind = parse_ladder_kind(j.at("kind").get<std::string>());
        if (kind == LadderKind::custom) return make_custom(j.at("coeffs").get<std::vector<double>>());
        return make_ladder(kind, j.at("param").get<double>());
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("ladder JSON: ") + e.what());
    }
}

Json to_json(const PairedState& state) {
    Json j;
    j["spec"] = to_json(state.spec);
    j["amplitudes"] = std::vector<double>(state.a.data(), state.a.data() + state.a.size());
    return j;
}

PairedState paired_state_from_json(const Json& j) {
    try {
        const LadderSpec spec = ladder_from_json(j.at("spec"));
        const auto amps = j.at("amplitudes").get<std::vector<double>>();
        return make_paired_state(spec, Eigen::Map<const Eigen::VectorXd>(amps.data(), static_cast<Eigen::Index>(amps.size())));
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("paired-state JSON: ") + e.what());
    }
}

Json RunConfig::to_json() const {
    Json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["seed"] = seed;
    return j;
}

RunConfig RunConfig::from_json(const Json& j) {
    try {
        RunConfig c;
        c.command = j.at("command").get<std::string>();
        if (j.contains("parameters")) {
            if (!j.at("parameters").is_object()) throw ValidationError("config parameters must be an object");
            c.parameters = j.at("parameters");
        }
        if (j.contains("seed")) c.seed = j.at("seed").get<long>();
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() != "command" && it.key() != "parameters" && it.key() != "seed") {
                throw ValidationError("config: unknown top-level key '" + it.key() + "'");
            }
        }
        return c;
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("config JSON: ") + e.what());
    }
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path.string());
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ValidationError("config " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path.string());
    return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw ValidationError("csv: header and column counts differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != rows) throw ValidationError("csv: columns differ in length");
    }
    std::ostringstream os;
    for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
    os << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << format_number(columns[k][i]);
        os << '\n';
    }
    write_text(path, os.str());
}

void write_json(const std::filesystem::path& path, const Json& j) {
    write_text(path, j.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out = open_out(path);
    out << text;
}

void write_qfim_csv(const std::filesystem::path& path, const QfiMatrix& q) {
    std::ostringstream os;
    os << "generator";
    for (const char* name : kGeneratorNames) os << ',' << name;
    os << '\n';
    for (int i = 0; i < 4; ++i) {
        os << kGeneratorNames[i];
        for (int k = 0; k < 4; ++k) os << ',' << format_number(q.q(i, k));
        os << '\n';
    }
    write_text(path, os.str());
}

void write_density_matrix(const std::filesystem::path& path, const CMat& rho) {
    std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
    const std::int64_t dims[2] = {rho.rows(), rho.cols()};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        for (Eigen::Index k = 0; k < rho.cols(); ++k) {
            const double pair[2] = {rho(i, k).real(), rho(i, k).imag()};
            out.write(reinterpret_cast<const char*>(pair), sizeof pair);
        }
    }
}

CMat read_density_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::int64_t dims[2] = {0, 0};
    in.read(reinterpret_cast<char*>(dims), sizeof dims);
    if (!in || dims[0] < 0 || dims[1] < 0 || dims[0] > (1 << 20) || dims[1] > (1 << 20)) {
        throw ValidationError("density matrix file has a bad header");
    }
    CMat rho(dims[0], dims[1]);
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        for (Eigen::Index k = 0; k < rho.cols(); ++k) {
            double pair[2];
            in.read(reinterpret_cast<char*>(pair), sizeof pair);
            if (!in) throw ValidationError("density matrix file is truncated");
            rho(i, k) = cplx(pair[0], pair[1]);
        }
    }
    return rho;
}

}  // namespace gtmss
