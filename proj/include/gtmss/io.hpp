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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtmss/state.hpp"

namespace gtmss {

using Json = nlohmann::json;

// {"kind", "param", "coeffs"}; param is S for spins and m_max otherwise.
Json to_json(const LadderSpec& spec);
LadderSpec ladder_from_json(const Json& j);

// {"spec", "amplitudes"}
Json to_json(const PairedState& state);
PairedState paired_state_from_json(const Json& j);

struct RunConfig {
    std::string command;
    Json parameters = Json::object();
    long seed = 0;  // reserved; every pipeline is deterministic

    Json to_json() const;
    static RunConfig from_json(const Json& j);
    static RunConfig load(const std::filesystem::path& path);
};

// Shortest round-trip decimal form of x.
std::string format_number(double x);

// Columns of equal length under a header row.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

// 4 x 4 matrix with a generator header row and column.
void write_qfim_csv(const std::filesystem::path& path, const QfiMatrix& q);

// int64 rows, int64 cols, then row-major (re, im) float64 pairs, little-endian.
void write_density_matrix(const std::filesystem::path& path, const CMat& rho);
CMat read_density_matrix(const std::filesystem::path& path);

}  // namespace gtmss
