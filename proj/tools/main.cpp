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

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gtmss/figures.hpp"
#include "gtmss/io.hpp"
#include "gtmss/lindblad.hpp"
#include "gtmss/meanfield.hpp"
#include "gtmss/metrology.hpp"

namespace fs = std::filesystem;
using namespace gtmss;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;

// Merged parameters of one invocation: config file first, flags override.
class Params {
public:
    Params(std::string command, Json values) : command_(std::move(command)), v_(std::move(values)) {}

    bool has(const std::string& k) const { return v_.contains(k); }
    const Json& raw() const { return v_; }

    double num(const std::string& k) const {
        const Json& j = at(k);
        if (j.is_number()) return j.get<double>();
        if (j.is_string()) {
            try {
                std::size_t pos = 0;
                const std::string s = j.get<std::string>();
                const double v = std::stod(s, &pos);
                if (pos == s.size()) return v;
            } catch (const std::exception&) {
            }
        }
        throw ValidationError(command_ + ": parameter '" + k + "' must be a number");
    }
    double num(const std::string& k, double fallback) const { return has(k) ? num(k) : fallback; }

    int integer(const std::string& k, int fallback) const {
        if (!has(k)) return fallback;
        const double v = num(k);
        if (v != std::floor(v) || std::abs(v) > 1e9) {
            throw ValidationError(command_ + ": parameter '" + k + "' must be an integer");
        }
        return static_cast<int>(v);
    }

    std::string str(const std::string& k, const std::string& fallback) const {
        if (!has(k)) return fallback;
        const Json& j = at(k);
        if (j.is_string()) return j.get<std::string>();
        if (j.is_number()) return format_number(j.get<double>());
        throw ValidationError(command_ + ": parameter '" + k + "' must be a string");
    }

    std::vector<double> list(const std::string& k) const {
        const Json& j = at(k);
        std::vector<double> out;
        if (!j.is_array()) return {num(k)};
        for (std::size_t i = 0; i < j.size(); ++i) {
            Params item(command_, Json{{k, j[i]}});
            out.push_back(item.num(k));
        }
        return out;
    }

    SqueezeParams squeeze(const std::string& k = "r") const {
        if (!has(k)) throw ValidationError(command_ + ": missing parameter '" + k + "'");
        const Json& j = at(k);
        if (j.is_number()) return SqueezeParams::finite(j.get<double>());
        return SqueezeParams::parse(str(k, ""));
    }

    LadderSpec ladder() const {
        const LadderKind kind = parse_ladder_kind(str("ladder", "spin"));
        if (kind == LadderKind::custom) {
            if (!has("coeffs")) throw ValidationError(command_ + ": custom ladders need --coeffs");
            return make_custom(list("coeffs"));
        }
        if (kind == LadderKind::spin) {
            if (!has("S")) throw ValidationError(command_ + ": spin ladders need --S");
            return make_spin(num("S"));
        }
        if (!has("mmax")) throw ValidationError(command_ + ": this ladder needs --mmax");
        return make_ladder(kind, num("mmax"));
    }

    double spin_size() const {
        if (has("ladder") && parse_ladder_kind(str("ladder", "spin")) != LadderKind::spin) {
            throw ValidationError(command_ + ": only spin ladders are supported");
        }
        if (!has("S")) throw ValidationError(command_ + ": missing parameter 'S'");
        return num("S");
    }

    fs::path out() const { return str("out", "."); }

    std::set<std::string> formats() const {
        std::set<std::string> f;
        if (!has("format")) return {"csv", "json", "svg"};
        const Json& j = at("format");
        if (j.is_array()) {
            for (const auto& e : j) f.insert(e.get<std::string>());
        } else {
            f.insert(j.get<std::string>());
        }
        for (const auto& e : f) {
            if (e != "csv" && e != "json" && e != "svg") throw ValidationError("unknown format '" + e + "'");
        }
        return f;
    }
    bool wants(const std::string& fmt) const { return formats().count(fmt) > 0; }

private:
    const Json& at(const std::string& k) const {
        if (!v_.contains(k)) throw ValidationError(command_ + ": missing parameter '" + k + "'");
        return v_.at(k);
    }

    std::string command_;
    Json v_;
};

struct Output {
    std::string summary;
    std::vector<fs::path> files;
};

struct Command {
    std::string name;
    std::string help;
    std::vector<std::string> keys;  // accepted parameters, each also a --flag
    std::function<Output(const Params&)> run;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::string describe(const SqueezeParams& sq) {
    return sq.limit ? "inf" : fmt(sq.r);
}

Json qfim_json(const QfiMatrix& q) {
    Json rows = Json::array();
    for (int i = 0; i < 4; ++i) {
        Json row = Json::array();
        for (int j = 0; j < 4; ++j) row.push_back(q.q(i, j));
        rows.push_back(row);
    }
    return rows;
}

Output cmd_state(const Params& p) {
    const LadderSpec spec = p.ladder();
    const SqueezeParams sq = p.squeeze();
    const PairedState st = gtmss_state(spec, sq);
    Output o;
    if (p.wants("json")) {
        o.files.push_back(p.out() / "state.json");
        write_json(o.files.back(), to_json(st));
    }
    if (p.wants("csv")) {
        std::vector<double> m, a;
        for (int k = 0; k < spec.dim(); ++k) {
            m.push_back(k);
            a.push_back(st.a[k]);
        }
        o.files.push_back(p.out() / "state.csv");
        write_csv(o.files.back(), {"m", "a"}, {m, a});
    }
    o.summary = "state " + to_string(spec.kind) + " dim=" + std::to_string(spec.dim()) + " r=" + describe(sq) +
                (sq.capped ? " (r capped)" : "") + " a0=" + fmt(st.a[0]);
    return o;
}

Output cmd_qfi(const Params& p) {
    const LadderSpec spec = p.ladder();
    const SqueezeParams sq = p.squeeze();
    // The prefactor saturates at qmax as r -> inf; the matrix then comes from the limit state.
    QfiMatrix q;
    if (sq.limit) {
        q = qfim_numeric(gtmss_state(spec, sq));
        q.n_q = qmax(spec);
    } else {
        q = qfim_analytic(spec, sq);
    }
    Output o;
    if (p.wants("csv")) {
        o.files.push_back(p.out() / "qfim.csv");
        write_qfim_csv(o.files.back(), q);
    }
    if (p.wants("json")) {
        o.files.push_back(p.out() / "qfim.json");
        write_json(o.files.back(), {{"ladder", to_json(spec)}, {"r", describe(sq)}, {"n_q", q.n_q},
                                    {"qmax", qmax(spec)}, {"qfim", qfim_json(q)}});
    }
    o.summary = sq.limit ? fmt(q.n_q) : "N_Q " + fmt(q.n_q) + " N_Q*exp(2r) " + fmt(q.n_q * std::exp(2.0 * sq.r));
    return o;
}

Output cmd_wineland(const Params& p) {
    const double S = p.spin_size();
    const SqueezeParams sq = p.squeeze();
    const double xi2 = wineland(S, sq);
    Output o;
    if (p.wants("json")) {
        const SteadyObservables so = steady_observables(S, sq);
        o.files.push_back(p.out() / "wineland.json");
        write_json(o.files.back(), {{"S", S}, {"r", describe(sq)}, {"xi2", xi2}, {"z_each", so.z_each},
                                    {"var_x_plus", so.var_x_plus}, {"var_x_minus", so.var_x_minus},
                                    {"var_y_plus", so.var_y_plus}, {"var_y_minus", so.var_y_minus}});
    }
    o.summary = "xi2 " + fmt(xi2);
    return o;
}

Output cmd_sld_check(const Params& p) {
    const LadderSpec spec = p.ladder();
    const SqueezeParams sq = p.squeeze();
    Json j = Json::object();
    double worst = 0.0;
    for (Generator g : {Generator::x_plus, Generator::x_minus, Generator::y_plus, Generator::y_minus}) {
        const double res = sld_residual(spec, sq, g);
        worst = std::max(worst, res);
        j[to_string(g)] = {{"residual", res}, {"flipped_sign", sld_residual(spec, sq, g, -1.0)}};
    }
    Output o;
    if (p.wants("json")) {
        o.files.push_back(p.out() / "sld_check.json");
        write_json(o.files.back(), j);
    }
    o.summary = "sld max residual " + fmt(worst);
    return o;
}

Output cmd_sequential(const Params& p) {
    const SequentialModel m = SequentialModel::with_matched_squeezing(p.integer("N", 1000), p.num("lambda", 0.667));
    const SequentialResult r = sequential_estimation(m);
    Output o;
    if (p.wants("json")) {
        o.files.push_back(p.out() / "sequential.json");
        write_json(o.files.back(), {{"N", m.N}, {"lambda", m.lambda}, {"r", m.r}, {"imprecision", r.imprecision},
                                    {"snr_degradation", r.snr_degradation}, {"xi2", r.xi2},
                                    {"var_x_plus", r.var_x_plus}, {"xi2_x_plus", r.xi2_x_plus},
                                    {"xi2_y_minus", r.xi2_y_minus}});
    }
    o.summary = "sequential var_x_plus " + fmt(r.var_x_plus) + " backaction " + fmt(r.snr_degradation);
    return o;
}

Output cmd_twist(const Params& p) {
    const TwistKind kind = parse_twist_kind(p.str("kind", "2M2A"));
    const double S = p.spin_size();
    const double t_max = p.num("t-max", default_twist_horizon(kind, S));
    const TwistingResult r = twisting_protocol(kind, S, t_max, p.integer("steps", 300));
    Output o;
    if (p.wants("csv")) {
        o.files.push_back(p.out() / "twist.csv");
        write_csv(o.files.back(), {"t", "xi2", "xi2_partner"}, {r.times, r.xi2, r.xi2_minus});
    }
    if (p.wants("json")) {
        o.files.push_back(p.out() / "twist.json");
        write_json(o.files.back(), {{"kind", to_string(kind)}, {"S", S}, {"t_opt", r.t_opt}, {"xi2_opt", r.xi2_opt},
                                    {"theta_opt", r.theta_opt}, {"xi2_partner_opt", r.xi2_minus_opt},
                                    {"max_norm_error", r.max_norm_error},
                                    {"max_offdiag_population", r.max_offdiag_population}});
    }
    o.summary = "twist " + to_string(kind) + " t_opt " + fmt(r.t_opt) + " xi2_opt " + fmt(r.xi2_opt);
    return o;
}

Output cmd_dissipators(const Params& p) {
    const std::string set = p.str("jumps", "engineered");
    double res = 0.0;
    if (set == "engineered") {
        const LadderSpec spec = p.ladder();
        const SqueezeParams sq = p.squeeze();
        res = dark_state_residual(gtmss_state(spec, sq), engineered_dissipators(spec, spec, sq));
    } else if (set == "binomial") {
        const double S = p.spin_size();
        res = dark_state_residual(binomial_paired_state(make_spin(S)), binomial_stabilizer_jumps(S));
    } else {
        throw ValidationError("dissipators: --jumps must be engineered or binomial");
    }
    Output o;
    if (p.wants("json")) {
        o.files.push_back(p.out() / "dark_residual.json");
        write_json(o.files.back(), {{"jumps", set}, {"residual", res}});
    }
    o.summary = "dark-state residual " + fmt(res);
    return o;
}

Liouvillian engineered_liouvillian(const Params& p, LadderSpec& spec1, LadderSpec& spec2) {
    spec1 = p.ladder();
    spec2 = p.has("S2") ? make_spin(p.num("S2")) : spec1;
    const SqueezeParams sq = p.squeeze();
    return liouvillian(engineered_dissipators(spec1, spec2, sq, p.num("gamma", 1.0)));
}

Output cmd_evolve(const Params& p) {
    LadderSpec s1, s2;
    const Liouvillian L = engineered_liouvillian(p, s1, s2);
    const JointQuadratures ops = joint_quadratures(s1, s2);
    CMat rho0 = CMat::Zero(L.dim, L.dim);
    rho0(0, 0) = 1.0;
    const int points = p.integer("points", 101);
    if (points < 2) throw ValidationError("evolve: --points must be >= 2");
    const double t_max = p.num("t-max", 40.0);
    std::vector<double> times(points);
    for (int i = 0; i < points; ++i) times[i] = t_max * i / (points - 1);
    EvolveOptions eo;
    if (s1.dim() == s2.dim() && s1.coeffs == s2.coeffs) {
        const CVec psi = gtmss_state(s1, p.squeeze()).product_vector();
        eo.target = psi * psi.adjoint();
    }
    const EvolutionTrace tr =
        evolve(L, rho0, times, {{"varXplus", ops.Xp * ops.Xp}, {"varXminus", ops.Xm * ops.Xm}, {"Zp", ops.Zp}}, eo);
    Output o;
    if (p.wants("csv")) {
        std::vector<std::string> header = {"t", "varXplus", "varXminus", "Zp"};
        std::vector<std::vector<double>> cols = {times, tr.series("varXplus"), tr.series("varXminus"),
                                                 tr.series("Zp")};
        if (!tr.infidelity.empty()) {
            header.push_back("infidelity");
            cols.push_back(tr.infidelity);
        }
        o.files.push_back(p.out() / "evolve.csv");
        write_csv(o.files.back(), header, cols);
    }
    if (p.wants("json")) {
        o.files.push_back(p.out() / "evolve.json");
        write_json(o.files.back(), {{"max_trace_error", tr.max_trace_error},
                                    {"max_hermiticity_error", tr.max_hermiticity_error},
                                    {"min_eigenvalue", tr.min_eigenvalue}, {"rhs_evals", tr.rhs_evals}});
    }
    o.files.push_back(p.out() / "rho_final.bin");
    write_density_matrix(o.files.back(), tr.final_state);
    o.summary = "evolve t=" + fmt(t_max) + " varXplus " + fmt(tr.series("varXplus").back()) + " varXminus " +
                fmt(tr.series("varXminus").back());
    return o;
}

Output cmd_spectrum(const Params& p) {
    LadderSpec s1, s2;
    const Liouvillian L = engineered_liouvillian(p, s1, s2);
    CMat rho0 = CMat::Zero(L.dim, L.dim);
    rho0(0, 0) = 1.0;
    SpectrumOptions so;
    so.k = p.integer("k", so.k);
    const SpectrumResult r = spectrum_gap(L, rho0, so);
    Output o;
    if (p.wants("csv")) {
        std::vector<double> re, im;
        for (cplx l : r.eigenvalues) {
            re.push_back(l.real());
            im.push_back(l.imag());
        }
        o.files.push_back(p.out() / "spectrum.csv");
        write_csv(o.files.back(), {"re", "im"}, {re, im});
        o.files.push_back(p.out() / "spectrum_infidelity.csv");
        write_csv(o.files.back(), {"t", "infidelity"}, {r.rate_times, r.rate_infidelity});
    }
    if (p.wants("json")) {
        o.files.push_back(p.out() / "spectrum.json");
        write_json(o.files.back(), {{"zero_modes", r.zero_modes}, {"smallest_gap", r.smallest_gap},
                                    {"relevant_rate", *r.relevant_rate}, {"fit_points", r.fit_points},
                                    {"iterative", r.iterative}});
    }
    o.summary = "spectrum zero_modes " + std::to_string(r.zero_modes) + " gap " + fmt(r.smallest_gap) +
                " relevant_rate " + fmt(*r.relevant_rate);
    return o;
}

Output cmd_unequal(const Params& p) {
    const std::vector<double> grid = p.has("r-grid") ? p.list("r-grid") : std::vector<double>{0.5, 1.0, 1.5, 2.0};
    const UnequalResult r = steady_state_unequal(make_spin(p.num("S1")), make_spin(p.num("S2")), grid);
    Output o;
    if (p.wants("csv")) {
        std::vector<double> rs, xi, tc;
        for (const auto& pt : r.scan) {
            rs.push_back(pt.r);
            xi.push_back(pt.xi2);
            tc.push_back(pt.t_converged);
        }
        o.files.push_back(p.out() / "unequal.csv");
        write_csv(o.files.back(), {"r", "xi2", "t_converged"}, {rs, xi, tc});
    }
    if (p.wants("json")) {
        o.files.push_back(p.out() / "unequal.json");
        write_json(o.files.back(), {{"best_r", r.best_r}, {"xi2", r.xi2}});
    }
    o.summary = "unequal best_r " + fmt(r.best_r) + " xi2 " + fmt(r.xi2);
    return o;
}

Output cmd_mft(const Params& p) {
    MftParams mp;
    mp.N = p.integer("N", 1000);
    mp.delta_N = p.integer("delta-N", 0);
    mp.r = p.num("r", 0.5);
    mp.gamma_minus = p.num("gamma-minus", 0.0);
    mp.gamma_z = p.num("gamma-z", 0.0);
    mp.validate();
    const MftVariant variant = parse_mft_variant(p.str("variant", "sign_corrected"));
    const int points = p.integer("points", 101);
    if (points < 2) throw ValidationError("mft: --points must be >= 2");
    const double t_max = p.num("t-max", 20.0);
    std::vector<double> times(points);
    for (int i = 0; i < points; ++i) times[i] = t_max * i / (points - 1);
    const auto traj = mft_trajectory(mp, variant, times);
    std::vector<double> xi;
    for (const auto& s : traj) xi.push_back(mft_wineland(s, mp.N));
    Output o;
    if (p.wants("csv")) {
        std::vector<std::string> header = {"t"};
        std::vector<std::vector<double>> cols = {times};
        for (int k = 0; k < CumulantState::kSize; ++k) {
            header.push_back(CumulantState::names()[k]);
            std::vector<double> col;
            for (const auto& s : traj) col.push_back(s.to_vector()[k]);
            cols.push_back(col);
        }
        header.push_back("xi2");
        cols.push_back(xi);
        o.files.push_back(p.out() / "mft.csv");
        write_csv(o.files.back(), header, cols);
    }
    if (p.wants("json")) {
        o.files.push_back(p.out() / "mft.json");
        write_json(o.files.back(), {{"N", mp.N}, {"delta_N", mp.delta_N}, {"r", mp.r}, {"variant", to_string(variant)},
                                    {"final_xi2", xi.back()}, {"final_x_plus_sq", mft_x_plus_sq(traj.back())}});
    }
    o.summary = "mft final xi2 " + fmt(xi.back());
    return o;
}

Output cmd_scan(const Params& p) {
    const CooperativityKind kind = parse_cooperativity_kind(p.str("kind", "relaxation"));
    const int N = p.integer("N", 1000);
    std::vector<double> grid;
    if (p.has("C")) {
        grid = p.list("C");
    } else {
        const int n = p.integer("points", 17);
        const double lo = std::log10(p.num("C-min", 0.1)), hi = std::log10(p.num("C-max", 1000.0));
        for (int i = 0; i < n; ++i) grid.push_back(std::pow(10.0, n == 1 ? lo : lo + (hi - lo) * i / (n - 1)));
    }
    ScanOptions so;
    so.threads = std::max(1, p.integer("threads", 1));
    so.r_points = p.integer("r-points", so.r_points);
    const ScanResult r = cooperativity_scan(kind, N, grid, so);
    Output o;
    if (p.wants("csv")) {
        std::vector<double> c, ro, to, xi;
        for (const auto& pt : r.points) {
            c.push_back(pt.C);
            ro.push_back(pt.r_opt);
            to.push_back(pt.t_opt);
            xi.push_back(pt.xi2_opt);
        }
        o.files.push_back(p.out() / "scan.csv");
        write_csv(o.files.back(), {"C", "r_opt", "t_opt", "xi2_opt"}, {c, ro, to, xi});
    }
    if (p.wants("json")) {
        o.files.push_back(p.out() / "scan.json");
        write_json(o.files.back(), {{"kind", to_string(kind)}, {"N", N}, {"threshold", r.threshold},
                                    {"fit_window", {r.fit_lo, r.fit_hi}}, {"fit_points", r.fit_points},
                                    {"exponent", r.fit.exponent}, {"prefactor", r.fit.prefactor}});
    }
    o.summary = "scan " + to_string(kind) + " threshold " + fmt(r.threshold) + " exponent " + fmt(r.fit.exponent);
    return o;
}

Output cmd_figure(const Params& p) {
    const std::string name = p.str("name", "");
    FigureOptions fo;
    fo.out = p.out();
    fo.threads = std::max(1, p.integer("threads", 1));
    fo.formats = p.formats();
    if (p.has("param")) {
        const Json& raw = p.raw().at("param");
        if (raw.is_object()) {
            fo.params = raw;
        } else {
            const Json items = raw.is_array() ? raw : Json::array({raw});
            for (const auto& it : items) {
                const std::string kv = it.is_string() ? it.get<std::string>() : it.dump();
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw ValidationError("figure: --param expects key=value");
                try {
                    fo.params[kv.substr(0, eq)] = Json::parse(kv.substr(eq + 1));
                } catch (const Json::exception&) {
                    throw ValidationError("figure: value of '" + kv.substr(0, eq) + "' is not valid JSON");
                }
            }
        }
    }
    const FigureResult r = run_figure(name, fo);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    Output o;
    o.files = r.files;
    o.summary = "figure " + name + " wrote " + std::to_string(r.files.size()) + " files";
    return o;
}

Output cmd_optimal_state(const Params& p) {
    const LadderSpec spec = p.ladder();
    const OptimalState os = optimal_paired_state(spec);
    Output o;
    std::vector<double> m, a;
    for (int k = 0; k < spec.dim(); ++k) {
        m.push_back(k);
        a.push_back(os.state.a[k]);
    }
    if (p.wants("csv")) {
        o.files.push_back(p.out() / "optimal_state.csv");
        write_csv(o.files.back(), {"m", "a"}, {m, a});
    }
    if (p.wants("json")) {
        o.files.push_back(p.out() / "optimal_state.json");
        write_json(o.files.back(), {{"state", to_json(os.state)}, {"qfi", os.qfi}});
    }
    o.summary = "optimal-state qfi " + fmt(os.qfi);
    return o;
}

Output cmd_ghz(const Params& p) {
    const double S = p.spin_size();
    const std::string v = p.str("variant", "two_generator");
    GhzVariant variant;
    if (v == "single_generator") {
        variant = GhzVariant::single_generator;
    } else if (v == "two_generator") {
        variant = GhzVariant::two_generator;
    } else {
        throw ValidationError("ghz: --variant must be single_generator or two_generator");
    }
    const GhzQfi g = ghz_qfi(S, variant);
    Json forms = Json::array();
    for (const auto& c : g.closed_forms) {
        forms.push_back({{"label", c.label}, {"generator", kGeneratorNames[c.generator]}, {"value", c.value},
                         {"matches_dense", c.matches}});
    }
    Json diag = Json::object();
    for (int i = 0; i < 4; ++i) diag[kGeneratorNames[i]] = g.diagonal[i];
    Output o;
    if (p.wants("json")) {
        o.files.push_back(p.out() / "ghz.json");
        write_json(o.files.back(), {{"S", S}, {"variant", v}, {"dense_qfi", diag}, {"closed_forms", forms}});
    }
    std::string verdict;
    for (const auto& c : g.closed_forms) verdict += " " + c.label + (c.matches ? "=dense" : "!=dense");
    o.summary = "ghz dense X+ " + fmt(g.diagonal[0]) + verdict;
    return o;
}

const std::vector<std::string> kLadderKeys = {"ladder", "S", "mmax", "coeffs", "r"};

std::vector<std::string> with(std::vector<std::string> base, std::initializer_list<std::string> extra) {
    base.insert(base.end(), extra);
    return base;
}

std::vector<Command> commands() {
    return {
        {"state", "GTMSS amplitudes", with(kLadderKeys, {"out", "format"}), cmd_state},
        {"qfi", "Analytic QFI matrix; prints the prefactor N_Q", with(kLadderKeys, {"out", "format"}), cmd_qfi},
        {"wineland", "Wineland parameter of the spin GTMSS", {"ladder", "S", "r", "out", "format"}, cmd_wineland},
        {"sld-check", "Quadrature SLD residuals", with(kLadderKeys, {"out", "format"}), cmd_sld_check},
        {"sequential", "Sequential X+ then Y- estimation", {"N", "lambda", "out", "format"}, cmd_sequential},
        {"twist", "One- or two-axis twisting protocol", {"kind", "S", "t-max", "steps", "out", "format"}, cmd_twist},
        {"dissipators", "Dark-state residual of a jump set", with(kLadderKeys, {"jumps", "out", "format"}),
         cmd_dissipators},
        {"evolve", "Lindblad evolution from |0,0>", with(kLadderKeys, {"S2", "gamma", "t-max", "points", "out", "format"}),
         cmd_evolve},
        {"spectrum", "Liouvillian gaps and relevant rate", with(kLadderKeys, {"S2", "gamma", "k", "out", "format"}),
         cmd_spectrum},
        {"unequal", "Steady squeezing of unequal spin ensembles", {"S1", "S2", "r-grid", "out", "format"}, cmd_unequal},
        {"mft", "Mean-field cumulant trajectory",
         {"N", "delta-N", "r", "gamma-minus", "gamma-z", "variant", "t-max", "points", "out", "format"}, cmd_mft},
        {"scan", "Cooperativity scan of the optimal squeezing",
         {"kind", "N", "C", "C-min", "C-max", "points", "r-points", "threads", "out", "format"}, cmd_scan},
        {"figure", "Data, fits and plots of one figure", {"name", "param", "threads", "out", "format"}, cmd_figure},
        {"optimal-state", "QFI-optimal paired state", {"ladder", "S", "mmax", "coeffs", "out", "format"},
         cmd_optimal_state},
        {"ghz", "Dense QFI of the GHZ-like paired state", {"S", "variant", "out", "format"}, cmd_ghz},
    };
}

// Flag text to JSON: numbers stay numbers, everything else is a string.
Json flag_value(const std::string& s) {
    if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-' || s[0] == '.')) {
        try {
            const Json j = Json::parse(s);
            if (j.is_number()) return j;
        } catch (const Json::exception&) {
        }
    }
    return s;
}

const std::set<std::string> kListKeys = {"coeffs", "r-grid", "C", "param", "format"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gtmss: generalized two-mode squeezed states of ladder systems"};
    app.require_subcommand(1);
    const auto cmds = commands();
    std::map<std::string, std::map<std::string, std::vector<std::string>>> flags;
    std::map<std::string, std::string> config_path;
    std::map<std::string, CLI::App*> subs;
    for (const auto& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        if (c.name == "dissipators") sub->alias("dark-residual");
        subs[c.name] = sub;
        for (const auto& k : c.keys) {
            auto& slot = flags[c.name][k];
            if (c.name == "figure" && k == "name") {
                sub->add_option("name", slot, "Figure name")->expected(1);
                continue;
            }
            CLI::Option* opt = sub->add_option("--" + k, slot);
            if (kListKeys.count(k)) {
                opt->delimiter(',')->expected(1, -1);
                if (k == "param") opt->delimiter('\0');
            } else {
                opt->expected(1);
            }
        }
        sub->add_option("--config", config_path[c.name], "JSON run configuration");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    for (const auto& c : cmds) {
        if (!subs[c.name]->parsed()) continue;
        try {
            Json values = Json::object();
            if (!config_path[c.name].empty()) {
                const RunConfig cfg = RunConfig::load(config_path[c.name]);
                if (cfg.command != c.name) {
                    throw ValidationError("config command '" + cfg.command + "' does not match '" + c.name + "'");
                }
                values = cfg.parameters;
            }
            for (const auto& [k, v] : flags[c.name]) {
                if (v.empty()) continue;
                if (kListKeys.count(k)) {
                    Json arr = Json::array();
                    for (const auto& e : v) arr.push_back(k == "param" || k == "format" ? Json(e) : flag_value(e));
                    values[k] = arr;
                } else {
                    values[k] = flag_value(v.front());
                }
            }
            const std::set<std::string> allowed(c.keys.begin(), c.keys.end());
            for (auto it = values.begin(); it != values.end(); ++it) {
                if (!allowed.count(it.key())) {
                    throw ValidationError(c.name + ": unknown parameter '" + it.key() + "'");
                }
            }
            const Output out = c.run(Params(c.name, values));
            std::cout << out.summary << "\n";
            return 0;
        } catch (const ValidationError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitValidation;
        } catch (const ConvergenceError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitConvergence;
        } catch (const Json::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitValidation;
        }
    }
    return kExitValidation;
}
