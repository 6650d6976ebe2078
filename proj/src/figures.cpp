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

#include "gtmss/figures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "gtmss/lindblad.hpp"
#include "gtmss/meanfield.hpp"
#include "gtmss/metrology.hpp"
#include "gtmss/svg.hpp"

namespace gtmss {

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return out;
}

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> out = linspace(std::log10(a), std::log10(b), n);
    for (double& v : out) v = std::pow(10.0, v);
    return out;
}

std::string tag(double v) {
    return format_number(v);
}

class Emitter {
public:
    Emitter(const FigureOptions& opt, FigureResult& res) : opt_(opt), res_(res) {}

    void csv(const std::string& stem, const std::vector<std::string>& header,
             const std::vector<std::vector<double>>& cols) {
        if (!opt_.formats.count("csv")) return;
        const auto path = opt_.out / (stem + ".csv");
        write_csv(path, header, cols);
        res_.files.push_back(path);
    }
    void json(const std::string& stem, const Json& j) {
        if (!opt_.formats.count("json")) return;
        const auto path = opt_.out / (stem + ".json");
        write_json(path, j);
        res_.files.push_back(path);
    }
    void svg(const std::string& stem, const Plot& plot) {
        if (!opt_.formats.count("svg")) return;
        const auto path = opt_.out / (stem + ".svg");
        write_text(path, render_svg(plot));
        res_.files.push_back(path);
    }

private:
    const FigureOptions& opt_;
    FigureResult& res_;
};

double num(const Json& p, const char* key) {
    return p.at(key).get<double>();
}

std::vector<double> list(const Json& p, const char* key) {
    return p.at(key).get<std::vector<double>>();
}

int integer(const Json& p, const char* key) {
    const double v = num(p, key);
    if (v != std::floor(v)) throw ValidationError(std::string("figure parameter '") + key + "' must be an integer");
    return static_cast<int>(v);
}

using Runner = std::function<void(const Json&, Emitter&, FigureResult&, int)>;

// fig1b: variances of X+ and X- under the engineered dissipation from |0,0>.
void fig1b(const Json& p, Emitter& e, FigureResult& res, int) {
    const double S = num(p, "S"), r = num(p, "r");
    const LadderSpec spec = make_spin(S);
    const SqueezeParams sq = SqueezeParams::finite(r);
    const Liouvillian L = liouvillian(engineered_dissipators(spec, spec, sq));
    const JointQuadratures ops = joint_quadratures(spec, spec);
    CMat rho0 = CMat::Zero(L.dim, L.dim);
    rho0(0, 0) = 1.0;
    const auto times = linspace(0.0, num(p, "t_max"), integer(p, "points"));
    const EvolutionTrace tr = evolve(L, rho0, times, {{"varXplus", ops.Xp * ops.Xp}, {"varXminus", ops.Xm * ops.Xm}});
    const SteadyObservables so = steady_observables(S, sq);
    const auto& xp = tr.series("varXplus");
    const auto& xm = tr.series("varXminus");
    e.csv("fig1b", {"t", "varXplus", "varXminus"}, {times, xp, xm});
    res.summary["closed_form"] = {{"varXplus", so.var_x_plus}, {"varXminus", so.var_x_minus}};
    res.summary["final"] = {{"varXplus", xp.back()}, {"varXminus", xm.back()}};
    res.summary["final_abs_error"] = {{"varXplus", std::abs(xp.back() - so.var_x_plus)},
                                      {"varXminus", std::abs(xm.back() - so.var_x_minus)}};
    res.summary["ratio_final"] = xm.back() / xp.back();
    res.summary["ratio_closed_form"] = std::exp(4.0 * r);
    res.summary["min_eigenvalue"] = tr.min_eigenvalue;
    res.summary["max_trace_error"] = tr.max_trace_error;
    e.json("fig1b", res.summary);
    Plot plot{"Variances under engineered dissipation", "gamma t", "variance", false, true, {}, {}};
    plot.series.push_back({"<X+^2>", times, xp});
    plot.series.push_back({"<X-^2>", times, xm});
    plot.guides.push_back({so.var_x_plus, "X+ closed form"});
    plot.guides.push_back({so.var_x_minus, "X- closed form"});
    e.svg("fig1b", plot);
}

// fig2a: Wineland parameter of the GTMSS against r for several N = 4S.
void fig2a(const Json& p, Emitter& e, FigureResult& res, int) {
    const auto rs = linspace(0.0, num(p, "r_max"), integer(p, "points"));
    std::vector<std::string> header = {"r"};
    std::vector<std::vector<double>> cols = {rs};
    Plot plot{"Wineland parameter of the GTMSS", "r", "xi^2", false, true, {}, {}};
    Json limits = Json::object();
    for (double n : list(p, "N")) {
        const double S = n / 4.0;
        std::vector<double> xi;
        for (double r : rs) xi.push_back(wineland(S, SqueezeParams::finite(r)));
        header.push_back("xi2_N" + tag(n));
        cols.push_back(xi);
        const double lim = wineland(S, SqueezeParams::infinite());
        limits[tag(n)] = lim;
        plot.series.push_back({"N = " + tag(n), rs, xi});
        plot.guides.push_back({lim, "3/(N+4), N=" + tag(n)});
    }
    e.csv("fig2a", header, cols);
    res.summary["limit"] = limits;
    e.json("fig2a", res.summary);
    e.svg("fig2a", plot);
}

// Real amplitudes of a paired state extracted from |m,m> components, i^m phase removed.
std::vector<double> paired_amplitudes(const CVec& psi, int d) {
    std::vector<double> a(d);
    cplx phase(1.0);
    for (int m = 0; m < d; ++m) {
        a[m] = (psi[m * d + m] * phase).real();
        phase *= cplx(0.0, 1.0);
    }
    double norm = 0.0;
    for (double v : a) norm += v * v;
    norm = std::sqrt(norm);
    const double sign = a[0] < 0.0 ? -1.0 : 1.0;
    for (double& v : a) v *= sign / norm;
    return a;
}

// fig2b: amplitudes of the GTMSS limit, the two-axis twisting optimum and the optimal state.
void fig2b(const Json& p, Emitter& e, FigureResult& res, int) {
    const int mmax = integer(p, "mmax");
    if (mmax < 1) throw ValidationError("fig2b: mmax must be >= 1");
    const double S = mmax / 2.0;
    const LadderSpec spec = make_spin(S);
    const int d = spec.dim();
    const PairedState g = gtmss_state(spec, SqueezeParams::infinite());
    const TwistingResult tw =
        twisting_protocol(TwistKind::two_axis, S, default_twist_horizon(TwistKind::two_axis, S), integer(p, "n_steps"));
    const OptimalState opt = optimal_paired_state(spec);
    std::vector<double> m(d), ga(d), oa(d);
    for (int k = 0; k < d; ++k) {
        m[k] = k;
        ga[k] = g.a[k];
        oa[k] = opt.state.a[k];
    }
    const std::vector<double> ta = paired_amplitudes(tw.psi_opt, d);
    e.csv("fig2b", {"m", "gtmss_limit", "twist_2M2A", "optimal"}, {m, ga, ta, oa});
    const Eigen::VectorXd tv = Eigen::Map<const Eigen::VectorXd>(ta.data(), d);
    res.summary["qfi"] = {{"gtmss_limit", paired_qfi(g)},
                          {"twist_2M2A", paired_qfi(make_paired_state(spec, tv))},
                          {"optimal", opt.qfi}};
    res.summary["twist_t_opt"] = tw.t_opt;
    res.summary["twist_xi2_opt"] = tw.xi2_opt;
    res.summary["twist_offdiag_population"] = tw.max_offdiag_population;
    e.json("fig2b", res.summary);
    Plot plot{"Paired-state amplitudes, m_max = " + std::to_string(mmax), "m", "a_m", false, false, {}, {}};
    plot.series.push_back({"GTMSS r->inf", m, ga, true});
    plot.series.push_back({"2M2A optimum", m, ta, true});
    plot.series.push_back({"optimal", m, oa});
    e.svg("fig2b", plot);
}

void scan_figure(CooperativityKind kind, const std::string& stem, const Json& p, Emitter& e, FigureResult& res,
                 int threads) {
    const int N = integer(p, "N");
    ScanOptions so;
    so.threads = threads;
    so.r_points = integer(p, "r_points");
    const auto grid = logspace(num(p, "C_min"), num(p, "C_max"), integer(p, "points"));
    const ScanResult scan = cooperativity_scan(kind, N, grid, so);
    const ScanPoint floor = mft_floor(N, so);
    std::vector<double> c, r, t, xi;
    for (const auto& pt : scan.points) {
        c.push_back(pt.C);
        r.push_back(pt.r_opt);
        t.push_back(pt.t_opt);
        xi.push_back(pt.xi2_opt);
    }
    e.csv(stem, {"C", "r_opt", "t_opt", "xi2_opt"}, {c, r, t, xi});
    res.summary["kind"] = to_string(kind);
    res.summary["N"] = N;
    res.summary["threshold"] = scan.threshold;
    res.summary["fit"] = {{"window", {scan.fit_lo, scan.fit_hi}},
                          {"points", scan.fit_points},
                          {"exponent", scan.fit.exponent},
                          {"prefactor", scan.fit.prefactor},
                          {"r2", scan.fit.r2}};
    res.summary["mean_field_floor"] = {{"xi2", floor.xi2_opt}, {"r", floor.r_opt}};
    res.summary["exact_floor"] = 3.0 / (N + 4.0);
    e.json(stem, res.summary);
    Plot plot{std::string("Optimal squeezing, ") + to_string(kind), "C", "xi^2_opt", true, true, {}, {}};
    plot.series.push_back({"mean field", c, xi, true});
    if (scan.fit_points >= 2) {
        std::vector<double> fx = {scan.fit_lo, scan.fit_hi};
        std::vector<double> fy = {scan.fit.prefactor * std::pow(fx[0], scan.fit.exponent),
                                  scan.fit.prefactor * std::pow(fx[1], scan.fit.exponent)};
        PlotSeries fit{"fit C^" + tag(std::round(scan.fit.exponent * 100) / 100), fx, fy};
        fit.dashed = true;
        plot.series.push_back(fit);
    }
    plot.guides.push_back({1.0, "xi^2 = 1"});
    plot.guides.push_back({floor.xi2_opt, "mean-field floor"});
    e.svg(stem, plot);
}

void fig3a(const Json& p, Emitter& e, FigureResult& res, int threads) {
    scan_figure(CooperativityKind::relaxation, "fig3a", p, e, res, threads);
}

void fig3b(const Json& p, Emitter& e, FigureResult& res, int threads) {
    scan_figure(CooperativityKind::dephasing, "fig3b", p, e, res, threads);
}

// figS1: two-axis twisting at fixed S, snapshots around t_opt, and optimal squeezing against N.
void figS1(const Json& p, Emitter& e, FigureResult& res, int) {
    const double S = num(p, "S");
    const int n_steps = integer(p, "n_steps");
    const TwistingResult tw =
        twisting_protocol(TwistKind::two_axis, S, default_twist_horizon(TwistKind::two_axis, S), n_steps);
    e.csv("figS1a", {"t", "xi2_squeezed", "xi2_partner"}, {tw.times, tw.xi2, tw.xi2_minus});
    const int d = make_spin(S).dim();
    std::vector<double> m(d);
    for (int k = 0; k < d; ++k) m[k] = k;
    const auto before = paired_amplitudes(twist_state(TwistKind::two_axis, S, 0.5 * tw.t_opt), d);
    const auto at = paired_amplitudes(tw.psi_opt, d);
    const auto after = paired_amplitudes(twist_state(TwistKind::two_axis, S, 1.5 * tw.t_opt), d);
    e.csv("figS1b", {"m", "half_t_opt", "t_opt", "one_and_half_t_opt"}, {m, before, at, after});

    std::vector<int> Ns;
    for (double n : list(p, "N")) Ns.push_back(static_cast<int>(n));
    const TwistScaling two = twist_scaling(TwistKind::two_axis, Ns, n_steps);
    const TwistScaling one = twist_scaling(TwistKind::one_axis, Ns, n_steps);
    std::vector<double> limit;
    for (double n : two.N) limit.push_back(3.0 / (n + 4.0));
    e.csv("figS1c", {"N", "xi2_2M2A", "xi2_2M1A", "gtmss_limit"}, {two.N, two.xi2_opt, one.xi2_opt, limit});

    auto fit_json = [](const TwistScaling& s) {
        return Json{{"fixed_exponent", s.fixed_exponent},
                    {"fixed_prefactor", s.fixed_prefactor},
                    {"free_exponent", s.free_fit.exponent},
                    {"free_prefactor", s.free_fit.prefactor}};
    };
    res.summary["S"] = S;
    res.summary["t_opt"] = tw.t_opt;
    res.summary["xi2_opt"] = tw.xi2_opt;
    res.summary["xi2_partner_opt"] = tw.xi2_minus_opt;
    res.summary["offdiag_population"] = tw.max_offdiag_population;
    res.summary["fit_2M2A"] = fit_json(two);
    res.summary["fit_2M1A"] = fit_json(one);
    e.json("figS1", res.summary);

    Plot a{"Two-axis twisting, S = " + tag(S), "t", "xi^2", false, true, {}, {}};
    a.series.push_back({"(X+ - Y+)/sqrt2", tw.times, tw.xi2});
    a.series.push_back({"(X- + Y-)/sqrt2", tw.times, tw.xi2_minus, false, true});
    e.svg("figS1a", a);
    Plot b{"Paired amplitudes around t_opt", "m", "a_m", false, false, {}, {}};
    b.series.push_back({"t_opt/2", m, before});
    b.series.push_back({"t_opt", m, at});
    b.series.push_back({"3 t_opt/2", m, after});
    e.svg("figS1b", b);
    Plot c{"Optimal squeezing against N", "N", "xi^2_opt", true, true, {}, {}};
    c.series.push_back({"2M2A", two.N, two.xi2_opt, true});
    c.series.push_back({"2M1A", one.N, one.xi2_opt, true});
    c.series.push_back({"GTMSS r->inf", two.N, limit});
    e.svg("figS1c", c);
}

// figS2: unequal ensembles, exact at small N and mean field at large N.
void figS2(const Json& p, Emitter& e, FigureResult& res, int threads) {
    const int n_exact = integer(p, "N_exact");
    const auto r_grid = list(p, "r_grid");
    std::vector<double> rel_a, xi_a, r_a;
    for (double dn : list(p, "dN_exact")) {
        const double S1 = (n_exact - dn) / 4.0, S2 = (n_exact + dn) / 4.0;
        rel_a.push_back(dn / n_exact);
        if (dn == 0.0) {
            xi_a.push_back(wineland(S1, SqueezeParams::infinite()));
            r_a.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        const UnequalResult u = steady_state_unequal(make_spin(S1), make_spin(S2), r_grid);
        xi_a.push_back(u.xi2);
        r_a.push_back(u.best_r);
    }
    e.csv("figS2a", {"dN_over_N", "xi2_opt", "r_opt"}, {rel_a, xi_a, r_a});

    const int n_mf = integer(p, "N_mf");
    ScanOptions so;
    so.threads = threads;
    so.r_points = integer(p, "r_points");
    std::vector<double> rel_b, xi_b, r_b;
    for (double dn : list(p, "dN_mf")) {
        const ScanPoint pt = mft_floor(n_mf, so, static_cast<int>(dn));
        rel_b.push_back(dn / n_mf);
        xi_b.push_back(pt.xi2_opt);
        r_b.push_back(pt.r_opt);
    }
    e.csv("figS2b", {"dN_over_N", "xi2_opt", "r_opt"}, {rel_b, xi_b, r_b});
    res.summary["N_exact"] = n_exact;
    res.summary["N_mf"] = n_mf;
    res.summary["exact_xi2"] = xi_a;
    res.summary["mean_field_xi2"] = xi_b;
    e.json("figS2", res.summary);
    Plot a{"Unequal ensembles, exact, N = " + std::to_string(n_exact), "dN/N", "xi^2_opt", false, true, {}, {}};
    a.series.push_back({"exact", rel_a, xi_a, true});
    a.guides.push_back({1.0, "xi^2 = 1"});
    e.svg("figS2a", a);
    Plot b{"Unequal ensembles, mean field, N = " + std::to_string(n_mf), "dN/N", "xi^2_opt", false, true, {}, {}};
    b.series.push_back({"mean field", rel_b, xi_b, true});
    e.svg("figS2b", b);
}

// figS3: dark-state residual of the engineered jump pair over spin sizes and r.
void figS3(const Json& p, Emitter& e, FigureResult& res, int) {
    std::vector<double> s_col, r_col, resid;
    Plot plot{"Dark-state residual of the engineered jumps", "S", "max ||Gamma psi_G||", false, true, {}, {}};
    double worst = 0.0;
    for (double r : list(p, "r")) {
        PlotSeries series{"r = " + tag(r), {}, {}, true};
        for (double two_s = 1; two_s <= 2.0 * num(p, "S_max") + 1e-9; two_s += 1.0) {
            const LadderSpec spec = make_spin(two_s / 2.0);
            const SqueezeParams sq = SqueezeParams::finite(r);
            const double v = dark_state_residual(gtmss_state(spec, sq), engineered_dissipators(spec, spec, sq));
            s_col.push_back(two_s / 2.0);
            r_col.push_back(r);
            resid.push_back(v);
            worst = std::max(worst, v);
            series.x.push_back(two_s / 2.0);
            series.y.push_back(std::max(v, 1e-18));
        }
        plot.series.push_back(series);
    }
    e.csv("figS3", {"S", "r", "residual"}, {s_col, r_col, resid});
    res.summary["max_residual"] = worst;
    e.json("figS3", res.summary);
    e.svg("figS3", plot);
}

struct GapRow {
    double key = 0.0, gap1 = 0.0, gap2 = 0.0, rate = 0.0;
    int zero_modes = 0;
    std::vector<double> t, infidelity;
};

GapRow gap_row(double S, double r, double key) {
    const LadderSpec spec = make_spin(S);
    const Liouvillian L = liouvillian(engineered_dissipators(spec, spec, SqueezeParams::finite(r)));
    CMat rho0 = CMat::Zero(L.dim, L.dim);
    rho0(0, 0) = 1.0;
    const SpectrumResult sp = spectrum_gap(L, rho0);
    GapRow row;
    row.key = key;
    row.gap1 = sp.smallest_gap;
    row.gap2 = std::numeric_limits<double>::quiet_NaN();
    for (cplx lam : sp.eigenvalues) {
        if (std::abs(lam) >= 1e-10 && -lam.real() > sp.smallest_gap * (1.0 + 1e-6)) {
            row.gap2 = -lam.real();
            break;
        }
    }
    row.rate = *sp.relevant_rate;
    row.zero_modes = sp.zero_modes;
    row.t = sp.rate_times;
    row.infidelity = sp.rate_infidelity;
    return row;
}

// figS4: infidelity decay and Liouvillian gaps against r (fixed S) and against S (fixed r).
void figS4(const Json& p, Emitter& e, FigureResult& res, int) {
    const double S = num(p, "S"), r_fixed = num(p, "r_fixed");
    const double cap = num(p, "max_superop_dim");
    auto fits_budget = [&](double s) {
        const double d = (2.0 * s + 1.0) * (2.0 * s + 1.0);
        return d * d <= cap;
    };
    std::vector<GapRow> by_r, by_s;
    for (double r : list(p, "r")) by_r.push_back(gap_row(S, r, r));
    for (double s : list(p, "S_list")) {
        if (!fits_budget(s)) {
            res.warnings.push_back("figS4: skipping S = " + tag(s) + " above the superoperator budget");
            continue;
        }
        by_s.push_back(gap_row(s, r_fixed, s));
    }
    auto emit = [&](const std::string& stem, const std::string& key, const std::vector<GapRow>& rows) {
        std::vector<double> k, g1, g2, rate, z, lk, lt, li;
        for (const auto& row : rows) {
            k.push_back(row.key);
            g1.push_back(row.gap1);
            g2.push_back(row.gap2);
            rate.push_back(row.rate);
            z.push_back(row.zero_modes);
            for (std::size_t i = 0; i < row.t.size(); ++i) {
                lk.push_back(row.key);
                lt.push_back(row.t[i]);
                li.push_back(row.infidelity[i]);
            }
        }
        e.csv(stem + "_traces", {key, "t", "infidelity"}, {lk, lt, li});
        e.csv(stem + "_gaps", {key, "gap1", "gap2", "relevant_rate", "zero_modes"}, {k, g1, g2, rate, z});
        return std::vector<std::vector<double>>{k, g1, g2, rate};
    };
    const auto a = emit("figS4ab", "r", by_r);
    const auto c = emit("figS4cd", "S", by_s);

    std::vector<double> log_rate;
    for (double v : a[3]) log_rate.push_back(std::log(v));
    const LineFit r_fit = a[0].size() >= 2 ? linear_fit(a[0], log_rate) : LineFit{};
    const PowerLawFit s_fit = c[0].size() >= 2 ? power_law_fit(c[0], c[3]) : PowerLawFit{};
    bool unique = true;
    for (const auto* rows : {&by_r, &by_s}) {
        for (const auto& row : *rows) unique = unique && row.zero_modes == 1;
    }
    res.summary["S"] = S;
    res.summary["r_fixed"] = r_fixed;
    res.summary["rate_vs_r"] = {{"slope_log_rate", r_fit.slope}, {"r2", r_fit.r2}};
    res.summary["rate_vs_S"] = {{"exponent", s_fit.exponent}, {"prefactor", s_fit.prefactor}, {"r2", s_fit.r2}};
    res.summary["unique_zero_mode"] = unique;
    res.summary["warnings"] = res.warnings;
    e.json("figS4", res.summary);

    Plot pa{"Infidelity decay, S = " + tag(S), "gamma t", "||rho - rho_G||_F", false, true, {}, {}};
    for (const auto& row : by_r) pa.series.push_back({"r = " + tag(row.key), row.t, row.infidelity});
    e.svg("figS4a", pa);
    Plot pb{"Gaps against r, S = " + tag(S), "r", "rate", false, true, {}, {}};
    pb.series.push_back({"smallest gap", a[0], a[1]});
    pb.series.push_back({"second gap", a[0], a[2]});
    pb.series.push_back({"relevant rate", a[0], a[3], true});
    e.svg("figS4b", pb);
    Plot pc{"Infidelity decay, r = " + tag(r_fixed), "gamma t", "||rho - rho_G||_F", false, true, {}, {}};
    for (const auto& row : by_s) pc.series.push_back({"S = " + tag(row.key), row.t, row.infidelity});
    e.svg("figS4c", pc);
    Plot pd{"Gaps against S, r = " + tag(r_fixed), "S", "rate", true, true, {}, {}};
    pd.series.push_back({"smallest gap", c[0], c[1]});
    pd.series.push_back({"relevant rate", c[0], c[3], true});
    e.svg("figS4d", pd);
}

// figS5: mean-field steady state against the exact closed forms, no local dissipation.
void figS5(const Json& p, Emitter& e, FigureResult& res, int) {
    const int N = integer(p, "N");
    const auto e2r = logspace(1.0, num(p, "e2r_max"), integer(p, "points"));
    std::vector<double> rs, z_mf, z_ex, x_mf, x_ex, xi_mf, xi_ex;
    double worst_valid = 0.0;
    for (double v : e2r) {
        MftParams mp;
        mp.N = N;
        mp.r = 0.5 * std::log(v);
        const CumulantState st = mft_steady(mp, MftVariant::sign_corrected).state;
        const SteadyObservables so = steady_observables(N / 4.0, SqueezeParams::finite(mp.r));
        rs.push_back(mp.r);
        z_mf.push_back(st.S1z);
        z_ex.push_back(so.z_each);
        x_mf.push_back(mft_x_plus_sq(st));
        x_ex.push_back(so.var_x_plus);
        xi_mf.push_back(mft_wineland(st, N));
        xi_ex.push_back(wineland(N / 4.0, SqueezeParams::finite(mp.r)));
        if (v <= N / 10.0) {
            worst_valid = std::max({worst_valid, std::abs(z_mf.back() / z_ex.back() - 1.0),
                                    std::abs(x_mf.back() / x_ex.back() - 1.0)});
        }
    }
    e.csv("figS5", {"e2r", "r", "Z_mf", "Z_exact", "Xp2_mf", "Xp2_exact", "xi2_mf", "xi2_exact"},
          {e2r, rs, z_mf, z_ex, x_mf, x_ex, xi_mf, xi_ex});
    res.summary["N"] = N;
    res.summary["max_rel_error_e2r_le_N_over_10"] = worst_valid;
    e.json("figS5", res.summary);
    Plot plot{"Mean field against exact steady state, N = " + std::to_string(N), "e^{2r}", "<X+^2>", true, true, {}, {}};
    plot.series.push_back({"mean field", e2r, x_mf, true});
    plot.series.push_back({"exact", e2r, x_ex});
    e.svg("figS5", plot);
}

// figS6: mean-field trajectory with weak local dephasing.
void figS6(const Json& p, Emitter& e, FigureResult& res, int) {
    MftParams mp;
    mp.N = integer(p, "N");
    mp.r = num(p, "r");
    mp.gamma_z = num(p, "gamma_z");
    const double t_end = num(p, "horizon_factor") * mp.N / mp.gamma_z;
    std::vector<double> times = {0.0};
    for (double t : logspace(num(p, "t_min"), t_end, integer(p, "points"))) times.push_back(t);
    const auto traj = mft_trajectory(mp, MftVariant::sign_corrected, times);
    std::vector<std::string> header = {"t"};
    std::vector<std::vector<double>> cols = {times};
    for (int k = 0; k < CumulantState::kSize; ++k) {
        header.push_back(CumulantState::names()[k]);
        std::vector<double> col;
        for (const auto& s : traj) col.push_back(s.to_vector()[k]);
        cols.push_back(col);
    }
    std::vector<double> xi;
    for (const auto& s : traj) xi.push_back(mft_wineland(s, mp.N));
    header.push_back("xi2");
    cols.push_back(xi);
    e.csv("figS6", header, cols);
    const auto it = std::min_element(xi.begin(), xi.end());
    res.summary["plateau_xi2"] = *it;
    res.summary["plateau_t"] = times[it - xi.begin()];
    res.summary["final_xi2"] = xi.back();
    res.summary["t_end"] = t_end;
    e.json("figS6", res.summary);
    std::vector<double> tp(times.begin() + 1, times.end()), xp(xi.begin() + 1, xi.end());
    Plot plot{"Mean-field dynamics with local dephasing", "gamma t", "xi^2", true, true, {}, {}};
    plot.series.push_back({"xi^2", tp, xp});
    plot.guides.push_back({1.0, "xi^2 = 1"});
    e.svg("figS6", plot);
}

struct FigureDef {
    Json defaults;
    Runner run;
};

const std::map<std::string, FigureDef>& registry() {
    static const std::map<std::string, FigureDef> reg = {
        {"fig1b", {{{"S", 4.5}, {"r", 0.75}, {"t_max", 40.0}, {"points", 401}}, fig1b}},
        {"fig2a", {{{"N", {20, 100, 1000}}, {"r_max", 4.0}, {"points", 161}}, fig2a}},
        {"fig2b", {{{"mmax", 30}, {"n_steps", 300}}, fig2b}},
        {"fig3a", {{{"N", 1000}, {"C_min", 0.1}, {"C_max", 1000.0}, {"points", 17}, {"r_points", 40}}, fig3a}},
        {"fig3b", {{{"N", 1000}, {"C_min", 0.1}, {"C_max", 1000.0}, {"points", 17}, {"r_points", 40}}, fig3b}},
        {"figS1", {{{"S", 15.0}, {"n_steps", 300}, {"N", {20, 30, 40, 60, 80, 100, 120, 160, 200}}}, figS1}},
        {"figS2",
         {{{"N_exact", 16},
           {"dN_exact", {0, 2, 4, 6, 8, 12}},
           {"r_grid", {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0}},
           {"N_mf", 2000},
           {"dN_mf", {0, 20, 40, 100, 200, 400}},
           {"r_points", 40}},
          figS2}},
        {"figS3", {{{"S_max", 10.0}, {"r", {0.25, 0.75, 1.5, 3.0}}}, figS3}},
        {"figS4",
         {{{"S", 2.5},
           {"r", {1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0}},
           {"r_fixed", 1.5},
           {"S_list", {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0}},
           {"max_superop_dim", 10000.0}},
          figS4}},
        {"figS5", {{{"N", 2000}, {"e2r_max", 2000.0}, {"points", 25}}, figS5}},
        {"figS6", {{{"N", 1000}, {"r", 0.2}, {"gamma_z", 0.001}, {"horizon_factor", 10.0}, {"t_min", 1e-4}, {"points", 200}},
                   figS6}},
    };
    return reg;
}

}  // namespace

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, v] : registry()) n.push_back(k);
        return n;
    }();
    return names;
}

Json figure_defaults(const std::string& name) {
    const auto it = registry().find(name);
    if (it == registry().end()) throw ValidationError("unknown figure '" + name + "'");
    return it->second.defaults;
}

FigureResult run_figure(const std::string& name, const FigureOptions& opt) {
    const auto it = registry().find(name);
    if (it == registry().end()) throw ValidationError("unknown figure '" + name + "'");
    if (!opt.params.is_object()) throw ValidationError("figure parameters must be a JSON object");
    for (const auto& f : opt.formats) {
        if (f != "csv" && f != "json" && f != "svg") throw ValidationError("unknown output format '" + f + "'");
    }
    Json merged = it->second.defaults;
    for (auto p = opt.params.begin(); p != opt.params.end(); ++p) {
        if (!merged.contains(p.key())) throw ValidationError("figure " + name + " has no parameter '" + p.key() + "'");
        const Json& def = merged[p.key()];
        const bool ok = def.is_array() ? p.value().is_array() : p.value().is_number();
        if (!ok) throw ValidationError("figure parameter '" + p.key() + "' has the wrong type");
        merged[p.key()] = p.value();
    }
    FigureResult res;
    Emitter e(opt, res);
    try {
        it->second.run(merged, e, res, std::max(1, opt.threads));
    } catch (const Json::exception& ex) {
        throw ValidationError(std::string("figure ") + name + ": " + ex.what());
    }
    return res;
}

}  // namespace gtmss
