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

#include "gtmss/meanfield.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "gtmss/ode.hpp"
#include "gtmss/types.hpp"

namespace gtmss {

const std::array<const char*, CumulantState::kSize>& CumulantState::names() {
    static const std::array<const char*, kSize> n = {"S1z",   "S2z",   "C11xx", "C11yy", "C11zz", "C22xx",
                                                     "C22yy", "C22zz", "C12xx", "C12yx", "C12yy", "C12zz"};
    return n;
}

Eigen::VectorXd CumulantState::to_vector() const {
    Eigen::VectorXd v(kSize);
    v << S1z, S2z, C11xx, C11yy, C11zz, C22xx, C22yy, C22zz, C12xx, C12yx, C12yy, C12zz;
    return v;
}

CumulantState CumulantState::from_vector(const Eigen::VectorXd& v) {
    if (v.size() != kSize) throw ValidationError("cumulant vector must have 12 entries");
    CumulantState s;
    s.S1z = v[0];
    s.S2z = v[1];
    s.C11xx = v[2];
    s.C11yy = v[3];
    s.C11zz = v[4];
    s.C22xx = v[5];
    s.C22yy = v[6];
    s.C22zz = v[7];
    s.C12xx = v[8];
    s.C12yx = v[9];
    s.C12yy = v[10];
    s.C12zz = v[11];
    return s;
}

void MftParams::validate() const {
    if (N < 2 || N % 2 != 0) throw ValidationError("mean-field N must be even and >= 2");
    if ((N - delta_N) % 2 != 0 || n1() < 1 || n2() < 1) throw ValidationError("mean-field delta_N leaves an empty ensemble");
    if (!std::isfinite(r) || r < 0.0) throw ValidationError("mean-field r must be finite and >= 0");
    for (double rate : {gamma, gamma_minus, gamma_z}) {
        if (!(rate >= 0.0) || !std::isfinite(rate)) throw ValidationError("mean-field rates must be finite and >= 0");
    }
}

std::string to_string(MftVariant v) {
    return v == MftVariant::as_printed ? "as_printed" : "sign_corrected";
}

MftVariant parse_mft_variant(std::string_view name) {
    if (name == "as_printed" || name == "as-printed") return MftVariant::as_printed;
    if (name == "sign_corrected" || name == "sign-corrected") return MftVariant::sign_corrected;
    throw ValidationError("unknown mean-field variant '" + std::string(name) + "'");
}

CumulantState mft_initial(int N, int delta_N) {
    MftParams p;
    p.N = N;
    p.delta_N = delta_N;
    p.validate();
    CumulantState s;
    s.S1z = -p.n1() / 2.0;
    s.S2z = -p.n2() / 2.0;
    s.C11xx = s.C11yy = p.n1() / 4.0;
    s.C22xx = s.C22yy = p.n2() / 4.0;
    return s;
}

namespace {

struct Local {
    double dS, dxx, dyy, dzz;
};

// One ensemble of n spins; n / 2 and n / 4 stand for N / 4 and N / 8 at equal sizes.
Local local_rhs(double S, double xx, double yy, double zz, double n, const MftParams& p, MftVariant variant) {
    const double ch = std::cosh(2.0 * p.r);
    const double g = p.gamma, gm = p.gamma_minus, k = p.gamma_minus + 4.0 * p.gamma_z;
    Local d;
    const double relax = variant == MftVariant::as_printed ? gm * (S - n / 2.0) : -gm * (S + n / 2.0);
    d.dS = relax - g * (xx + yy + ch * S);
    d.dxx = k * (n / 4.0 - xx) + g * (ch * (zz - xx + S * S) - 0.5 * S + 2.0 * xx * S);
    d.dyy = k * (n / 4.0 - yy) + g * (ch * (zz - yy + S * S) - 0.5 * S + 2.0 * yy * S);
    d.dzz = gm * (n / 2.0 - 2.0 * zz + S) + g * (ch * (xx + yy - 2.0 * zz) + S);
    return d;
}

}  // namespace

CumulantState mft_rhs(const CumulantState& s, const MftParams& p, MftVariant variant) {
    const double ch = std::cosh(2.0 * p.r), sh = std::sinh(2.0 * p.r);
    const double g = p.gamma, k = p.gamma_minus + 4.0 * p.gamma_z;
    const Local a = local_rhs(s.S1z, s.C11xx, s.C11yy, s.C11zz, p.n1(), p, variant);
    const Local b = local_rhs(s.S2z, s.C22xx, s.C22yy, s.C22zz, p.n2(), p, variant);
    const double sz = s.S1z + s.S2z;
    CumulantState d;
    d.S1z = a.dS;
    d.C11xx = a.dxx;
    d.C11yy = a.dyy;
    d.C11zz = a.dzz;
    d.S2z = b.dS;
    d.C22xx = b.dxx;
    d.C22yy = b.dyy;
    d.C22zz = b.dzz;
    d.C12xx = -k * s.C12xx + g * (s.C12xx * sz - sh * s.S1z * s.S2z - ch * s.C12xx - sh * s.C12zz);
    d.C12yx = variant == MftVariant::as_printed ? -k * s.C12yx + g * (s.C12yx + sz - ch * s.C12yx)
                                                : -k * s.C12yx + g * (s.C12yx * sz - ch * s.C12yx);
    d.C12yy = -k * s.C12yy + g * (s.C12yy * sz + sh * s.S1z * s.S2z - ch * s.C12yy + sh * s.C12zz);
    d.C12zz = -2.0 * p.gamma_minus * s.C12zz - g * (2.0 * ch * s.C12zz + sh * (s.C12xx - s.C12yy));
    return d;
}

double mft_x_plus_sq(const CumulantState& s) {
    return s.C11xx + s.C22xx + 2.0 * s.C12xx;
}

double mft_wineland(const CumulantState& s, int N) {
    const double z = s.S1z + s.S2z;
    if (!(std::abs(z) > 1e-300)) throw ValidationError("Wineland parameter: vanishing signal S1z + S2z");
    return N * mft_x_plus_sq(s) / (z * z);
}

namespace {

Rosenbrock23 make_integrator(const MftParams& p, MftVariant variant, const MftOptions& opt) {
    OdeOptions ode;
    ode.rtol = opt.rtol;
    ode.atol = opt.atol;
    return Rosenbrock23(
        [p, variant](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
            dy = mft_rhs(CumulantState::from_vector(y), p, variant).to_vector();
        },
        0.0, mft_initial(p.N, p.delta_N).to_vector(), ode);
}

void check_variances(const Eigen::VectorXd& y, const MftParams& p, const MftOptions& opt, double t) {
    const double floor = -opt.negativity_tol * p.N;
    for (int i : {2, 3, 4, 5, 6, 7}) {
        if (y[i] < floor) {
            std::ostringstream os;
            os << "mean-field local variance " << CumulantState::names()[i] << " = " << y[i] << " at t = " << t;
            throw ConvergenceError(os.str());
        }
    }
}

}  // namespace

MftSteady mft_steady(const MftParams& p, MftVariant variant, const MftOptions& opt) {
    p.validate();
    if (!(opt.cadence > 0.0)) throw ValidationError("mean-field cadence must be positive");
    Rosenbrock23 ode = make_integrator(p, variant, opt);
    Eigen::VectorXd prev = ode.y();
    double t = 0.0;
    for (;;) {
        t += opt.cadence;
        ode.advance_to(t);
        check_variances(ode.y(), p, opt, t);
        const double change = (ode.y() - prev).norm();
        prev = ode.y();
        if (change < opt.change_tol) return {CumulantState::from_vector(ode.y()), t};
        if (t >= opt.t_budget) {
            std::ostringstream os;
            os << "mean-field steady state not reached by t = " << opt.t_budget << " (last change " << change << ")";
            throw ConvergenceError(os.str());
        }
    }
}

std::vector<CumulantState> mft_trajectory(const MftParams& p, MftVariant variant, const std::vector<double>& times,
                                          const MftOptions& opt) {
    p.validate();
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k]) || times[k] < 0.0 || (k > 0 && times[k] < times[k - 1])) {
            throw ValidationError("trajectory times must be finite, >= 0 and nondecreasing");
        }
    }
    Rosenbrock23 ode = make_integrator(p, variant, opt);
    std::vector<CumulantState> out;
    out.reserve(times.size());
    for (double t : times) {
        ode.advance_to(t, [&](double ts, const Eigen::VectorXd& y) {
            check_variances(y, p, opt, ts);
            return true;
        });
        out.push_back(CumulantState::from_vector(ode.y()));
    }
    return out;
}

MftTransient mft_transient_minimum(const MftParams& p, MftVariant variant, double t_end, const MftOptions& opt) {
    p.validate();
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("transient horizon must be positive");
    Rosenbrock23 ode = make_integrator(p, variant, opt);
    MftTransient best;
    best.state = mft_initial(p.N, p.delta_N);
    best.xi2_opt = mft_wineland(best.state, p.N);
    ode.advance_to(t_end, [&](double t, const Eigen::VectorXd& y) {
        check_variances(y, p, opt, t);
        const double z = y[0] + y[1];
        if (std::abs(z) > 1e-12 * p.N) {
            const double xi2 = p.N * (y[2] + y[5] + 2.0 * y[8]) / (z * z);
            if (xi2 < best.xi2_opt) {
                best.xi2_opt = xi2;
                best.t_opt = t;
                best.state = CumulantState::from_vector(y);
            }
        }
        return true;
    });
    return best;
}

std::string to_string(CooperativityKind k) {
    return k == CooperativityKind::relaxation ? "relaxation" : "dephasing";
}

CooperativityKind parse_cooperativity_kind(std::string_view name) {
    if (name == "relaxation" || name == "rel") return CooperativityKind::relaxation;
    if (name == "dephasing" || name == "phi") return CooperativityKind::dephasing;
    throw ValidationError("unknown cooperativity kind '" + std::string(name) + "'");
}

namespace {

struct Eval {
    double xi2 = std::numeric_limits<double>::infinity();
    double t = 0.0;
};

// xi2 at one squeezing strength, u = log(e^{2r}); failures map to +inf.
Eval evaluate(CooperativityKind kind, int N, int delta_N, double rate, double u, const ScanOptions& opt) {
    MftParams p;
    p.N = N;
    p.delta_N = delta_N;
    p.r = 0.5 * u;
    Eval e;
    try {
        if (kind == CooperativityKind::relaxation) {
            p.gamma_minus = rate;
            e.xi2 = mft_wineland(mft_steady(p, opt.variant, opt.mft).state, N);
        } else {
            p.gamma_z = rate;
            const double horizon = rate > 0.0 ? opt.horizon_factor * N / rate : opt.mft.t_budget;
            const MftTransient tr = mft_transient_minimum(p, opt.variant, std::min(horizon, opt.mft.t_budget), opt.mft);
            e.xi2 = tr.xi2_opt;
            e.t = tr.t_opt;
        }
    } catch (const ConvergenceError&) {
        e.xi2 = std::numeric_limits<double>::infinity();
    }
    return e;
}

ScanPoint optimize_r(CooperativityKind kind, int N, int delta_N, double rate, double C, const ScanOptions& opt) {
    const double u_max = std::log(opt.e2r_max_factor * N);
    const int n = std::max(3, opt.r_points);
    std::vector<double> u(n);
    std::vector<Eval> ev(n);
    int best = 0;
    for (int i = 0; i < n; ++i) {
        u[i] = u_max * i / (n - 1);
        ev[i] = evaluate(kind, N, delta_N, rate, u[i], opt);
        if (ev[i].xi2 < ev[best].xi2) best = i;
    }
    ScanPoint pt;
    pt.C = C;
    pt.r_opt = 0.5 * u[best];
    pt.xi2_opt = ev[best].xi2;
    pt.t_opt = ev[best].t;
    const double lo = u[std::max(0, best - 1)], hi = u[std::min(n - 1, best + 1)];
    Eval refined;
    const double u_opt = golden_section(
        [&](double x) {
            const Eval e = evaluate(kind, N, delta_N, rate, x, opt);
            return e.xi2;
        },
        lo, hi, opt.golden_tol);
    refined = evaluate(kind, N, delta_N, rate, u_opt, opt);
    if (refined.xi2 < pt.xi2_opt) {
        pt.r_opt = 0.5 * u_opt;
        pt.xi2_opt = refined.xi2;
        pt.t_opt = refined.t;
    }
    return pt;
}

}  // namespace

ScanResult cooperativity_scan(CooperativityKind kind, int N, const std::vector<double>& C_grid,
                              const ScanOptions& opt) {
    if (N < 2 || N % 2 != 0) throw ValidationError("scan N must be even and >= 2");
    if (C_grid.empty()) throw ValidationError("scan needs a cooperativity grid");
    for (std::size_t k = 0; k < C_grid.size(); ++k) {
        if (!(C_grid[k] > 0.0) || !std::isfinite(C_grid[k]) || (k > 0 && C_grid[k] <= C_grid[k - 1])) {
            throw ValidationError("cooperativity grid must be positive and increasing");
        }
    }
    ScanResult out;
    out.kind = kind;
    out.N = N;
    out.points.resize(C_grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t k = next++; k < C_grid.size(); k = next++) {
            out.points[k] = optimize_r(kind, N, 0, N / C_grid[k], C_grid[k], opt);
        }
    };
    const int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(C_grid.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (std::size_t k = 1; k < out.points.size(); ++k) {
        if (out.points[k].xi2_opt < 1.0 && out.points[k - 1].xi2_opt >= 1.0) {
            out.threshold = out.points[k].C;
            break;
        }
    }
    const double c0 = std::max(out.threshold, 1.0);
    out.fit_lo = c0;
    out.fit_hi = 10.0 * c0;
    std::vector<double> x, y;
    for (const ScanPoint& pt : out.points) {
        if (pt.C >= c0 * (1.0 - 1e-9) && pt.C <= 10.0 * c0 * (1.0 + 1e-9) && std::isfinite(pt.xi2_opt) &&
            pt.xi2_opt > 0.0) {
            x.push_back(pt.C);
            y.push_back(pt.xi2_opt);
        }
    }
    out.fit_points = static_cast<int>(x.size());
    if (x.size() >= 2) {
        out.fit = power_law_fit(x, y);
        out.fit.kind = "xi2_opt ~ C^p";
    }
    return out;
}

ScanPoint mft_floor(int N, const ScanOptions& opt, int delta_N) {
    return optimize_r(CooperativityKind::relaxation, N, delta_N, 0.0, std::numeric_limits<double>::infinity(), opt);
}

}  // namespace gtmss
