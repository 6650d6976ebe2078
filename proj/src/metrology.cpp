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

#include "gtmss/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gtmss/fit.hpp"
#include "gtmss/krylov.hpp"

namespace gtmss {

std::string to_string(Generator g) {
    return kGeneratorNames[static_cast<int>(g)];
}

namespace {

double sld_equation_residual(const CMat& rho, const SpMat& sld, const SpMat& w) {
    const CMat l_rho = sld * rho;
    const CMat w_rho = w * rho;
    const cplx i(0.0, 1.0);
    const CMat lhs = l_rho + l_rho.adjoint();
    const CMat rhs = 2.0 * (-i * w_rho + i * w_rho.adjoint());
    return (lhs - rhs).norm();
}

}  // namespace

double sld_residual(const LadderSpec& spec, const SqueezeParams& params, Generator g, double sign) {
    if (params.limit || params.r <= 0.0) throw ValidationError("sld_residual needs finite r > 0");
    const JointQuadratures ops = joint_quadratures(spec, spec);
    const CVec psi = gtmss_state(spec, params).product_vector();
    const CMat rho = psi * psi.adjoint();
    const double up = std::exp(2.0 * params.r), down = std::exp(-2.0 * params.r);
    SpMat sld, w;
    switch (g) {
        case Generator::x_plus:
            w = ops.Xp;
            sld = cplx(2.0 * down) * ops.Yp;
            break;
        case Generator::x_minus:
            w = ops.Xm;
            sld = cplx(2.0 * up) * ops.Ym;
            break;
        case Generator::y_plus:
            w = ops.Yp;
            sld = cplx(-2.0 * up) * ops.Xp;
            break;
        case Generator::y_minus:
            w = ops.Ym;
            sld = cplx(-2.0 * down) * ops.Xm;
            break;
    }
    return sld_equation_residual(rho, cplx(sign) * sld, w);
}

CommutingSld commuting_sld_spin_half(double r, double mix) {
    const LadderSpec spec = make_spin(0.5);
    const JointQuadratures ops = joint_quadratures(spec, spec);
    const SpMat hop = SpMat(ops.O1.adjoint()) * ops.O2;  // O1^dag O2
    const SpMat hop_dag = hop.adjoint();
    const cplx i(0.0, 1.0);
    // mix = sqrt 2 gives (O1^dag O2 + h.c.)/sqrt 2 and i(O1^dag O2 - h.c.)/sqrt 2.
    const SpMat extra_y = cplx(0.5 * mix) * SpMat(hop + hop_dag);
    const SpMat extra_x = (i * cplx(0.5 * mix)) * SpMat(hop - hop_dag);
    const CMat ly = CMat(ops.Xp) + CMat(extra_y);
    const CMat lx = CMat(ops.Ym) + CMat(extra_x);

    CommutingSld out;
    out.commutator_norm = (ly * lx - lx * ly).norm();

    const SqueezeParams p = SqueezeParams::finite(r);
    const CVec psi = gtmss_state(spec, p).product_vector();
    const CMat rho = psi * psi.adjoint();
    const double up = std::exp(2.0 * r);
    out.residual_y_plus = sld_equation_residual(rho, SpMat((cplx(-2.0 * up) * ly).sparseView()), ops.Yp);
    out.residual_x_minus = sld_equation_residual(rho, SpMat((cplx(2.0 * up) * lx).sparseView()), ops.Xm);
    return out;
}

SequentialModel SequentialModel::with_matched_squeezing(int N, double lambda) {
    SequentialModel m;
    m.N = N;
    m.lambda = lambda;
    m.r = 0.5 * std::log(N / 4.0);
    return m;
}

SequentialResult sequential_estimation(const SequentialModel& model) {
    if (model.N < 2 || model.N % 2 != 0) throw ValidationError("sequential model needs even N >= 2");
    if (!(model.lambda >= 0.0) || !std::isfinite(model.lambda)) {
        throw ValidationError("measurement strength must be finite and >= 0");
    }
    const double S = model.N / 4.0;
    const SqueezeParams p = SqueezeParams::finite(model.r);
    SequentialResult out;
    out.xi2 = wineland(S, p);
    out.var_x_plus = steady_observables(S, p).var_x_plus;
    out.imprecision = model.lambda > 0.0 ? 1.0 / (2.0 * model.lambda) : std::numeric_limits<double>::infinity();
    out.snr_degradation = 1.0 / std::cosh(model.lambda);
    out.xi2_x_plus = out.xi2 * (1.0 + out.imprecision / out.var_x_plus);
    out.xi2_y_minus = out.xi2 * std::cosh(model.lambda);
    return out;
}

std::string to_string(TwistKind kind) {
    return kind == TwistKind::one_axis ? "2M1A" : "2M2A";
}

TwistKind parse_twist_kind(std::string_view name) {
    if (name == "2M1A" || name == "one-axis" || name == "1A") return TwistKind::one_axis;
    if (name == "2M2A" || name == "two-axis" || name == "2A") return TwistKind::two_axis;
    throw ValidationError("unknown twisting kind '" + std::string(name) + "'");
}

double default_twist_horizon(TwistKind kind, double S) {
    const double N = 4.0 * S;
    return kind == TwistKind::two_axis ? 4.0 * std::log(N) / N : 6.0 / std::cbrt(N * N);
}

namespace {

struct TwistEvaluator {
    TwistKind kind;
    double N;
    JointQuadratures ops;
    SpMat squeezed;  // two_axis quadrature X+ - Y+
    SpMat partner;   // two_axis quadrature X- + Y-

    // Smallest eigenvalue of the covariance of (a, b) and the angle of its eigenvector.
    static void min_pair(const CVec& psi, const SpMat& a, const SpMat& b, double& lam, double& theta) {
        const CVec va = a * psi, vb = b * psi;
        const double ma = psi.dot(va).real(), mb = psi.dot(vb).real();
        const double caa = va.squaredNorm() - ma * ma;
        const double cbb = vb.squaredNorm() - mb * mb;
        const double cab = va.dot(vb).real() - ma * mb;
        Eigen::Matrix2d c;
        c << caa, cab, cab, cbb;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(c);
        lam = es.eigenvalues()[0];
        const Eigen::Vector2d u = es.eigenvectors().col(0);
        // u = (sin t, cos t) up to sign; fold into [0, pi).
        theta = std::atan2(u[0], u[1]);
        if (theta < 0.0) theta += std::numbers::pi;
        if (theta >= std::numbers::pi) theta -= std::numbers::pi;
    }

    double signal(const CVec& psi) const { return psi.dot(ops.Zp * psi).real(); }

    double xi2(const CVec& psi, double* theta = nullptr) const {
        const double z = signal(psi);
        if (kind == TwistKind::two_axis) {
            const CVec v = squeezed * psi;
            const double mean = psi.dot(v).real();
            return 0.5 * N * (v.squaredNorm() - mean * mean) / (z * z);
        }
        double lam = 0.0, th = 0.0;
        min_pair(psi, ops.Xp, ops.Yp, lam, th);
        if (theta) *theta = th;
        return N * lam / (z * z);
    }

    double xi2_minus(const CVec& psi, double* theta) const {
        const double z = signal(psi);
        if (kind == TwistKind::two_axis) {
            const CVec v = partner * psi;
            const double mean = psi.dot(v).real();
            return 0.5 * N * (v.squaredNorm() - mean * mean) / (z * z);
        }
        double lam = 0.0;
        const SpMat neg_ym = cplx(-1.0) * ops.Ym;
        min_pair(psi, ops.Xm, neg_ym, lam, *theta);
        return N * lam / (z * z);
    }
};

}  // namespace

namespace {

SpMat twist_hamiltonian(TwistKind kind, const JointQuadratures& ops) {
    SpMat h = SpMat(ops.X1 * ops.X2);
    if (kind == TwistKind::two_axis) h -= SpMat(ops.Y1 * ops.Y2);
    h.prune(cplx(0.0, 0.0));
    return h;
}

// Propagates on the paired subspace {|m, m>} when H leaves it invariant, else on the full space.
class TwistPropagator {
public:
    TwistPropagator(const SpMat& h, int d) : d_(d) {
        std::vector<int> local(static_cast<std::size_t>(d) * d, -1);
        for (int m = 0; m < d; ++m) local[static_cast<std::size_t>(m) * d + m] = m;
        std::vector<Eigen::Triplet<cplx>> trip;
        bool invariant = true;
        for (int k = 0; k < h.outerSize() && invariant; ++k) {
            for (SpMat::InnerIterator it(h, k); it; ++it) {
                const int i = local[it.row()], j = local[it.col()];
                if ((i < 0) != (j < 0)) {
                    invariant = false;
                    break;
                }
                if (i >= 0) trip.emplace_back(i, j, it.value());
            }
        }
        if (invariant) {
            h_.resize(d, d);
            h_.setFromTriplets(trip.begin(), trip.end());
        } else {
            h_ = h;
            d_ = 0;
        }
    }

    CVec initial() const {
        CVec v = CVec::Zero(h_.rows());
        v[0] = 1.0;
        return v;
    }
    CVec step(const CVec& v, double t) const { return expv_hermitian(h_, v, t); }
    CVec lift(const CVec& v) const {
        if (d_ == 0) return v;
        CVec full = CVec::Zero(static_cast<Eigen::Index>(d_) * d_);
        for (int m = 0; m < d_; ++m) full[static_cast<Eigen::Index>(m) * d_ + m] = v[m];
        return full;
    }

private:
    SpMat h_;
    int d_ = 0;  // 0 when propagating on the full space
};

}  // namespace

CVec twist_state(TwistKind kind, double S, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("twist_state: t must be finite and >= 0");
    const LadderSpec spec = make_spin(S);
    const TwistPropagator prop(twist_hamiltonian(kind, joint_quadratures(spec, spec)), spec.dim());
    return prop.lift(prop.step(prop.initial(), t));
}

TwistingResult twisting_protocol(TwistKind kind, double S, double t_max, int n_steps) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("twisting: t_max must be positive");
    if (n_steps < 16) throw ValidationError("twisting: n_steps must be >= 16");
    const LadderSpec spec = make_spin(S);
    if (spec.m_max() < 1) throw ValidationError("twisting needs S >= 1/2");
    TwistEvaluator ev{kind, 4.0 * S, joint_quadratures(spec, spec), {}, {}};
    ev.squeezed = (ev.ops.Xp - ev.ops.Yp).pruned();
    ev.partner = (ev.ops.Xm + ev.ops.Ym).pruned();
    const int d = spec.dim();
    const TwistPropagator prop(twist_hamiltonian(kind, ev.ops), d);
    CVec small = prop.initial();

    auto offdiag = [d](const CVec& v) {
        double w = 0.0;
        for (int m1 = 0; m1 < d; ++m1) {
            for (int m2 = 0; m2 < d; ++m2) {
                if (m1 != m2) w += std::norm(v[m1 * d + m2]);
            }
        }
        return w;
    };

    TwistingResult out;
    out.kind = kind;
    out.S = S;
    const double dt = t_max / n_steps;
    std::vector<CVec> states;
    states.reserve(n_steps + 1);
    for (int k = 0; k <= n_steps; ++k) {
        if (k > 0) small = prop.step(small, dt);
        const CVec psi = prop.lift(small);
        out.times.push_back(k * dt);
        out.xi2.push_back(ev.xi2(psi));
        double theta = 0.0;
        out.xi2_minus.push_back(ev.xi2_minus(psi, &theta));
        out.max_norm_error = std::max(out.max_norm_error, std::abs(psi.norm() - 1.0));
        if (kind == TwistKind::two_axis) out.max_offdiag_population = std::max(out.max_offdiag_population, offdiag(psi));
        states.push_back(small);
    }

    const auto it = std::min_element(out.xi2.begin(), out.xi2.end());
    const int i = static_cast<int>(it - out.xi2.begin());
    const int lo = std::max(0, i - 1), hi = std::min(n_steps, i + 1);
    auto at = [&](double t) { return prop.lift(prop.step(states[lo], t - out.times[lo])); };
    double best = 0.0;
    const double t_opt = golden_section([&](double t) { return ev.xi2(at(t)); }, out.times[lo], out.times[hi], 1e-6, &best);
    if (best <= *it) {
        out.t_opt = t_opt;
        out.psi_opt = at(t_opt);
    } else {
        out.t_opt = out.times[i];
        out.psi_opt = prop.lift(states[i]);
    }
    out.xi2_opt = ev.xi2(out.psi_opt, &out.theta_opt);
    out.xi2_minus_opt = ev.xi2_minus(out.psi_opt, &out.theta_minus_opt);
    return out;
}

TwistScaling twist_scaling(TwistKind kind, const std::vector<int>& Ns, int n_steps) {
    if (Ns.size() < 2) throw ValidationError("twist scaling needs at least two sizes");
    TwistScaling out;
    out.kind = kind;
    out.fixed_exponent = kind == TwistKind::two_axis ? -1.0 : -2.0 / 3.0;
    for (int n : Ns) {
        if (n < 2 || n % 2 != 0) throw ValidationError("twist scaling: N must be even and >= 2");
        const double S = n / 4.0;
        const TwistingResult res = twisting_protocol(kind, S, default_twist_horizon(kind, S), n_steps);
        out.N.push_back(n);
        out.xi2_opt.push_back(res.xi2_opt);
        out.t_opt.push_back(res.t_opt);
    }
    out.fixed_prefactor = prefactor_at_exponent(out.N, out.xi2_opt, out.fixed_exponent);
    out.free_fit = power_law_fit(out.N, out.xi2_opt);
    out.free_fit.kind = "xi2_opt ~ N^p";
    return out;
}

}  // namespace gtmss
