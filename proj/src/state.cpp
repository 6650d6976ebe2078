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

#include "gtmss/state.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace gtmss {

SqueezeParams SqueezeParams::finite(double r) {
    if (!std::isfinite(r) || r < 0.0) {
        std::ostringstream os;
        os << "squeezing strength must be finite and >= 0, got " << r;
        throw ValidationError(os.str());
    }
    SqueezeParams p;
    p.r = r;
    if (r > kMaxFiniteR) {
        p.r = kMaxFiniteR;
        p.capped = true;
    }
    return p;
}

SqueezeParams SqueezeParams::infinite() {
    SqueezeParams p;
    p.r = std::numeric_limits<double>::infinity();
    p.limit = true;
    return p;
}

SqueezeParams SqueezeParams::parse(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "Inf") return infinite();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ValidationError("cannot parse squeezing strength '" + std::string(text) + "'");
    }
    return finite(v);
}

double log_tanh(double r) {
    if (r == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log1p(-2.0 / (std::exp(2.0 * r) + 1.0));
}

CVec PairedState::product_vector() const {
    const int d = spec.dim();
    CVec psi = CVec::Zero(static_cast<Eigen::Index>(d) * d);
    for (int m = 0; m < d; ++m) psi[m * d + m] = a[m];
    return psi;
}

PairedState make_paired_state(const LadderSpec& spec, Eigen::VectorXd a) {
    if (a.size() != spec.dim()) throw ValidationError("paired state: amplitude count must equal m_max + 1");
    const double n = a.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("paired state: amplitudes must be finite and nonzero");
    return PairedState{spec, a / n};
}

PairedState gtmss_state(const LadderSpec& spec, const SqueezeParams& params) {
    const int d = spec.dim();
    Eigen::VectorXd a = Eigen::VectorXd::Zero(d);
    if (params.limit) {
        for (int m = 0; m < d; ++m) a[m] = (m % 2 == 0) ? 1.0 : -1.0;
    } else if (params.r == 0.0) {
        a[0] = 1.0;
    } else {
        // (-tanh r)^m with |tanh r| < 1; the m = 0 term is the largest.
        const double lt = log_tanh(params.r);
        for (int m = 0; m < d; ++m) a[m] = ((m % 2 == 0) ? 1.0 : -1.0) * std::exp(m * lt);
    }
    return make_paired_state(spec, std::move(a));
}

PairedState binomial_paired_state(const LadderSpec& spec) {
    const int n = spec.m_max();
    Eigen::VectorXd a(n + 1);
    for (int m = 0; m <= n; ++m) {
        const double lc = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
        a[m] = ((m % 2 == 0) ? 1.0 : -1.0) * std::exp(lc);
    }
    return make_paired_state(spec, std::move(a));
}

cplx expectation(const CVec& psi, const SpMat& op) {
    if (op.rows() != psi.size() || op.cols() != psi.size()) {
        throw ValidationError("expectation: operator and state dimensions differ");
    }
    return psi.dot(op * psi);
}

cplx expectation(const PairedState& state, const SpMat& op) {
    return expectation(state.product_vector(), op);
}

QfiMatrix qfim_pure(const CVec& psi, const JointQuadratures& ops) {
    const std::array<const SpMat*, 4> w = {&ops.Xp, &ops.Xm, &ops.Yp, &ops.Ym};
    std::array<CVec, 4> v;
    Eigen::Vector4d mean;
    for (int i = 0; i < 4; ++i) {
        v[i] = (*w[i]) * psi;
        mean[i] = psi.dot(v[i]).real();
    }
    QfiMatrix out;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            const double c = 4.0 * (v[i].dot(v[j]).real() - mean[i] * mean[j]);
            out.q(i, j) = c;
            out.q(j, i) = c;
        }
    }
    return out;
}

QfiMatrix qfim_numeric(const PairedState& state) {
    return qfim_pure(state.product_vector(), joint_quadratures(state.spec, state.spec));
}

double qfi_prefactor(const LadderSpec& spec, const SqueezeParams& params) {
    if (params.limit) throw ValidationError("the QFI prefactor diverges as r -> inf; use qmax");
    if (params.r == 0.0) return 2.0 * spec.o2(1);
    const double r = params.r;
    const double lt = log_tanh(r);
    double sum = 0.0;
    for (int m = 1; m <= spec.m_max(); ++m) sum += std::exp(2.0 * m * lt) * spec.o2(m);
    const double s2 = std::sinh(2.0 * r);
    const double tail = -std::expm1((2.0 * spec.m_max() + 2.0) * lt);  // 1 - tanh^{2 m_max + 2}
    return 2.0 * sum / (0.25 * s2 * s2 * tail);
}

QfiMatrix qfim_analytic(const LadderSpec& spec, const SqueezeParams& params) {
    QfiMatrix out;
    out.n_q = qfi_prefactor(spec, params);
    const double lo = std::exp(-2.0 * params.r), hi = std::exp(2.0 * params.r);
    out.q.diagonal() << lo * out.n_q, hi * out.n_q, hi * out.n_q, lo * out.n_q;
    return out;
}

double qmax(const LadderSpec& spec) {
    double sum = 0.0;
    for (int m = 0; m <= spec.m_max(); ++m) sum += spec.o2(m);
    return 8.0 * sum / (1.0 + spec.m_max());
}

namespace {

void require_spin_size(double S) {
    const double twice = 2.0 * S;
    if (!std::isfinite(S) || S < 0.5 || std::abs(twice - std::round(twice)) > 1e-12) {
        std::ostringstream os;
        os << "spin size must be a half-integer >= 1/2, got " << S;
        throw ValidationError(os.str());
    }
}

// 1 - tanh(r)^k, evaluated as -expm1(k log tanh r).
long double one_minus_tanh_pow(double r, double k) {
    if (r == 0.0) return 1.0L;
    return -std::expm1(static_cast<long double>(k) * static_cast<long double>(log_tanh(r)));
}

}  // namespace

double wineland(double S, const SqueezeParams& params) {
    require_spin_size(S);
    if (params.limit) return 3.0 / (4.0 * (S + 1.0));
    // Closed form rearranged into positive sums, M = 2S, u = tanh^2 r:
    // xi^2 = S (1 + e^{-2r})^2 G / (4 P), G = sum_{k<=M} u^k,
    // P = sum_{j<M/2} (M/2 - j) u^j sum_{i<M-2j} u^i.
    const int M = static_cast<int>(std::lround(2.0 * S));
    const long double th = std::tanh(static_cast<long double>(params.r)), u = th * th;
    std::vector<long double> geo(M + 2, 0.0L);  // geo[n] = sum_{i<n} u^i
    long double pw = 1.0L;
    for (int n = 1; n <= M + 1; ++n) {
        geo[n] = geo[n - 1] + pw;
        pw *= u;
    }
    long double P = 0.0L, uj = 1.0L;
    for (int j = 0; 2 * j < M; ++j) {
        P += (0.5L * M - j) * uj * geo[M - 2 * j];
        uj *= u;
    }
    const long double e = 1.0L + std::exp(-2.0L * params.r);
    return static_cast<double>(0.5L * M * e * e * geo[M + 1] / (4.0L * P));
}

SteadyObservables steady_observables(double S, const SqueezeParams& params) {
    require_spin_size(S);
    if (params.limit) throw ValidationError("steady observables need a finite squeezing strength");
    const long double r = params.r, s = S;
    const long double g = one_minus_tanh_pow(params.r, 4.0 * S + 2.0);
    const long double fm = -g, fp = 2.0L - g;
    const long double sh = std::sinh(r);
    const long double t4s = -one_minus_tanh_pow(params.r, 4.0 * S);  // tanh^{4S} - 1
    SteadyObservables out;
    out.z_each = static_cast<double>((fp * s + sh * sh * t4s) / fm);
    const long double x = -0.5L * std::exp(-2.0L * r) * ((2.0L * s + 1.0L) * fp / fm + std::cosh(2.0L * r));
    out.var_x_plus = static_cast<double>(x);
    out.var_y_minus = out.var_x_plus;
    out.var_x_minus = static_cast<double>(x * std::exp(4.0L * r));
    out.var_y_plus = out.var_x_minus;
    return out;
}

double paired_qfi(const PairedState& state) {
    double sum = 0.0;
    for (int m = 1; m <= state.spec.m_max(); ++m) {
        const double da = state.a[m] - state.a[m - 1];
        sum += da * da * state.spec.o2(m);
    }
    return 2.0 * sum;
}

OptimalState optimal_paired_state(const LadderSpec& spec) {
    const int d = spec.dim();
    if (d == 1) return {make_paired_state(spec, Eigen::VectorXd::Ones(1)), 0.0};
    // paired_qfi(a) = 2 a^T T a with T tridiagonal.
    Eigen::VectorXd diag(d), sub(d - 1);
    for (int m = 0; m < d; ++m) diag[m] = spec.o2(m) + spec.o2(m + 1);
    for (int m = 0; m + 1 < d; ++m) sub[m] = -spec.o2(m + 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw ConvergenceError("tridiagonal eigensolver failed");
    Eigen::VectorXd a = es.eigenvectors().col(d - 1);
    int lead = 0;
    while (lead < d - 1 && std::abs(a[lead]) < 1e-300) ++lead;
    if (a[lead] < 0.0) a = -a;
    return {make_paired_state(spec, std::move(a)), 2.0 * es.eigenvalues()[d - 1]};
}

namespace {

CVec rotate(const SpMat& generator, double angle, const CVec& psi) {
    const CMat dense(generator);
    Eigen::SelfAdjointEigenSolver<CMat> es(dense);
    const Eigen::VectorXd& w = es.eigenvalues();
    CVec phase(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) phase[k] = std::exp(cplx(0.0, -angle * w[k]));
    return es.eigenvectors() * phase.asDiagonal() * (es.eigenvectors().adjoint() * psi);
}

}  // namespace

GhzQfi ghz_qfi(double S, GhzVariant variant) {
    require_spin_size(S);
    const LadderSpec spec = make_spin(S);
    const JointQuadratures ops = joint_quadratures(spec, spec);
    const int d = spec.dim(), mm = spec.m_max();
    CVec base = CVec::Zero(static_cast<Eigen::Index>(d) * d);
    base[0] = 1.0 / std::sqrt(2.0);
    base[mm * d + mm] = 1.0 / std::sqrt(2.0);

    const double N = 4.0 * S;
    GhzQfi out;
    if (variant == GhzVariant::single_generator) {
        const CVec psi = rotate(ops.Ym, std::numbers::pi / 2.0, base);
        out.diagonal = qfim_pure(psi, ops).q.diagonal();
        out.closed_forms = {{"X+: 0", 0, 0.0}, {"X-: N^2", 1, N * N}, {"Y+: N", 2, N}, {"Y-: N", 3, N}};
    } else {
        const SpMat g = (ops.Xp + ops.Ym).pruned();
        const CVec psi = rotate(g, std::numbers::pi / (2.0 * std::sqrt(2.0)), base);
        out.diagonal = qfim_pure(psi, ops).q.diagonal();
        const double two_m = 2.0 * mm;
        out.closed_forms = {{"X-: 2m_max(2m_max+1)", 1, two_m * (two_m + 1.0)},
                            {"X-: N(N+1)/2", 1, N * (N + 1.0) / 2.0},
                            {"Y+: 2m_max(2m_max+1)", 2, two_m * (two_m + 1.0)},
                            {"Y+: N(N+1)/2", 2, N * (N + 1.0) / 2.0}};
    }
    for (auto& cf : out.closed_forms) {
        const double v = out.diagonal[cf.generator];
        cf.matches = std::abs(v - cf.value) <= 1e-9 * std::max(1.0, std::abs(cf.value));
    }
    return out;
}

}  // namespace gtmss
