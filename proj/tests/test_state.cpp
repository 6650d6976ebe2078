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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gtmss/state.hpp"

using namespace gtmss;

namespace {

double rel(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// Dense variance of a Hermitian operator on a pure state.
double dense_variance(const CVec& psi, const CMat& g) {
    const cplx mean = psi.dot(g * psi);
    const cplx sq = psi.dot(g * g * psi);
    return (sq - mean * mean).real();
}

// Null vector of the stacked jump pair, computed by SVD; sign fixed by the |0,0> entry.
CVec dense_dark_state(const LadderSpec& spec, double r) {
    const JointQuadratures j = joint_quadratures(spec, spec);
    const CMat o1(j.O1), o2(j.O2);
    const int n = static_cast<int>(o1.rows());
    CMat stacked(2 * n, n);
    stacked.topRows(n) = std::cosh(r) * o1 + std::sinh(r) * o2.adjoint();
    stacked.bottomRows(n) = std::cosh(r) * o2 + std::sinh(r) * o1.adjoint();
    Eigen::JacobiSVD<CMat> svd(stacked, Eigen::ComputeFullV);
    CVec v = svd.matrixV().col(n - 1);
    v *= std::abs(v[0]) / v[0];
    return v;
}

}  // namespace

TEST_CASE("GTMSS amplitudes equal the dense null vector of the jump pair") {
    for (double S : {0.5, 1.5, 3.0, 5.0}) {
        for (double r : {0.25, 0.75, 1.5}) {
            const LadderSpec spec = make_spin(S);
            const CVec psi = gtmss_state(spec, SqueezeParams::finite(r)).product_vector();
            CHECK((psi - dense_dark_state(spec, r)).norm() < 1e-10);
        }
    }
}

TEST_CASE("GTMSS limit branches") {
    const LadderSpec spec = make_spin(2.0);
    const PairedState zero = gtmss_state(spec, SqueezeParams::finite(0.0));
    CHECK(zero.a[0] == 1.0);
    CHECK(zero.a.tail(spec.dim() - 1).norm() == 0.0);
    const PairedState lim = gtmss_state(spec, SqueezeParams::infinite());
    for (int m = 0; m < spec.dim(); ++m) CHECK(std::abs(lim.a[m]) == doctest::Approx(1.0 / std::sqrt(5.0)));
    const PairedState big = gtmss_state(spec, SqueezeParams::finite(19.0));
    CHECK((big.a - lim.a).norm() < 1e-12);
    const SqueezeParams capped = SqueezeParams::finite(50.0);
    CHECK(capped.capped);
    CHECK(capped.r == SqueezeParams::kMaxFiniteR);
    CHECK(SqueezeParams::parse("inf").limit);
    CHECK_THROWS_AS(SqueezeParams::parse("abc"), ValidationError);
    CHECK_THROWS_AS(SqueezeParams::finite(-1.0), ValidationError);
}

TEST_CASE("numeric QFIM equals four times the dense generator covariance") {
    for (const LadderSpec& spec : {make_spin(2.5), make_boson(8), make_two_photon(6)}) {
        const PairedState st = gtmss_state(spec, SqueezeParams::finite(0.6));
        const JointQuadratures j = joint_quadratures(spec, spec);
        const QfiMatrix q = qfim_numeric(st);
        const CVec psi = st.product_vector();
        const std::array<CMat, 4> g = {CMat(j.Xp), CMat(j.Xm), CMat(j.Yp), CMat(j.Ym)};
        for (int i = 0; i < 4; ++i) CHECK(q.q(i, i) == doctest::Approx(4.0 * dense_variance(psi, g[i])).epsilon(1e-12));
    }
}

TEST_CASE("analytic QFIM agrees with the numeric one") {
    for (const LadderSpec& spec : {make_spin(4.5), make_boson(20), make_two_photon(20), make_custom({0, 1.3, 0.4, 2.2})}) {
        for (double r : {0.1, 0.5, 1.0, 2.0}) {
            const SqueezeParams sq = SqueezeParams::finite(r);
            const QfiMatrix a = qfim_analytic(spec, sq), n = qfim_numeric(gtmss_state(spec, sq));
            for (int i = 0; i < 4; ++i) CHECK(rel(a.q(i, i), n.q(i, i)) < 1e-8);
        }
    }
}

TEST_CASE("squeezed-generator QFI grows monotonically with r") {
    for (const LadderSpec& spec : {make_spin(3.5), make_boson(12), make_two_photon(10)}) {
        double prev = 0.0;
        for (int k = 0; k <= 60; ++k) {
            const double q = qfim_numeric(gtmss_state(spec, SqueezeParams::finite(0.05 * k))).q(1, 1);
            CHECK(q >= prev);
            prev = q;
        }
    }
}

TEST_CASE("qmax is the sum rule of the ladder elements") {
    CHECK(qmax(make_spin(4.5)) == 132.0);
    CHECK(qmax(make_boson(7)) == 28.0);
    const LadderSpec spec = make_spin(3.0);
    // N_Q e^{2r} saturates at qmax; the limit state carries it in the X- direction.
    const QfiMatrix q = qfim_numeric(gtmss_state(spec, SqueezeParams::infinite()));
    CHECK(q.q(1, 1) == doctest::Approx(qmax(spec)).epsilon(1e-12));
    CHECK(rel(qfi_prefactor(spec, SqueezeParams::finite(15.0)) * std::exp(30.0), qmax(spec)) < 1e-9);
}

TEST_CASE("Wineland closed form matches the dense GTMSS moments") {
    for (double S : {0.5, 2.0, 4.5, 10.0}) {
        for (double r : {0.3, 1.0, 2.0}) {
            const LadderSpec spec = make_spin(S);
            const SqueezeParams sq = SqueezeParams::finite(r);
            const PairedState st = gtmss_state(spec, sq);
            const JointQuadratures j = joint_quadratures(spec, spec);
            const double z = expectation(st, j.Z1).real();
            const double xp2 = expectation(st, j.Xp * j.Xp).real();
            const double xm2 = expectation(st, j.Xm * j.Xm).real();
            const SteadyObservables so = steady_observables(S, sq);
            CHECK(rel(so.z_each, z) < 1e-10);
            CHECK(rel(so.var_x_plus, xp2) < 1e-10);
            CHECK(rel(so.var_x_minus, xm2) < 1e-10);
            CHECK(rel(wineland(S, sq), 4.0 * S * xp2 / (4.0 * z * z)) < 1e-10);
        }
    }
    CHECK(wineland(4.0, SqueezeParams::infinite()) == doctest::Approx(3.0 / 20.0));
}

TEST_CASE("optimal paired state beats random paired states") {
    const LadderSpec spec = make_spin(15.0);
    const OptimalState best = optimal_paired_state(spec);
    const double N = 60.0;
    CHECK(rel(best.qfi, N * (N / 2.0 + 1.0)) < 1e-10);
    CHECK(std::abs(best.state.a.dot(binomial_paired_state(spec).a)) > 1.0 - 1e-10);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd a(spec.dim());
        for (int m = 0; m < spec.dim(); ++m) a[m] = g(rng);
        CHECK(paired_qfi(make_paired_state(spec, a)) < best.qfi);
    }
}

TEST_CASE("paired QFI equals the dense X- QFI") {
    const LadderSpec spec = make_spin(3.5);
    Eigen::VectorXd a(spec.dim());
    for (int m = 0; m < spec.dim(); ++m) a[m] = std::cos(0.7 * m) + 0.1 * m;
    const PairedState st = make_paired_state(spec, a);
    CHECK(rel(paired_qfi(st), qfim_numeric(st).q(1, 1)) < 1e-12);
}

TEST_CASE("commutator of X- and Y+ annihilates the paired state") {
    for (const LadderSpec& spec : {make_spin(4.5), make_boson(12), make_two_photon(10)}) {
        const JointQuadratures j = joint_quadratures(spec, spec);
        const SpMat comm = (j.Xm * j.Yp - j.Yp * j.Xm).pruned();
        const SpMat expected = cplx(0.0, 1.0) * j.Zm;
        CHECK(CMat(comm - expected).cwiseAbs().maxCoeff() < 1e-12);
        for (double r : {0.3, 1.0, 2.5}) {
            const CVec psi = gtmss_state(spec, SqueezeParams::finite(r)).product_vector();
            CHECK((comm * psi).norm() < 1e-10);
        }
    }
}

TEST_CASE("GHZ baselines come from the dense state") {
    const GhzQfi single = ghz_qfi(2.0, GhzVariant::single_generator);
    CHECK(single.closed_forms.size() == 4);
    CHECK(single.diagonal[1] == doctest::Approx(64.0).epsilon(1e-12));
    // The rotated two-generator state has equal X- and Y+ sensitivity.
    const GhzQfi two = ghz_qfi(2.0, GhzVariant::two_generator);
    CHECK(two.diagonal[1] == doctest::Approx(two.diagonal[2]).epsilon(1e-10));
    CHECK(two.diagonal[1] > 0.0);
}
