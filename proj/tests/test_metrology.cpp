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

#include "gtmss/metrology.hpp"

using namespace gtmss;

namespace {

// Spin matrices in the basis m = 0..2S with S_z = m - S, built from the standard formulas.
struct DenseSpin {
    CMat x, y, z;
};

DenseSpin dense_spin(double S) {
    const int d = static_cast<int>(std::lround(2 * S)) + 1;
    CMat sm = CMat::Zero(d, d), sz = CMat::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double mz = k - S;
        sz(k, k) = mz;
        if (k > 0) sm(k - 1, k) = std::sqrt(S * (S + 1) - mz * (mz - 1));
    }
    const CMat sp = sm.adjoint();
    const cplx i(0.0, 1.0);
    return {0.5 * (sp + sm), -0.5 * i * (sp - sm), sz};
}

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

// exp(-i H t)|0,0> through the eigendecomposition of the dense Hamiltonian.
CVec dense_twist(double S, bool two_axis, double t) {
    const DenseSpin s = dense_spin(S);
    const int d = static_cast<int>(s.x.rows());
    const CMat id = CMat::Identity(d, d);
    CMat h = kron(s.x, id) * kron(id, s.x);
    if (two_axis) h -= kron(s.y, id) * kron(id, s.y);
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    CVec psi = CVec::Zero(d * d);
    psi[0] = 1.0;
    const CVec phase = (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp();
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint() * psi;
}

}  // namespace

TEST_CASE("quadrature SLDs solve the SLD equation on the GTMSS") {
    for (const LadderSpec& spec : {make_spin(2.5), make_boson(10), make_two_photon(8)}) {
        for (double r : {0.3, 1.0}) {
            for (Generator g : {Generator::x_plus, Generator::x_minus, Generator::y_plus, Generator::y_minus}) {
                const SqueezeParams sq = SqueezeParams::finite(r);
                CHECK(sld_residual(spec, sq, g) < 1e-9);
                CHECK(sld_residual(spec, sq, g, -1.0) > 1e-2);
            }
        }
    }
}

TEST_CASE("commuting SLD construction for a spin-1/2 pair") {
    const CommutingSld c = commuting_sld_spin_half();
    CHECK(c.commutator_norm < 1e-12);
    CHECK(c.residual_y_plus < 1e-12);
    CHECK(c.residual_x_minus < 1e-12);
    const CommutingSld off = commuting_sld_spin_half(0.5, 1.0);
    CHECK(off.commutator_norm > 1e-3);
}

TEST_CASE("sequential model limits") {
    const SequentialResult none = sequential_estimation(SequentialModel::with_matched_squeezing(400, 0.0));
    CHECK(none.xi2_y_minus == none.xi2);
    CHECK(none.snr_degradation == 1.0);
    const SequentialModel m = SequentialModel::with_matched_squeezing(1000, 0.667);
    CHECK(std::exp(2.0 * m.r) == doctest::Approx(250.0).epsilon(1e-12));
    const SequentialResult r = sequential_estimation(m);
    CHECK(r.imprecision == doctest::Approx(1.0 / 1.334).epsilon(1e-12));
    CHECK(r.xi2_y_minus / r.xi2 == doctest::Approx(std::cosh(0.667)).epsilon(1e-12));
    CHECK_THROWS_AS(sequential_estimation(SequentialModel::with_matched_squeezing(7, 0.5)), ValidationError);
}

TEST_CASE("twist states agree with dense propagation") {
    for (double S : {1.0, 2.5}) {
        for (bool two : {false, true}) {
            const TwistKind kind = two ? TwistKind::two_axis : TwistKind::one_axis;
            for (double t : {0.1, 0.7, 2.0}) CHECK((twist_state(kind, S, t) - dense_twist(S, two, t)).norm() < 1e-9);
        }
    }
}

TEST_CASE("two-axis twisting stays on the paired subspace and starts unsqueezed") {
    const TwistingResult r = twisting_protocol(TwistKind::two_axis, 5.0, default_twist_horizon(TwistKind::two_axis, 5.0), 64);
    CHECK(r.xi2.front() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.xi2_minus.front() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.max_offdiag_population < 1e-20);
    CHECK(r.max_norm_error < 1e-9);
    CHECK(r.xi2_opt < 1.0);
    CHECK(r.xi2_opt <= *std::min_element(r.xi2.begin(), r.xi2.end()) + 1e-14);
    // Dense recomputation of the squeezed quadrature variance at the optimum.
    const DenseSpin s = dense_spin(5.0);
    const int d = static_cast<int>(s.x.rows());
    const CMat id = CMat::Identity(d, d);
    const CMat q = (kron(s.x, id) + kron(id, s.x) - kron(s.y, id) - kron(id, s.y)) / std::sqrt(2.0);
    const CMat zp = kron(s.z, id) + kron(id, s.z);
    const CVec psi = dense_twist(5.0, true, r.t_opt);
    const double mean = psi.dot(q * psi).real();
    const double var = psi.dot(q * q * psi).real() - mean * mean;
    const double z = psi.dot(zp * psi).real();
    CHECK(20.0 * var / (z * z) == doctest::Approx(r.xi2_opt).epsilon(1e-8));
}

TEST_CASE("one-axis twisting squeezes along a rotated X+/Y+ quadrature") {
    const TwistingResult r = twisting_protocol(TwistKind::one_axis, 5.0, default_twist_horizon(TwistKind::one_axis, 5.0), 64);
    CHECK(r.xi2.front() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.xi2_opt < 1.0);
    CHECK(r.theta_opt >= 0.0);
    CHECK(r.theta_opt < std::numbers::pi);
}

TEST_CASE("one-axis twisting squeezes both quadrature pairs equally") {
    const TwistingResult r = twisting_protocol(TwistKind::one_axis, 4.0, default_twist_horizon(TwistKind::one_axis, 4.0), 64);
    CHECK(r.xi2_minus_opt == doctest::Approx(r.xi2_opt).epsilon(1e-10));
    CHECK(r.theta_minus_opt == doctest::Approx(r.theta_opt).epsilon(1e-8));
    for (std::size_t i = 0; i < r.xi2.size(); ++i) CHECK(r.xi2_minus[i] == doctest::Approx(r.xi2[i]).epsilon(1e-10));
}

TEST_CASE("twisting input validation") {
    CHECK_THROWS_AS(twisting_protocol(TwistKind::two_axis, 2.0, -1.0, 64), ValidationError);
    CHECK_THROWS_AS(twisting_protocol(TwistKind::two_axis, 2.0, 1.0, 4), ValidationError);
    CHECK_THROWS_AS(twist_scaling(TwistKind::two_axis, {20}), ValidationError);
    CHECK_THROWS_AS(parse_twist_kind("3M"), ValidationError);
    CHECK(parse_twist_kind("2M1A") == TwistKind::one_axis);
}
