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

#include "gtmss/lindblad.hpp"
#include "gtmss/meanfield.hpp"

using namespace gtmss;

namespace {

// Spin-resolved model: N spin-1/2 sites, the first N/2 form ensemble 1.
struct SpinResolved {
    int n_sites = 0;
    CMat sx1, sy1, sz1, sx2, sy2, sz2;
    JumpSet local;  // sigma^- at gamma_minus and sigma^z at gamma_z on every site
};

CMat site_op(const CMat& op, int site, int n) {
    CMat out = CMat::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
        const CMat f = k == site ? op : CMat(CMat::Identity(2, 2));
        CMat next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * f;
        }
        out = next;
    }
    return out;
}

SpinResolved spin_resolved(int n, double gamma_minus, double gamma_z) {
    const cplx i(0.0, 1.0);
    CMat sx(2, 2), sy(2, 2), sz(2, 2), sm(2, 2), pz(2, 2);
    sx << 0, 0.5, 0.5, 0;
    sy << 0, -0.5 * i, 0.5 * i, 0;
    sz << 0.5, 0, 0, -0.5;
    sm << 0, 0, 1, 0;
    pz << 1, 0, 0, -1;
    SpinResolved m;
    m.n_sites = n;
    const int dim = 1 << n;
    m.sx1 = m.sy1 = m.sz1 = m.sx2 = m.sy2 = m.sz2 = CMat::Zero(dim, dim);
    m.local.d1 = dim;
    m.local.d2 = 1;
    for (int s = 0; s < n; ++s) {
        const bool first = s < n / 2;
        (first ? m.sx1 : m.sx2) += site_op(sx, s, n);
        (first ? m.sy1 : m.sy2) += site_op(sy, s, n);
        (first ? m.sz1 : m.sz2) += site_op(sz, s, n);
        m.local.jumps.push_back(site_op(sm, s, n).sparseView());
        m.local.rates.push_back(gamma_minus);
        m.local.jumps.push_back(site_op(pz, s, n).sparseView());
        m.local.rates.push_back(gamma_z);
    }
    return m;
}

double ev(const CMat& rho, const CMat& op) {
    return (rho * op).trace().real();
}

// Tracked cumulants as linear functionals of rho, valid when x and y first moments vanish.
Eigen::VectorXd moments(const SpinResolved& m, const CMat& rho) {
    CumulantState c;
    c.S1z = ev(rho, m.sz1);
    c.S2z = ev(rho, m.sz2);
    c.C11xx = ev(rho, m.sx1 * m.sx1);
    c.C11yy = ev(rho, m.sy1 * m.sy1);
    c.C11zz = ev(rho, m.sz1 * m.sz1);
    c.C22xx = ev(rho, m.sx2 * m.sx2);
    c.C22yy = ev(rho, m.sy2 * m.sy2);
    c.C22zz = ev(rho, m.sz2 * m.sz2);
    c.C12xx = ev(rho, m.sx1 * m.sx2);
    c.C12yx = ev(rho, m.sy1 * m.sx2);
    c.C12yy = ev(rho, m.sy1 * m.sy2);
    c.C12zz = ev(rho, m.sz1 * m.sz2);
    return c.to_vector();
}

// Exact time derivative of the cumulants under the local dissipators.
Eigen::VectorXd exact_rate(const SpinResolved& m, const CMat& rho) {
    const Eigen::VectorXd mu = moments(m, rho);
    Eigen::VectorXd d = moments(m, apply_dissipator(m.local, rho));
    // Second moments to covariances: d(<AB> - <A><B>) for the z-z entries.
    d[4] -= 2.0 * mu[0] * d[0];
    d[7] -= 2.0 * mu[1] * d[1];
    d[11] -= mu[0] * d[1] + mu[1] * d[0];
    return d;
}

CumulantState cumulants(const SpinResolved& m, const CMat& rho) {
    Eigen::VectorXd mu = moments(m, rho);
    mu[4] -= mu[0] * mu[0];
    mu[7] -= mu[1] * mu[1];
    mu[11] -= mu[0] * mu[1];
    return CumulantState::from_vector(mu);
}

// Parity-even pure state with correlations inside and across the ensembles.
CMat correlated_state(const SpinResolved& m) {
    const int dim = 1 << m.n_sites;
    const cplx i(0.0, 1.0);
    const CMat sp1 = m.sx1 + i * m.sy1, sp2 = m.sx2 + i * m.sy2;
    const CMat h = 0.7 * (sp1 * sp2 + (sp1 * sp2).adjoint()) + 0.4 * (sp1 * sp1 + (sp1 * sp1).adjoint()) +
                   0.3 * m.sz1 * m.sz2 + 0.2 * i * (sp1 * sp2 - (sp1 * sp2).adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    CVec psi = CVec::Zero(dim);
    psi[dim - 1] = 1.0;  // all sites down
    psi[dim - 4] = 0.6;  // two sites of ensemble 2 up
    psi.normalize();
    const CVec phase = (es.eigenvalues().cast<cplx>() * cplx(0.0, -0.9)).array().exp();
    const CVec out = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint() * psi;
    return out * out.adjoint();
}

}  // namespace

TEST_CASE("initial condition of the cumulants") {
    const CumulantState s = mft_initial(8);
    CHECK(s.S1z == -2.0);
    CHECK(s.C11xx == 1.0);
    CHECK(s.C22yy == 1.0);
    CHECK(s.C12xx == 0.0);
    const CumulantState u = mft_initial(8, 2);
    CHECK(u.S1z == -1.5);
    CHECK(u.S2z == -2.5);
}

TEST_CASE("local decay and dephasing terms match the spin-resolved Lindblad oracle") {
    for (int n : {4, 8}) {
        const double gm = 0.37, gz = 0.21;
        const SpinResolved m = spin_resolved(n, gm, gz);
        const CMat rho = correlated_state(m);
        // The oracle needs vanishing x and y first moments.
        REQUIRE(std::abs(ev(rho, m.sx1)) < 1e-12);
        REQUIRE(std::abs(ev(rho, m.sy2)) < 1e-12);
        const CumulantState c = cumulants(m, rho);
        REQUIRE(std::abs(c.C12yx) > 1e-3);
        MftParams p;
        p.N = n;
        p.gamma = 0.0;
        p.gamma_minus = gm;
        p.gamma_z = gz;
        const Eigen::VectorXd exact = exact_rate(m, rho);
        const Eigen::VectorXd corrected = mft_rhs(c, p, MftVariant::sign_corrected).to_vector();
        const Eigen::VectorXd printed = mft_rhs(c, p, MftVariant::as_printed).to_vector();
        for (int k = 0; k < CumulantState::kSize; ++k) {
            CAPTURE(CumulantState::names()[k]);
            CHECK(corrected[k] == doctest::Approx(exact[k]).epsilon(1e-10).scale(1.0));
        }
        CHECK(std::abs(printed[0] - exact[0]) > 1e-2);
    }
}

TEST_CASE("collective source term of C12yx vanishes on the symmetric axis") {
    // With C12yx = 0 the corrected equation keeps it at zero; the printed one drives it.
    const CumulantState s = mft_initial(100);
    MftParams p;
    p.N = 100;
    p.r = 0.5;
    CHECK(mft_rhs(s, p, MftVariant::sign_corrected).C12yx == 0.0);
    CHECK(mft_rhs(s, p, MftVariant::as_printed).C12yx != 0.0);
}

TEST_CASE("exchange symmetry along a trajectory") {
    MftParams p;
    p.N = 200;
    p.r = 0.8;
    p.gamma_minus = 0.01;
    p.gamma_z = 0.002;
    std::vector<double> times;
    for (int i = 0; i <= 40; ++i) times.push_back(0.25 * i);
    for (const auto& s : mft_trajectory(p, MftVariant::sign_corrected, times)) {
        CHECK(s.S1z == doctest::Approx(s.S2z).epsilon(1e-12));
        CHECK(s.C11xx == doctest::Approx(s.C22xx).epsilon(1e-12));
        CHECK(s.C11yy == doctest::Approx(s.C22yy).epsilon(1e-12));
        CHECK(s.C11zz == doctest::Approx(s.C22zz).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("steady state agrees with the exact closed forms when e^{2r} << N") {
    MftParams p;
    p.N = 2000;
    for (double e2r : {2.0, 5.0, 10.0}) {
        p.r = 0.5 * std::log(e2r);
        const CumulantState s = mft_steady(p, MftVariant::sign_corrected).state;
        const SteadyObservables so = steady_observables(500.0, SqueezeParams::finite(p.r));
        CHECK(s.S1z == doctest::Approx(so.z_each).epsilon(0.01));
        CHECK(mft_x_plus_sq(s) == doctest::Approx(so.var_x_plus).epsilon(0.01));
    }
}

TEST_CASE("transient minimum never exceeds the trajectory values") {
    MftParams p;
    p.N = 400;
    p.r = 0.6;
    p.gamma_z = 0.01;
    const MftTransient m = mft_transient_minimum(p, MftVariant::sign_corrected, 200.0);
    std::vector<double> times;
    for (int i = 0; i <= 100; ++i) times.push_back(2.0 * i);
    for (const auto& s : mft_trajectory(p, MftVariant::sign_corrected, times)) {
        CHECK(m.xi2_opt <= mft_wineland(s, p.N) + 1e-9);
    }
    CHECK(m.xi2_opt < 1.0);
}

TEST_CASE("mean-field validation") {
    MftParams p;
    p.N = 7;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.N = 8;
    p.delta_N = 8;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.delta_N = 0;
    p.gamma_z = -1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    CHECK_THROWS_AS(parse_mft_variant("other"), ValidationError);
    CHECK_THROWS_AS(parse_cooperativity_kind("other"), ValidationError);
    CHECK_THROWS_AS(mft_wineland(CumulantState{}, 10), ValidationError);
}

TEST_CASE("cooperativity scan is deterministic across thread counts") {
    ScanOptions one, two;
    one.r_points = 12;
    two.r_points = 12;
    two.threads = 2;
    const std::vector<double> grid = {0.5, 5.0, 50.0};
    const ScanResult a = cooperativity_scan(CooperativityKind::relaxation, 100, grid, one);
    const ScanResult b = cooperativity_scan(CooperativityKind::relaxation, 100, grid, two);
    REQUIRE(a.points.size() == 3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a.points[i].xi2_opt == b.points[i].xi2_opt);
        CHECK(a.points[i].r_opt == b.points[i].r_opt);
    }
    CHECK(a.points[0].xi2_opt > a.points[2].xi2_opt);
}
