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

#include <algorithm>
#include <cmath>
#include <random>

#include "gtmss/lindblad.hpp"

using namespace gtmss;

namespace {

CMat random_density(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMat a(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
    }
    CMat rho = a * a.adjoint();
    return rho / rho.trace();
}

// Sum_k gamma_k (G rho G^dag - {G^dag G, rho} / 2) on dense matrices.
CMat dense_dissipator(const JumpSet& js, const CMat& rho) {
    CMat out = CMat::Zero(rho.rows(), rho.cols());
    for (std::size_t k = 0; k < js.jumps.size(); ++k) {
        const CMat g(js.jumps[k]);
        const CMat gg = g.adjoint() * g;
        out += js.rates[k] * (g * rho * g.adjoint() - 0.5 * (gg * rho + rho * gg));
    }
    return out;
}

CMat projector(const CVec& psi) {
    return psi * psi.adjoint();
}

}  // namespace

TEST_CASE("superoperator action equals the dense dissipator") {
    std::mt19937_64 rng(11);
    const std::vector<std::pair<LadderSpec, LadderSpec>> pairs = {
        {make_spin(1.5), make_spin(1.5)}, {make_spin(1.0), make_spin(2.0)}, {make_boson(4), make_boson(4)}};
    for (const auto& [a, b] : pairs) {
        const JumpSet js = engineered_dissipators(a, b, SqueezeParams::finite(0.8), 1.3);
        const Liouvillian L = liouvillian(js);
        for (int trial = 0; trial < 50; ++trial) {
            const CMat rho = random_density(js.dim(), rng);
            const CMat expected = dense_dissipator(js, rho);
            const CMat via_superop = unvectorize(L.superop * vectorize(rho), js.dim());
            CHECK((via_superop - expected).cwiseAbs().maxCoeff() < 1e-11);
            CHECK((apply_dissipator(js, rho) - expected).cwiseAbs().maxCoeff() < 1e-11);
        }
    }
}

TEST_CASE("column stacking convention") {
    CMat rho(2, 2);
    rho << 1.0, 2.0, 3.0, 4.0;
    const CVec v = vectorize(rho);
    CHECK(v[1] == cplx(3.0));
    CHECK(v[2] == cplx(2.0));
    CHECK(unvectorize(v, 2) == rho);
}

TEST_CASE("engineered jump pair annihilates the GTMSS") {
    for (int two_s = 1; two_s <= 20; ++two_s) {
        for (double r : {0.25, 0.75, 1.5, 3.0}) {
            const LadderSpec spec = make_spin(two_s / 2.0);
            const SqueezeParams sq = SqueezeParams::finite(r);
            CHECK(dark_state_residual(gtmss_state(spec, sq), engineered_dissipators(spec, spec, sq)) < 1e-10);
        }
    }
    const LadderSpec spec = make_spin(3.0);
    const JumpSet js = engineered_dissipators(spec, spec, SqueezeParams::finite(1.0));
    CHECK(dark_state_residual(gtmss_state(spec, SqueezeParams::finite(0.5)), js) > 1e-3);
    CHECK_THROWS_AS(engineered_dissipators(spec, spec, SqueezeParams::infinite()), ValidationError);
}

TEST_CASE("binomial stabilizer jumps annihilate the staggered binomial state") {
    for (double S : {0.5, 2.0, 7.5}) {
        const LadderSpec spec = make_spin(S);
        CHECK(dark_state_residual(binomial_paired_state(spec), binomial_stabilizer_jumps(S)) < 1e-9);
    }
}

TEST_CASE("evolution preserves the density-matrix properties and relaxes to the GTMSS") {
    std::mt19937_64 rng(5);
    const LadderSpec spec = make_spin(1.0);
    const SqueezeParams sq = SqueezeParams::finite(0.5);
    const Liouvillian L = liouvillian(engineered_dissipators(spec, spec, sq));
    const CMat target = projector(gtmss_state(spec, sq).product_vector());
    std::vector<double> times;
    for (int i = 0; i <= 20; ++i) times.push_back(4.0 * i);
    for (int trial = 0; trial < 5; ++trial) {
        EvolveOptions opt;
        opt.target = target;
        const EvolutionTrace tr = evolve(L, random_density(L.dim, rng), times, {}, opt);
        CHECK(tr.max_trace_error < 1e-9);
        CHECK(tr.max_hermiticity_error < 1e-9);
        CHECK(tr.min_eigenvalue > -1e-9);
        CHECK(tr.infidelity.back() < 1e-6);
        CHECK(tr.infidelity.back() < tr.infidelity.front());
    }
}

TEST_CASE("evolve rejects invalid initial states") {
    const LadderSpec spec = make_spin(0.5);
    const Liouvillian L = liouvillian(engineered_dissipators(spec, spec, SqueezeParams::finite(0.5)));
    CMat rho = CMat::Zero(4, 4);
    rho(0, 0) = 1.0;
    rho(0, 1) = 0.3;
    CHECK_THROWS_AS(evolve(L, rho, {0.0, 1.0}, {}), ValidationError);
    CMat unnormalized = CMat::Identity(4, 4);
    CHECK_THROWS_AS(evolve(L, unnormalized, {0.0, 1.0}, {}), ValidationError);
    CMat negative = CMat::Zero(4, 4);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(evolve(L, negative, {0.0, 1.0}, {}), ValidationError);
}

TEST_CASE("steady state is the GTMSS projector") {
    for (double S : {0.5, 1.5, 2.5}) {
        const LadderSpec spec = make_spin(S);
        const SqueezeParams sq = SqueezeParams::finite(1.0);
        const CMat ss = steady_state(liouvillian(engineered_dissipators(spec, spec, sq)));
        CHECK((ss - projector(gtmss_state(spec, sq).product_vector())).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("superoperator blocks partition the sparsity graph") {
    const LadderSpec spec = make_spin(1.5);
    const Liouvillian L = liouvillian(engineered_dissipators(spec, spec, SqueezeParams::finite(0.7)));
    const auto blocks = superop_blocks(L);
    std::vector<int> owner(L.superop.rows(), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (int i : blocks[b]) {
            CHECK(owner[i] == -1);
            owner[i] = static_cast<int>(b);
        }
    }
    CHECK(std::count(owner.begin(), owner.end(), -1) == 0);
    CHECK(blocks.size() > 1);
    for (int k = 0; k < L.superop.outerSize(); ++k) {
        for (SpMat::InnerIterator it(L.superop, k); it; ++it) CHECK(owner[it.row()] == owner[it.col()]);
    }
}

TEST_CASE("spectral gap agrees with dense diagonalization") {
    const LadderSpec spec = make_spin(1.0);
    const Liouvillian L = liouvillian(engineered_dissipators(spec, spec, SqueezeParams::finite(1.0)));
    Eigen::ComplexEigenSolver<CMat> es{CMat(L.superop)};
    int zeros = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const cplx lam = es.eigenvalues()[i];
        if (std::abs(lam) < 1e-9) {
            ++zeros;
        } else {
            gap = std::min(gap, -lam.real());
        }
    }
    CMat rho0 = CMat::Zero(L.dim, L.dim);
    rho0(0, 0) = 1.0;
    const SpectrumResult sp = spectrum_gap(L, rho0);
    CHECK(zeros == 1);
    CHECK(sp.zero_modes == 1);
    CHECK(sp.smallest_gap == doctest::Approx(gap).epsilon(1e-8));
    REQUIRE(sp.relevant_rate.has_value());
    CHECK(*sp.relevant_rate >= sp.smallest_gap * (1.0 - 1e-3));
    CHECK(sp.fit_points >= 20);
    CHECK(std::abs(sp.zero_mode.trace() - 1.0) < 1e-10);
}

TEST_CASE("unequal solver reproduces the equal-size closed form") {
    const LadderSpec spec = make_spin(1.0);
    const std::vector<double> grid = {0.3, 0.6, 0.9};
    const UnequalResult u = steady_state_unequal(spec, spec, grid);
    double best = std::numeric_limits<double>::infinity();
    for (double r : grid) best = std::min(best, wineland(1.0, SqueezeParams::finite(r)));
    CHECK(u.xi2 == doctest::Approx(best).epsilon(1e-6));
    CHECK(u.scan.size() == grid.size());
}

TEST_CASE("infidelity norms") {
    CMat a = CMat::Zero(2, 2), b = CMat::Zero(2, 2);
    a(0, 0) = 1.0;
    b(1, 1) = 1.0;
    CHECK(infidelity(a, b) == doctest::Approx(std::sqrt(2.0)));
    CHECK(infidelity(a, b, InfidelityNorm::trace) == doctest::Approx(2.0));
}
