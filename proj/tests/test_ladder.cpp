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

#include "gtmss/ladder.hpp"

using namespace gtmss;

namespace {

// Angular-momentum lowering operator in the |S, S_z> basis ordered S_z = -S..S.
CMat clebsch_lowering(double S) {
    const int d = static_cast<int>(std::lround(2 * S)) + 1;
    CMat m = CMat::Zero(d, d);
    for (int k = 1; k < d; ++k) {
        const double mz = -S + k;
        m(k - 1, k) = std::sqrt(S * (S + 1) - mz * (mz - 1));
    }
    return m;
}

double max_abs(const CMat& a) {
    return a.cwiseAbs().maxCoeff();
}

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

}  // namespace

TEST_CASE("spin ladder matches the angular-momentum lowering operator") {
    for (int two_s = 1; two_s <= 40; ++two_s) {
        const double S = two_s / 2.0;
        const LadderSpec spec = make_spin(S);
        CHECK(spec.dim() == two_s + 1);
        CHECK(spec.coeffs[0] == 0.0);
        CHECK(max_abs(CMat(lowering_operator(spec)) - clebsch_lowering(S)) < 1e-12);
        for (int m = 0; m <= two_s; ++m) CHECK(spec.o2(m) == m * (two_s + 1 - m));
    }
}

TEST_CASE("boson and two-photon element formulas") {
    const LadderSpec b = make_boson(12);
    const LadderSpec t = make_two_photon(12);
    for (int m = 0; m <= 12; ++m) {
        CHECK(b.o2(m) == m);
        CHECK(t.o2(m) == 2 * m * (2 * m - 1));
        CHECK(b.o(m) == doctest::Approx(std::sqrt(m)).epsilon(1e-15));
    }
    CHECK(b.o(13) == 0.0);
    CHECK(b.o(-1) == 0.0);
}

TEST_CASE("spin quadratures reproduce S_x, S_y, S_z") {
    for (double S : {0.5, 1.0, 2.5, 7.0}) {
        const LadderSpec spec = make_spin(S);
        const Quadratures q = quadrature_set(spec);
        const CMat sm = clebsch_lowering(S);
        const CMat sp = sm.adjoint();
        const cplx i(0.0, 1.0);
        CHECK(max_abs(CMat(q.X) - 0.5 * (sp + sm)) < 1e-12);
        CHECK(max_abs(CMat(q.Y) + 0.5 * i * (sp - sm)) < 1e-12);
        CMat sz = CMat::Zero(spec.dim(), spec.dim());
        for (int m = 0; m < spec.dim(); ++m) sz(m, m) = m - S;
        CHECK(max_abs(CMat(q.Z) - sz) < 1e-12);
        const CMat X(q.X), Y(q.Y), Z(q.Z);
        CHECK(max_abs(X * Y - Y * X - i * Z) < 1e-11);
    }
}

TEST_CASE("quadratures are Hermitian for every kind") {
    for (const LadderSpec& spec : {make_spin(3.5), make_boson(9), make_two_photon(9), make_custom({0.0, 1.0, 0.3, 2.0})}) {
        const Quadratures q = quadrature_set(spec);
        CHECK(hermiticity_defect(q.X) < 1e-15);
        CHECK(hermiticity_defect(q.Y) < 1e-15);
        CHECK(hermiticity_defect(q.Z) < 1e-15);
    }
}

TEST_CASE("embedding follows the m1 * d2 + m2 basis order") {
    const LadderSpec a = make_spin(1.0), b = make_boson(3);
    const JointQuadratures j = joint_quadratures(a, b);
    const CMat o1 = lowering_operator(a), o2 = lowering_operator(b);
    CHECK(max_abs(CMat(j.O1) - kron(o1, CMat::Identity(4, 4))) < 1e-15);
    CHECK(max_abs(CMat(j.O2) - kron(CMat::Identity(3, 3), o2)) < 1e-15);
    CHECK(max_abs(CMat(j.Xp) - CMat(j.X1) - CMat(j.X2)) < 1e-15);
    CHECK(max_abs(CMat(j.Ym) - CMat(j.Y1) + CMat(j.Y2)) < 1e-15);
}

TEST_CASE("ladder construction rejects malformed input") {
    CHECK_THROWS_AS(make_spin(-0.5), ValidationError);
    CHECK_THROWS_AS(make_spin(1.25), ValidationError);
    CHECK_THROWS_AS(make_custom({1.0, 2.0}), ValidationError);
    CHECK_THROWS_AS(make_custom({}), ValidationError);
    CHECK_THROWS_AS(make_ladder(LadderKind::truncated_boson, 2.5), ValidationError);
    CHECK_THROWS_AS(parse_ladder_kind("fermion"), ValidationError);
    CHECK(parse_ladder_kind("two-photon") == LadderKind::two_photon);
}
