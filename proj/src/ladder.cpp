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

#include "gtmss/ladder.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace gtmss {

std::string to_string(LadderKind kind) {
    switch (kind) {
        case LadderKind::spin: return "spin";
        case LadderKind::truncated_boson: return "boson";
        case LadderKind::two_photon: return "two-photon";
        case LadderKind::custom: return "custom";
    }
    return "custom";
}

LadderKind parse_ladder_kind(std::string_view name) {
    if (name == "spin") return LadderKind::spin;
    if (name == "boson" || name == "truncated_boson") return LadderKind::truncated_boson;
    if (name == "two-photon" || name == "two_photon") return LadderKind::two_photon;
    if (name == "custom") return LadderKind::custom;
    throw ValidationError("unknown ladder kind '" + std::string(name) + "'");
}

double LadderSpec::param() const {
    return kind == LadderKind::spin ? spin() : static_cast<double>(m_max());
}

namespace {

LadderSpec from_squares(LadderKind kind, std::vector<double> sq) {
    LadderSpec s;
    s.kind = kind;
    s.coeffs.resize(sq.size());
    for (std::size_t m = 0; m < sq.size(); ++m) s.coeffs[m] = std::sqrt(sq[m]);
    s.sq = std::move(sq);
    return s;
}

void require_cutoff(int m_max) {
    if (m_max < 1) {
        std::ostringstream os;
        os << "m_max must be >= 1, got " << m_max;
        throw ValidationError(os.str());
    }
}

}  // namespace

LadderSpec make_spin(double S) {
    const double twice = 2.0 * S;
    if (!std::isfinite(S) || S < 0.0 || std::abs(twice - std::round(twice)) > 1e-12) {
        std::ostringstream os;
        os << "spin size must be a non-negative half-integer, got " << S;
        throw ValidationError(os.str());
    }
    const int ts = static_cast<int>(std::lround(twice));
    // S(S+1) - (m-S)(m-S-1) = m (2S + 1 - m), an integer.
    std::vector<double> sq(ts + 1);
    for (int m = 0; m <= ts; ++m) sq[m] = static_cast<double>(m) * static_cast<double>(ts + 1 - m);
    LadderSpec s = from_squares(LadderKind::spin, std::move(sq));
    s.twice_s = ts;
    return s;
}

LadderSpec make_boson(int m_max) {
    require_cutoff(m_max);
    std::vector<double> sq(m_max + 1);
    for (int m = 0; m <= m_max; ++m) sq[m] = m;
    return from_squares(LadderKind::truncated_boson, std::move(sq));
}

LadderSpec make_two_photon(int m_max) {
    require_cutoff(m_max);
    std::vector<double> sq(m_max + 1);
    for (int m = 0; m <= m_max; ++m) sq[m] = 2.0 * m * (2.0 * m - 1.0);
    sq[0] = 0.0;
    return from_squares(LadderKind::two_photon, std::move(sq));
}

LadderSpec make_custom(std::vector<double> coeffs) {
    if (coeffs.empty()) throw ValidationError("custom ladder needs at least one coefficient");
    if (coeffs[0] != 0.0) throw ValidationError("custom ladder must have o(0) = 0");
    for (double c : coeffs) {
        if (!std::isfinite(c)) throw ValidationError("custom ladder coefficients must be finite");
    }
    LadderSpec s;
    s.kind = LadderKind::custom;
    s.sq.resize(coeffs.size());
    for (std::size_t m = 0; m < coeffs.size(); ++m) s.sq[m] = coeffs[m] * coeffs[m];
    s.coeffs = std::move(coeffs);
    return s;
}

LadderSpec make_ladder(LadderKind kind, double size) {
    auto as_cutoff = [](double v) {
        if (!std::isfinite(v) || v < 0.0 || v != std::floor(v)) {
            std::ostringstream os;
            os << "m_max must be a non-negative integer, got " << v;
            throw ValidationError(os.str());
        }
        return static_cast<int>(v);
    };
    switch (kind) {
        case LadderKind::spin: return make_spin(size);
        case LadderKind::truncated_boson: return make_boson(as_cutoff(size));
        case LadderKind::two_photon: return make_two_photon(as_cutoff(size));
        case LadderKind::custom: break;
    }
    throw ValidationError("custom ladders take explicit coefficients");
}

SpMat identity(int dim) {
    SpMat id(dim, dim);
    id.setIdentity();
    return id;
}

SpMat lowering_operator(const LadderSpec& spec) {
    const int d = spec.dim();
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(d);
    for (int m = 1; m < d; ++m) {
        if (spec.coeffs[m] != 0.0) t.emplace_back(m - 1, m, spec.coeffs[m]);
    }
    SpMat o(d, d);
    o.setFromTriplets(t.begin(), t.end());
    return o;
}

Quadratures quadrature_set(const LadderSpec& spec) {
    const SpMat o = lowering_operator(spec);
    const SpMat od = o.adjoint();
    const cplx half(0.5, 0.0), mhalf_i(0.0, -0.5);
    Quadratures q;
    q.X = (half * (od + o)).pruned();
    q.Y = (mhalf_i * (od - o)).pruned();
    q.Z = (half * (SpMat(od * o) - SpMat(o * od))).pruned();
    return q;
}

SpMat embed(const SpMat& op, int slot, int other_dim) {
    if (op.rows() != op.cols()) throw ValidationError("embed: operator must be square");
    if (slot != 1 && slot != 2) throw ValidationError("embed: slot must be 1 or 2");
    if (other_dim < 1) throw ValidationError("embed: other dimension must be positive");
    const SpMat id = identity(other_dim);
    SpMat out = slot == 1 ? SpMat(Eigen::kroneckerProduct(op, id)) : SpMat(Eigen::kroneckerProduct(id, op));
    out.prune(cplx(0.0, 0.0));
    return out;
}

JointQuadratures joint_quadratures(const LadderSpec& a, const LadderSpec& b) {
    JointQuadratures j;
    j.d1 = a.dim();
    j.d2 = b.dim();
    const Quadratures qa = quadrature_set(a), qb = quadrature_set(b);
    j.O1 = embed(lowering_operator(a), 1, j.d2);
    j.O2 = embed(lowering_operator(b), 2, j.d1);
    j.X1 = embed(qa.X, 1, j.d2);
    j.Y1 = embed(qa.Y, 1, j.d2);
    j.Z1 = embed(qa.Z, 1, j.d2);
    j.X2 = embed(qb.X, 2, j.d1);
    j.Y2 = embed(qb.Y, 2, j.d1);
    j.Z2 = embed(qb.Z, 2, j.d1);
    j.Xp = (j.X1 + j.X2).pruned();
    j.Xm = (j.X1 - j.X2).pruned();
    j.Yp = (j.Y1 + j.Y2).pruned();
    j.Ym = (j.Y1 - j.Y2).pruned();
    j.Zp = (j.Z1 + j.Z2).pruned();
    j.Zm = (j.Z1 - j.Z2).pruned();
    return j;
}

double hermiticity_defect(const SpMat& a) {
    const SpMat diff = a - SpMat(a.adjoint());
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k) {
        for (SpMat::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    }
    return worst;
}

double hermiticity_defect(const CMat& a) {
    return a.rows() == 0 ? 0.0 : (a - a.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace gtmss
