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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gtmss/types.hpp"

namespace gtmss {

enum class LadderKind { spin, truncated_boson, two_photon, custom };

std::string to_string(LadderKind kind);
LadderKind parse_ladder_kind(std::string_view name);

// A local ladder system: basis |0>..|m_max> and lowering elements o(m) = <m-1|O|m>.
// Immutable after construction; build through the make_* factories.
struct LadderSpec {
    LadderKind kind = LadderKind::custom;
    int twice_s = 0;             // 2S for spin ladders, unused otherwise
    std::vector<double> coeffs;  // o(0..m_max), o(0) == 0
    std::vector<double> sq;      // o(m)^2, exact integers for the closed-form kinds

    int m_max() const { return static_cast<int>(coeffs.size()) - 1; }
    int dim() const { return static_cast<int>(coeffs.size()); }
    double spin() const { return 0.5 * twice_s; }
    // S for spin ladders, m_max otherwise.
    double param() const;
    double o(int m) const { return (m < 0 || m > m_max()) ? 0.0 : coeffs[m]; }
    double o2(int m) const { return (m < 0 || m > m_max()) ? 0.0 : sq[m]; }
};

LadderSpec make_spin(double S);
LadderSpec make_boson(int m_max);
LadderSpec make_two_photon(int m_max);
LadderSpec make_custom(std::vector<double> coeffs);
// size is S for spin and m_max for the other closed-form kinds.
LadderSpec make_ladder(LadderKind kind, double size);

SpMat identity(int dim);
SpMat lowering_operator(const LadderSpec& spec);

struct Quadratures {
    SpMat X, Y, Z;
};
Quadratures quadrature_set(const LadderSpec& spec);

// op (x) 1 for slot 1, 1 (x) op for slot 2; basis index m1 * d2 + m2.
SpMat embed(const SpMat& op, int slot, int other_dim);

struct JointQuadratures {
    int d1 = 0, d2 = 0;
    SpMat O1, O2;
    SpMat X1, X2, Y1, Y2, Z1, Z2;
    SpMat Xp, Xm, Yp, Ym, Zp, Zm;
};
JointQuadratures joint_quadratures(const LadderSpec& a, const LadderSpec& b);

// max_ij |A_ij - conj(A_ji)|
double hermiticity_defect(const SpMat& a);
double hermiticity_defect(const CMat& a);

}  // namespace gtmss
