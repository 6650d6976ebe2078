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

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "gtmss/ladder.hpp"

namespace gtmss {

// Squeezing strength. Finite values above kMaxFiniteR are clamped and flagged.
struct SqueezeParams {
    static constexpr double kMaxFiniteR = 20.0;

    double r = 0.0;
    bool limit = false;   // r -> infinity branch
    bool capped = false;  // requested r exceeded kMaxFiniteR

    static SqueezeParams finite(double r);
    static SqueezeParams infinite();
    // Accepts a decimal number or "inf".
    static SqueezeParams parse(std::string_view text);
};

// log(tanh r) without cancellation for large r; -inf at r = 0.
double log_tanh(double r);

// Sum_m a_m |m,m>, unit norm.
struct PairedState {
    LadderSpec spec;
    Eigen::VectorXd a;

    // Amplitude vector on the product space, index m * d + m.
    CVec product_vector() const;
};

// Normalizes a; rejects zero vectors and length mismatches.
PairedState make_paired_state(const LadderSpec& spec, Eigen::VectorXd a);
PairedState gtmss_state(const LadderSpec& spec, const SqueezeParams& params);
// a_m proportional to (-1)^m C(m_max, m).
PairedState binomial_paired_state(const LadderSpec& spec);

cplx expectation(const CVec& psi, const SpMat& op);
cplx expectation(const PairedState& state, const SpMat& op);

inline constexpr std::array<const char*, 4> kGeneratorNames = {"X+", "X-", "Y+", "Y-"};

// Generator order (X+, X-, Y+, Y-).
struct QfiMatrix {
    Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
    double n_q = 0.0;  // prefactor; only set by the analytic path
};

QfiMatrix qfim_pure(const CVec& psi, const JointQuadratures& ops);
QfiMatrix qfim_numeric(const PairedState& state);
QfiMatrix qfim_analytic(const LadderSpec& spec, const SqueezeParams& params);
double qfi_prefactor(const LadderSpec& spec, const SqueezeParams& params);
double qmax(const LadderSpec& spec);

double wineland(double S, const SqueezeParams& params);

struct SteadyObservables {
    double z_each = 0.0;
    double var_x_plus = 0.0;
    double var_x_minus = 0.0;
    double var_y_minus = 0.0;
    double var_y_plus = 0.0;
};
SteadyObservables steady_observables(double S, const SqueezeParams& params);

double paired_qfi(const PairedState& state);

struct OptimalState {
    PairedState state;
    double qfi = 0.0;
};
OptimalState optimal_paired_state(const LadderSpec& spec);

enum class GhzVariant { single_generator, two_generator };

struct GhzClosedForm {
    std::string label;
    int generator = 0;  // index into (X+, X-, Y+, Y-)
    double value = 0.0;
    bool matches = false;  // within 1e-9 relative of the dense result
};

struct GhzQfi {
    Eigen::Vector4d diagonal = Eigen::Vector4d::Zero();  // dense-state QFI, (X+, X-, Y+, Y-)
    std::vector<GhzClosedForm> closed_forms;
};
GhzQfi ghz_qfi(double S, GhzVariant variant);

}  // namespace gtmss
