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

#include "gtmss/fit.hpp"
#include "gtmss/state.hpp"

namespace gtmss {

enum class Generator { x_plus, x_minus, y_plus, y_minus };

std::string to_string(Generator g);

// Frobenius norm of L rho + rho L - 2(-i W rho + i rho W) on the GTMSS projector,
// with L the quadrature SLD of generator W. sign = -1 flips L (negative control).
double sld_residual(const LadderSpec& spec, const SqueezeParams& params, Generator g, double sign = 1.0);

struct CommutingSld {
    double commutator_norm = 0.0;
    double residual_y_plus = 0.0;
    double residual_x_minus = 0.0;
};
// Spin-1/2 pair. mix scales the added (O1^dag O2 + h.c.) terms; sqrt(2) makes them commute.
CommutingSld commuting_sld_spin_half(double r = 0.5, double mix = 1.4142135623730951);

struct SequentialModel {
    int N = 0;             // total spins, 4S
    double lambda = 0.0;   // measurement strength
    double r = 0.0;

    // e^{2r} = N / 4.
    static SequentialModel with_matched_squeezing(int N, double lambda);
};

struct SequentialResult {
    double imprecision = 0.0;       // added X+ variance, 1 / (2 lambda)
    double snr_degradation = 0.0;   // Y- SNR factor, 1 / cosh(lambda)
    double xi2 = 0.0;               // unperturbed Wineland parameter
    double var_x_plus = 0.0;        // intrinsic squeezed variance
    double xi2_x_plus = 0.0;
    double xi2_y_minus = 0.0;
};
SequentialResult sequential_estimation(const SequentialModel& model);

enum class TwistKind { one_axis, two_axis };  // H = X1 X2, H = X1 X2 - Y1 Y2

std::string to_string(TwistKind kind);
TwistKind parse_twist_kind(std::string_view name);

struct TwistingResult {
    TwistKind kind = TwistKind::two_axis;
    double S = 0.0;
    std::vector<double> times;
    std::vector<double> xi2;
    std::vector<double> xi2_minus;  // partner pair along the same grid
    double t_opt = 0.0;
    double xi2_opt = 0.0;
    double theta_opt = 0.0;        // one_axis: angle of sin(t) X+ + cos(t) Y+
    double theta_minus_opt = 0.0;  // one_axis: angle of sin(t) X- - cos(t) Y-
    double xi2_minus_opt = 0.0;    // squeezing of the partner pair at t_opt
    double max_norm_error = 0.0;
    double max_offdiag_population = 0.0;  // weight on m1 != m2
    CVec psi_opt;
};

// Default horizon that brackets the optimum: 4 ln(N)/N (two_axis), 6 N^{-2/3} (one_axis).
double default_twist_horizon(TwistKind kind, double S);
TwistingResult twisting_protocol(TwistKind kind, double S, double t_max, int n_steps);
// exp(-i H t)|0,0> on the spin-S pair.
CVec twist_state(TwistKind kind, double S, double t);

struct TwistScaling {
    TwistKind kind = TwistKind::two_axis;
    std::vector<double> N, xi2_opt, t_opt;
    double fixed_exponent = 0.0;   // -1 (two_axis) or -2/3 (one_axis)
    double fixed_prefactor = 0.0;  // A in xi2_opt = A N^fixed_exponent
    PowerLawFit free_fit;
};
// Optimal squeezing over N (each N = 4S) on the default horizon.
TwistScaling twist_scaling(TwistKind kind, const std::vector<int>& Ns, int n_steps = 300);

}  // namespace gtmss
