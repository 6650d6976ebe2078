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

#include <Eigen/Dense>

#include "gtmss/fit.hpp"

namespace gtmss {

// First moments and symmetrized covariances of the two collective spins; x, y first
// moments vanish for the supported initial condition and are not tracked.
struct CumulantState {
    double S1z = 0.0, S2z = 0.0;
    double C11xx = 0.0, C11yy = 0.0, C11zz = 0.0;
    double C22xx = 0.0, C22yy = 0.0, C22zz = 0.0;
    double C12xx = 0.0, C12yx = 0.0, C12yy = 0.0, C12zz = 0.0;

    static constexpr int kSize = 12;
    static const std::array<const char*, kSize>& names();
    Eigen::VectorXd to_vector() const;
    static CumulantState from_vector(const Eigen::VectorXd& v);
};

struct MftParams {
    int N = 2;             // total spins, both ensembles
    int delta_N = 0;       // N2 - N1; ensembles hold (N -+ delta_N) / 2 spins
    double r = 0.0;
    double gamma = 1.0;
    double gamma_minus = 0.0;
    double gamma_z = 0.0;

    int n1() const { return (N - delta_N) / 2; }
    int n2() const { return (N + delta_N) / 2; }
    void validate() const;
};

// as_printed keeps every term as transcribed; sign_corrected fixes the single-spin relaxation
// sign and the C12yx source term.
enum class MftVariant { as_printed, sign_corrected };

std::string to_string(MftVariant v);
MftVariant parse_mft_variant(std::string_view name);

CumulantState mft_initial(int N, int delta_N = 0);
CumulantState mft_rhs(const CumulantState& s, const MftParams& p, MftVariant variant);

// <X+^2> = C11xx + C22xx + 2 C12xx.
double mft_x_plus_sq(const CumulantState& s);
// N <X+^2> / (S1z + S2z)^2; throws ValidationError on a vanishing signal.
double mft_wineland(const CumulantState& s, int N);

struct MftOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double cadence = 0.1;     // convergence check spacing, units of 1/gamma
    double change_tol = 1e-6;
    double t_budget = 1e6;
    double negativity_tol = 1e-6;  // abort when a local variance drops below -tol * N
};

struct MftSteady {
    CumulantState state;
    double t = 0.0;
};
MftSteady mft_steady(const MftParams& p, MftVariant variant, const MftOptions& opt = {});

std::vector<CumulantState> mft_trajectory(const MftParams& p, MftVariant variant, const std::vector<double>& times,
                                          const MftOptions& opt = {});

struct MftTransient {
    double t_opt = 0.0;
    double xi2_opt = 0.0;
    CumulantState state;
};
// Minimum of the Wineland parameter over the accepted integrator steps on [0, t_end].
MftTransient mft_transient_minimum(const MftParams& p, MftVariant variant, double t_end, const MftOptions& opt = {});

enum class CooperativityKind { relaxation, dephasing };

std::string to_string(CooperativityKind k);
CooperativityKind parse_cooperativity_kind(std::string_view name);

struct ScanOptions {
    int threads = 1;
    int r_points = 40;              // log grid in e^{2r} over [1, e2r_max_factor * N]
    double e2r_max_factor = 10.0;
    double golden_tol = 1e-3;       // in log(e^{2r})
    double horizon_factor = 10.0;   // dephasing horizon, units of N / gamma_z
    MftVariant variant = MftVariant::sign_corrected;
    MftOptions mft;
};

struct ScanPoint {
    double C = 0.0;
    double r_opt = 0.0;
    double t_opt = 0.0;  // steady state (relaxation) reports 0
    double xi2_opt = 0.0;
};

struct ScanResult {
    CooperativityKind kind = CooperativityKind::relaxation;
    int N = 0;
    std::vector<ScanPoint> points;
    double threshold = 0.0;  // smallest C with xi2_opt < 1 preceded by xi2_opt >= 1; 0 if none
    double fit_lo = 0.0, fit_hi = 0.0;
    PowerLawFit fit;
    int fit_points = 0;
};

// Fit window: the decade [c0, 10 c0] with c0 = max(threshold, 1).
ScanResult cooperativity_scan(CooperativityKind kind, int N, const std::vector<double>& C_grid,
                              const ScanOptions& opt = {});

// Minimum over r of the steady (gamma_z = gamma_minus = 0) Wineland parameter.
ScanPoint mft_floor(int N, const ScanOptions& opt = {}, int delta_N = 0);

}  // namespace gtmss
