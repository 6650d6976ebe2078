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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtmss/state.hpp"

namespace gtmss {

// Jump operators on the product space d1 * d2 with their rates (units of gamma).
struct JumpSet {
    int d1 = 0, d2 = 0;
    std::vector<SpMat> jumps;
    std::vector<double> rates;

    int dim() const { return d1 * d2; }
    // Throws ValidationError on length or dimension mismatch, or a negative rate.
    void validate() const;
};

// Gamma_a = cosh(r) O1 + sinh(r) O2^dag, Gamma_b = cosh(r) O2 + sinh(r) O1^dag.
JumpSet engineered_dissipators(const LadderSpec& spec1, const LadderSpec& spec2, const SqueezeParams& params,
                               double gamma = 1.0);

// Gamma_a = S- (x) 1 + 1 (x) Otilde, Gamma_b = 1 (x) S- + Otilde (x) 1; the staggered
// binomial paired state is dark for both.
JumpSet binomial_stabilizer_jumps(double S);

double dark_state_residual(const CVec& psi, const JumpSet& jumps);
double dark_state_residual(const PairedState& state, const JumpSet& jumps);

// Lindblad generator acting on column-stacked density matrices, vec(rho)[i + j d] = rho(i, j).
struct Liouvillian {
    int dim = 0;
    SpMat superop;  // dim^2 x dim^2
};
Liouvillian liouvillian(const JumpSet& jumps);

CVec vectorize(const CMat& rho);
CMat unvectorize(const CVec& v, int dim);
// Sum_k gamma_k D[Gamma_k] rho, evaluated directly.
CMat apply_dissipator(const JumpSet& jumps, const CMat& rho);

// Index sets of the connected components of the superoperator sparsity graph, ordered by
// smallest member. The generator is block diagonal over them.
std::vector<std::vector<int>> superop_blocks(const Liouvillian& L);

enum class InfidelityNorm { frobenius, trace };

struct EvolveOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    std::optional<CMat> target;  // records the infidelity when set
    InfidelityNorm norm = InfidelityNorm::frobenius;
};

struct EvolutionTrace {
    std::vector<double> times;
    std::vector<std::pair<std::string, std::vector<double>>> observables;
    std::vector<double> infidelity;
    CMat final_state;
    double max_trace_error = 0.0;
    double max_hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;  // smallest over every stored time
    long rhs_evals = 0;

    const std::vector<double>& series(const std::string& name) const;
};

// Integrates d vec(rho)/dt = L vec(rho) with Dormand-Prince 5(4) and stores the real parts of the
// named observables at every requested time (nondecreasing, starting at or after 0).
EvolutionTrace evolve(const Liouvillian& L, const CMat& rho0, const std::vector<double>& times,
                      const std::vector<std::pair<std::string, SpMat>>& observables, const EvolveOptions& opt = {});

double infidelity(const CMat& rho, const CMat& target, InfidelityNorm norm = InfidelityNorm::frobenius);

// Unit-trace null vector of L, solved in extended precision on the block holding |0><0|.
CMat steady_state(const Liouvillian& L);

struct SpectrumOptions {
    int k = 8;                    // eigenvalues per oversize block on the iterative path
    int dense_block_limit = 2500;  // larger blocks use shift-invert Arnoldi at sigma = 0
    double zero_tol = 1e-10;
    double rate_floor = 1e-10;    // relevant-rate window is (rate_floor, 10 rate_floor]
    int min_fit_points = 20;
    long max_steps = 200'000;
};

struct SpectrumResult {
    std::vector<cplx> eigenvalues;  // sorted by -Re
    int zero_modes = 0;
    double smallest_gap = 0.0;
    CMat zero_mode;  // eigenvector of the eigenvalue nearest 0 on the |0><0| block, unit trace
    bool iterative = false;

    // Present when an initial state was supplied.
    std::optional<double> relevant_rate;
    std::vector<double> rate_times;
    std::vector<double> rate_infidelity;
    int fit_points = 0;
};

SpectrumResult spectrum_gap(const Liouvillian& L, const std::optional<CMat>& initial,
                            const SpectrumOptions& opt = {});

struct UnequalOptions {
    double cadence = 0.1;
    double change_tol = 1e-8;  // Frobenius change per unit time
    double t_budget = 5000.0;
};

struct UnequalPoint {
    double r = 0.0;
    double xi2 = 0.0;
    double t_converged = 0.0;
};

struct UnequalResult {
    double best_r = 0.0;
    double xi2 = 0.0;
    CMat state;
    std::vector<UnequalPoint> scan;
};

// For each r, relaxes |0,0><0,0| under the engineered set and records N Var(X+) / <Z1 + Z2>^2,
// N = 2 S1 + 2 S2.
UnequalResult steady_state_unequal(const LadderSpec& spec1, const LadderSpec& spec2, const std::vector<double>& r_grid,
                                   const UnequalOptions& opt = {});

}  // namespace gtmss
