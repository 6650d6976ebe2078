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

#include "gtmss/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "gtmss/fit.hpp"
#include "gtmss/ode.hpp"

namespace gtmss {

void JumpSet::validate() const {
    if (d1 <= 0 || d2 <= 0) throw ValidationError("jump set: subsystem dimensions must be positive");
    if (jumps.size() != rates.size()) throw ValidationError("jump set: jumps and rates differ in length");
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        if (jumps[k].rows() != dim() || jumps[k].cols() != dim()) {
            throw ValidationError("jump set: operator " + std::to_string(k) + " does not match the product space");
        }
        if (!(rates[k] >= 0.0) || !std::isfinite(rates[k])) throw ValidationError("jump set: rates must be >= 0");
    }
}

JumpSet engineered_dissipators(const LadderSpec& spec1, const LadderSpec& spec2, const SqueezeParams& params,
                               double gamma) {
    if (params.limit) throw ValidationError("engineered dissipators need finite r");
    if (!(gamma >= 0.0)) throw ValidationError("gamma must be >= 0");
    const SpMat o1 = embed(lowering_operator(spec1), 1, spec2.dim());
    const SpMat o2 = embed(lowering_operator(spec2), 2, spec1.dim());
    const cplx c(std::cosh(params.r)), s(std::sinh(params.r));
    JumpSet out;
    out.d1 = spec1.dim();
    out.d2 = spec2.dim();
    out.jumps.push_back(SpMat(c * o1 + s * SpMat(o2.adjoint())).pruned());
    out.jumps.push_back(SpMat(c * o2 + s * SpMat(o1.adjoint())).pruned());
    out.rates = {gamma, gamma};
    return out;
}

JumpSet binomial_stabilizer_jumps(double S) {
    const LadderSpec spec = make_spin(S);
    const int d = spec.dim();
    SpMat tilde(d, d);
    std::vector<Eigen::Triplet<cplx>> entries;
    const double two_s = spec.twice_s;
    for (int m = 0; m + 1 < d; ++m) {
        // o(m + 1) (2S - m) / (m + 1) on |m+1><m|
        entries.emplace_back(m + 1, m, spec.o(m + 1) * (two_s - m) / (m + 1.0));
    }
    tilde.setFromTriplets(entries.begin(), entries.end());
    const SpMat lower = lowering_operator(spec);
    JumpSet out;
    out.d1 = d;
    out.d2 = d;
    out.jumps.push_back(SpMat(embed(lower, 1, d) + embed(tilde, 2, d)).pruned());
    out.jumps.push_back(SpMat(embed(lower, 2, d) + embed(tilde, 1, d)).pruned());
    out.rates = {1.0, 1.0};
    return out;
}

double dark_state_residual(const CVec& psi, const JumpSet& jumps) {
    jumps.validate();
    if (psi.size() != jumps.dim()) throw ValidationError("dark_state_residual: state dimension mismatch");
    double worst = 0.0;
    for (const SpMat& g : jumps.jumps) worst = std::max(worst, (g * psi).norm());
    return worst;
}

double dark_state_residual(const PairedState& state, const JumpSet& jumps) {
    return dark_state_residual(state.product_vector(), jumps);
}

Liouvillian liouvillian(const JumpSet& jumps) {
    jumps.validate();
    const int d = jumps.dim();
    const SpMat id = identity(d);
    Liouvillian out;
    out.dim = d;
    out.superop.resize(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
    for (std::size_t k = 0; k < jumps.jumps.size(); ++k) {
        if (jumps.rates[k] == 0.0) continue;
        const SpMat& g = jumps.jumps[k];
        const SpMat gg = SpMat(g.adjoint()) * g;
        const SpMat gg_t = gg.transpose();
        const SpMat jump_term = Eigen::kroneckerProduct(SpMat(g.conjugate()), g);
        const SpMat left = Eigen::kroneckerProduct(id, gg);
        const SpMat right = Eigen::kroneckerProduct(gg_t, id);
        out.superop += cplx(jumps.rates[k]) * (jump_term - cplx(0.5) * (left + right));
    }
    out.superop.prune(cplx(0.0, 0.0));
    out.superop.makeCompressed();
    return out;
}

CVec vectorize(const CMat& rho) {
    return Eigen::Map<const CVec>(rho.data(), rho.size());
}

CMat unvectorize(const CVec& v, int dim) {
    if (v.size() != static_cast<Eigen::Index>(dim) * dim) throw ValidationError("unvectorize: size mismatch");
    return Eigen::Map<const CMat>(v.data(), dim, dim);
}

CMat apply_dissipator(const JumpSet& jumps, const CMat& rho) {
    jumps.validate();
    CMat out = CMat::Zero(rho.rows(), rho.cols());
    for (std::size_t k = 0; k < jumps.jumps.size(); ++k) {
        const CMat g = CMat(jumps.jumps[k]);
        const CMat gg = g.adjoint() * g;
        out += jumps.rates[k] * (g * rho * g.adjoint() - 0.5 * (gg * rho + rho * gg));
    }
    return out;
}

std::vector<std::vector<int>> superop_blocks(const Liouvillian& L) {
    const int n = static_cast<int>(L.superop.rows());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (int i = 0; i < n; ++i) {
        for (SpMat::InnerIterator it(L.superop, i); it; ++it) {
            const int a = find(i), b = find(static_cast<int>(it.col()));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<int> slot(n, -1);
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < n; ++i) {
        const int root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<int>(blocks.size());
            blocks.emplace_back();
        }
        blocks[slot[root]].push_back(i);
    }
    return blocks;
}

namespace {

double min_hermitian_eigenvalue(const CMat& rho) {
    const CMat h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

void validate_density_matrix(const CMat& rho, int dim) {
    if (rho.rows() != dim || rho.cols() != dim) throw ValidationError("density matrix dimension mismatch");
    if (hermiticity_defect(rho) > 1e-10) throw ValidationError("density matrix is not Hermitian");
    if (std::abs(rho.trace() - cplx(1.0)) > 1e-10) throw ValidationError("density matrix trace is not 1");
    const double lo = min_hermitian_eigenvalue(rho);
    if (lo < -1e-8) {
        std::ostringstream os;
        os << "density matrix is not positive semidefinite (min eigenvalue " << lo << ")";
        throw ValidationError(os.str());
    }
}

bool block_is_real(const SpMat& m, const std::vector<int>& idx) {
    for (int i : idx) {
        for (SpMat::InnerIterator it(m, i); it; ++it) {
            if (it.value().imag() != 0.0) return false;
        }
    }
    return true;
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense_block(const SpMat& m, const std::vector<int>& idx) {
    const int n = static_cast<int>(idx.size());
    std::vector<int> local(m.rows(), -1);
    for (int k = 0; k < n; ++k) local[idx[k]] = k;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        for (SpMat::InnerIterator it(m, idx[k]); it; ++it) {
            const int c = local[it.col()];
            if constexpr (std::is_same_v<Scalar, double> || std::is_same_v<Scalar, long double>) {
                out(k, c) = static_cast<Scalar>(it.value().real());
            } else {
                using R = typename Scalar::value_type;
                out(k, c) = Scalar(static_cast<R>(it.value().real()), static_cast<R>(it.value().imag()));
            }
        }
    }
    return out;
}

const std::vector<int>& block_of(const std::vector<std::vector<int>>& blocks, int index) {
    for (const auto& b : blocks) {
        if (std::binary_search(b.begin(), b.end(), index)) return b;
    }
    throw ValidationError("index outside the superoperator");
}

// Unit-trace null vector of one block with the trace functional replacing a diagonal row.
template <class Scalar>
CVec block_null_vector(const SpMat& superop, const std::vector<int>& idx, int dim) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    Mat a = dense_block<Scalar>(superop, idx);
    const int n = static_cast<int>(idx.size());
    int pivot_row = -1;
    for (int k = 0; k < n; ++k) {
        if (idx[k] % dim == idx[k] / dim) {
            if (pivot_row < 0) pivot_row = k;
        }
    }
    if (pivot_row < 0) throw ConvergenceError("steady state: block carries no diagonal entries");
    for (int k = 0; k < n; ++k) a(pivot_row, k) = (idx[k] % dim == idx[k] / dim) ? Scalar(1) : Scalar(0);
    Vec rhs = Vec::Zero(n);
    rhs[pivot_row] = Scalar(1);
    const Vec x = Eigen::FullPivLU<Mat>(a).solve(rhs);
    CVec out = CVec::Zero(superop.rows());
    for (int k = 0; k < n; ++k) {
        if constexpr (std::is_same_v<Scalar, long double>) {
            out[idx[k]] = cplx(static_cast<double>(x[k]), 0.0);
        } else {
            out[idx[k]] = cplx(static_cast<double>(x[k].real()), static_cast<double>(x[k].imag()));
        }
    }
    return out;
}

double superop_scale(const SpMat& m) {
    double worst = 0.0;
    for (int k = 0; k < m.outerSize(); ++k) {
        double row = 0.0;
        for (SpMat::InnerIterator it(m, k); it; ++it) row += std::abs(it.value());
        worst = std::max(worst, row);
    }
    return worst;
}

// k eigenvalues of largest |1/lambda| by one Arnoldi pass on the inverse.
std::vector<cplx> shift_invert_eigenvalues(const SpMat& superop, const std::vector<int>& idx, int k) {
    const int n = static_cast<int>(idx.size());
    std::vector<int> local(superop.rows(), -1);
    for (int j = 0; j < n; ++j) local[idx[j]] = j;
    std::vector<Eigen::Triplet<cplx>> entries;
    for (int j = 0; j < n; ++j) {
        for (SpMat::InnerIterator it(superop, idx[j]); it; ++it) entries.emplace_back(j, local[it.col()], it.value());
    }
    Eigen::SparseMatrix<cplx> a(n, n);
    a.setFromTriplets(entries.begin(), entries.end());
    // A tiny shift keeps the factorization regular when a zero mode is present.
    const double shift = 1e-7 * std::max(1.0, superop_scale(superop));
    Eigen::SparseMatrix<cplx> id(n, n);
    id.setIdentity();
    a -= cplx(shift) * id;
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw ConvergenceError("shift-invert factorization failed");
    const int m = std::min(n, std::max(4 * k, 60));
    CMat v = CMat::Zero(n, m + 1);
    CMat h = CMat::Zero(m + 1, m);
    v.col(0) = CVec::Ones(n) / std::sqrt(static_cast<double>(n));
    int used = m;
    for (int j = 0; j < m; ++j) {
        CVec w = lu.solve(CVec(v.col(j)));
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= j; ++i) {
                const cplx c = v.col(i).dot(w);
                h(i, j) += c;
                w -= c * v.col(i);
            }
        }
        h(j + 1, j) = w.norm();
        if (std::abs(h(j + 1, j)) < 1e-14) {
            used = j + 1;
            break;
        }
        v.col(j + 1) = w / h(j + 1, j);
    }
    Eigen::ComplexEigenSolver<CMat> es(h.topLeftCorner(used, used), false);
    std::vector<cplx> theta(es.eigenvalues().data(), es.eigenvalues().data() + used);
    std::sort(theta.begin(), theta.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
    std::vector<cplx> out;
    for (int j = 0; j < std::min<int>(k, used); ++j) out.push_back(cplx(1.0) / theta[j] + shift);
    return out;
}

template <class Scalar>
std::vector<cplx> dense_block_eigenvalues(const SpMat& superop, const std::vector<int>& idx) {
    std::vector<cplx> out;
    if (idx.size() == 1) {
        cplx v(0.0);
        for (SpMat::InnerIterator it(superop, idx[0]); it; ++it) v += it.value();
        out.push_back(v);
        return out;
    }
    if constexpr (std::is_same_v<Scalar, double>) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(dense_block<double>(superop, idx), false);
        for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) out.push_back(es.eigenvalues()[j]);
    } else {
        Eigen::ComplexEigenSolver<CMat> es(dense_block<cplx>(superop, idx), false);
        for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) out.push_back(es.eigenvalues()[j]);
    }
    return out;
}

// Eigenvector of the eigenvalue nearest 0 on one block, as a unit-trace matrix.
CMat block_zero_mode(const SpMat& superop, const std::vector<int>& idx, int dim) {
    const CMat a = dense_block<cplx>(superop, idx);
    Eigen::ComplexEigenSolver<CMat> es(a, true);
    Eigen::Index best = 0;
    es.eigenvalues().cwiseAbs().minCoeff(&best);
    CVec full = CVec::Zero(superop.rows());
    for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = es.eigenvectors()(static_cast<Eigen::Index>(k), best);
    CMat rho = unvectorize(full, dim);
    const cplx tr = rho.trace();
    if (std::abs(tr) > 0.0) rho /= tr;
    return rho;
}

// Extended-precision propagation of the blocks touched by the initial state.
struct RateRun {
    std::vector<double> times, infidelity;
};

template <class Scalar>
RateRun propagate_blocks(const SpMat& superop, const std::vector<std::vector<int>>& blocks, const CVec& v0,
                         const CVec& target, double dt, double floor, long max_steps) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    struct Part {
        Mat prop;
        Vec v, goal;
    };
    auto cast = [](cplx z) {
        if constexpr (std::is_same_v<Scalar, long double>) {
            return static_cast<long double>(z.real());
        } else {
            return Scalar(static_cast<long double>(z.real()), static_cast<long double>(z.imag()));
        }
    };
    std::vector<Part> parts;
    for (const auto& b : blocks) {
        bool touched = false;
        for (int i : b) touched = touched || v0[i] != cplx(0.0) || target[i] != cplx(0.0);
        if (!touched) continue;
        Part p;
        const Mat a = dense_block<Scalar>(superop, b);
        p.prop = (a * static_cast<long double>(dt)).exp();
        p.v.resize(b.size());
        p.goal.resize(b.size());
        for (std::size_t k = 0; k < b.size(); ++k) {
            p.v[k] = cast(v0[b[k]]);
            p.goal[k] = cast(target[b[k]]);
        }
        parts.push_back(std::move(p));
    }
    auto distance = [&parts]() {
        long double acc = 0.0L;
        for (const Part& p : parts) acc += (p.v - p.goal).squaredNorm();
        return static_cast<double>(std::sqrt(acc));
    };
    RateRun run;
    run.times.push_back(0.0);
    run.infidelity.push_back(distance());
    for (long step = 1; step <= max_steps && run.infidelity.back() > floor; ++step) {
        for (Part& p : parts) p.v = p.prop * p.v;
        run.times.push_back(step * dt);
        run.infidelity.push_back(distance());
    }
    return run;
}

}  // namespace

const std::vector<double>& EvolutionTrace::series(const std::string& name) const {
    for (const auto& [key, values] : observables) {
        if (key == name) return values;
    }
    throw ValidationError("no observable named '" + name + "'");
}

double infidelity(const CMat& rho, const CMat& target, InfidelityNorm norm) {
    if (rho.rows() != target.rows() || rho.cols() != target.cols()) throw ValidationError("infidelity: shape mismatch");
    const CMat diff = rho - target;
    if (norm == InfidelityNorm::frobenius) return diff.norm();
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

EvolutionTrace evolve(const Liouvillian& L, const CMat& rho0, const std::vector<double>& times,
                      const std::vector<std::pair<std::string, SpMat>>& observables, const EvolveOptions& opt) {
    const int d = L.dim;
    validate_density_matrix(rho0, d);
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k]) || times[k] < 0.0 || (k > 0 && times[k] < times[k - 1])) {
            throw ValidationError("evolve: times must be finite, >= 0 and nondecreasing");
        }
    }
    for (const auto& [name, op] : observables) {
        if (op.rows() != d || op.cols() != d) throw ValidationError("evolve: observable '" + name + "' has wrong shape");
    }
    if (opt.target && (opt.target->rows() != d || opt.target->cols() != d)) {
        throw ValidationError("evolve: target has wrong shape");
    }

    EvolutionTrace trace;
    trace.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& [name, op] : observables) trace.observables.emplace_back(name, std::vector<double>{});

    auto record = [&](double t, const CVec& v) {
        const CMat rho = unvectorize(v, d);
        trace.times.push_back(t);
        for (std::size_t k = 0; k < observables.size(); ++k) {
            trace.observables[k].second.push_back((observables[k].second * rho).trace().real());
        }
        if (opt.target) trace.infidelity.push_back(infidelity(rho, *opt.target, opt.norm));
        trace.max_trace_error = std::max(trace.max_trace_error, std::abs(rho.trace() - cplx(1.0)));
        trace.max_hermiticity_error = std::max(trace.max_hermiticity_error, hermiticity_defect(rho));
        trace.min_eigenvalue = std::min(trace.min_eigenvalue, min_hermitian_eigenvalue(rho));
    };

    OdeOptions ode;
    ode.rtol = opt.rtol;
    ode.atol = opt.atol;
    const SpMat& superop = L.superop;
    DormandPrince<CVec> rk([&superop](double, const CVec& y, CVec& dy) { dy.noalias() = superop * y; }, 0.0,
                           vectorize(rho0), ode);
    for (double t : times) {
        rk.advance_to(t);
        record(t, rk.y());
    }
    trace.final_state = unvectorize(rk.y(), d);
    trace.rhs_evals = rk.stats().rhs_evals;
    if (times.empty()) trace.min_eigenvalue = min_hermitian_eigenvalue(rho0);
    return trace;
}

CMat steady_state(const Liouvillian& L) {
    const auto blocks = superop_blocks(L);
    const auto& b = block_of(blocks, 0);
    const CVec v = block_is_real(L.superop, b) ? block_null_vector<long double>(L.superop, b, L.dim)
                                               : block_null_vector<std::complex<long double>>(L.superop, b, L.dim);
    const double residual = (L.superop * v).norm();
    if (residual > 1e-8 * std::max(1.0, superop_scale(L.superop))) {
        std::ostringstream os;
        os << "steady state not resolved (residual " << residual << ")";
        throw ConvergenceError(os.str());
    }
    const CMat rho = unvectorize(v, L.dim);
    return 0.5 * (rho + rho.adjoint());
}

SpectrumResult spectrum_gap(const Liouvillian& L, const std::optional<CMat>& initial, const SpectrumOptions& opt) {
    if (opt.k < 1) throw ValidationError("spectrum: k must be >= 1");
    const auto blocks = superop_blocks(L);
    SpectrumResult out;
    for (const auto& b : blocks) {
        std::vector<cplx> ev;
        if (static_cast<int>(b.size()) > opt.dense_block_limit) {
            ev = shift_invert_eigenvalues(L.superop, b, opt.k);
            out.iterative = true;
        } else if (block_is_real(L.superop, b)) {
            ev = dense_block_eigenvalues<double>(L.superop, b);
        } else {
            ev = dense_block_eigenvalues<cplx>(L.superop, b);
        }
        out.eigenvalues.insert(out.eigenvalues.end(), ev.begin(), ev.end());
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](cplx x, cplx y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() < y.imag();
    });

    double nearest = std::numeric_limits<double>::infinity();
    out.smallest_gap = std::numeric_limits<double>::infinity();
    for (cplx lam : out.eigenvalues) {
        nearest = std::min(nearest, std::abs(lam));
        if (std::abs(lam) < opt.zero_tol) {
            ++out.zero_modes;
        } else {
            out.smallest_gap = std::min(out.smallest_gap, -lam.real());
        }
    }
    if (nearest > 1e-8) {
        std::ostringstream os;
        os << "no zero eigenvalue resolved (nearest |lambda| = " << nearest << ")";
        throw ConvergenceError(os.str());
    }
    const auto& home = block_of(blocks, 0);
    if (static_cast<int>(home.size()) <= opt.dense_block_limit) out.zero_mode = block_zero_mode(L.superop, home, L.dim);

    if (!initial) return out;
    validate_density_matrix(*initial, L.dim);
    if (!(out.smallest_gap > 0.0) || !std::isfinite(out.smallest_gap)) {
        throw ConvergenceError("relevant rate: no decaying mode to time the propagation");
    }
    const CVec v0 = vectorize(*initial);
    const CVec target = vectorize(steady_state(L));
    bool real = true;
    for (const auto& b : blocks) real = real && block_is_real(L.superop, b);
    double dt = 0.05 / out.smallest_gap;
    for (int attempt = 0; attempt < 8; ++attempt, dt *= 0.5) {
        const RateRun run = real ? propagate_blocks<long double>(L.superop, blocks, v0, target, dt, opt.rate_floor,
                                                                  opt.max_steps)
                                 : propagate_blocks<std::complex<long double>>(L.superop, blocks, v0, target, dt,
                                                                               opt.rate_floor, opt.max_steps);
        if (run.infidelity.back() > opt.rate_floor) {
            std::ostringstream os;
            os << "relevant rate: infidelity stalled at " << run.infidelity.back();
            throw ConvergenceError(os.str());
        }
        std::vector<double> t, y;
        for (std::size_t k = 0; k < run.times.size(); ++k) {
            const double inf = run.infidelity[k];
            if (inf > opt.rate_floor && inf <= 10.0 * opt.rate_floor) {
                t.push_back(run.times[k]);
                y.push_back(std::log(inf));
            }
        }
        if (static_cast<int>(t.size()) < opt.min_fit_points) continue;
        out.relevant_rate = -linear_fit(t, y).slope;
        out.rate_times = run.times;
        out.rate_infidelity = run.infidelity;
        out.fit_points = static_cast<int>(t.size());
        return out;
    }
    throw ConvergenceError("relevant rate: could not place enough points in the final decade");
}

UnequalResult steady_state_unequal(const LadderSpec& spec1, const LadderSpec& spec2, const std::vector<double>& r_grid,
                                   const UnequalOptions& opt) {
    if (spec1.kind != LadderKind::spin || spec2.kind != LadderKind::spin) {
        throw ValidationError("unequal steady state needs spin ladders");
    }
    if (spec1.dim() * spec2.dim() > 1000) throw ValidationError("unequal steady state: product dimension above 1000");
    if (r_grid.empty()) throw ValidationError("unequal steady state: empty r grid");
    if (!(opt.cadence > 0.0) || !(opt.t_budget > 0.0)) throw ValidationError("unequal steady state: bad options");
    const JointQuadratures ops = joint_quadratures(spec1, spec2);
    const SpMat xp2 = ops.Xp * ops.Xp;
    const double n_total = spec1.twice_s + spec2.twice_s;
    const int d = spec1.dim() * spec2.dim();

    UnequalResult out;
    out.xi2 = std::numeric_limits<double>::infinity();
    for (double r : r_grid) {
        if (!std::isfinite(r) || r < 0.0) throw ValidationError("unequal steady state: r must be finite and >= 0");
        const Liouvillian L = liouvillian(engineered_dissipators(spec1, spec2, SqueezeParams::finite(r)));
        const auto blocks = superop_blocks(L);
        const auto& b = block_of(blocks, 0);
        const Eigen::MatrixXd prop = (dense_block<double>(L.superop, b) * opt.cadence).exp();
        Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.size()));
        v[0] = 1.0;  // |0,0><0,0| sits at vec index 0, the first member of its block
        double t = 0.0;
        for (;;) {
            Eigen::VectorXd next = prop * v;
            const double change = (next - v).norm() / opt.cadence;
            v.swap(next);
            t += opt.cadence;
            if (change < opt.change_tol) break;
            if (t > opt.t_budget) {
                std::ostringstream os;
                os << "unequal steady state did not converge by t = " << opt.t_budget << " at r = " << r;
                throw ConvergenceError(os.str());
            }
        }
        CVec full = CVec::Zero(static_cast<Eigen::Index>(d) * d);
        for (std::size_t k = 0; k < b.size(); ++k) full[b[k]] = v[static_cast<Eigen::Index>(k)];
        CMat rho = unvectorize(full, d);
        rho = 0.5 * (rho + rho.adjoint());
        const double mean = (ops.Xp * rho).trace().real();
        const double var = (xp2 * rho).trace().real() - mean * mean;
        const double z = (ops.Zp * rho).trace().real();
        const double xi2 = n_total * var / (z * z);
        out.scan.push_back({r, xi2, t});
        if (xi2 < out.xi2) {
            out.xi2 = xi2;
            out.best_r = r;
            out.state = rho;
        }
    }
    return out;
}

}  // namespace gtmss
