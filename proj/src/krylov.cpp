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

#include "gtmss/krylov.hpp"

#include <algorithm>
#include <cmath>

namespace gtmss {

namespace {

double inf_norm(const SpMat& h) {
    double worst = 0.0;
    for (int k = 0; k < h.outerSize(); ++k) {
        double row = 0.0;
        for (SpMat::InnerIterator it(h, k); it; ++it) row += std::abs(it.value());
        worst = std::max(worst, row);
    }
    return worst;
}

}  // namespace

CVec expv_hermitian(const SpMat& h, const CVec& v, double t, const ExpvOptions& opt, ExpvStats* stats) {
    if (h.rows() != h.cols() || h.rows() != v.size()) throw ValidationError("expv: dimension mismatch");
    if (t < 0.0) throw ValidationError("expv: negative time");
    const Eigen::Index n = v.size();
    const int m_cap = static_cast<int>(std::min<Eigen::Index>(opt.krylov_dim, n));
    const double hn = inf_norm(h);
    CVec w = v;
    if (t == 0.0 || hn == 0.0 || w.norm() == 0.0) return w;

    double done = 0.0;
    double tau = std::min(t, 0.5 * m_cap / hn);
    CMat basis(n, m_cap + 1);
    Eigen::VectorXd alpha(m_cap), offd(m_cap);
    ExpvStats local;

    // Coefficients of exp(-i tau T_m) e_1 in the Lanczos basis and the a posteriori error.
    struct Projection {
        CVec coef;
        double err = 0.0;
    };
    auto project = [&](int m, bool happy, double beta, double step) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        const Eigen::VectorXd sub = offd.head(m - 1);
        es.computeFromTridiagonal(alpha.head(m), sub, Eigen::ComputeEigenvectors);
        const Eigen::MatrixXd& q = es.eigenvectors();
        CVec phase(m);
        for (int k = 0; k < m; ++k) phase[k] = std::exp(cplx(0.0, -es.eigenvalues()[k] * step)) * q(0, k);
        Projection pr;
        pr.coef = q.cast<cplx>() * phase;
        pr.err = happy ? 0.0 : beta * offd[m - 1] * std::abs(pr.coef[m - 1]);
        return pr;
    };

    while (done < t) {
        if (local.substeps >= opt.max_substeps) throw ConvergenceError("expv: substep budget exhausted");
        const double beta = w.norm();
        basis.col(0) = w / beta;
        tau = std::min(tau, t - done);
        int m = m_cap;
        bool happy = false;
        Projection pr;
        for (int j = 0; j < m_cap; ++j) {
            CVec u = h * basis.col(j);
            alpha[j] = basis.col(j).dot(u).real();
            // Full reorthogonalization against the basis built so far, applied twice.
            for (int pass = 0; pass < 2; ++pass) {
                const CVec c = basis.leftCols(j + 1).adjoint() * u;
                u.noalias() -= basis.leftCols(j + 1) * c;
            }
            offd[j] = u.norm();
            if (offd[j] <= 1e-13 * hn) {
                m = j + 1;
                happy = true;
                break;
            }
            basis.col(j + 1) = u / offd[j];
            // Stop growing the basis once the requested step already meets the tolerance.
            if (j + 1 >= 4 && j + 1 < m_cap) {
                pr = project(j + 1, false, beta, tau);
                if (pr.err <= opt.tol) {
                    m = j + 1;
                    break;
                }
            }
        }

        for (;;) {
            pr = project(m, happy, beta, tau);
            if (pr.err <= opt.tol) break;
            ++local.rejected;
            tau *= std::max(0.1, 0.8 * std::pow(opt.tol / pr.err, 1.0 / m));
        }
        w = beta * (basis.leftCols(m) * pr.coef);
        done = (t - done <= tau) ? t : done + tau;
        ++local.substeps;
        const double grow = pr.err == 0.0 ? 2.0 : std::min(2.0, 0.8 * std::pow(opt.tol / pr.err, 1.0 / m));
        tau = std::max(tau * grow, 1e-300);
    }
    if (stats) *stats = local;
    return w;
}

}  // namespace gtmss
