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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

#include "gtmss/types.hpp"

namespace gtmss {

struct OdeOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_init = 0.0;  // 0 selects a starting step automatically
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 200'000'000;
};

struct OdeStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
};

namespace detail {

template <class Vec>
double weighted_rms(const Vec& err, const Vec& y0, const Vec& y1, const OdeOptions& opt) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = std::abs(err[i]) / sc;
        acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(1, err.size())));
}

inline void step_budget_exceeded(long max_steps, double t) {
    std::ostringstream os;
    os << "integrator exceeded " << max_steps << " steps at t = " << t;
    throw ConvergenceError(os.str());
}

}  // namespace detail

// Dormand-Prince 5(4) embedded pair with first-same-as-last stages.
// Vec is a dynamic Eigen column vector, real or complex.
template <class Vec>
class DormandPrince {
public:
    using Rhs = std::function<void(double, const Vec&, Vec&)>;
    // Return false to stop integration after the current accepted step.
    using Observer = std::function<bool(double, const Vec&)>;

    DormandPrince(Rhs f, double t0, Vec y0, OdeOptions opt = {})
        : f_(std::move(f)), opt_(opt), t_(t0), y_(std::move(y0)) {
        k1_.resizeLike(y_);
        eval(t_, y_, k1_);
        h_ = opt_.h_init > 0.0 ? opt_.h_init : initial_step();
    }

    double t() const { return t_; }
    const Vec& y() const { return y_; }
    const OdeStats& stats() const { return stats_; }

    // Integrates to exactly t_end; returns false if the observer stopped early.
    bool advance_to(double t_end, const Observer& on_step = {}) {
        while (t_ < t_end) {
            if (stats_.accepted + stats_.rejected >= opt_.max_steps) detail::step_budget_exceeded(opt_.max_steps, t_);
            double h = std::min(h_, opt_.h_max);
            const bool last = t_ + h >= t_end;
            if (last) h = t_end - t_;
            const double err = attempt(h);
            if (!(err <= 1.0)) {
                ++stats_.rejected;
                const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
                h_ = h * fac;
                if (h_ < 1e-14 * std::max(1.0, std::abs(t_))) {
                    throw ConvergenceError("integrator step size underflow");
                }
                continue;
            }
            ++stats_.accepted;
            t_ = last ? t_end : t_ + h;
            y_.swap(y_new_);
            k1_.swap(k7_);
            const double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
            // Keep the pre-truncation step so short final steps do not shrink h.
            if (!last || fac < 1.0) h_ = h * fac;
            if (on_step && !on_step(t_, y_)) return false;
        }
        return true;
    }

private:
    void eval(double t, const Vec& y, Vec& dy) {
        f_(t, y, dy);
        ++stats_.rhs_evals;
    }

    double initial_step() {
        const double d0 = detail::weighted_rms(y_, y_, y_, opt_);
        const double d1 = detail::weighted_rms(k1_, y_, y_, opt_);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        Vec y1 = y_ + h0 * k1_;
        Vec f1(y_.size());
        eval(t_ + h0, y1, f1);
        const double d2 = detail::weighted_rms(Vec(f1 - k1_), y_, y_, opt_) / h0;
        const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, 1e-3 * h0)
                                                   : std::pow(0.01 / std::max(d1, d2), 0.2);
        return std::min(100.0 * h0, h1);
    }

    double attempt(double h) {
        static constexpr double a21 = 1.0 / 5.0;
        static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                                a54 = -212.0 / 729.0;
        static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                                a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
        static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                                b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
        static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                                e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
        const Eigen::Index n = y_.size();
        k2_.resize(n);
        k3_.resize(n);
        k4_.resize(n);
        k5_.resize(n);
        k6_.resize(n);
        k7_.resize(n);
        tmp_ = y_ + h * a21 * k1_;
        eval(t_ + h / 5.0, tmp_, k2_);
        tmp_ = y_ + h * (a31 * k1_ + a32 * k2_);
        eval(t_ + 0.3 * h, tmp_, k3_);
        tmp_ = y_ + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
        eval(t_ + 0.8 * h, tmp_, k4_);
        tmp_ = y_ + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
        eval(t_ + 8.0 / 9.0 * h, tmp_, k5_);
        tmp_ = y_ + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
        eval(t_ + h, tmp_, k6_);
        y_new_ = y_ + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
        eval(t_ + h, y_new_, k7_);
        tmp_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
        return detail::weighted_rms(tmp_, y_, y_new_, opt_);
    }

    Rhs f_;
    OdeOptions opt_;
    double t_;
    double h_ = 0.0;
    Vec y_, y_new_, tmp_;
    Vec k1_, k2_, k3_, k4_, k5_, k6_, k7_;
    OdeStats stats_;
};

// Linearly implicit Rosenbrock 2(3) pair (L-stable) for small dense real systems.
// The Jacobian is formed by forward differences at every step.
class Rosenbrock23 {
public:
    using Vec = Eigen::VectorXd;
    using Rhs = std::function<void(double, const Vec&, Vec&)>;
    using Observer = std::function<bool(double, const Vec&)>;

    Rosenbrock23(Rhs f, double t0, Vec y0, OdeOptions opt = {})
        : f_(std::move(f)), opt_(opt), t_(t0), y_(std::move(y0)) {
        f0_.resize(y_.size());
        eval(t_, y_, f0_);
        const double d0 = detail::weighted_rms(y_, y_, y_, opt_);
        const double d1 = detail::weighted_rms(f0_, y_, y_, opt_);
        h_ = opt_.h_init > 0.0 ? opt_.h_init : ((d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1);
    }

    double t() const { return t_; }
    const Vec& y() const { return y_; }
    const OdeStats& stats() const { return stats_; }

    bool advance_to(double t_end, const Observer& on_step = {}) {
        bool fresh_jacobian = false;
        while (t_ < t_end) {
            if (stats_.accepted + stats_.rejected >= opt_.max_steps) detail::step_budget_exceeded(opt_.max_steps, t_);
            if (!fresh_jacobian) {
                jacobian();
                fresh_jacobian = true;
            }
            double h = std::min(h_, opt_.h_max);
            const bool last = t_ + h >= t_end;
            if (last) h = t_end - t_;
            const double err = attempt(h);
            if (!(err <= 1.0)) {
                ++stats_.rejected;
                const double fac = std::isfinite(err) ? std::max(0.2, 0.8 * std::pow(err, -1.0 / 3.0)) : 0.2;
                h_ = h * fac;
                if (h_ < 1e-14 * std::max(1.0, std::abs(t_))) {
                    throw ConvergenceError("integrator step size underflow");
                }
                continue;
            }
            ++stats_.accepted;
            fresh_jacobian = false;
            t_ = last ? t_end : t_ + h;
            y_.swap(y_new_);
            f0_.swap(f2_);
            const double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.8 * std::pow(err, -1.0 / 3.0)));
            if (!last || fac < 1.0) h_ = h * fac;
            if (on_step && !on_step(t_, y_)) return false;
        }
        return true;
    }

private:
    void eval(double t, const Vec& y, Vec& dy) {
        f_(t, y, dy);
        ++stats_.rhs_evals;
    }

    void jacobian() {
        const Eigen::Index n = y_.size();
        jac_.resize(n, n);
        Vec yp = y_, fp(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double dy = std::sqrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(y_[j]));
            yp[j] = y_[j] + dy;
            eval(t_, yp, fp);
            jac_.col(j) = (fp - f0_) / dy;
            yp[j] = y_[j];
        }
    }

    double attempt(double h) {
        static const double d = 1.0 / (2.0 + std::sqrt(2.0));
        static const double e32 = 6.0 + std::sqrt(2.0);
        const Eigen::Index n = y_.size();
        const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, n) - h * d * jac_;
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(w);
        const Vec k1 = lu.solve(f0_);
        Vec f1(n);
        eval(t_ + 0.5 * h, y_ + 0.5 * h * k1, f1);
        const Vec k2 = lu.solve(Vec(f1 - k1)) + k1;
        y_new_ = y_ + h * k2;
        f2_.resize(n);
        eval(t_ + h, y_new_, f2_);
        const Vec k3 = lu.solve(Vec(f2_ - e32 * (k2 - f1) - 2.0 * (k1 - f0_)));
        const Vec err = (h / 6.0) * (k1 - 2.0 * k2 + k3);
        return detail::weighted_rms(err, y_, y_new_, opt_);
    }

    Rhs f_;
    OdeOptions opt_;
    double t_;
    double h_ = 0.0;
    Vec y_, y_new_, f0_, f2_;
    Eigen::MatrixXd jac_;
    OdeStats stats_;
};

}  // namespace gtmss
