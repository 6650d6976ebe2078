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
#include <vector>

namespace gtmss {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares y = slope * x + intercept; needs >= 2 distinct x.
LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// y = prefactor * x^exponent, fitted in log-log space; all values must be positive.
struct PowerLawFit {
    std::string kind;
    double prefactor = 0.0;
    double exponent = 0.0;
    double r2 = 0.0;
};
PowerLawFit power_law_fit(const std::vector<double>& x, const std::vector<double>& y);

// Least-squares prefactor of y = A x^exponent with the exponent held fixed (log space).
double prefactor_at_exponent(const std::vector<double>& x, const std::vector<double>& y, double exponent);

// Golden-section minimum of f on [a, b] to the given abscissa tolerance.
template <class F>
double golden_section(F&& f, double a, double b, double tol, double* fmin = nullptr) {
    const double g = 0.6180339887498949;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    const double x = fc < fd ? c : d;
    if (fmin) *fmin = fc < fd ? fc : fd;
    return x;
}

}  // namespace gtmss
