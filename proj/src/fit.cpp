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

#include "gtmss/fit.hpp"

#include <cmath>

#include "gtmss/types.hpp"

namespace gtmss {

LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("linear_fit: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw ValidationError("linear_fit: abscissae are all equal");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

namespace {

std::vector<double> logs(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw ValidationError("power-law fit needs strictly positive data");
        out[i] = std::log(v[i]);
    }
    return out;
}

}  // namespace

PowerLawFit power_law_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const LineFit lf = linear_fit(logs(x), logs(y));
    PowerLawFit f;
    f.prefactor = std::exp(lf.intercept);
    f.exponent = lf.slope;
    f.r2 = lf.r2;
    return f;
}

double prefactor_at_exponent(const std::vector<double>& x, const std::vector<double>& y, double exponent) {
    if (x.size() != y.size() || x.empty()) throw ValidationError("prefactor_at_exponent: need paired points");
    const std::vector<double> lx = logs(x), ly = logs(y);
    double acc = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) acc += ly[i] - exponent * lx[i];
    return std::exp(acc / static_cast<double>(lx.size()));
}

}  // namespace gtmss
