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

#include "gtmss/types.hpp"

namespace gtmss {

struct ExpvOptions {
    int krylov_dim = 30;
    double tol = 1e-10;  // per substep, absolute in the 2-norm
    long max_substeps = 1'000'000;
};

struct ExpvStats {
    long substeps = 0;
    long rejected = 0;
};

// exp(-i t H) v for Hermitian H by Lanczos projection with adaptive substeps.
CVec expv_hermitian(const SpMat& h, const CVec& v, double t, const ExpvOptions& opt = {},
                    ExpvStats* stats = nullptr);

}  // namespace gtmss
