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

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
    bool markers = false;  // points instead of a polyline
    bool dashed = false;
};

struct PlotGuide {
    double y = 0.0;  // horizontal reference line
    std::string label;
};

struct Plot {
    std::string title, xlabel, ylabel;
    bool logx = false, logy = false;
    std::vector<PlotSeries> series;
    std::vector<PlotGuide> guides;
};

// Self-contained SVG document; non-finite and (on log axes) non-positive points are dropped.
std::string render_svg(const Plot& plot);

}  // namespace gtmss
