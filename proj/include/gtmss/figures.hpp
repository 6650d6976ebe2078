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

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "gtmss/io.hpp"

namespace gtmss {

struct FigureOptions {
    std::filesystem::path out = ".";
    int threads = 1;
    Json params = Json::object();  // overrides of the figure defaults
    std::set<std::string> formats = {"csv", "json", "svg"};
};

struct FigureResult {
    std::vector<std::filesystem::path> files;
    Json summary = Json::object();
    std::vector<std::string> warnings;
};

const std::vector<std::string>& figure_names();
// Default parameters of one figure; every key may be overridden.
Json figure_defaults(const std::string& name);
FigureResult run_figure(const std::string& name, const FigureOptions& opt);

}  // namespace gtmss
