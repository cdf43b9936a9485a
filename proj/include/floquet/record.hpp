// Copyright 2026 The Floquet Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "floquet/types.hpp"

namespace floquet {

/// Observables of one schedule point.
struct ObservablePoint {
  int half_period_index = 0;
  double time_ns = 0.0;
  std::vector<double> site_z;
  double magnetization = 0.0;
  RealMatrix correlators;
  double chi_sg = 0.0;
};

struct TimeSeriesRecord {
  std::vector<ObservablePoint> points;
  std::string config_hash;
  std::uint64_t realization_seed = 0;

  std::size_t size() const { return points.size(); }
  std::vector<double> magnetization() const;
  /// (-1)^n M(n).
  std::vector<double> staggered_magnetization() const;
  std::vector<double> chi_sg() const;
  /// Values at complete periods only (even half-period indices).
  std::vector<double> complete_period_magnetization() const;
  std::vector<double> complete_period_chi_sg() const;
};

/// Builds a point from raw site values and correlators, filling M and chi_SG.
ObservablePoint make_point(int half_period_index, double time_ns, std::vector<double> site_z,
                           RealMatrix correlators);

/// Git-style SHA-1 ("blob <n>\0" + content) as lowercase hex.
std::string content_hash(std::string_view content);

}  // namespace floquet
