// Copyright 2026 The sgrl Authors
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

#ifndef SGRL_CLEARANCE_H_
#define SGRL_CLEARANCE_H_

#include <iosfwd>
#include <vector>

#include "sgrl/grid_map.h"

namespace sgrl {

// Euclidean distance (in cells, centre to centre) from every cell to the
// nearest blocked cell. The ring of cells just outside the map counts as
// blocked, so free cells on the border read 1.
class DistanceField {
 public:
  DistanceField(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  double at(Cell c) const {
    return values_[static_cast<std::size_t>(c.y) * width_ + c.x];
  }
  const std::vector<double>& values() const { return values_; }

  // Row-major CSV, one row of the grid per line.
  void WriteCsv(std::ostream& out) const;

 private:
  int width_;
  int height_;
  std::vector<double> values_;
};

// Exact Euclidean distance transform (separable lower-envelope method).
DistanceField ComputeDistanceField(const GridMap& map);

constexpr double kDefaultAlertRadius = 1.5;

// Marks every free cell closer than `alert_radius` to an obstacle as blocked.
// The input map is left untouched.
GridMap BuildAlertMap(const GridMap& map, const DistanceField& field,
                      double alert_radius);

}  // namespace sgrl

#endif  // SGRL_CLEARANCE_H_
