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

#include "sgrl/clearance.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "sgrl/errors.h"

namespace sgrl {

DistanceField::DistanceField(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw ArgumentError("distance field size mismatch");
  }
}

void DistanceField::WriteCsv(std::ostream& out) const {
  const auto old_precision = out.precision(17);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (x > 0) out << ',';
      out << at({x, y});
    }
    out << '\n';
  }
  out.precision(old_precision);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One-dimensional squared distance transform of a sampled function f over
// integer positions: d[q] = min_p (q - p)^2 + f[p]. Infinite samples are
// skipped; at least one finite sample is required.
void Transform1d(const std::vector<double>& f, std::vector<double>& d,
                 std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  auto intersect = [&f](int q, int p) {
    return ((f[q] + static_cast<double>(q) * q) -
            (f[p] + static_cast<double>(p) * p)) /
           (2.0 * (q - p));
  };
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s = intersect(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = q - v[j];
    d[q] = dq * dq + f[v[j]];
  }
}

}  // namespace

DistanceField ComputeDistanceField(const GridMap& map) {
  // Pad by one blocked ring so the map border acts as an obstacle.
  const int w = map.width() + 2;
  const int h = map.height() + 2;
  std::vector<double> grid(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      grid[static_cast<std::size_t>(y) * w + x] =
          map.IsBlocked({x - 1, y - 1}) ? 0.0 : kInf;
    }
  }

  const int n = std::max(w, h);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);

  f.resize(h);
  d.resize(h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = grid[static_cast<std::size_t>(y) * w + x];
    Transform1d(f, d, v, z);
    for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = d[y];
  }
  f.resize(w);
  d.resize(w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f[x] = grid[static_cast<std::size_t>(y) * w + x];
    Transform1d(f, d, v, z);
    for (int x = 0; x < w; ++x) grid[static_cast<std::size_t>(y) * w + x] = d[x];
  }

  std::vector<double> values(map.size());
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      values[map.Index({x, y})] =
          std::sqrt(grid[static_cast<std::size_t>(y + 1) * w + (x + 1)]);
    }
  }
  return DistanceField(map.width(), map.height(), std::move(values));
}

GridMap BuildAlertMap(const GridMap& map, const DistanceField& field,
                      double alert_radius) {
  if (field.width() != map.width() || field.height() != map.height()) {
    throw ArgumentError("distance field does not match map");
  }
  GridMap out = map;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.IsFree({x, y}) && field.at({x, y}) < alert_radius) {
        out.SetBlocked({x, y}, true);
      }
    }
  }
  return out;
}

}  // namespace sgrl
