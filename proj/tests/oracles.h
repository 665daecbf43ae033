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

#ifndef SGRL_TESTS_ORACLES_H_
#define SGRL_TESTS_ORACLES_H_

// Brute-force reference implementations used only by the tests. They follow
// the textbook definitions directly and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "sgrl/grid_map.h"

namespace sgrl::oracle {

// Exhaustive nearest blocked cell, with the one-cell ring around the map
// counted as blocked.
inline std::vector<double> DistanceField(const GridMap& map) {
  std::vector<std::pair<int, int>> blocked;
  for (int y = -1; y <= map.height(); ++y) {
    for (int x = -1; x <= map.width(); ++x) {
      if (map.IsBlocked({x, y})) blocked.emplace_back(x, y);
    }
  }
  std::vector<double> out(map.size());
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      long long best = std::numeric_limits<long long>::max();
      for (auto [bx, by] : blocked) {
        const long long dx = bx - x;
        const long long dy = by - y;
        best = std::min(best, dx * dx + dy * dy);
      }
      out[map.Index({x, y})] = std::sqrt(static_cast<double>(best));
    }
  }
  return out;
}

// Subgoal test written out for the four corner configurations.
inline bool IsSubgoal(const GridMap& map, Cell s) {
  if (map.IsBlocked(s)) return false;
  const Cell corners[4][3] = {
      {{1, 0}, {0, 1}, {1, 1}},
      {{1, 0}, {0, -1}, {1, -1}},
      {{-1, 0}, {0, 1}, {-1, 1}},
      {{-1, 0}, {0, -1}, {-1, -1}},
  };
  for (const auto& c : corners) {
    if (map.IsFree(s + c[0]) && map.IsFree(s + c[1]) && map.IsBlocked(s + c[2])) {
      return true;
    }
  }
  return false;
}

// Octile length as (diagonal count, cardinal count); since sqrt(2) is
// irrational, comparing these integer pairs is exact.
struct OctileCount {
  int diagonal;
  int cardinal;
  friend bool operator==(const OctileCount&, const OctileCount&) = default;
  OctileCount operator+(const OctileCount& o) const {
    return {diagonal + o.diagonal, cardinal + o.cardinal};
  }
};

inline OctileCount Count(Cell a, Cell b) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  return {std::min(dx, dy), std::max(dx, dy) - std::min(dx, dy)};
}

inline bool MoveLegal(const GridMap& map, Cell u, Cell v) {
  if (map.IsBlocked(u) || map.IsBlocked(v)) return false;
  const int dx = v.x - u.x;
  const int dy = v.y - u.y;
  if (dx != 0 && dy != 0) {
    return map.IsFree({u.x + dx, u.y}) && map.IsFree({u.x, u.y + dy});
  }
  return true;
}

// Cells lying on some octile-length walk from s to t, with flags for "free
// shortest path from s reaches it" and "free shortest path to t leaves it".
struct ShortestPathDag {
  std::vector<Cell> cells;  // sorted by distance from s
  std::vector<char> fwd;
  std::vector<char> bwd;
};

inline ShortestPathDag BuildDag(const GridMap& map, Cell s, Cell t) {
  ShortestPathDag dag;
  const OctileCount total = Count(s, t);
  for (int y = std::min(s.y, t.y); y <= std::max(s.y, t.y); ++y) {
    for (int x = std::min(s.x, t.x); x <= std::max(s.x, t.x); ++x) {
      if (Count(s, {x, y}) + Count({x, y}, t) == total) dag.cells.push_back({x, y});
    }
  }
  auto rank = [&](Cell c) {
    const OctileCount k = Count(s, c);
    return k.diagonal + k.cardinal;
  };
  std::stable_sort(dag.cells.begin(), dag.cells.end(),
                   [&](Cell a, Cell b) { return rank(a) < rank(b); });
  const std::size_t n = dag.cells.size();
  dag.fwd.assign(n, 0);
  dag.bwd.assign(n, 0);
  auto on_path_step = [&](Cell u, Cell v) {
    // v one move further from s than u along a shortest path.
    const int dx = std::abs(v.x - u.x);
    const int dy = std::abs(v.y - u.y);
    if (dx > 1 || dy > 1 || (dx == 0 && dy == 0)) return false;
    const OctileCount step = (dx == 1 && dy == 1) ? OctileCount{1, 0}
                                                  : OctileCount{0, 1};
    return Count(s, u) + step == Count(s, v);
  };
  const int x0 = std::min(s.x, t.x);
  const int y0 = std::min(s.y, t.y);
  const int bw = std::abs(s.x - t.x) + 1;
  const int bh = std::abs(s.y - t.y) + 1;
  std::vector<long> where(static_cast<std::size_t>(bw) * bh, -1);
  for (std::size_t i = 0; i < n; ++i) {
    where[static_cast<std::size_t>(dag.cells[i].y - y0) * bw +
          (dag.cells[i].x - x0)] = static_cast<long>(i);
  }
  auto lookup = [&](Cell c) -> long {
    if (c.x < x0 || c.y < y0 || c.x >= x0 + bw || c.y >= y0 + bh) return -1;
    return where[static_cast<std::size_t>(c.y - y0) * bw + (c.x - x0)];
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Cell v = dag.cells[i];
    if (map.IsBlocked(v)) continue;
    if (v == s) {
      dag.fwd[i] = 1;
      continue;
    }
    for (int dy = -1; dy <= 1 && !dag.fwd[i]; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const long j = lookup({v.x + dx, v.y + dy});
        if (j >= 0 && dag.fwd[j] && on_path_step(dag.cells[j], v) &&
            MoveLegal(map, dag.cells[j], v)) {
          dag.fwd[i] = 1;
          break;
        }
      }
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    const Cell u = dag.cells[ii];
    if (map.IsBlocked(u)) continue;
    if (u == t) {
      dag.bwd[ii] = 1;
      continue;
    }
    for (int dy = -1; dy <= 1 && !dag.bwd[ii]; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const long j = lookup({u.x + dx, u.y + dy});
        if (j >= 0 && dag.bwd[j] && on_path_step(u, dag.cells[j]) &&
            MoveLegal(map, u, dag.cells[j])) {
          dag.bwd[ii] = 1;
          break;
        }
      }
    }
  }
  return dag;
}

inline bool HReachable(const GridMap& map, Cell s, Cell t) {
  if (map.IsBlocked(s) || map.IsBlocked(t)) return false;
  const ShortestPathDag dag = BuildDag(map, s, t);
  for (std::size_t i = 0; i < dag.cells.size(); ++i) {
    if (dag.cells[i] == t) return dag.fwd[i] != 0;
  }
  return false;
}

inline bool DirectHReachable(const GridMap& map, Cell s, Cell t) {
  if (s == t || map.IsBlocked(s) || map.IsBlocked(t)) return false;
  const ShortestPathDag dag = BuildDag(map, s, t);
  bool reachable = false;
  for (std::size_t i = 0; i < dag.cells.size(); ++i) {
    if (dag.cells[i] == t) reachable = dag.fwd[i] != 0;
  }
  if (!reachable) return false;
  for (std::size_t i = 0; i < dag.cells.size(); ++i) {
    const Cell c = dag.cells[i];
    if (c == s || c == t) continue;
    if (dag.fwd[i] && dag.bwd[i] && IsSubgoal(map, c)) return false;
  }
  return true;
}

inline std::set<Cell> DirectHReachableSet(const GridMap& map, Cell s) {
  std::set<Cell> out;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (IsSubgoal(map, {x, y}) && DirectHReachable(map, s, {x, y})) {
        out.insert({x, y});
      }
    }
  }
  return out;
}

// Uniform-cost search over the 8-connected grid without corner cutting.
inline std::optional<double> Dijkstra(const GridMap& map, Cell s, Cell t) {
  std::vector<double> dist(map.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[map.Index(s)] = 0.0;
  pq.push({0.0, map.Index(s)});
  while (!pq.empty()) {
    auto [d, i] = pq.top();
    pq.pop();
    if (d > dist[i]) continue;
    const Cell u = map.CellAt(i);
    if (u == t) return d;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell v{u.x + dx, u.y + dy};
        if (!MoveLegal(map, u, v)) continue;
        const double nd = d + ((dx != 0 && dy != 0) ? std::sqrt(2.0) : 1.0);
        if (nd < dist[map.Index(v)]) {
          dist[map.Index(v)] = nd;
          pq.push({nd, map.Index(v)});
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace sgrl::oracle

#endif  // SGRL_TESTS_ORACLES_H_
