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

#ifndef SGRL_SUBGOAL_GRAPH_H_
#define SGRL_SUBGOAL_GRAPH_H_

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "sgrl/grid_map.h"

namespace sgrl {

inline constexpr double kSqrt2 = 1.41421356237309504880;

// Length of the shortest 8-connected grid path ignoring obstacles.
inline double Octile(Cell a, Cell b) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  const int lo = dx < dy ? dx : dy;
  const int hi = dx < dy ? dy : dx;
  return kSqrt2 * lo + (hi - lo);
}

// A cell is a subgoal when, for some perpendicular pair of cardinal
// directions c1 and c2, s + c1 + c2 is blocked while s + c1 and s + c2 are
// not. Out-of-bounds cells count as blocked.
bool IsSubgoal(const GridMap& map, Cell s);
std::vector<Cell> IdentifySubgoals(const GridMap& map);

// True iff some unblocked 8-connected path of length Octile(s, t) joins s and
// t. Diagonal moves never cut corners.
bool HReachable(const GridMap& map, Cell s, Cell t);

// Row-major flag per cell, set for subgoals.
using SubgoalMask = std::vector<std::uint8_t>;
SubgoalMask MakeSubgoalMask(const GridMap& map, const std::vector<Cell>& subgoals);

// Subgoals t != s that are h-reachable from s and such that no shortest
// unblocked path from s to t visits another subgoal. Sorted.
std::vector<Cell> GetDirectHReachable(const GridMap& map,
                                      const SubgoalMask& subgoals, Cell s);

// Sequence of cells from start to goal; consecutive cells are h-reachable.
struct AbstractPath {
  std::vector<Cell> cells;
  double length = 0.0;
};

// Simple subgoal graph over a planning map. The graph keeps its own copy of
// the map it was built from and is immutable afterwards.
class SubgoalGraph {
 public:
  struct Edge {
    int to;
    double length;
  };

  static SubgoalGraph Build(const GridMap& planning_map);
  // Rebuilds a graph from its serialized parts; validates every edge.
  static SubgoalGraph FromParts(const GridMap& planning_map,
                                const std::vector<Cell>& vertices,
                                const std::vector<std::pair<Cell, Cell>>& edges);

  const GridMap& map() const { return map_; }
  const SubgoalMask& mask() const { return mask_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  Cell vertex(int id) const { return vertices_[id]; }
  const std::vector<Cell>& vertices() const { return vertices_; }
  // -1 when the cell is not a subgoal.
  int VertexOf(Cell c) const {
    return map_.InBounds(c) ? vertex_of_[map_.Index(c)] : -1;
  }
  std::pair<const Edge*, const Edge*> Neighbors(int id) const {
    return {adjacency_.data() + offsets_[id],
            adjacency_.data() + offsets_[id + 1]};
  }

  // Text dump: "v x y" per vertex, then "e x1 y1 x2 y2 length" per edge.
  void Write(std::ostream& out) const;
  static SubgoalGraph Read(const GridMap& planning_map, std::istream& in);

  friend bool operator==(const SubgoalGraph& a, const SubgoalGraph& b) {
    return a.map_ == b.map_ && a.vertices_ == b.vertices_ &&
           a.offsets_ == b.offsets_ && a.adjacency_ == b.adjacency_;
  }

 private:
  void Finalize(const std::vector<std::vector<Edge>>& lists);

  GridMap map_;
  SubgoalMask mask_;
  std::vector<Cell> vertices_;
  std::vector<int> vertex_of_;
  std::vector<std::size_t> offsets_;
  std::vector<Edge> adjacency_;
};

bool operator==(const SubgoalGraph::Edge& a, const SubgoalGraph::Edge& b);

// Query-scoped attachment of a non-subgoal cell to the graph. The graph
// itself is never modified; dropping the handle releases the attachment.
struct GraphConnection {
  Cell cell;
  bool is_temporary = false;  // false when the cell already is a subgoal
  int vertex = -1;
  std::vector<SubgoalGraph::Edge> edges;
};

GraphConnection ConnectToGraph(const SubgoalGraph& graph, Cell s);

std::optional<AbstractPath> TryDirectPath(const GridMap& map, Cell s, Cell t);

// A* over the graph augmented with the two endpoints.
std::optional<AbstractPath> FindAbstractPath(const SubgoalGraph& graph, Cell s,
                                             Cell t);

struct PathQuery {
  std::optional<AbstractPath> path;
  double h_time_seconds = 0.0;
  bool direct = false;
};

// Direct path first, then connect-and-search. Times the whole query.
PathQuery FindPath(const SubgoalGraph& graph, Cell s, Cell t);

struct GridPath {
  double length = 0.0;
  std::vector<Cell> cells;
};

// Optimal 8-connected A* (1 / sqrt(2) costs, no corner cutting).
std::optional<GridPath> GridAStar(const GridMap& map, Cell s, Cell t);

}  // namespace sgrl

#endif  // SGRL_SUBGOAL_GRAPH_H_
