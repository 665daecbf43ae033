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

#include "sgrl/subgoal_graph.h"

#include <algorithm>
#include <chrono>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include "sgrl/errors.h"

namespace sgrl {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

int Sign(int v) { return (v > 0) - (v < 0); }

// Shortest octile paths from an origin into one octant are exactly the
// monotone lattice walks made of diagonal steps `diag` and cardinal steps
// `card`; lattice point (k, m) is origin + k * diag + m * card.
struct Octant {
  Cell diag;
  Cell card;

  Cell At(Cell origin, int k, int m) const {
    return {origin.x + k * diag.x + m * card.x,
            origin.y + k * diag.y + m * card.y};
  }
};

// Diagonal move from `from` along `d` without cutting a corner.
bool DiagonalStepFree(const GridMap& map, Cell from, Cell d) {
  return map.IsFree({from.x + d.x, from.y}) &&
         map.IsFree({from.x, from.y + d.y}) &&
         map.IsFree({from.x + d.x, from.y + d.y});
}

// Octant that contains every shortest path from s to t, along with the
// number of diagonal and cardinal steps needed.
Octant OctantToward(Cell s, Cell t, int& diagonal_steps, int& cardinal_steps) {
  const int dx = t.x - s.x;
  const int dy = t.y - s.y;
  const int ax = std::abs(dx);
  const int ay = std::abs(dy);
  const Cell diag{dx != 0 ? Sign(dx) : 1, dy != 0 ? Sign(dy) : 1};
  Octant oct{diag, ax >= ay ? Cell{diag.x, 0} : Cell{0, diag.y}};
  diagonal_steps = std::min(ax, ay);
  cardinal_steps = std::max(ax, ay) - diagonal_steps;
  return oct;
}

bool IsMasked(const GridMap& map, const SubgoalMask& mask, Cell c) {
  return map.InBounds(c) && mask[map.Index(c)] != 0;
}

// Collects the direct-h-reachable subgoals of `origin` inside one octant.
//
// Pass one sweeps the lattice rows while walks stay clear of subgoals; every
// cell with at least one subgoal-free shortest path is inside that sweep, so
// its bounding box bounds the search. Pass two runs the exact reachability /
// taint recurrence over the box: a cell is tainted when some shortest path to
// it visits a subgoal strictly before it.
void ScanOctant(const GridMap& map, const SubgoalMask& mask, Cell origin,
                const Octant& oct, std::vector<Cell>& out) {
  const int limit = std::max(map.width(), map.height()) + 2;
  std::vector<std::uint8_t> prev(limit, 0), cur(limit, 0);

  int k_max = 0;
  int m_max = 0;
  int prev_lo = 0;
  int prev_hi = -1;

  // Row k = 0 is the straight cardinal ray.
  for (int m = 0; m < limit; ++m) {
    const Cell c = oct.At(origin, 0, m);
    if (m > 0 && (map.IsBlocked(c) || prev[m - 1] == 0)) break;
    m_max = std::max(m_max, m);
    const bool propagates = m == 0 || !IsMasked(map, mask, c);
    prev[m] = propagates ? 1 : 0;
    if (propagates) prev_hi = m;
  }

  for (int k = 1; k < limit && prev_hi >= prev_lo; ++k) {
    int cur_lo = -1;
    int cur_hi = -1;
    bool left_propagates = false;
    for (int m = prev_lo; m < limit; ++m) {
      if (m > prev_hi && !left_propagates) break;
      const Cell c = oct.At(origin, k, m);
      bool reached = false;
      if (map.IsFree(c)) {
        if (left_propagates) {
          reached = true;
        } else if (m <= prev_hi && prev[m] != 0 &&
                   DiagonalStepFree(map, oct.At(origin, k - 1, m), oct.diag)) {
          reached = true;
        }
      }
      bool propagates = false;
      if (reached) {
        k_max = std::max(k_max, k);
        m_max = std::max(m_max, m);
        propagates = !IsMasked(map, mask, c);
      }
      cur[m] = propagates ? 1 : 0;
      left_propagates = propagates;
      if (propagates) {
        if (cur_lo < 0) cur_lo = m;
        cur_hi = m;
      }
    }
    // Clear stale flags of the previous row before swapping.
    for (int m = prev_lo; m <= prev_hi; ++m) prev[m] = 0;
    std::swap(prev, cur);
    if (cur_lo < 0) break;
    prev_lo = cur_lo;
    prev_hi = cur_hi;
  }

  const int rows = k_max + 1;
  const int cols = m_max + 1;
  std::vector<std::uint8_t> reach(static_cast<std::size_t>(rows) * cols, 0);
  std::vector<std::uint8_t> taint(reach.size(), 0);
  auto at = [cols](int k, int m) {
    return static_cast<std::size_t>(k) * cols + m;
  };
  for (int k = 0; k < rows; ++k) {
    for (int m = 0; m < cols; ++m) {
      const Cell c = oct.At(origin, k, m);
      if (k == 0 && m == 0) {
        reach[at(0, 0)] = 1;
        continue;
      }
      if (map.IsBlocked(c)) continue;
      bool r = false;
      bool t = false;
      if (k > 0 && reach[at(k - 1, m)] != 0 &&
          DiagonalStepFree(map, oct.At(origin, k - 1, m), oct.diag)) {
        r = true;
        const bool pred_subgoal =
            !(k - 1 == 0 && m == 0) &&
            IsMasked(map, mask, oct.At(origin, k - 1, m));
        t = t || taint[at(k - 1, m)] != 0 || pred_subgoal;
      }
      if (m > 0 && reach[at(k, m - 1)] != 0) {
        r = true;
        const bool pred_subgoal =
            !(k == 0 && m - 1 == 0) &&
            IsMasked(map, mask, oct.At(origin, k, m - 1));
        t = t || taint[at(k, m - 1)] != 0 || pred_subgoal;
      }
      reach[at(k, m)] = r ? 1 : 0;
      taint[at(k, m)] = t ? 1 : 0;
      if (r && !t && IsMasked(map, mask, c)) out.push_back(c);
    }
  }
}

}  // namespace

bool IsSubgoal(const GridMap& map, Cell s) {
  if (map.IsBlocked(s)) return false;
  for (int dx : {-1, 1}) {
    for (int dy : {-1, 1}) {
      if (map.IsBlocked({s.x + dx, s.y + dy}) && map.IsFree({s.x + dx, s.y}) &&
          map.IsFree({s.x, s.y + dy})) {
        return true;
      }
    }
  }
  return false;
}

std::vector<Cell> IdentifySubgoals(const GridMap& map) {
  std::vector<Cell> out;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (IsSubgoal(map, {x, y})) out.push_back({x, y});
    }
  }
  return out;
}

SubgoalMask MakeSubgoalMask(const GridMap& map,
                            const std::vector<Cell>& subgoals) {
  SubgoalMask mask(map.size(), 0);
  for (const Cell& c : subgoals) mask[map.Index(c)] = 1;
  return mask;
}

bool HReachable(const GridMap& map, Cell s, Cell t) {
  if (map.IsBlocked(s) || map.IsBlocked(t)) return false;
  int diagonal = 0;
  int cardinal = 0;
  const Octant oct = OctantToward(s, t, diagonal, cardinal);
  std::vector<std::uint8_t> prev(cardinal + 1, 0), cur(cardinal + 1, 0);
  for (int k = 0; k <= diagonal; ++k) {
    bool any = false;
    for (int m = 0; m <= cardinal; ++m) {
      bool r = false;
      if (k == 0 && m == 0) {
        r = true;
      } else if (map.IsFree(oct.At(s, k, m))) {
        r = (m > 0 && cur[m - 1] != 0) ||
            (k > 0 && prev[m] != 0 &&
             DiagonalStepFree(map, oct.At(s, k - 1, m), oct.diag));
      }
      cur[m] = r ? 1 : 0;
      any = any || r;
    }
    if (!any) return false;
    std::swap(prev, cur);
  }
  return prev[cardinal] != 0;
}

std::vector<Cell> GetDirectHReachable(const GridMap& map,
                                      const SubgoalMask& subgoals, Cell s) {
  std::vector<Cell> out;
  if (map.IsBlocked(s)) return out;
  for (int dx : {-1, 1}) {
    for (int dy : {-1, 1}) {
      const Cell diag{dx, dy};
      ScanOctant(map, subgoals, s, {diag, {dx, 0}}, out);
      ScanOctant(map, subgoals, s, {diag, {0, dy}}, out);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool operator==(const SubgoalGraph::Edge& a, const SubgoalGraph::Edge& b) {
  return a.to == b.to && a.length == b.length;
}

void SubgoalGraph::Finalize(const std::vector<std::vector<Edge>>& lists) {
  offsets_.assign(vertices_.size() + 1, 0);
  adjacency_.clear();
  for (std::size_t i = 0; i < lists.size(); ++i) {
    std::vector<Edge> sorted = lists[i];
    std::sort(sorted.begin(), sorted.end(),
              [](const Edge& a, const Edge& b) { return a.to < b.to; });
    adjacency_.insert(adjacency_.end(), sorted.begin(), sorted.end());
    offsets_[i + 1] = adjacency_.size();
  }
}

SubgoalGraph SubgoalGraph::Build(const GridMap& planning_map) {
  SubgoalGraph g;
  g.map_ = planning_map;
  g.vertices_ = IdentifySubgoals(planning_map);
  g.mask_ = MakeSubgoalMask(planning_map, g.vertices_);
  g.vertex_of_.assign(planning_map.size(), -1);
  for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
    g.vertex_of_[planning_map.Index(g.vertices_[i])] = static_cast<int>(i);
  }
  std::vector<std::vector<Edge>> lists(g.vertices_.size());
  for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
    const Cell u = g.vertices_[i];
    for (const Cell& v : GetDirectHReachable(planning_map, g.mask_, u)) {
      lists[i].push_back({g.vertex_of_[planning_map.Index(v)], Octile(u, v)});
    }
  }
  g.Finalize(lists);
  return g;
}

SubgoalGraph SubgoalGraph::FromParts(
    const GridMap& planning_map, const std::vector<Cell>& vertices,
    const std::vector<std::pair<Cell, Cell>>& edges) {
  SubgoalGraph g;
  g.map_ = planning_map;
  g.vertices_ = vertices;
  std::sort(g.vertices_.begin(), g.vertices_.end(), [](Cell a, Cell b) {
    return std::pair(a.y, a.x) < std::pair(b.y, b.x);
  });
  g.mask_ = MakeSubgoalMask(planning_map, {});
  g.vertex_of_.assign(planning_map.size(), -1);
  for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
    const Cell c = g.vertices_[i];
    if (!IsSubgoal(planning_map, c)) {
      throw ParseError("graph vertex is not a subgoal of the planning map");
    }
    if (g.vertex_of_[planning_map.Index(c)] >= 0) {
      throw ParseError("duplicate graph vertex");
    }
    g.vertex_of_[planning_map.Index(c)] = static_cast<int>(i);
    g.mask_[planning_map.Index(c)] = 1;
  }
  std::vector<std::vector<Edge>> lists(g.vertices_.size());
  for (const auto& [a, b] : edges) {
    const int ia = g.VertexOf(a);
    const int ib = g.VertexOf(b);
    if (ia < 0 || ib < 0 || ia == ib) {
      throw ParseError("graph edge endpoint is not a distinct vertex");
    }
    lists[ia].push_back({ib, Octile(a, b)});
    lists[ib].push_back({ia, Octile(a, b)});
  }
  g.Finalize(lists);
  return g;
}

void SubgoalGraph::Write(std::ostream& out) const {
  const auto old_precision = out.precision(17);
  for (const Cell& v : vertices_) out << "v " << v.x << ' ' << v.y << '\n';
  for (int i = 0; i < vertex_count(); ++i) {
    const auto [begin, end] = Neighbors(i);
    for (const Edge* e = begin; e != end; ++e) {
      if (e->to <= i) continue;
      const Cell a = vertices_[i];
      const Cell b = vertices_[e->to];
      out << "e " << a.x << ' ' << a.y << ' ' << b.x << ' ' << b.y << ' '
          << e->length << '\n';
    }
  }
  out.precision(old_precision);
}

SubgoalGraph SubgoalGraph::Read(const GridMap& planning_map, std::istream& in) {
  std::vector<Cell> vertices;
  std::vector<std::pair<Cell, Cell>> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Cell c;
      if (!(ss >> c.x >> c.y)) throw ParseError("bad vertex line", line_no);
      vertices.push_back(c);
    } else if (tag == "e") {
      Cell a, b;
      double length = 0.0;
      if (!(ss >> a.x >> a.y >> b.x >> b.y >> length)) {
        throw ParseError("bad edge line", line_no);
      }
      if (std::abs(length - Octile(a, b)) > 1e-9) {
        throw ParseError("edge length is not the octile distance", line_no);
      }
      edges.emplace_back(a, b);
    } else {
      throw ParseError("unknown record '" + tag + "'", line_no);
    }
  }
  return FromParts(planning_map, vertices, edges);
}

GraphConnection ConnectToGraph(const SubgoalGraph& graph, Cell s) {
  if (graph.map().IsBlocked(s)) {
    throw QueryError("cannot connect a blocked cell");
  }
  GraphConnection conn;
  conn.cell = s;
  conn.vertex = graph.VertexOf(s);
  if (conn.vertex >= 0) return conn;
  conn.is_temporary = true;
  for (const Cell& v : GetDirectHReachable(graph.map(), graph.mask(), s)) {
    conn.edges.push_back({graph.VertexOf(v), Octile(s, v)});
  }
  return conn;
}

std::optional<AbstractPath> TryDirectPath(const GridMap& map, Cell s, Cell t) {
  if (!HReachable(map, s, t)) return std::nullopt;
  if (s == t) return AbstractPath{{s}, 0.0};
  return AbstractPath{{s, t}, Octile(s, t)};
}

namespace {

struct OpenEntry {
  double f;
  double g;
  int id;
};

// Min-heap order on f; among equal f prefer the larger g, then the smaller id.
struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.id > b.id;
  }
};

std::optional<AbstractPath> SearchAugmented(const SubgoalGraph& graph,
                                            const GraphConnection& start,
                                            const GraphConnection& goal,
                                            bool direct_edge) {
  const int n = graph.vertex_count();
  const int start_id = start.is_temporary ? n : start.vertex;
  const int goal_id = goal.is_temporary ? n + 1 : goal.vertex;
  const Cell goal_cell = goal.cell;

  std::vector<double> g(n + 2, kInfinity);
  std::vector<int> parent(n + 2, -1);
  std::vector<std::uint8_t> closed(n + 2, 0);
  std::vector<double> to_goal;
  if (goal.is_temporary) {
    to_goal.assign(n + 2, -1.0);
    for (const auto& e : goal.edges) to_goal[e.to] = e.length;
  }
  auto cell_of = [&](int id) {
    if (id == n) return start.cell;
    if (id == n + 1) return goal.cell;
    return graph.vertex(id);
  };

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
  g[start_id] = 0.0;
  open.push({Octile(start.cell, goal_cell), 0.0, start_id});

  auto relax = [&](int from, int to, double length) {
    if (closed[to] != 0) return;
    const double candidate = g[from] + length;
    if (candidate < g[to]) {
      g[to] = candidate;
      parent[to] = from;
      open.push({candidate + Octile(cell_of(to), goal_cell), candidate, to});
    }
  };

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const int u = top.id;
    if (closed[u] != 0 || top.g > g[u]) continue;
    closed[u] = 1;
    if (u == goal_id) break;
    if (u == n) {
      for (const auto& e : start.edges) relax(u, e.to, e.length);
      if (direct_edge) relax(u, goal_id, Octile(start.cell, goal_cell));
    } else {
      const auto [begin, end] = graph.Neighbors(u);
      for (const auto* e = begin; e != end; ++e) relax(u, e->to, e->length);
      if (goal.is_temporary && to_goal[u] >= 0.0) {
        relax(u, goal_id, to_goal[u]);
      }
      if (direct_edge && u == start_id) {
        relax(u, goal_id, Octile(start.cell, goal_cell));
      }
    }
  }
  if (closed[goal_id] == 0) return std::nullopt;

  AbstractPath path;
  path.length = g[goal_id];
  for (int v = goal_id; v != -1; v = parent[v]) path.cells.push_back(cell_of(v));
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

}  // namespace

std::optional<AbstractPath> FindAbstractPath(const SubgoalGraph& graph, Cell s,
                                             Cell t) {
  const GraphConnection start = ConnectToGraph(graph, s);
  const GraphConnection goal = ConnectToGraph(graph, t);
  if (s == t) return AbstractPath{{s}, 0.0};
  return SearchAugmented(graph, start, goal, HReachable(graph.map(), s, t));
}

PathQuery FindPath(const SubgoalGraph& graph, Cell s, Cell t) {
  const auto t0 = std::chrono::steady_clock::now();
  if (graph.map().IsBlocked(s) || graph.map().IsBlocked(t)) {
    throw QueryError("query endpoint is blocked");
  }
  PathQuery q;
  q.path = TryDirectPath(graph.map(), s, t);
  if (q.path) {
    q.direct = true;
  } else {
    const GraphConnection start = ConnectToGraph(graph, s);
    const GraphConnection goal = ConnectToGraph(graph, t);
    q.path = SearchAugmented(graph, start, goal, false);
  }
  q.h_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return q;
}

std::optional<GridPath> GridAStar(const GridMap& map, Cell s, Cell t) {
  if (map.IsBlocked(s) || map.IsBlocked(t)) {
    throw QueryError("query endpoint is blocked");
  }
  const std::size_t n = map.size();
  std::vector<double> g(n, kInfinity);
  std::vector<int> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;

  const int start = static_cast<int>(map.Index(s));
  const int goal = static_cast<int>(map.Index(t));
  g[start] = 0.0;
  open.push({Octile(s, t), 0.0, start});

  static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const int u = top.id;
    if (closed[u] != 0 || top.g > g[u]) continue;
    closed[u] = 1;
    if (u == goal) break;
    const Cell c = map.CellAt(static_cast<std::size_t>(u));
    for (int d = 0; d < 8; ++d) {
      const Cell nb{c.x + kDx[d], c.y + kDy[d]};
      if (map.IsBlocked(nb)) continue;
      const bool diagonal = d >= 4;
      if (diagonal && (map.IsBlocked({c.x + kDx[d], c.y}) ||
                       map.IsBlocked({c.x, c.y + kDy[d]}))) {
        continue;
      }
      const int v = static_cast<int>(map.Index(nb));
      if (closed[v] != 0) continue;
      const double candidate = g[u] + (diagonal ? kSqrt2 : 1.0);
      if (candidate < g[v]) {
        g[v] = candidate;
        parent[v] = u;
        open.push({candidate + Octile(nb, t), candidate, v});
      }
    }
  }
  if (closed[goal] == 0) return std::nullopt;
  GridPath path;
  path.length = g[goal];
  for (int v = goal; v != -1; v = parent[v]) {
    path.cells.push_back(map.CellAt(static_cast<std::size_t>(v)));
  }
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

}  // namespace sgrl
