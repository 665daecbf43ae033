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

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "sgrl/clearance.h"
#include "sgrl/errors.h"
#include "sgrl/subgoal_graph.h"

namespace sgrl {
namespace {

GridMap SingleObstacle() {
  GridMap map(5, 5);
  map.SetBlocked({2, 2}, true);
  return map;
}

std::set<Cell> AsSet(const std::vector<Cell>& v) { return {v.begin(), v.end()}; }

TEST_CASE("Octile") {
  CHECK(Octile({0, 0}, {3, 4}) == doctest::Approx(3 * std::sqrt(2.0) + 1));
  CHECK(Octile({2, 2}, {2, 2}) == 0.0);
  CHECK(Octile({0, 0}, {0, 5}) == 5.0);
  CHECK(Octile({4, 1}, {0, 0}) == doctest::Approx(std::sqrt(2.0) + 3));
}

TEST_CASE("IdentifySubgoals") {
  CHECK(IdentifySubgoals(GridMap(5, 5)).empty());
  CHECK(AsSet(IdentifySubgoals(SingleObstacle())) ==
        std::set<Cell>{{1, 1}, {1, 3}, {3, 1}, {3, 3}});
  GridMap full(3, 3);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) full.SetBlocked({x, y}, true);
  CHECK(IdentifySubgoals(full).empty());

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GridMap map = RandomMap(25, 20, 0.15, seed);
    std::set<Cell> expected;
    for (int y = 0; y < 20; ++y)
      for (int x = 0; x < 25; ++x)
        if (oracle::IsSubgoal(map, {x, y})) expected.insert({x, y});
    CHECK(AsSet(IdentifySubgoals(map)) == expected);
  }
}

TEST_CASE("HReachable") {
  const GridMap open(6, 6);
  CHECK(HReachable(open, {1, 1}, {2, 1}));
  CHECK(HReachable(open, {0, 0}, {5, 3}));

  GridMap wall(7, 5);
  for (int y = 0; y < 5; ++y) wall.SetBlocked({3, y}, true);
  CHECK_FALSE(HReachable(wall, {1, 2}, {5, 2}));

  CHECK_FALSE(HReachable(SingleObstacle(), {1, 1}, {3, 3}));
  CHECK(HReachable(SingleObstacle(), {1, 1}, {3, 1}));

  // Corner cutting is forbidden.
  GridMap corner(3, 3);
  corner.SetBlocked({1, 0}, true);
  CHECK_FALSE(HReachable(corner, {0, 0}, {1, 1}));
  CHECK(HReachable(corner, {0, 1}, {1, 1}));

  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const GridMap map = RandomMap(16, 16, 0.2, 100 + seed);
    for (int a = 0; a < 256; a += 7) {
      for (int b = 0; b < 256; b += 5) {
        const Cell s = map.CellAt(a), t = map.CellAt(b);
        if (map.IsBlocked(s) || map.IsBlocked(t)) continue;
        CHECK(HReachable(map, s, t) == oracle::HReachable(map, s, t));
      }
    }
  }
}

TEST_CASE("GetDirectHReachable") {
  const GridMap empty(8, 8);
  CHECK(GetDirectHReachable(empty, MakeSubgoalMask(empty, {}), {3, 3}).empty());

  const GridMap single = SingleObstacle();
  const SubgoalMask mask = MakeSubgoalMask(single, IdentifySubgoals(single));
  CHECK(AsSet(GetDirectHReachable(single, mask, {1, 1})) ==
        std::set<Cell>{{1, 3}, {3, 1}});

  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const GridMap map = RandomMap(30, 30, 0.08 + 0.06 * seed, 500 + seed);
    const SubgoalMask m = MakeSubgoalMask(map, IdentifySubgoals(map));
    for (int y = 0; y < 30; ++y) {
      for (int x = 0; x < 30; ++x) {
        if (map.IsBlocked({x, y})) continue;
        CHECK(AsSet(GetDirectHReachable(map, m, {x, y})) ==
              oracle::DirectHReachableSet(map, {x, y}));
      }
    }
  }
}

TEST_CASE("Build subgoal graph") {
  const SubgoalGraph empty = SubgoalGraph::Build(GridMap(6, 6));
  CHECK(empty.vertex_count() == 0);
  CHECK(empty.edge_count() == 0);

  const SubgoalGraph ring = SubgoalGraph::Build(SingleObstacle());
  CHECK(ring.vertex_count() == 4);
  CHECK(ring.edge_count() == 4);
  for (int i = 0; i < 4; ++i) {
    const auto [b, e] = ring.Neighbors(i);
    CHECK(e - b == 2);
    for (auto* it = b; it != e; ++it) CHECK(it->length == 2.0);
  }

  SUBCASE("edges are symmetric, octile, loop-free and unique") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const GridMap raw = RandomMap(60, 45, 0.05, 900 + seed);
      const GridMap map = BuildAlertMap(raw, ComputeDistanceField(raw), 1.5);
      const SubgoalGraph g = SubgoalGraph::Build(map);
      for (int u = 0; u < g.vertex_count(); ++u) {
        const auto [b, e] = g.Neighbors(u);
        std::set<int> seen;
        for (auto* it = b; it != e; ++it) {
          CHECK(it->to != u);
          CHECK(seen.insert(it->to).second);
          CHECK(it->length == Octile(g.vertex(u), g.vertex(it->to)));
          const auto [b2, e2] = g.Neighbors(it->to);
          bool back = false;
          for (auto* jt = b2; jt != e2; ++jt) back = back || jt->to == u;
          CHECK(back);
        }
      }
    }
  }
}

TEST_CASE("graph dump round trip") {
  const GridMap raw = RandomMap(40, 40, 0.06, 4);
  const GridMap map = BuildAlertMap(raw, ComputeDistanceField(raw), 1.5);
  const SubgoalGraph g = SubgoalGraph::Build(map);
  std::stringstream ss;
  g.Write(ss);
  const SubgoalGraph back = SubgoalGraph::Read(map, ss);
  CHECK(back == g);

  std::istringstream bad("v 0 0\nq 1\n");
  CHECK_THROWS_AS(SubgoalGraph::Read(map, bad), ParseError);
}

TEST_CASE("ConnectToGraph") {
  const SubgoalGraph g = SubgoalGraph::Build(SingleObstacle());
  const GridMap before_map = g.map();
  const std::size_t before_edges = g.edge_count();

  const GraphConnection already = ConnectToGraph(g, {1, 1});
  CHECK_FALSE(already.is_temporary);
  CHECK(already.edges.empty());

  const GraphConnection open = ConnectToGraph(g, {0, 0});
  CHECK(open.is_temporary);
  std::set<Cell> got;
  for (const auto& e : open.edges) got.insert(g.vertex(e.to));
  CHECK(got == oracle::DirectHReachableSet(g.map(), {0, 0}));
  CHECK(g.edge_count() == before_edges);
  CHECK(g.map() == before_map);

  CHECK_THROWS_AS(ConnectToGraph(g, {2, 2}), QueryError);
}

TEST_CASE("TryDirectPath") {
  const GridMap open(5, 5);
  const auto p = TryDirectPath(open, {1, 1}, {2, 1});
  REQUIRE(p);
  CHECK(p->cells == std::vector<Cell>{{1, 1}, {2, 1}});
  CHECK(p->length == 1.0);

  GridMap wall(7, 5);
  for (int y = 0; y < 5; ++y) wall.SetBlocked({3, y}, true);
  CHECK_FALSE(TryDirectPath(wall, {1, 2}, {5, 2}));
}

TEST_CASE("GridAStar") {
  const GridMap corridor(5, 1);
  const auto p = GridAStar(corridor, {0, 0}, {4, 0});
  REQUIRE(p);
  CHECK(p->length == 4.0);
  CHECK(p->cells.size() == 5);
  CHECK(GridAStar(corridor, {2, 0}, {2, 0})->length == 0.0);

  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const GridMap map = RandomMap(40, 40, 0.25, seed);
    const auto free_cells = map.FreeCells();
    std::uniform_int_distribution<std::size_t> pick(0, free_cells.size() - 1);
    for (int q = 0; q < 30; ++q) {
      const Cell s = free_cells[pick(rng)], t = free_cells[pick(rng)];
      const auto a = GridAStar(map, s, t);
      const auto d = oracle::Dijkstra(map, s, t);
      REQUIRE(a.has_value() == d.has_value());
      if (a) CHECK(std::abs(a->length - *d) < 1e-9);
    }
  }
}

TEST_CASE("FindPath is optimal and complete") {
  SUBCASE("open field takes the direct fast path") {
    const SubgoalGraph g = SubgoalGraph::Build(GridMap(20, 20));
    const PathQuery q = FindPath(g, {1, 1}, {15, 8});
    REQUIRE(q.path);
    CHECK(q.direct);
    CHECK(q.path->cells.size() == 2);
    CHECK(q.h_time_seconds >= 0.0);
  }
  SUBCASE("around an obstacle") {
    GridMap map(12, 12);
    for (int y = 2; y < 12; ++y) map.SetBlocked({6, y}, true);
    const SubgoalGraph g = SubgoalGraph::Build(map);
    const PathQuery q = FindPath(g, {2, 8}, {10, 8});
    REQUIRE(q.path);
    CHECK_FALSE(q.direct);
    CHECK(q.path->cells.size() >= 3);
    CHECK(std::abs(q.path->length - GridAStar(map, {2, 8}, {10, 8})->length) <
          1e-9);
    double sum = 0.0;
    for (std::size_t i = 1; i < q.path->cells.size(); ++i) {
      CHECK(HReachable(map, q.path->cells[i - 1], q.path->cells[i]));
      sum += Octile(q.path->cells[i - 1], q.path->cells[i]);
    }
    CHECK(std::abs(sum - q.path->length) < 1e-9);
  }
  SUBCASE("unreachable goal still records H-time") {
    GridMap map(9, 9);
    for (int y = 0; y < 9; ++y) map.SetBlocked({4, y}, true);
    const SubgoalGraph g = SubgoalGraph::Build(map);
    const PathQuery q = FindPath(g, {1, 1}, {7, 7});
    CHECK_FALSE(q.path);
    CHECK(q.h_time_seconds > 0.0);
    CHECK_FALSE(FindAbstractPath(g, {1, 1}, {7, 7}));
  }
  SUBCASE("FindAbstractPath with a direct pair yields two vertices") {
    const SubgoalGraph g = SubgoalGraph::Build(SingleObstacle());
    const auto p = FindAbstractPath(g, {0, 0}, {4, 0});
    REQUIRE(p);
    CHECK(p->cells.size() == 2);
  }
  SUBCASE("random maps against grid A*") {
    std::mt19937_64 rng(11);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const GridMap raw = RandomMap(48, 48, 0.04 + 0.04 * (seed % 4), seed);
      const GridMap map =
          seed % 2 == 0 ? BuildAlertMap(raw, ComputeDistanceField(raw), 1.5)
                        : raw;
      const SubgoalGraph g = SubgoalGraph::Build(map);
      const auto free_cells = map.FreeCells();
      if (free_cells.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, free_cells.size() - 1);
      for (int q = 0; q < 60; ++q) {
        const Cell s = free_cells[pick(rng)], t = free_cells[pick(rng)];
        const PathQuery sg = FindPath(g, s, t);
        const auto grid = GridAStar(map, s, t);
        REQUIRE(sg.path.has_value() == grid.has_value());
        if (grid) {
          CHECK(std::abs(sg.path->length - grid->length) < 1e-9);
          CHECK(sg.path->cells.front() == s);
          CHECK(sg.path->cells.back() == t);
        }
      }
    }
  }
}

}  // namespace
}  // namespace sgrl
