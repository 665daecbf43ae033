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

#ifndef SGRL_GRID_MAP_H_
#define SGRL_GRID_MAP_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace sgrl {

// Integer grid coordinate. x is the column, y the row.
struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }
inline Cell operator-(Cell a, Cell b) { return {a.x - b.x, a.y - b.y}; }

// Occupancy grid with boolean blocked flags. Anything outside the map is
// blocked, which keeps every neighbourhood query total at the border.
class GridMap {
 public:
  GridMap() = default;
  // All cells start free.
  GridMap(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return blocked_.size(); }

  bool InBounds(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  bool IsBlocked(Cell c) const {
    return !InBounds(c) || blocked_[Index(c)] != 0;
  }
  bool IsFree(Cell c) const { return !IsBlocked(c); }
  void SetBlocked(Cell c, bool blocked);

  std::size_t Index(Cell c) const {
    return static_cast<std::size_t>(c.y) * width_ + c.x;
  }
  Cell CellAt(std::size_t index) const {
    return {static_cast<int>(index % width_), static_cast<int>(index / width_)};
  }

  std::size_t CountBlocked() const;
  std::vector<Cell> FreeCells() const;

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> blocked_;
};

// MovingAI .map reader. '.' and 'G' are free; '@', 'O', 'T' and 'W' are
// blocked. Throws ParseError carrying the offending line number.
GridMap LoadMap(std::istream& in);
GridMap LoadMapFile(const std::string& path);

// Writes the MovingAI layout using only '.' and '@'.
void SaveMap(const GridMap& map, std::ostream& out);
void SaveMapFile(const GridMap& map, const std::string& path);

// Conservative k-to-1 reduction: an output cell is blocked if any input cell
// it covers is blocked.
GridMap Downsample(const GridMap& map, int k);

// Blocks exactly round(ratio * width * height) distinct cells drawn uniformly
// without replacement.
GridMap RandomMap(int width, int height, double obstacle_ratio,
                  std::uint64_t seed);

}  // namespace sgrl

template <>
struct std::hash<sgrl::Cell> {
  std::size_t operator()(const sgrl::Cell& c) const noexcept {
    return std::hash<long long>{}((static_cast<long long>(c.x) << 32) ^
                                  static_cast<unsigned>(c.y));
  }
};

#endif  // SGRL_GRID_MAP_H_
