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

#include "sgrl/grid_map.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "sgrl/errors.h"

namespace sgrl {

GridMap::GridMap(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw ArgumentError("map dimensions must be positive");
  }
  blocked_.assign(static_cast<std::size_t>(width) * height, 0);
}

void GridMap::SetBlocked(Cell c, bool blocked) {
  if (!InBounds(c)) {
    throw ArgumentError("cell out of bounds");
  }
  blocked_[Index(c)] = blocked ? 1 : 0;
}

std::size_t GridMap::CountBlocked() const {
  return static_cast<std::size_t>(
      std::count(blocked_.begin(), blocked_.end(), std::uint8_t{1}));
}

std::vector<Cell> GridMap::FreeCells() const {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < blocked_.size(); ++i) {
    if (blocked_[i] == 0) cells.push_back(CellAt(i));
  }
  return cells;
}

namespace {

bool ReadLine(std::istream& in, std::string& line, int& line_no) {
  if (!std::getline(in, line)) return false;
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

int ParseHeaderInt(const std::string& line, const std::string& key,
                   int line_no) {
  std::istringstream ss(line);
  std::string word;
  long long value = 0;
  if (!(ss >> word) || word != key || !(ss >> value)) {
    throw ParseError("expected '" + key + " <n>'", line_no);
  }
  std::string rest;
  if (ss >> rest) throw ParseError("trailing text after " + key, line_no);
  if (value <= 0 || value > (1 << 20)) {
    throw ParseError(key + " must be a positive integer", line_no);
  }
  return static_cast<int>(value);
}

}  // namespace

GridMap LoadMap(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!ReadLine(in, line, line_no) || line.rfind("type", 0) != 0) {
    throw ParseError("expected 'type octile'", line_no);
  }
  {
    std::istringstream ss(line);
    std::string word, type;
    ss >> word >> type;
    if (type != "octile") throw ParseError("unsupported map type", line_no);
  }
  if (!ReadLine(in, line, line_no)) throw ParseError("missing height", line_no);
  const int height = ParseHeaderInt(line, "height", line_no);
  if (!ReadLine(in, line, line_no)) throw ParseError("missing width", line_no);
  const int width = ParseHeaderInt(line, "width", line_no);
  if (!ReadLine(in, line, line_no) || line != "map") {
    throw ParseError("expected 'map'", line_no);
  }

  GridMap map(width, height);
  for (int y = 0; y < height; ++y) {
    if (!ReadLine(in, line, line_no)) {
      throw ParseError("expected " + std::to_string(height) + " rows, got " +
                           std::to_string(y),
                       line_no);
    }
    if (static_cast<int>(line.size()) != width) {
      throw ParseError("row has " + std::to_string(line.size()) +
                           " characters, expected " + std::to_string(width),
                       line_no);
    }
    for (int x = 0; x < width; ++x) {
      switch (line[x]) {
        case '.':
        case 'G':
          break;
        case '@':
        case 'O':
        case 'T':
        case 'W':
          map.SetBlocked({x, y}, true);
          break;
        default:
          throw ParseError(std::string("unknown terrain '") + line[x] + "'",
                           line_no);
      }
    }
  }
  while (ReadLine(in, line, line_no)) {
    if (!line.empty()) throw ParseError("extra rows after map", line_no);
  }
  return map;
}

GridMap LoadMapFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EnvironmentError("cannot open map file: " + path);
  try {
    return LoadMap(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

void SaveMap(const GridMap& map, std::ostream& out) {
  out << "type octile\nheight " << map.height() << "\nwidth " << map.width()
      << "\nmap\n";
  std::string row(static_cast<std::size_t>(map.width()), '.');
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      row[x] = map.IsBlocked({x, y}) ? '@' : '.';
    }
    out << row << '\n';
  }
}

void SaveMapFile(const GridMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw EnvironmentError("cannot write map file: " + path);
  SaveMap(map, out);
}

GridMap Downsample(const GridMap& map, int k) {
  if (k < 1) throw ArgumentError("downsample factor must be >= 1");
  const int w = (map.width() + k - 1) / k;
  const int h = (map.height() + k - 1) / k;
  GridMap out(w, h);
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.IsBlocked({x, y})) out.SetBlocked({x / k, y / k}, true);
    }
  }
  return out;
}

GridMap RandomMap(int width, int height, double obstacle_ratio,
                  std::uint64_t seed) {
  if (!(obstacle_ratio >= 0.0 && obstacle_ratio <= 1.0)) {
    throw ArgumentError("obstacle ratio must lie in [0, 1]");
  }
  GridMap map(width, height);
  const std::size_t n = map.size();
  const auto count = static_cast<std::size_t>(
      std::llround(obstacle_ratio * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first `count` slots are a uniform sample.
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(order[i], order[pick(rng)]);
    map.SetBlocked(map.CellAt(order[i]), true);
  }
  return map;
}

}  // namespace sgrl
