#pragma once

// Test-local generators and statistics, independent of the library's own
// sampling code so property tests don't inherit its bugs.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "plans/ast.hpp"
#include "plans/world.hpp"

namespace plans::testing {

inline Action random_action(std::mt19937_64& rng) {
  return static_cast<Action>(std::uniform_int_distribution<int>(0, kNumActions - 2)(rng));
}

inline Cond random_cond(std::mt19937_64& rng) {
  return {static_cast<Perception>(std::uniform_int_distribution<int>(0, kNumPerceptions - 1)(rng)),
          std::uniform_int_distribution<int>(0, 1)(rng) == 1};
}

inline std::vector<Action> random_body(std::mt19937_64& rng, int max_len = 4) {
  int len = std::uniform_int_distribution<int>(1, max_len)(rng);
  std::vector<Action> body;
  for (int i = 0; i < len; ++i) body.push_back(random_action(rng));
  return body;
}

// A structurally valid flat program with 0-2 branching statements, built
// directly from the AST constructors.
inline Program random_program(std::mt19937_64& rng) {
  Program p;
  int controls = std::uniform_int_distribution<int>(0, 2)(rng);
  int segments = controls + 1;
  for (int seg = 0; seg < segments; ++seg) {
    int fillers = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int i = 0; i < fillers; ++i) {
      if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
        int count = std::uniform_int_distribution<int>(2, 10)(rng);
        p.items.push_back(RepeatStmt{count, random_body(rng, 3)});
      } else {
        p.items.push_back(ActStmt{random_action(rng)});
      }
    }
    if (seg < controls) {
      switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0:
          p.items.push_back(WhileStmt{random_cond(rng), random_body(rng)});
          break;
        case 1:
          p.items.push_back(IfStmt{random_cond(rng), random_body(rng), random_body(rng)});
          break;
        default:
          p.items.push_back(IfStmt{random_cond(rng), random_body(rng), std::nullopt});
          break;
      }
    }
  }
  return p;
}

// A world built from scratch: borders are implicit (off-grid is wall), a few
// interior walls and marker piles, agent on a free cell.
inline WorldState random_world(std::mt19937_64& rng, int width = 8, int height = 8) {
  WorldState w;
  w.width = width;
  w.height = height;
  w.walls.assign(static_cast<size_t>(width) * height, 0);
  w.markers.assign(static_cast<size_t>(width) * height, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& cell : w.walls) cell = unit(rng) < 0.1 ? 1 : 0;
  for (size_t i = 0; i < w.markers.size(); ++i)
    if (!w.walls[i] && unit(rng) < 0.15)
      w.markers[i] = std::uniform_int_distribution<int>(1, 3)(rng);
  std::vector<int> free_cells;
  for (size_t i = 0; i < w.walls.size(); ++i)
    if (!w.walls[i]) free_cells.push_back(static_cast<int>(i));
  if (free_cells.empty()) {
    w.walls[0] = 0;
    free_cells.push_back(0);
  }
  int cell = free_cells[std::uniform_int_distribution<size_t>(0, free_cells.size() - 1)(rng)];
  w.agent_row = cell / width;
  w.agent_col = cell % width;
  w.heading = static_cast<Heading>(std::uniform_int_distribution<int>(0, 3)(rng));
  return w;
}

// One-sided Mann-Whitney rank-sum z statistic for "xs tend to be smaller
// than ys" (normal approximation, midranks for ties). Large positive z
// rejects "same distribution" in favor of xs < ys.
inline double rank_sum_z(std::vector<double> xs, std::vector<double> ys) {
  struct Obs {
    double v;
    bool from_x;
  };
  std::vector<Obs> all;
  for (double v : xs) all.push_back({v, true});
  for (double v : ys) all.push_back({v, false});
  std::sort(all.begin(), all.end(), [](const Obs& a, const Obs& b) { return a.v < b.v; });

  double n1 = static_cast<double>(xs.size());
  double n2 = static_cast<double>(ys.size());
  double rank_sum_x = 0.0;
  double tie_term = 0.0;
  size_t i = 0;
  while (i < all.size()) {
    size_t j = i;
    while (j < all.size() && all[j].v == all[i].v) ++j;
    double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    for (size_t k = i; k < j; ++k)
      if (all[k].from_x) rank_sum_x += midrank;
    i = j;
  }
  double u = rank_sum_x - n1 * (n1 + 1) / 2.0;  // small U = xs ranked low
  double mean_u = n1 * n2 / 2.0;
  double n = n1 + n2;
  double var_u = n1 * n2 / 12.0 * (n + 1 - tie_term / (n * (n - 1)));
  if (var_u <= 0) return 0.0;
  return (mean_u - u) / std::sqrt(var_u);
}

}  // namespace plans::testing
