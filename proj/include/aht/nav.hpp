#pragma once

#include "aht/layout.hpp"
#include "aht/types.hpp"

namespace aht {

inline constexpr int kUnreachable = -1;

// All-pairs BFS tables over floor cells. dist/next_action are indexed by
// (from, to) flattened tile indices; queries are O(1).
struct NavTables {
  int width = 0;
  int height = 0;
  std::vector<int> dist;            // size tiles^2, kUnreachable if no path
  std::vector<int8_t> next_action;  // first move along a shortest path, -1 none

  int tiles() const { return width * height; }
  int distance(Cell from, Cell to) const {
    return dist[(from.y * width + from.x) * tiles() + to.y * width + to.x];
  }
  Action next(Cell from, Cell to) const {
    const int8_t a =
        next_action[(from.y * width + from.x) * tiles() + to.y * width + to.x];
    return a < 0 ? Action::kStay : Action(a);
  }

  // Distance to stand adjacent to (and interact with) a non-floor target:
  // min over floor neighbors f of dist(from, f) + 1. Adjacent cells give 1.
  int approach_distance(const LayoutSpec& layout, Cell from, Cell target) const;
  // First action toward an interaction with `target`: interact when already
  // facing it, a turn when adjacent, otherwise a step along a shortest path.
  Action approach_action(const LayoutSpec& layout, Cell from, Direction facing,
                         Cell target) const;
};

NavTables build_nav_tables(const LayoutSpec& layout);

// Floor cell lying on the most all-pairs shortest paths (betweenness).
Cell chokepoint(const LayoutSpec& layout, const NavTables& nav);

}  // namespace aht
