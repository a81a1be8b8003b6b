#include <map>
#include <queue>

#include "aht/nav.hpp"
#include "aht/rng.hpp"
#include "doctest.h"

using namespace aht;

namespace {

// Independent flood-fill oracle over floor cells.
std::map<Cell, int> flood_fill(const LayoutSpec& layout, Cell src) {
  std::map<Cell, int> dist;
  dist[src] = 0;
  std::queue<Cell> q;
  q.push(src);
  while (!q.empty()) {
    Cell c = q.front();
    q.pop();
    for (Cell d : {Cell{0, -1}, Cell{0, 1}, Cell{-1, 0}, Cell{1, 0}}) {
      Cell nb = c + d;
      if (!layout.is_floor(nb) || dist.count(nb)) continue;
      dist[nb] = dist[c] + 1;
      q.push(nb);
    }
  }
  return dist;
}

LayoutSpec random_layout(Rng& rng, int w, int h) {
  for (;;) {
    std::string grid;
    std::vector<Cell> floors;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const bool border = x == 0 || y == 0 || x == w - 1 || y == h - 1;
        if (border || rng.uniform() < 0.3) {
          grid += '#';
        } else {
          grid += '.';
          floors.push_back({x, y});
        }
      }
      grid += '\n';
    }
    if (floors.size() < 2) continue;
    // Place the required start markers on two floor cells.
    auto set = [&](Cell c, char ch) { grid[c.y * (w + 1) + c.x] = ch; };
    set(floors[0], 'a');
    set(floors[1], 'b');
    LayoutMeta meta;
    meta.n_ingredients = 1;
    meta.recipes = {{3}};
    return parse_layout(grid, meta);
  }
}

}  // namespace

TEST_CASE("nav tables match a flood-fill oracle on random grids") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    LayoutSpec layout = random_layout(rng, 6, 6);
    NavTables nav = build_nav_tables(layout);
    for (int y = 0; y < layout.height; ++y) {
      for (int x = 0; x < layout.width; ++x) {
        const Cell src{x, y};
        if (!layout.is_floor(src)) continue;
        auto oracle = flood_fill(layout, src);
        CHECK(nav.distance(src, src) == 0);
        for (int ty = 0; ty < layout.height; ++ty)
          for (int tx = 0; tx < layout.width; ++tx) {
            const Cell dst{tx, ty};
            if (!layout.is_floor(dst)) continue;
            auto it = oracle.find(dst);
            const int expect = it == oracle.end() ? kUnreachable : it->second;
            CHECK(nav.distance(src, dst) == expect);
          }
      }
    }
  }
}

TEST_CASE("following next_action realizes the distance exactly") {
  Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    LayoutSpec layout = random_layout(rng, 7, 7);
    NavTables nav = build_nav_tables(layout);
    for (int sy = 0; sy < layout.height; ++sy)
      for (int sx = 0; sx < layout.width; ++sx)
        for (int ty = 0; ty < layout.height; ++ty)
          for (int tx = 0; tx < layout.width; ++tx) {
            Cell cur{sx, sy};
            const Cell dst{tx, ty};
            if (!layout.is_floor(cur) || !layout.is_floor(dst)) continue;
            const int d = nav.distance(cur, dst);
            if (d == kUnreachable) continue;
            for (int step = 0; step < d; ++step) {
              const Action a = nav.next(cur, dst);
              REQUIRE(a != Action::kStay);
              cur = cur + offset(Direction(int(a)));
              CHECK(nav.distance(cur, dst) == d - step - 1);
            }
            CHECK(cur == dst);
          }
  }
}

TEST_CASE("approach distance counts the final interact-adjacent step") {
  const LayoutSpec& layout = builtin_layout("coord_simple");
  NavTables nav = build_nav_tables(layout);
  // Pot at (2,0); standing right below it at (2,1) the approach distance is 1.
  CHECK(nav.approach_distance(layout, {2, 1}, {2, 0}) == 1);
  CHECK(nav.approach_distance(layout, {2, 2}, {2, 0}) == 2);
  // approach_action interacts when facing, turns when adjacent.
  CHECK(nav.approach_action(layout, {2, 1}, Direction::kUp, {2, 0}) ==
        Action::kInteract);
  CHECK(nav.approach_action(layout, {2, 1}, Direction::kLeft, {2, 0}) ==
        Action::kUp);
}

TEST_CASE("chokepoint of a corridor is in the corridor") {
  LayoutMeta meta;
  meta.n_ingredients = 1;
  meta.recipes = {{3}};
  // Two rooms joined by a single-cell corridor at (3,2).
  LayoutSpec layout = parse_layout(
      "#######\n"
      "#ab#..#\n"
      "#..#..#\n"
      "#.....#\n"
      "#..#..#\n"
      "#######\n",
      meta);
  NavTables nav = build_nav_tables(layout);
  // Every left<->right path crosses the row-3 gap; its three cells dominate
  // the betweenness count (the mouths also collect in-room pairs).
  const Cell c = chokepoint(layout, nav);
  CHECK(c.y == 3);
  CHECK(c.x >= 2);
  CHECK(c.x <= 4);
}
