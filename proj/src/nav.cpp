#include "aht/nav.hpp"

#include <algorithm>
#include <deque>

namespace aht {

namespace {

// Movement actions in tie-break order (lowest action index wins).
constexpr Direction kDirs[4] = {Direction::kUp, Direction::kDown,
                                Direction::kLeft, Direction::kRight};

}  // namespace

NavTables build_nav_tables(const LayoutSpec& layout) {
  NavTables nav;
  nav.width = layout.width;
  nav.height = layout.height;
  const int tiles = nav.tiles();
  nav.dist.assign(size_t(tiles) * tiles, kUnreachable);
  nav.next_action.assign(size_t(tiles) * tiles, -1);

  std::vector<int> d(tiles);
  std::deque<int> queue;
  for (int src = 0; src < tiles; ++src) {
    const Cell s{src % nav.width, src / nav.width};
    if (!layout.is_floor(s)) continue;
    std::fill(d.begin(), d.end(), kUnreachable);
    d[src] = 0;
    queue.clear();
    queue.push_back(src);
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      const Cell c{cur % nav.width, cur / nav.width};
      for (Direction dir : kDirs) {
        const Cell nb = c + offset(dir);
        if (!layout.is_floor(nb)) continue;
        const int ni = layout.idx(nb);
        if (d[ni] != kUnreachable) continue;
        d[ni] = d[cur] + 1;
        queue.push_back(ni);
      }
    }
    for (int dst = 0; dst < tiles; ++dst)
      nav.dist[size_t(src) * tiles + dst] = d[dst];
  }
  // First action: the lowest-index direction whose neighbor is one step closer
  // to the destination (needs all dist rows, hence a second pass).
  for (int src = 0; src < tiles; ++src) {
    const Cell s{src % nav.width, src / nav.width};
    if (!layout.is_floor(s)) continue;
    for (int dst = 0; dst < tiles; ++dst) {
      const int dd = nav.dist[size_t(src) * tiles + dst];
      if (dd == kUnreachable || dd == 0) continue;
      for (Direction dir : kDirs) {
        const Cell nb = s + offset(dir);
        if (!layout.is_floor(nb)) continue;
        if (nav.dist[size_t(layout.idx(nb)) * tiles + dst] == dd - 1) {
          nav.next_action[size_t(src) * tiles + dst] = int8_t(dir);
          break;
        }
      }
    }
  }
  return nav;
}

int NavTables::approach_distance(const LayoutSpec& layout, Cell from,
                                 Cell target) const {
  int best = kUnreachable;
  for (Direction dir : kDirs) {
    const Cell f = target + offset(dir);
    if (!layout.is_floor(f)) continue;
    const int d = distance(from, f);
    if (d == kUnreachable) continue;
    if (best == kUnreachable || d + 1 < best) best = d + 1;
  }
  return best;
}

Action NavTables::approach_action(const LayoutSpec& layout, Cell from,
                                  Direction facing, Cell target) const {
  // Already standing next to the target: turn toward it (a blocked move still
  // turns) or interact if facing it.
  for (Direction dir : kDirs) {
    if (from + offset(dir) == target)
      return dir == facing ? Action::kInteract : Action(int(dir));
  }
  int best = kUnreachable;
  Cell best_stand{};
  for (Direction dir : kDirs) {
    const Cell f = target + offset(dir);
    if (!layout.is_floor(f)) continue;
    const int d = distance(from, f);
    if (d == kUnreachable) continue;
    if (best == kUnreachable || d < best ||
        (d == best && layout.idx(f) < layout.idx(best_stand))) {
      best = d;
      best_stand = f;
    }
  }
  if (best == kUnreachable) return Action::kStay;
  return next(from, best_stand);
}

Cell chokepoint(const LayoutSpec& layout, const NavTables& nav) {
  // Count, for each floor cell m, the (s, t) pairs with
  // dist(s,m) + dist(m,t) == dist(s,t), s != m != t. Ties break on tile index.
  std::vector<Cell> floors;
  for (int y = 0; y < layout.height; ++y)
    for (int x = 0; x < layout.width; ++x)
      if (layout.is_floor({x, y})) floors.push_back({x, y});

  Cell best = floors.empty() ? Cell{} : floors.front();
  long best_score = -1;
  for (Cell m : floors) {
    long score = 0;
    for (Cell s : floors) {
      if (s == m) continue;
      const int sm = nav.distance(s, m);
      if (sm == kUnreachable) continue;
      for (Cell t : floors) {
        if (t == m || t == s) continue;
        const int st = nav.distance(s, t);
        if (st == kUnreachable) continue;
        if (sm + nav.distance(m, t) == st) ++score;
      }
    }
    if (score > best_score) {
      best_score = score;
      best = m;
    }
  }
  return best;
}

}  // namespace aht
