#include "aht/layout.hpp"

#include <algorithm>
#include <sstream>

namespace aht {

Recipe encode_recipe(const std::vector<int>& counts, bool require_sum3) {
  uint32_t packed = 0;
  int sum = 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0 || counts[i] > 3)
      throw EnvError("recipe ingredient count out of range 0..3");
    sum += counts[i];
    packed |= uint32_t(counts[i]) << (2 + 2 * i);
  }
  if (require_sum3 && sum != 3)
    throw EnvError("target recipe must contain exactly 3 ingredients");
  return Recipe{packed};
}

std::vector<int> decode_recipe(Recipe r, int n_ingredients) {
  std::vector<int> counts(n_ingredients);
  for (int i = 0; i < n_ingredients; ++i) counts[i] = r.count(i);
  return counts;
}

std::vector<Cell> LayoutSpec::cells_of(TileKind k) const {
  std::vector<Cell> out;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (tiles[y * width + x] == k) out.push_back({x, y});
  return out;
}

LayoutSpec parse_layout(const std::string& text, const LayoutMeta& meta) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  if (rows.empty()) throw EnvError("empty layout grid");
  const int h = int(rows.size());
  const int w = int(rows[0].size());
  for (const auto& r : rows)
    if (int(r.size()) != w) throw EnvError("layout grid is not rectangular");

  LayoutSpec spec;
  spec.name = meta.name;
  spec.width = w;
  spec.height = h;
  spec.n_ingredients = meta.n_ingredients;
  spec.has_delivery_indicator = meta.delivery_indicator;
  spec.explicit_start_cook = meta.explicit_start_cook;
  spec.episode_length = meta.episode_length;
  spec.split = meta.split;
  spec.tiles.assign(w * h, TileKind::kFloor);
  spec.dispenser_ingredient.assign(w * h, -1);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const char c = rows[y][x];
      const int i = y * w + x;
      switch (c) {
        case '.': break;
        case 'a': spec.start_regions[0].push_back({x, y}); break;
        case 'b': spec.start_regions[1].push_back({x, y}); break;
        case '#': spec.tiles[i] = TileKind::kCounter; break;
        case 'P': spec.tiles[i] = TileKind::kPot; break;
        case 'B': spec.tiles[i] = TileKind::kPlatePile; break;
        case 'S': spec.tiles[i] = TileKind::kServing; break;
        case 'R': spec.tiles[i] = TileKind::kIndicatorStatic; break;
        case 'L': spec.tiles[i] = TileKind::kIndicatorButton; break;
        default:
          if (c >= '0' && c <= '9') {
            const int ing = c - '0';
            if (ing >= meta.n_ingredients)
              throw EnvError("dispenser ingredient index >= n_ingredients");
            spec.tiles[i] = TileKind::kDispenser;
            spec.dispenser_ingredient[i] = ing;
          } else {
            throw EnvError(std::string("unknown tile character '") + c + "'");
          }
      }
    }
  }

  if (meta.recipes.empty()) throw EnvError("recipe pool must be non-empty");
  for (const auto& counts : meta.recipes) {
    if (int(counts.size()) != meta.n_ingredients)
      throw EnvError("recipe ingredient vector length != n_ingredients");
    spec.recipe_pool.push_back(encode_recipe(counts));
  }

  for (int x = 0; x < w; ++x)
    if (spec.tiles[x] == TileKind::kFloor ||
        spec.tiles[(h - 1) * w + x] == TileKind::kFloor)
      throw EnvError("grid border must be non-floor");
  for (int y = 0; y < h; ++y)
    if (spec.tiles[y * w] == TileKind::kFloor ||
        spec.tiles[y * w + w - 1] == TileKind::kFloor)
      throw EnvError("grid border must be non-floor");
  for (int agent = 0; agent < 2; ++agent)
    if (spec.start_regions[agent].empty())
      throw EnvError("each agent needs a non-empty start region");
  spec.has_button_indicator =
      std::any_of(spec.tiles.begin(), spec.tiles.end(),
                  [](TileKind k) { return k == TileKind::kIndicatorButton; });
  return spec;
}

namespace {

struct BuiltinDef {
  const char* name;
  const char* grid;
  int n;
  bool delivery;
  const char* split;
};

// Grids follow the published layout metadata (dimensions, ingredient counts,
// indicator kinds); exact tile geometry is this artifact's own transcription.
const BuiltinDef kBuiltins[] = {
    {"coord_simple",
     "#0P1P2##\n"
     "B.....a#\n"
     "L.b....#\n"
     "S......#\n"
     "########\n",
     3, false, "train"},
    {"coord_ring",
     "#0##P##1#\n"
     "#a......#\n"
     "#.#####.#\n"
     "#.#####.#\n"
     "B.#####.S\n"
     "#.#####.#\n"
     "#.#####.#\n"
     "#......b#\n"
     "#2##L####\n",
     3, false, "train"},
    {"test_simple",
     "#0P1P2##\n"
     "B.....a#\n"
     "R.b....#\n"
     "S......#\n"
     "########\n",
     3, true, "train"},
    {"test_wide",
     "##PS##\n"
     "0....B\n"
     "#.ab.#\n"
     "1....3\n"
     "#...R#\n"
     "0....#\n"
     "######\n",
     4, true, "train"},
    {"demo_simple",
     "####P######\n"
     "0...a...b.B\n"
     "L....#....S\n"
     "1.........2\n"
     "###########\n",
     3, false, "train"},
    {"demo_wide",
     "####SB#####\n"
     "#....a....#\n"
     "0...###...1\n"
     "#L...P...L#\n"
     "#..b......#\n"
     "##0##2##3##\n",
     4, false, "train"},
    {"asymm_both",
     "#########\n"
     "#a.R#R.b#\n"
     "0...P...B\n"
     "1...#...#\n"
     "##S###S##\n",
     2, false, "train"},
    {"asymm_right",
     "#########\n"
     "#a..#R.b#\n"
     "0...P...B\n"
     "1...#...#\n"
     "##S###S##\n",
     2, false, "test"},
    {"cramped_up",
     "##P##\n"
     "0a.bB\n"
     "R...1\n"
     "##S##\n",
     2, false, "train"},
    {"cramped_down",
     "##S##\n"
     "0a.bB\n"
     "R...1\n"
     "##P##\n",
     2, false, "test"},
};

LayoutMeta meta_for(const BuiltinDef& d) {
  LayoutMeta m;
  m.name = d.name;
  m.n_ingredients = d.n;
  m.delivery_indicator = d.delivery;
  m.split = d.split;
  m.episode_length = 400;
  if (d.n >= 3) {
    // Three-ingredient kitchens pair two soups over a shared two-unit base,
    // distinguished by the garnish; the indicator reveals which is ordered.
    std::vector<int> r0(d.n, 0), r1(d.n, 0);
    r0[0] = 2;
    r0[1] = 1;
    r1[0] = 2;
    r1[2] = 1;
    m.recipes = {r0, r1};
  } else {
    // Two-ingredient kitchens use the two single-ingredient soups.
    std::vector<int> r0(d.n, 0), r1(d.n, 0);
    r0[0] = 3;
    r1[1] = 3;
    m.recipes = {r0, r1};
  }
  return m;
}

const BuiltinDef* find_builtin(const std::string& name) {
  for (const auto& d : kBuiltins)
    if (name == d.name) return &d;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& builtin_layout_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& d : kBuiltins) v.push_back(d.name);
    return v;
  }();
  return names;
}

const LayoutSpec& builtin_layout(const std::string& name) {
  static std::map<std::string, LayoutSpec> cache;
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  const BuiltinDef* d = find_builtin(name);
  if (!d) throw EnvError("unknown layout: " + name);
  return cache.emplace(name, parse_layout(d->grid, meta_for(*d))).first->second;
}

std::string builtin_layout_text(const std::string& name) {
  const BuiltinDef* d = find_builtin(name);
  if (!d) throw EnvError("unknown layout: " + name);
  return d->grid;
}

}  // namespace aht
