#pragma once

#include <map>
#include <string>
#include <vector>

#include "aht/types.hpp"

namespace aht {

enum class TileKind : uint8_t {
  kFloor,
  kCounter,
  kPot,
  kDispenser,
  kPlatePile,
  kServing,
  kIndicatorStatic,
  kIndicatorButton,
};

struct LayoutMeta {
  std::string name;
  int n_ingredients = 0;
  std::vector<std::vector<int>> recipes;  // ingredient count vectors
  int episode_length = 400;
  bool delivery_indicator = false;
  bool explicit_start_cook = false;
  std::string split = "train";  // train | test (layout-generalization axis)
};

struct LayoutSpec {
  std::string name;
  int width = 0;
  int height = 0;
  std::vector<TileKind> tiles;
  std::vector<int> dispenser_ingredient;  // per tile, -1 unless dispenser
  int n_ingredients = 0;
  std::vector<Recipe> recipe_pool;
  bool has_delivery_indicator = false;
  bool has_button_indicator = false;
  bool explicit_start_cook = false;
  int episode_length = 400;
  std::array<std::vector<Cell>, 2> start_regions;
  std::string split = "train";

  int idx(Cell c) const { return c.y * width + c.x; }
  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  TileKind tile(Cell c) const { return tiles[idx(c)]; }
  bool is_floor(Cell c) const {
    return in_bounds(c) && tile(c) == TileKind::kFloor;
  }
  int dispenser_at(Cell c) const { return dispenser_ingredient[idx(c)]; }

  std::vector<Cell> cells_of(TileKind k) const;
  // Observation channel count: 25 + 5n (+1 with delivery indicator).
  int obs_channels() const {
    return 25 + 5 * n_ingredients + (has_delivery_indicator ? 1 : 0);
  }
};

// Parses the canonical text grid plus sidecar metadata. Throws EnvError on
// malformed input (non-rectangular grid, unknown tile char, bad recipe,
// dispenser index out of range).
LayoutSpec parse_layout(const std::string& text, const LayoutMeta& meta);

// Shipped layouts.
const std::vector<std::string>& builtin_layout_names();
const LayoutSpec& builtin_layout(const std::string& name);
std::string builtin_layout_text(const std::string& name);

}  // namespace aht
