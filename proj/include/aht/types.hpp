#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aht {

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell& a, const Cell& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

enum class Action : int32_t {
  kUp = 0,
  kDown = 1,
  kLeft = 2,
  kRight = 3,
  kStay = 4,
  kInteract = 5,
};
inline constexpr int kNumActions = 6;

enum class Direction : int { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

inline Cell offset(Direction d) {
  switch (d) {
    case Direction::kUp: return {0, -1};
    case Direction::kDown: return {0, 1};
    case Direction::kLeft: return {-1, 0};
    case Direction::kRight: return {1, 0};
  }
  return {0, 0};
}

inline Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }

struct JointAction {
  Action a0 = Action::kStay;
  Action a1 = Action::kStay;
  Action operator[](int i) const { return i == 0 ? a0 : a1; }
};

// Bit-packed recipe / dish contents. Bit 0: cooked, bit 1: plated, then two
// bits per ingredient type holding counts 0..3.
struct Recipe {
  uint32_t packed = 0;

  static constexpr uint32_t kCookedBit = 1u << 0;
  static constexpr uint32_t kPlateBit = 1u << 1;

  bool cooked() const { return packed & kCookedBit; }
  bool plated() const { return packed & kPlateBit; }
  void set_cooked(bool v) { packed = v ? packed | kCookedBit : packed & ~kCookedBit; }
  void set_plated(bool v) { packed = v ? packed | kPlateBit : packed & ~kPlateBit; }

  int count(int ingredient) const {
    return int((packed >> (2 + 2 * ingredient)) & 0x3u);
  }
  friend bool operator==(const Recipe&, const Recipe&) = default;

  // Ingredient counts only, status bits ignored.
  bool same_contents(const Recipe& o) const {
    return (packed >> 2) == (o.packed >> 2);
  }
};

Recipe encode_recipe(const std::vector<int>& counts, bool require_sum3 = true);
std::vector<int> decode_recipe(Recipe r, int n_ingredients);

enum class ItemKind { kIngredient, kPlate, kDish };

struct Item {
  ItemKind kind = ItemKind::kPlate;
  int ingredient = 0;  // valid when kind == kIngredient
  Recipe dish;         // valid when kind == kDish

  static Item make_ingredient(int idx) { return {ItemKind::kIngredient, idx, {}}; }
  static Item make_plate() { return {ItemKind::kPlate, 0, {}}; }
  static Item make_dish(Recipe r) { return {ItemKind::kDish, 0, r}; }
  friend bool operator==(const Item&, const Item&) = default;
};

using Inventory = std::optional<Item>;

struct EnvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace aht
