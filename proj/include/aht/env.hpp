#pragma once

#include <map>

#include "aht/layout.hpp"
#include "aht/rng.hpp"
#include "aht/types.hpp"

namespace aht {

struct EnvConfig {
  double gamma = 0.99;
  int horizon = 400;            // steps per episode
  double shaping_horizon = 1e6; // steps over which shaped reward anneals
  uint64_t seed = 0;
};

struct AgentState {
  Cell position;
  Direction direction = Direction::kDown;
  Inventory inventory;
  friend bool operator==(const AgentState&, const AgentState&) = default;
};

inline constexpr int kCookTime = 20;
inline constexpr int kButtonVisibleSteps = 10;
inline constexpr int kPotCapacity = 3;

struct PotState {
  std::vector<uint8_t> counts;  // per ingredient type
  int cooking_timer = 0;        // counts down from kCookTime while cooking
  bool cooking = false;
  bool cooked = false;

  int total() const {
    int s = 0;
    for (auto c : counts) s += c;
    return s;
  }
  friend bool operator==(const PotState&, const PotState&) = default;
};

struct GameState {
  std::array<AgentState, 2> agents;
  std::map<Cell, PotState> pots;
  std::map<Cell, Item> counters;  // occupied counter tiles only
  Recipe target_recipe;
  int button_visible_timer = 0;
  bool delivery_flash = false;  // correct delivery happened last step
  int t = 0;
  int episode_length = 400;

  bool recipe_visible(const LayoutSpec& layout) const {
    // Static indicators are always on.
    return layout.has_button_indicator ? button_visible_timer > 0 : true;
  }
  friend bool operator==(const GameState&, const GameState&) = default;
};

// Dense (5, 5, C) tensor, row-major [y][x][c], zero outside the grid.
struct Observation {
  int channels = 0;
  std::array<float, 5 * 5 * 64> data{};  // capacity covers C <= 64

  float& at(int y, int x, int c) { return data[(y * 5 + x) * channels + c]; }
  float at(int y, int x, int c) const { return data[(y * 5 + x) * channels + c]; }
  int size() const { return 5 * 5 * channels; }
};

// Shaped reward constants (sparse-reward semantics never depend on these).
inline constexpr double kShapedIngredientPickup = 1.0;
inline constexpr double kShapedPlaceInPot = 3.0;
inline constexpr double kShapedPlatePickup = 1.0;
inline constexpr double kShapedDishPickup = 5.0;

inline constexpr double kRewardDeliver = 20.0;
inline constexpr double kRewardWrongDeliver = -20.0;
inline constexpr double kRewardButton = -5.0;

struct StepOutcome {
  GameState next_state;
  double reward_sparse = 0;
  double reward_shaped = 0;
  bool done = false;
};

double shaping_coefficient(double t, double shaping_horizon);

GameState reset(const LayoutSpec& layout, const EnvConfig& cfg, Rng& rng);

StepOutcome step(const LayoutSpec& layout, const GameState& state,
                 JointAction actions, Rng& rng);

// Iteratively reverts conflicting moves; swaps are reverted too.
std::array<Cell, 2> resolve_collisions(const std::array<Cell, 2>& current,
                                       const std::array<Cell, 2>& proposed);

Observation observe(const GameState& state, int agent,
                    const LayoutSpec& layout);

}  // namespace aht
