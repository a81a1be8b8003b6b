#include "aht/env.hpp"

#include <algorithm>

namespace aht {

double shaping_coefficient(double t, double shaping_horizon) {
  return std::max(0.0, 1.0 - t / shaping_horizon);
}

GameState reset(const LayoutSpec& layout, const EnvConfig& cfg, Rng& rng) {
  GameState s;
  s.episode_length = cfg.horizon;

  Rng place = rng.sub("reset");
  for (int i = 0; i < 2; ++i) {
    std::vector<Cell> region = layout.start_regions[i];
    if (i == 1)
      std::erase(region, s.agents[0].position);
    if (region.empty()) throw EnvError("empty start region");
    s.agents[i].position = region[place.uniform_int(uint32_t(region.size()))];
    s.agents[i].direction = Direction::kDown;
  }

  for (Cell c : layout.cells_of(TileKind::kPot)) {
    PotState pot;
    pot.counts.assign(layout.n_ingredients, 0);
    s.pots.emplace(c, pot);
  }

  Rng recipe = rng.sub("recipe");
  s.target_recipe =
      layout.recipe_pool[recipe.uniform_int(uint32_t(layout.recipe_pool.size()))];
  return s;
}

std::array<Cell, 2> resolve_collisions(const std::array<Cell, 2>& current,
                                       const std::array<Cell, 2>& proposed) {
  std::array<Cell, 2> out = proposed;
  // Swap in a single step is a conflict.
  if (out[0] == current[1] && out[1] == current[0] && !(out[0] == current[0]))
    return current;
  for (;;) {
    bool changed = false;
    if (out[0] == out[1]) {
      for (int i = 0; i < 2; ++i)
        if (!(out[i] == current[i])) {
          out[i] = current[i];
          changed = true;
        }
    }
    for (int i = 0; i < 2; ++i) {
      const int j = 1 - i;
      // Moving into a cell the other agent still occupies.
      if (!(out[i] == current[i]) && out[i] == current[j] &&
          out[j] == current[j]) {
        out[i] = current[i];
        changed = true;
      }
    }
    if (!changed) break;
  }
  return out;
}

namespace {

void do_interact(const LayoutSpec& layout, GameState& s, int agent,
                 StepOutcome& out, Rng& rng) {
  AgentState& a = s.agents[agent];
  const Cell target = a.position + offset(a.direction);
  if (!layout.in_bounds(target)) return;

  switch (layout.tile(target)) {
    case TileKind::kDispenser: {
      if (!a.inventory) {
        a.inventory = Item::make_ingredient(layout.dispenser_at(target));
        out.reward_shaped += kShapedIngredientPickup;
      }
      break;
    }
    case TileKind::kPlatePile: {
      if (!a.inventory) {
        a.inventory = Item::make_plate();
        out.reward_shaped += kShapedPlatePickup;
      }
      break;
    }
    case TileKind::kPot: {
      PotState& pot = s.pots.at(target);
      if (a.inventory && a.inventory->kind == ItemKind::kIngredient &&
          pot.total() < kPotCapacity && !pot.cooking && !pot.cooked) {
        pot.counts[a.inventory->ingredient]++;
        a.inventory.reset();
        out.reward_shaped += kShapedPlaceInPot;
        if (pot.total() == kPotCapacity && !layout.explicit_start_cook) {
          pot.cooking = true;
          pot.cooking_timer = kCookTime;
        }
      } else if (!a.inventory && pot.total() == kPotCapacity && !pot.cooking &&
                 !pot.cooked && layout.explicit_start_cook) {
        pot.cooking = true;
        pot.cooking_timer = kCookTime;
      } else if (a.inventory && a.inventory->kind == ItemKind::kPlate &&
                 pot.cooked) {
        Recipe dish = encode_recipe(
            std::vector<int>(pot.counts.begin(), pot.counts.end()));
        dish.set_cooked(true);
        dish.set_plated(true);
        a.inventory = Item::make_dish(dish);
        pot.counts.assign(layout.n_ingredients, 0);
        pot.cooked = false;
        out.reward_shaped += kShapedDishPickup;
      }
      break;
    }
    case TileKind::kServing: {
      if (a.inventory && a.inventory->kind == ItemKind::kDish &&
          a.inventory->dish.cooked() && a.inventory->dish.plated()) {
        if (a.inventory->dish.same_contents(s.target_recipe)) {
          out.reward_sparse += kRewardDeliver;
          s.delivery_flash = true;
          Rng recipe = rng.sub("recipe").sub(uint64_t(s.t));
          s.target_recipe = layout.recipe_pool[recipe.uniform_int(
              uint32_t(layout.recipe_pool.size()))];
        } else {
          out.reward_sparse += kRewardWrongDeliver;
        }
        a.inventory.reset();  // dish is consumed either way
      }
      break;
    }
    case TileKind::kIndicatorButton: {
      out.reward_sparse += kRewardButton;
      s.button_visible_timer = kButtonVisibleSteps;
      break;
    }
    case TileKind::kCounter: {
      auto it = s.counters.find(target);
      if (a.inventory && it == s.counters.end()) {
        s.counters.emplace(target, *a.inventory);
        a.inventory.reset();
      } else if (!a.inventory && it != s.counters.end()) {
        a.inventory = it->second;
        s.counters.erase(it);
      }
      break;
    }
    default:
      break;
  }
}

}  // namespace

StepOutcome step(const LayoutSpec& layout, const GameState& state,
                 JointAction actions, Rng& rng) {
  if (state.t >= state.episode_length)
    throw EnvError("step() past episode end");

  StepOutcome out;
  out.next_state = state;
  GameState& s = out.next_state;

  // Timers tick first so a button press stays visible for a full 10 steps
  // and a pot started at step t is cooked 20 elapsed steps later.
  if (s.button_visible_timer > 0) s.button_visible_timer--;
  for (auto& [cell, pot] : s.pots) {
    if (pot.cooking) {
      pot.cooking_timer--;
      if (pot.cooking_timer <= 0) {
        pot.cooking = false;
        pot.cooked = true;
        pot.cooking_timer = 0;
      }
    }
  }
  s.delivery_flash = false;

  // Movement (movement actions always turn the agent, even when blocked).
  std::array<Cell, 2> current{s.agents[0].position, s.agents[1].position};
  std::array<Cell, 2> proposed = current;
  for (int i = 0; i < 2; ++i) {
    const Action a = actions[i];
    if (a == Action::kUp || a == Action::kDown || a == Action::kLeft ||
        a == Action::kRight) {
      const Direction d = Direction(int(a));
      s.agents[i].direction = d;
      const Cell dst = current[i] + offset(d);
      if (layout.is_floor(dst)) proposed[i] = dst;
    }
  }
  const auto resolved = resolve_collisions(current, proposed);
  s.agents[0].position = resolved[0];
  s.agents[1].position = resolved[1];

  for (int i = 0; i < 2; ++i)
    if (actions[i] == Action::kInteract) do_interact(layout, s, i, out, rng);

  s.t = state.t + 1;
  out.done = s.t >= s.episode_length;
  return out;
}

Observation observe(const GameState& state, int agent,
                    const LayoutSpec& layout) {
  const int n = layout.n_ingredients;
  Observation obs;
  obs.channels = layout.obs_channels();

  const Cell center = state.agents[agent].position;
  const bool recipe_on = state.recipe_visible(layout);

  // Channel block offsets, observer first.
  // per agent: position 1, direction 4, inventory [plate, cooked, ing*n]
  const int per_agent = 7 + n;
  const int off_static = 2 * per_agent;   // 6 terrain channels
  const int off_disp = off_static + 6;    // n dispenser channels
  const int off_dyn = off_disp + n;       // 2+n dynamic object channels
  const int off_recipe = off_dyn + 2 + n; // 2+n recipe channels
  const int off_timer = off_recipe + 2 + n;
  const int off_delivery = off_timer + 1;

  auto write_item = [&](int y, int x, int base, const Item& item) {
    switch (item.kind) {
      case ItemKind::kPlate:
        obs.at(y, x, base + 0) = 1.0f;
        break;
      case ItemKind::kIngredient:
        obs.at(y, x, base + 2 + item.ingredient) += 1.0f;
        break;
      case ItemKind::kDish:
        obs.at(y, x, base + 0) = item.dish.plated() ? 1.0f : 0.0f;
        obs.at(y, x, base + 1) = item.dish.cooked() ? 1.0f : 0.0f;
        for (int i = 0; i < n; ++i)
          obs.at(y, x, base + 2 + i) += float(item.dish.count(i));
        break;
    }
  };

  for (int wy = 0; wy < 5; ++wy) {
    for (int wx = 0; wx < 5; ++wx) {
      const Cell c{center.x + wx - 2, center.y + wy - 2};
      if (!layout.in_bounds(c)) continue;

      for (int k = 0; k < 2; ++k) {
        const int who = (k == 0) ? agent : 1 - agent;
        const AgentState& a = state.agents[who];
        const int base = k * per_agent;
        if (a.position == c) {
          obs.at(wy, wx, base + 0) = 1.0f;
          obs.at(wy, wx, base + 1 + int(a.direction)) = 1.0f;
          if (a.inventory) write_item(wy, wx, base + 5, *a.inventory);
        }
      }

      switch (layout.tile(c)) {
        case TileKind::kCounter: obs.at(wy, wx, off_static + 0) = 1.0f; break;
        case TileKind::kServing: obs.at(wy, wx, off_static + 1) = 1.0f; break;
        case TileKind::kPot: obs.at(wy, wx, off_static + 2) = 1.0f; break;
        case TileKind::kIndicatorStatic:
          obs.at(wy, wx, off_static + 3) = 1.0f;
          break;
        case TileKind::kIndicatorButton:
          obs.at(wy, wx, off_static + 4) = 1.0f;
          break;
        case TileKind::kPlatePile: obs.at(wy, wx, off_static + 5) = 1.0f; break;
        case TileKind::kDispenser:
          obs.at(wy, wx, off_disp + layout.dispenser_at(c)) = 1.0f;
          break;
        default: break;
      }

      if (auto it = state.counters.find(c); it != state.counters.end())
        write_item(wy, wx, off_dyn, it->second);
      if (auto it = state.pots.find(c); it != state.pots.end()) {
        const PotState& pot = it->second;
        if (pot.cooked) obs.at(wy, wx, off_dyn + 1) = 1.0f;
        for (int i = 0; i < n; ++i)
          obs.at(wy, wx, off_dyn + 2 + i) += float(pot.counts[i]);
        obs.at(wy, wx, off_timer) = float(pot.cooking_timer);
      }

      const TileKind tk = layout.tile(c);
      if (recipe_on && (tk == TileKind::kIndicatorStatic ||
                        tk == TileKind::kIndicatorButton)) {
        for (int i = 0; i < n; ++i)
          obs.at(wy, wx, off_recipe + 2 + i) = float(state.target_recipe.count(i));
      }

      if (layout.has_delivery_indicator && tk == TileKind::kServing &&
          state.delivery_flash)
        obs.at(wy, wx, off_delivery) = 1.0f;
    }
  }
  return obs;
}

}  // namespace aht
