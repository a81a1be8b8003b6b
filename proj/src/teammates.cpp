#include "aht/teammates.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "json.hpp"

namespace aht {

using ordered_json = nlohmann::ordered_json;

uint64_t seed_from_spec_string(const std::string& spec_string) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(spec_string.data(), spec_string.size(), md, &len,
                 EVP_sha256(), nullptr) != 1 || len < 8)
    throw EnvError("SHA256 digest failed");
  uint64_t seed = 0;
  for (int i = 7; i >= 0; --i) seed = (seed << 8) | md[i];
  return seed;
}

TeammateSpec sample_params(const std::string& family, const std::string& split,
                           const std::string& spec_string) {
  if (split != "train" && split != "test")
    throw EnvError("split must be train or test");
  const bool test = split == "test";

  TeammateSpec spec;
  spec.family = family;
  spec.split = split;
  spec.spec_string = spec_string;
  spec.seed = seed_from_spec_string(spec_string);
  std::string tail = spec_string;
  if (auto pos = tail.rfind(':'); pos != std::string::npos)
    tail = tail.substr(pos + 1);
  spec.kind = split + "-" + tail;

  // Draw order is fixed per family; changing it would silently change every
  // sampled teammate. Noise-style probabilities are drawn from the low end of
  // their table range so sampled partners stay functional (mirroring the
  // source benchmark's vetting of candidate teammates).
  Rng rng(spec.seed);
  if (family == "H1") {
    H1Params p;
    p.press_L_when_unknown = test ? rng.uniform(0.6, 1.0) : rng.uniform(0.0, 0.6);
    p.refresh_interval = rng.uniform(50.0, 200.0);
    p.strict_recipe = rng.uniform(0.0, 1.0);
    p.plate_timing = rng.uniform(0.0, 1.0);
    p.dist_weight = rng.uniform(0.1, 1.0);
    p.inertia = rng.uniform(0.0, 1.0);
    p.idle_prob = rng.uniform(0.0, 0.4);
    p.wrong_ingredient_prob = test ? rng.uniform(0.6, 1.0) : rng.uniform(0.0, 0.6);
    spec.params = p;
  } else if (family == "H2") {
    H2Params p;
    p.split_mode = int(rng.uniform_int(3));
    p.strictness = test ? rng.uniform(0.6, 1.0) : rng.uniform(0.0, 0.6);
    p.shared_margin = rng.uniform(0.0, 3.0);
    p.rescue_threshold = rng.uniform(0.0, 1.0);
    p.yield_bias = rng.uniform(0.0, 1.0);
    p.behavior_mode = int(rng.uniform_int(3)) + (test ? 3 : 0);
    p.action_probability = rng.uniform(0.0, 1.0);
    spec.params = p;
  } else if (family == "H3") {
    H3Params p;
    p.role_mode = test ? 1 : int(rng.uniform_int(2)) * 2;
    p.handoff_style = int(rng.uniform_int(3));
    p.plate_urgency = test ? rng.uniform(0.6, 1.0) : rng.uniform(0.0, 0.6);
    p.prestage_bias = rng.uniform(0.0, 1.0);
    p.start_cook_bias = rng.uniform(0.0, 1.0);
    p.hesitation_prob = rng.uniform(0.0, 0.4);
    p.wrong_action_prob = rng.uniform(0.0, 0.3);
    p.task_abandon_prob = rng.uniform(0.0, 0.3);
    spec.params = p;
  } else if (family == "H4") {
    H4Params p;
    p.w_deliver = rng.uniform(5.0, 20.0);
    p.w_pickup_cooked = rng.uniform(3.0, 15.0);
    p.w_get_plate = rng.uniform(2.0, 10.0);
    p.w_add_ingredient = rng.uniform(3.0, 12.0);
    p.w_fetch_ingredient = rng.uniform(2.0, 10.0);
    p.w_stage_on_counter = rng.uniform(0.5, 5.0);
    p.w_start_cooking = rng.uniform(3.0, 15.0);
    p.w_press_L = rng.uniform(1.0, 8.0);
    p.dist_weight = test ? rng.uniform(0.8, 1.5) : rng.uniform(0.1, 0.8);
    p.inertia = test ? rng.uniform(0.6, 1.0) : rng.uniform(0.0, 0.6);
    spec.params = p;
  } else {
    throw EnvError("unknown teammate family: " + family);
  }
  return spec;
}

namespace {

ordered_json params_to_json(const FamilyParams& params) {
  ordered_json j;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, H1Params>) {
          j["press_L_when_unknown"] = p.press_L_when_unknown;
          j["refresh_interval"] = p.refresh_interval;
          j["strict_recipe"] = p.strict_recipe;
          j["plate_timing"] = p.plate_timing;
          j["dist_weight"] = p.dist_weight;
          j["inertia"] = p.inertia;
          j["idle_prob"] = p.idle_prob;
          j["wrong_ingredient_prob"] = p.wrong_ingredient_prob;
        } else if constexpr (std::is_same_v<T, H2Params>) {
          j["split_mode"] = p.split_mode;
          j["strictness"] = p.strictness;
          j["shared_margin"] = p.shared_margin;
          j["rescue_threshold"] = p.rescue_threshold;
          j["yield_bias"] = p.yield_bias;
          j["behavior_mode"] = p.behavior_mode;
          j["action_probability"] = p.action_probability;
        } else if constexpr (std::is_same_v<T, H3Params>) {
          j["role_mode"] = p.role_mode;
          j["handoff_style"] = p.handoff_style;
          j["plate_urgency"] = p.plate_urgency;
          j["prestage_bias"] = p.prestage_bias;
          j["start_cook_bias"] = p.start_cook_bias;
          j["hesitation_prob"] = p.hesitation_prob;
          j["wrong_action_prob"] = p.wrong_action_prob;
          j["task_abandon_prob"] = p.task_abandon_prob;
        } else {
          j["w_deliver"] = p.w_deliver;
          j["w_pickup_cooked"] = p.w_pickup_cooked;
          j["w_get_plate"] = p.w_get_plate;
          j["w_add_ingredient"] = p.w_add_ingredient;
          j["w_fetch_ingredient"] = p.w_fetch_ingredient;
          j["w_stage_on_counter"] = p.w_stage_on_counter;
          j["w_start_cooking"] = p.w_start_cooking;
          j["w_press_L"] = p.w_press_L;
          j["dist_weight"] = p.dist_weight;
          j["inertia"] = p.inertia;
        }
      },
      params);
  return j;
}

FamilyParams params_from_json(const std::string& family, const ordered_json& j) {
  if (family == "H1") {
    H1Params p;
    p.press_L_when_unknown = j.at("press_L_when_unknown");
    p.refresh_interval = j.at("refresh_interval");
    p.strict_recipe = j.at("strict_recipe");
    p.plate_timing = j.at("plate_timing");
    p.dist_weight = j.at("dist_weight");
    p.inertia = j.at("inertia");
    p.idle_prob = j.at("idle_prob");
    p.wrong_ingredient_prob = j.at("wrong_ingredient_prob");
    return p;
  }
  if (family == "H2") {
    H2Params p;
    p.split_mode = j.at("split_mode");
    p.strictness = j.at("strictness");
    p.shared_margin = j.at("shared_margin");
    p.rescue_threshold = j.at("rescue_threshold");
    p.yield_bias = j.at("yield_bias");
    p.behavior_mode = j.at("behavior_mode");
    p.action_probability = j.at("action_probability");
    return p;
  }
  if (family == "H3") {
    H3Params p;
    p.role_mode = j.at("role_mode");
    p.handoff_style = j.at("handoff_style");
    p.plate_urgency = j.at("plate_urgency");
    p.prestage_bias = j.at("prestage_bias");
    p.start_cook_bias = j.at("start_cook_bias");
    p.hesitation_prob = j.at("hesitation_prob");
    p.wrong_action_prob = j.at("wrong_action_prob");
    p.task_abandon_prob = j.at("task_abandon_prob");
    return p;
  }
  if (family == "H4") {
    H4Params p;
    p.w_deliver = j.at("w_deliver");
    p.w_pickup_cooked = j.at("w_pickup_cooked");
    p.w_get_plate = j.at("w_get_plate");
    p.w_add_ingredient = j.at("w_add_ingredient");
    p.w_fetch_ingredient = j.at("w_fetch_ingredient");
    p.w_stage_on_counter = j.at("w_stage_on_counter");
    p.w_start_cooking = j.at("w_start_cooking");
    p.w_press_L = j.at("w_press_L");
    p.dist_weight = j.at("dist_weight");
    p.inertia = j.at("inertia");
    return p;
  }
  throw EnvError("unknown teammate family: " + family);
}

}  // namespace

std::string teammate_spec_to_json(const TeammateSpec& spec) {
  ordered_json j;
  j["family"] = spec.family;
  j["kind"] = spec.kind;
  j["params"] = params_to_json(spec.params);
  j["spec_string"] = spec.spec_string;
  return j.dump();
}

TeammateSpec teammate_spec_from_json(const std::string& json_text) {
  const ordered_json j = ordered_json::parse(json_text);
  TeammateSpec spec;
  spec.family = j.at("family");
  spec.kind = j.at("kind");
  spec.spec_string = j.at("spec_string");
  spec.seed = seed_from_spec_string(spec.spec_string);
  spec.params = params_from_json(spec.family, j.at("params"));
  // The variant label is "<split>-<suffix>".
  spec.split = spec.kind.substr(0, spec.kind.find('-')) == "test" ? "test"
                                                                  : "train";
  return spec;
}

TeammateContext make_teammate_context(const LayoutSpec& layout, int agent) {
  TeammateContext ctx;
  ctx.layout = &layout;
  ctx.nav = build_nav_tables(layout);
  ctx.choke = chokepoint(layout, ctx.nav);
  ctx.agent = agent;
  return ctx;
}

void update_memory(const TeammateContext& ctx, const GameState& state,
                   PolicyMemory& mem) {
  if (state.delivery_flash) {
    // A correct delivery resampled the target recipe.
    mem.known_recipe.reset();
    mem.recipe_age = 0;
  }
  if (state.recipe_visible(*ctx.layout)) {
    mem.known_recipe = state.target_recipe;
    mem.recipe_age = 0;
  } else if (mem.known_recipe) {
    mem.recipe_age++;
  }
  if (mem.partner_add_age < 1000) mem.partner_add_age++;
  const AgentState& self = state.agents[size_t(ctx.agent)];
  const Cell faced{self.position.x + offset(self.direction).x,
                   self.position.y + offset(self.direction).y};
  for (const auto& [cell, pot] : state.pots) {
    const auto it = mem.prev_pot_totals.find(cell);
    if (it != mem.prev_pot_totals.end() && pot.total() > it->second &&
        cell != faced)
      mem.partner_add_age = 0;
    mem.prev_pot_totals[cell] = pot.total();
  }
}

namespace {

struct IntentEval {
  bool feasible = false;
  Cell target{};
  int dist = 0;
};

struct TargetPick {
  bool found = false;
  Cell cell{};
  int dist = 0;
};

// Candidates iterate in y-major order, so the first strict minimum is also
// the lexicographically smallest equidistant target.
TargetPick pick_nearest(const TeammateContext& ctx, Cell from,
                        const std::vector<Cell>& cands) {
  TargetPick out;
  for (Cell c : cands) {
    const int d = ctx.nav.approach_distance(*ctx.layout, from, c);
    if (d == kUnreachable) continue;
    if (!out.found || d < out.dist) out = {true, c, d};
  }
  return out;
}

IntentEval to_eval(const TargetPick& t) {
  return {t.found, t.cell, t.dist};
}

bool pot_open(const PotState& pot) {
  return !pot.cooking && !pot.cooked && pot.total() < kPotCapacity;
}

bool pot_matches(const PotState& pot, const Recipe& recipe) {
  Recipe contents = encode_recipe(
      std::vector<int>(pot.counts.begin(), pot.counts.end()), false);
  return contents.same_contents(recipe);
}

// A pot that can still become the recipe: no ingredient over its target.
// Topping up an over-filled pot would auto-cook a wrong soup.
bool pot_compatible(const PotState& pot, const Recipe& recipe) {
  for (size_t i = 0; i < pot.counts.size(); ++i)
    if (int(pot.counts[i]) > recipe.count(int(i))) return false;
  return true;
}

// A pot whose contents can still become some pool recipe. Anything else is
// junk (a partner mixed in ingredients no order can use) and is worth
// flushing: fill it to capacity so it cooks, then clear it like any spoiled
// soup — otherwise the pot is blocked for the rest of the episode.
bool pot_salvageable(const PotState& pot, const LayoutSpec& layout) {
  for (const Recipe& r : layout.recipe_pool)
    if (pot_compatible(pot, r)) return true;
  return false;
}

std::vector<Cell> empty_counters(const TeammateContext& ctx,
                                 const GameState& state) {
  std::vector<Cell> out;
  for (Cell c : ctx.layout->cells_of(TileKind::kCounter)) {
    if (state.counters.count(c)) continue;
    if (ctx.nav.approach_distance(*ctx.layout,
                                  state.agents[ctx.agent].position,
                                  c) == kUnreachable)
      continue;
    out.push_back(c);
  }
  return out;
}

// Feasibility + target for one intent, for the agent ctx.agent. The recipe
// belief comes from memory, never from privileged peeking at target_recipe.
IntentEval evaluate_intent(IntentType intent, const TeammateContext& ctx,
                           const GameState& state, const PolicyMemory& mem) {
  const LayoutSpec& layout = *ctx.layout;
  const AgentState& a = state.agents[ctx.agent];
  const Inventory& inv = a.inventory;
  const std::optional<Recipe>& known = mem.known_recipe;

  switch (intent) {
    case IntentType::kDeliver: {
      if (inv && inv->kind == ItemKind::kDish && inv->dish.cooked() &&
          inv->dish.plated() && known && inv->dish.same_contents(*known))
        return to_eval(pick_nearest(ctx, a.position,
                                    layout.cells_of(TileKind::kServing)));
      return {};
    }
    case IntentType::kPickupCooked: {
      if (!(inv && inv->kind == ItemKind::kPlate)) return {};
      // Ready matching pots first; while a pot is still cooking, wait beside
      // it (interacting is a no-op) so the plate is there the moment it
      // finishes. A cooked pot matching no pool recipe is truly spoiled and
      // gets cleared as a last resort (the stage intent then offloads the
      // useless dish); a cooked pot matching another pool recipe is stock for
      // a future order and is left alone.
      std::vector<Cell> ready, cooking, spoiled, blocked;
      bool any_open = false;
      for (const auto& [cell, pot] : state.pots) {
        if (pot.cooked) {
          if (!known || pot_matches(pot, *known)) {
            ready.push_back(cell);
          } else {
            bool in_pool = false;
            for (const Recipe& r : layout.recipe_pool)
              in_pool |= pot_matches(pot, r);
            (in_pool ? blocked : spoiled).push_back(cell);
          }
        } else if (pot.cooking) {
          // Camp only pots that will match the order: the wait ends with an
          // interact, which plates whatever is in the pot.
          if (!known || pot_matches(pot, *known)) cooking.push_back(cell);
        } else {
          any_open = true;
        }
      }
      const std::vector<Cell>* cands = &ready;
      if (cands->empty()) cands = &cooking;
      if (cands->empty()) cands = &spoiled;
      // Stocked soups for other orders are normally left alone, but when
      // every pot holds one and none is open, the current order can never be
      // cooked and the order never resamples: clear one to restore progress.
      if (cands->empty() && !any_open) cands = &blocked;
      return to_eval(pick_nearest(ctx, a.position, *cands));
    }
    case IntentType::kGetPlate: {
      if (inv) return {};
      // Fetch the plate only once a soup is out or nearly out: grabbing it
      // the moment a cook starts just means camping at the pot with full
      // hands while the other pot could have been prepped. A partner who has
      // been filling pots recently has prep covered, so taking the plate
      // role early is the better division of labor.
      const bool partner_prepping = mem.partner_add_age <= 12;
      bool pot_active = false;
      for (const auto& [cell, pot] : state.pots)
        if (pot.cooked ||
            (pot.cooking && (partner_prepping || pot.cooking_timer <= 14)))
          pot_active = true;
      if (!pot_active) return {};
      return to_eval(pick_nearest(ctx, a.position,
                                  layout.cells_of(TileKind::kPlatePile)));
    }
    case IntentType::kAddIngredient: {
      if (!(inv && inv->kind == ItemKind::kIngredient)) return {};
      // Complete the fullest pot that wants this ingredient before seeding
      // another: dropping a fetched garnish into an empty-but-nearer pot
      // stalls the almost-finished one.
      int best_total = -1;
      for (const auto& [cell, pot] : state.pots)
        if (pot_open(pot) && known && pot_compatible(pot, *known) &&
            pot.counts[inv->ingredient] < known->count(inv->ingredient))
          best_total = std::max(best_total, pot.total());
      std::vector<Cell> cands;
      for (const auto& [cell, pot] : state.pots) {
        if (!pot_open(pot)) continue;
        if (known && pot_compatible(pot, *known) &&
            pot.counts[inv->ingredient] < known->count(inv->ingredient)) {
          if (pot.total() == best_total) cands.push_back(cell);
        } else if (!pot_salvageable(pot, layout)) {
          cands.push_back(cell);  // flush junk toward a cook-off
        }
      }
      return to_eval(pick_nearest(ctx, a.position, cands));
    }
    case IntentType::kFetchIngredient: {
      if (inv) return {};
      std::vector<Cell> cands;
      for (const auto& [cell, pot] : state.pots) {
        if (!pot_open(pot)) continue;
        if (!pot_salvageable(pot, layout)) {
          // Any ingredient moves a junk pot toward its cook-off.
          for (Cell d : layout.cells_of(TileKind::kDispenser))
            cands.push_back(d);
          continue;
        }
      }
      // Complete the fullest order-compatible pot before starting another:
      // fetching by nearest dispenser alone keeps topping a fresh pot while a
      // nearly finished one sits waiting for its last ingredient.
      if (known) {
        int best_total = -1;
        for (const auto& [cell, pot] : state.pots)
          if (pot_open(pot) && pot_compatible(pot, *known) &&
              pot.total() < 3 && pot.total() > best_total)
            best_total = pot.total();
        for (const auto& [cell, pot] : state.pots) {
          if (!pot_open(pot) || !pot_compatible(pot, *known) ||
              pot.total() != best_total)
            continue;
          for (int i = 0; i < layout.n_ingredients; ++i) {
            if (pot.counts[i] >= known->count(i)) continue;
            for (Cell d : layout.cells_of(TileKind::kDispenser))
              if (layout.dispenser_at(d) == i) cands.push_back(d);
          }
        }
      }
      std::sort(cands.begin(), cands.end());
      cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
      return to_eval(pick_nearest(ctx, a.position, cands));
    }
    case IntentType::kStageOnCounter: {
      if (!inv) return {};
      bool useless = false;
      if (inv->kind == ItemKind::kDish && known &&
          !inv->dish.same_contents(*known))
        useless = true;
      if (inv->kind == ItemKind::kIngredient && known) {
        bool addable = false;
        for (const auto& [cell, pot] : state.pots)
          if (pot_open(pot) &&
              ((pot_compatible(pot, *known) &&
                pot.counts[inv->ingredient] < known->count(inv->ingredient)) ||
               !pot_salvageable(pot, layout)))
            addable = true;
        useless = !addable;
      }
      if (!useless) return {};
      return to_eval(pick_nearest(ctx, a.position, empty_counters(ctx, state)));
    }
    case IntentType::kStartCooking: {
      if (!layout.explicit_start_cook || inv) return {};
      std::vector<Cell> cands;
      for (const auto& [cell, pot] : state.pots)
        if (pot.total() == kPotCapacity && !pot.cooking && !pot.cooked)
          cands.push_back(cell);
      return to_eval(pick_nearest(ctx, a.position, cands));
    }
    case IntentType::kPressL: {
      if (known || !layout.has_button_indicator) return {};
      return to_eval(pick_nearest(
          ctx, a.position, layout.cells_of(TileKind::kIndicatorButton)));
    }
  }
  return {};
}

double intent_weight(const H4Params& p, IntentType i) {
  switch (i) {
    case IntentType::kDeliver: return p.w_deliver;
    case IntentType::kPickupCooked: return p.w_pickup_cooked;
    case IntentType::kGetPlate: return p.w_get_plate;
    case IntentType::kAddIngredient: return p.w_add_ingredient;
    case IntentType::kFetchIngredient: return p.w_fetch_ingredient;
    case IntentType::kStageOnCounter: return p.w_stage_on_counter;
    case IntentType::kStartCooking: return p.w_start_cooking;
    case IntentType::kPressL: return p.w_press_L;
  }
  return 0;
}


// A ready soup on the pass loses value every step it waits: once a cooked pot
// matches the order (or could match, when the order is unknown), the
// plate-and-deliver chain outranks any sampled prep weight.
double delivery_urgency(IntentType i, const TeammateContext& ctx,
                        const GameState& state,
                        const std::optional<Recipe>& known) {
  if (i != IntentType::kDeliver && i != IntentType::kPickupCooked &&
      i != IntentType::kGetPlate)
    return 0.0;
  // A partner already holding a plate or the dish is covering the delivery;
  // racing them just abandons prep work.
  const Inventory& pinv = state.agents[size_t(1 - ctx.agent)].inventory;
  if (i != IntentType::kDeliver && pinv &&
      (pinv->kind == ItemKind::kPlate || pinv->kind == ItemKind::kDish))
    return 0.0;
  for (const auto& [cell, pot] : state.pots) {
    if (!pot.cooked) continue;
    if (known ? pot_matches(pot, *known) : [&] {
          for (const Recipe& r : ctx.layout->recipe_pool)
            if (pot_matches(pot, r)) return true;
          return false;
        }())
      return 25.0;
  }
  return 0.0;
}

Action go_to(const TeammateContext& ctx, const GameState& state, Cell target) {
  const AgentState& a = state.agents[ctx.agent];
  return ctx.nav.approach_action(*ctx.layout, a.position, a.direction, target);
}

}  // namespace

double score_intent(IntentType intent, const TeammateContext& ctx,
                    const GameState& state, const H4Params& p,
                    const PolicyMemory& mem) {
  const IntentEval e = evaluate_intent(intent, ctx, state, mem);
  if (!e.feasible) return 0.0;
  double score = intent_weight(p, intent) - p.dist_weight * e.dist +
                 delivery_urgency(intent, ctx, state, mem.known_recipe);
  if (mem.current_intent && *mem.current_intent == intent) score += p.inertia;
  return score;
}

Action act_h4(const TeammateContext& ctx, const GameState& state,
              const H4Params& p, PolicyMemory& mem, Rng& rng,
              int suppress_mask) {
  (void)rng;  // H4 is deterministic
  update_memory(ctx, state, mem);

  int best = -1;
  double best_score = 0;
  IntentEval best_eval;
  for (int i = 0; i < kNumIntents; ++i) {
    if (suppress_mask & (1 << i)) continue;
    const auto intent = IntentType(i);
    const IntentEval e = evaluate_intent(intent, ctx, state, mem);
    if (!e.feasible) continue;
    double s = intent_weight(p, intent) - p.dist_weight * e.dist +
               delivery_urgency(intent, ctx, state, mem.known_recipe);
    if (mem.current_intent && *mem.current_intent == intent) s += p.inertia;
    if (best < 0 || s > best_score) {
      best = i;
      best_score = s;
      best_eval = e;
    }
  }
  if (best < 0) {
    mem.current_intent.reset();
    return Action::kStay;
  }
  mem.current_intent = IntentType(best);
  mem.prev_target = best_eval.target;
  return go_to(ctx, state, best_eval.target);
}

Action act_h1(const TeammateContext& ctx, const GameState& state,
              const H1Params& p, PolicyMemory& mem, Rng& rng) {
  update_memory(ctx, state, mem);
  const LayoutSpec& layout = *ctx.layout;
  const AgentState& a = state.agents[ctx.agent];

  if (rng.uniform() < p.idle_prob) return Action::kStay;

  // The belief goes stale after refresh_interval unseen steps.
  const bool fresh =
      mem.known_recipe && mem.recipe_age <= int(p.refresh_interval);
  const std::optional<Recipe> known =
      fresh ? mem.known_recipe : std::nullopt;

  // Nearest-target choice weighted by dist_weight, with an inertia bonus for
  // re-choosing the previous target.
  auto pick = [&](const std::vector<Cell>& cands) {
    TargetPick out;
    double best = 0;
    for (Cell c : cands) {
      const int d = ctx.nav.approach_distance(layout, a.position, c);
      if (d == kUnreachable) continue;
      double s = -p.dist_weight * d +
                 (mem.prev_target && *mem.prev_target == c ? p.inertia : 0.0);
      if (!out.found || s > best) {
        out = {true, c, d};
        best = s;
      }
    }
    return out;
  };
  auto go = [&](const TargetPick& t) {
    mem.prev_target = t.cell;
    return go_to(ctx, state, t.cell);
  };

  // (1) deliver held dishes
  if (a.inventory && a.inventory->kind == ItemKind::kDish) {
    const bool mismatch =
        known && !a.inventory->dish.same_contents(*known);
    if (mismatch && p.strict_recipe >= 0.5) {
      if (auto t = pick(empty_counters(ctx, state)); t.found) return go(t);
      return Action::kStay;
    }
    if (auto t = pick(layout.cells_of(TileKind::kServing)); t.found)
      return go(t);
    return Action::kStay;
  }

  // (2) plate cooked soups
  if (a.inventory && a.inventory->kind == ItemKind::kPlate) {
    std::vector<Cell> cooked, cooking;
    for (const auto& [cell, pot] : state.pots) {
      if (pot.cooked) cooked.push_back(cell);
      if (pot.cooking) cooking.push_back(cell);
    }
    if (auto t = pick(cooked); t.found) return go(t);
    if (auto t = pick(cooking); t.found) return go(t);  // wait at the pot
    return Action::kStay;
  }

  // (3) add a held ingredient to a pot matching the known recipe
  if (a.inventory && a.inventory->kind == ItemKind::kIngredient) {
    const int ing = a.inventory->ingredient;
    const bool careless = rng.uniform() < p.wrong_ingredient_prob;
    std::vector<Cell> cands;
    for (const auto& [cell, pot] : state.pots) {
      if (!pot_open(pot)) continue;
      if (careless || (!known && p.strict_recipe < 0.5) ||
          (known && pot.counts[ing] < known->count(ing)))
        cands.push_back(cell);
    }
    if (auto t = pick(cands); t.found) return go(t);
    if (auto t = pick(empty_counters(ctx, state)); t.found) return go(t);
    return Action::kStay;
  }

  // empty-handed: plate fetching ahead of (4)
  bool any_cooked = false, any_cooking = false;
  for (const auto& [cell, pot] : state.pots) {
    any_cooked |= pot.cooked;
    any_cooking |= pot.cooking;
  }
  if (any_cooked || (any_cooking && rng.uniform() < p.plate_timing)) {
    if (auto t = pick(layout.cells_of(TileKind::kPlatePile)); t.found)
      return go(t);
  }

  // (4) acquire recipe information
  if (!known && layout.has_button_indicator &&
      rng.uniform() < p.press_L_when_unknown) {
    if (auto t = pick(layout.cells_of(TileKind::kIndicatorButton)); t.found)
      return go(t);
  }
  return Action::kStay;
}

namespace {

// Urgencies are capped below 1 so rescue_threshold = 1 never sanctions
// cross-territory work.
double intent_urgency(IntentType i, const GameState& state) {
  bool any_cooked = false;
  for (const auto& [cell, pot] : state.pots) any_cooked |= pot.cooked;
  switch (i) {
    case IntentType::kDeliver: return 0.95;
    case IntentType::kPickupCooked: return 0.9;
    case IntentType::kGetPlate: return any_cooked ? 0.8 : 0.4;
    case IntentType::kStartCooking: return 0.7;
    case IntentType::kAddIngredient: return 0.6;
    case IntentType::kFetchIngredient: return 0.5;
    case IntentType::kStageOnCounter: return 0.3;
    case IntentType::kPressL: return 0.2;
  }
  return 0;
}

bool in_territory(const TeammateContext& ctx, const H2Params& p, Cell c,
                  bool invert, double extra_margin) {
  const LayoutSpec& layout = *ctx.layout;
  const int me = invert ? 1 - ctx.agent : ctx.agent;
  const double margin = p.shared_margin + extra_margin;
  switch (p.split_mode) {
    case 0: {  // vertical: agent 0 left of ⌈w/2⌉
      const int bx = (layout.width + 1) / 2;
      const bool own = me == 0 ? c.x < bx : c.x >= bx;
      return own || std::abs(c.x - (bx - 0.5)) <= margin;
    }
    case 1: {  // horizontal: agent 0 above ⌈h/2⌉
      const int by = (layout.height + 1) / 2;
      const bool own = me == 0 ? c.y < by : c.y >= by;
      return own || std::abs(c.y - (by - 0.5)) <= margin;
    }
    default: {  // functional: prep vs. service stations, rest shared
      switch (layout.tile(c)) {
        case TileKind::kPot:
        case TileKind::kDispenser:
          return me == 0;
        case TileKind::kServing:
        case TileKind::kPlatePile:
          return me == 1;
        default:
          return true;
      }
    }
  }
}

}  // namespace

Action act_h2(const TeammateContext& ctx, const GameState& state,
              const H2Params& p, PolicyMemory& mem, Rng& rng) {
  update_memory(ctx, state, mem);
  const LayoutSpec& layout = *ctx.layout;
  const AgentState& a = state.agents[ctx.agent];

  if (p.behavior_mode == 3 && rng.uniform() >= p.action_probability)
    return Action::kStay;

  if (p.behavior_mode == 1) {  // blocker
    if (a.position == ctx.choke)
      return rng.uniform() < 0.7 ? Action::kStay
                                 : Action(int(rng.uniform_int(4)));
    return ctx.nav.next(a.position, ctx.choke);
  }

  if (p.behavior_mode == 5) {  // hoarder: pick things up, drop them, repeat
    if (a.inventory) {
      auto counters = empty_counters(ctx, state);
      if (auto t = pick_nearest(ctx, a.position, counters); t.found)
        return go_to(ctx, state, t.cell);
      return Action::kStay;
    }
    std::vector<Cell> sources = layout.cells_of(TileKind::kDispenser);
    for (Cell c : layout.cells_of(TileKind::kPlatePile)) sources.push_back(c);
    if (auto t = pick_nearest(ctx, a.position, sources); t.found)
      return go_to(ctx, state, t.cell);
    return Action::kStay;
  }

  // normal / loose / lazy-but-acting / invader: territory-filtered utility
  // with the published default weights. The territory agent never presses L.
  const bool invert = p.behavior_mode == 4;
  const double extra_margin = p.behavior_mode == 2 ? 1.0 : 0.0;
  const H4Params w;

  int best = -1;
  double best_score = 0;
  IntentEval best_eval;
  for (int i = 0; i < kNumIntents; ++i) {
    const auto intent = IntentType(i);
    if (intent == IntentType::kPressL) continue;
    const IntentEval e = evaluate_intent(intent, ctx, state, mem);
    if (!e.feasible) continue;
    double s = intent_weight(w, intent) - w.dist_weight * e.dist;
    if (!in_territory(ctx, p, e.target, invert, extra_margin) &&
        intent_urgency(intent, state) < p.rescue_threshold) {
      if (p.strictness >= 1.0) continue;
      s -= 20.0 * p.strictness;
    }
    if (mem.current_intent && *mem.current_intent == intent) s += w.inertia;
    if (best < 0 || s > best_score) {
      best = i;
      best_score = s;
      best_eval = e;
    }
  }
  if (best < 0) {
    mem.current_intent.reset();
    return Action::kStay;
  }
  mem.current_intent = IntentType(best);
  const Action act = go_to(ctx, state, best_eval.target);

  // Yield when shoulder-to-shoulder with the partner to break deadlocks.
  const Cell partner = state.agents[1 - ctx.agent].position;
  const int md = std::abs(partner.x - a.position.x) +
                 std::abs(partner.y - a.position.y);
  if (md == 1 && rng.uniform() < p.yield_bias) return Action::kStay;
  return act;
}

Action act_h3(const TeammateContext& ctx, const GameState& state,
              const H3Params& p, PolicyMemory& mem, Rng& rng) {
  update_memory(ctx, state, mem);
  const LayoutSpec& layout = *ctx.layout;
  const AgentState& a = state.agents[ctx.agent];

  if (rng.uniform() < p.hesitation_prob) return Action::kStay;
  if (rng.uniform() < p.wrong_action_prob)
    return Action(int(rng.uniform_int(kNumActions)));
  if (rng.uniform() < p.task_abandon_prob) {
    mem.current_intent.reset();
    mem.prev_target.reset();
  }

  bool pot_busy = false, pot_cooked = false;
  for (const auto& [cell, pot] : state.pots) {
    pot_busy |= pot.cooking || pot.cooked;
    pot_cooked |= pot.cooked;
  }
  const bool holding_service =
      a.inventory && (a.inventory->kind == ItemKind::kPlate ||
                      a.inventory->kind == ItemKind::kDish);
  int role = p.role_mode;
  if (role == 2) role = pot_busy || holding_service ? 1 : 0;

  auto eval = [&](IntentType i) { return evaluate_intent(i, ctx, state, mem); };
  auto run = [&](const IntentEval& e) {
    mem.prev_target = e.target;
    return go_to(ctx, state, e.target);
  };

  // Staging cell per handoff_style: pot-adjacent, central, teammate-nearby.
  auto stage_eval = [&]() -> IntentEval {
    IntentEval base = eval(IntentType::kStageOnCounter);
    if (!base.feasible) return base;
    auto counters = empty_counters(ctx, state);
    Cell anchor;
    if (p.handoff_style == 0) {
      auto pots = layout.cells_of(TileKind::kPot);
      if (pots.empty()) return base;
      anchor = pots.front();
    } else if (p.handoff_style == 1) {
      long sx = 0, sy = 0, n = 0;
      for (int y = 0; y < layout.height; ++y)
        for (int x = 0; x < layout.width; ++x)
          if (layout.is_floor({x, y})) sx += x, sy += y, ++n;
      anchor = {int(sx / std::max(1L, n)), int(sy / std::max(1L, n))};
    } else {
      anchor = state.agents[1 - ctx.agent].position;
    }
    IntentEval out = base;
    int best = INT32_MAX;
    for (Cell c : counters) {
      const int da = std::abs(c.x - anchor.x) + std::abs(c.y - anchor.y);
      if (da < best) {
        best = da;
        out.target = c;
        out.dist = ctx.nav.approach_distance(layout, a.position, c);
      }
    }
    return out;
  };

  if (role == 0) {  // ingredient runner
    for (IntentType i : {IntentType::kAddIngredient,
                         IntentType::kFetchIngredient,
                         IntentType::kStartCooking, IntentType::kPressL}) {
      if (auto e = eval(i); e.feasible) return run(e);
    }
    if (auto e = stage_eval(); e.feasible) return run(e);
    return Action::kStay;
  }

  // plater / deliverer
  if (auto e = eval(IntentType::kDeliver); e.feasible) return run(e);
  if (auto e = eval(IntentType::kPickupCooked); e.feasible) return run(e);
  if (auto e = eval(IntentType::kGetPlate); e.feasible) {
    // Early plate fetching (pot merely cooking) is gated by plate_urgency.
    if (pot_cooked || rng.uniform() < p.plate_urgency) return run(e);
  }
  if (auto e = eval(IntentType::kPressL); e.feasible) return run(e);
  // Idle-time ingredient support, gated so dedicated platers mostly wait.
  if (rng.uniform() < std::max(p.prestage_bias, p.start_cook_bias)) {
    for (IntentType i : {IntentType::kAddIngredient,
                         IntentType::kFetchIngredient,
                         IntentType::kStartCooking}) {
      if (auto e = eval(i); e.feasible) return run(e);
    }
  }
  if (auto e = stage_eval(); e.feasible) return run(e);
  return Action::kStay;
}

ScriptedTeammate::ScriptedTeammate(TeammateSpec spec, const LayoutSpec& layout,
                                   int agent)
    : spec_(std::move(spec)),
      ctx_(make_teammate_context(layout, agent)),
      rng_(Rng(spec_.seed).sub("policy")) {}

void ScriptedTeammate::begin_episode(uint64_t episode_idx) {
  mem_ = PolicyMemory{};
  rng_ = Rng(spec_.seed).sub("policy").sub(episode_idx);
}

Action ScriptedTeammate::act(const GameState& state) {
  return std::visit(
      [&](const auto& p) -> Action {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, H1Params>)
          return act_h1(ctx_, state, p, mem_, rng_);
        else if constexpr (std::is_same_v<T, H2Params>)
          return act_h2(ctx_, state, p, mem_, rng_);
        else if constexpr (std::is_same_v<T, H3Params>)
          return act_h3(ctx_, state, p, mem_, rng_);
        else
          return act_h4(ctx_, state, p, mem_, rng_);
      },
      spec_.params);
}

}  // namespace aht
