#pragma once

#include <optional>
#include <string>
#include <variant>

#include "aht/env.hpp"
#include "aht/nav.hpp"

namespace aht {

// Micro-goals shared by the scripted families. Order fixes argmax tie-breaks.
enum class IntentType : int {
  kDeliver = 0,
  kPickupCooked = 1,
  kGetPlate = 2,
  kAddIngredient = 3,
  kFetchIngredient = 4,
  kStageOnCounter = 5,
  kStartCooking = 6,
  kPressL = 7,
};
inline constexpr int kNumIntents = 8;

// Parameter records. Field names and ranges follow the published tables; the
// H4 defaults are the published defaults.
struct H1Params {
  double press_L_when_unknown = 0.5;
  double refresh_interval = 100;  // steps before the known recipe goes stale
  double strict_recipe = 1.0;
  double plate_timing = 0.5;
  double dist_weight = 0.5;
  double inertia = 0.3;
  double idle_prob = 0.0;
  double wrong_ingredient_prob = 0.0;
};

struct H2Params {
  int split_mode = 0;      // 0 vertical, 1 horizontal, 2 functional
  double strictness = 0.5;
  double shared_margin = 0.0;
  double rescue_threshold = 0.5;
  double yield_bias = 0.0;
  int behavior_mode = 0;   // 0 normal, 1 blocker, 2 loose, 3 lazy,
                           // 4 invader, 5 hoarder
  double action_probability = 1.0;
};

struct H3Params {
  int role_mode = 0;       // 0 runner, 1 plater, 2 flexible
  int handoff_style = 0;   // 0 pot-adjacent, 1 central, 2 teammate-nearby
  double plate_urgency = 0.5;
  double prestage_bias = 0.5;
  double start_cook_bias = 0.5;
  double hesitation_prob = 0.0;
  double wrong_action_prob = 0.0;
  double task_abandon_prob = 0.0;
};

struct H4Params {
  double w_deliver = 10.0;
  double w_pickup_cooked = 8.0;
  double w_get_plate = 5.0;
  double w_add_ingredient = 6.0;
  double w_fetch_ingredient = 4.0;
  double w_stage_on_counter = 2.0;
  double w_start_cooking = 7.0;
  double w_press_L = 3.0;
  double dist_weight = 0.5;
  double inertia = 0.3;
};

using FamilyParams = std::variant<H1Params, H2Params, H3Params, H4Params>;

struct TeammateSpec {
  std::string family;  // "H1".."H4"
  std::string kind;    // variant label, e.g. "train-000"
  FamilyParams params;
  uint64_t seed = 0;   // first 8 bytes (little-endian) of SHA256(spec_string)
  std::string spec_string;
  std::string split = "train";
};

uint64_t seed_from_spec_string(const std::string& spec_string);

// Deterministically samples a spec; designated dimensions are drawn from
// disjoint train/test subranges, everything else from its table range.
TeammateSpec sample_params(const std::string& family, const std::string& split,
                           const std::string& spec_string);

std::string teammate_spec_to_json(const TeammateSpec& spec);
TeammateSpec teammate_spec_from_json(const std::string& json_text);

struct PolicyMemory {
  std::optional<Recipe> known_recipe;
  int recipe_age = 0;  // steps since the indicator was last seen active
  std::optional<IntentType> current_intent;
  std::optional<Cell> prev_target;
  // Partner-activity tracking: a pot that grew while this agent was not the
  // one facing it was filled by the partner.
  std::map<Cell, int> prev_pot_totals;
  int partner_add_age = 1000;  // steps since the partner last filled a pot
};

// Per-(layout, agent) immutable context shared by all families.
struct TeammateContext {
  const LayoutSpec* layout = nullptr;
  NavTables nav;
  Cell choke{};
  int agent = 1;
};

TeammateContext make_teammate_context(const LayoutSpec& layout, int agent);

// Recipe belief update: the indicator, when active, is readable from anywhere
// (scripted teammates are privileged oracles); a correct delivery invalidates
// the belief because the target recipe resamples.
void update_memory(const TeammateContext& ctx, const GameState& state,
                   PolicyMemory& mem);

double score_intent(IntentType intent, const TeammateContext& ctx,
                    const GameState& state, const H4Params& p,
                    const PolicyMemory& mem);

Action act_h1(const TeammateContext& ctx, const GameState& state,
              const H1Params& p, PolicyMemory& mem, Rng& rng);
Action act_h2(const TeammateContext& ctx, const GameState& state,
              const H2Params& p, PolicyMemory& mem, Rng& rng);
Action act_h3(const TeammateContext& ctx, const GameState& state,
              const H3Params& p, PolicyMemory& mem, Rng& rng);
// suppress_mask: bit i disables intent i for this step (used by cooperative
// wrappers to avoid duplicating a partner's current task).
Action act_h4(const TeammateContext& ctx, const GameState& state,
              const H4Params& p, PolicyMemory& mem, Rng& rng,
              int suppress_mask = 0);

// Bundles spec + context + memory + rng; memory is episodic, the rng stream
// is derived from (spec seed, episode index) so replays are reproducible.
class ScriptedTeammate {
 public:
  ScriptedTeammate(TeammateSpec spec, const LayoutSpec& layout, int agent = 1);

  void begin_episode(uint64_t episode_idx);
  Action act(const GameState& state);

  const TeammateSpec& spec() const { return spec_; }
  const TeammateContext& context() const { return ctx_; }
  PolicyMemory& memory() { return mem_; }

 private:
  TeammateSpec spec_;
  TeammateContext ctx_;
  PolicyMemory mem_;
  Rng rng_;
};

}  // namespace aht
