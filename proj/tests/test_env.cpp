#include <map>

#include "aht/env.hpp"
#include "aht/layout.hpp"
#include "doctest.h"

using namespace aht;

namespace {

// Tiny single-ingredient fixture kitchen used by the reward tests.
const char* kFixtureGrid =
    "#0P#S#L##\n"
    "#a.b....#\n"
    "#########\n";

LayoutSpec fixture_layout(bool button = true) {
  LayoutMeta meta;
  meta.name = "fixture";
  meta.n_ingredients = 1;
  meta.recipes = {{3}};
  std::string grid = kFixtureGrid;
  if (!button) grid[6] = 'R';
  return parse_layout(grid, meta);
}

GameState fixture_state(const LayoutSpec& layout) {
  EnvConfig cfg;
  Rng rng(7);
  GameState s = reset(layout, cfg, rng);
  s.agents[0].position = {1, 1};
  s.agents[1].position = {3, 1};
  return s;
}

}  // namespace

TEST_CASE("observation channel counts match the published table") {
  const std::map<std::string, int> expected = {
      {"coord_simple", 40}, {"coord_ring", 40},   {"test_simple", 41},
      {"test_wide", 46},    {"demo_simple", 40},  {"demo_wide", 45},
      {"asymm_both", 35},   {"asymm_right", 35},  {"cramped_up", 35},
      {"cramped_down", 35},
  };
  REQUIRE(builtin_layout_names().size() == expected.size());
  for (const auto& [name, channels] : expected) {
    const LayoutSpec& layout = builtin_layout(name);
    CHECK_MESSAGE(layout.obs_channels() == channels, name);
    GameState s;
    EnvConfig cfg;
    Rng rng(1);
    s = reset(layout, cfg, rng);
    CHECK(observe(s, 0, layout).channels == channels);
  }
}

TEST_CASE("recipe encoding round-trips every 3-ingredient combination") {
  int combos = 0;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      for (int c = 0; c <= 3; ++c) {
        if (a + b + c != 3) continue;
        ++combos;
        Recipe r = encode_recipe({a, b, c});
        CHECK(decode_recipe(r, 3) == std::vector<int>{a, b, c});
        CHECK(!r.cooked());
        CHECK(!r.plated());
      }
  CHECK(combos == 10);  // C(5,2) weak compositions of 3 into 3 parts
  CHECK_THROWS_AS(encode_recipe({1, 1, 0}), EnvError);
  CHECK_THROWS_AS(encode_recipe({4, 0, 0}), EnvError);
}

TEST_CASE("layout parsing validates input") {
  LayoutMeta meta;
  meta.n_ingredients = 1;
  meta.recipes = {{3}};
  CHECK_THROWS_AS(parse_layout("###\n##\n", meta), EnvError);
  CHECK_THROWS_AS(parse_layout("###\n#x#\n###\n", meta), EnvError);
  CHECK_THROWS_AS(parse_layout("###\n#5#\n###\n", meta), EnvError);   // n=1
  CHECK_THROWS_AS(parse_layout("###\n#.#\n###\n", meta), EnvError);   // no a/b
  CHECK_THROWS_AS(parse_layout(".##\n#ab\n###\n", meta), EnvError);   // border
}

TEST_CASE("reset is deterministic and respects start regions") {
  const LayoutSpec& layout = builtin_layout("coord_ring");
  EnvConfig cfg;
  for (uint64_t seed : {1ull, 2ull, 99ull}) {
    Rng r1(seed), r2(seed);
    GameState a = reset(layout, cfg, r1);
    GameState b = reset(layout, cfg, r2);
    CHECK(a == b);
    for (int i = 0; i < 2; ++i) {
      const auto& region = layout.start_regions[i];
      CHECK(std::count(region.begin(), region.end(), a.agents[i].position) == 1);
    }
    CHECK(std::count(layout.recipe_pool.begin(), layout.recipe_pool.end(),
                     a.target_recipe) == 1);
  }
}

TEST_CASE("collision resolution reverts conflicts and prevents swaps") {
  const std::array<Cell, 2> cur{Cell{1, 1}, Cell{3, 1}};
  // Swap attempt reverts both.
  CHECK(resolve_collisions({Cell{1, 1}, Cell{2, 1}},
                           {Cell{2, 1}, Cell{1, 1}}) ==
        std::array<Cell, 2>{Cell{1, 1}, Cell{2, 1}});
  // Same destination: both movers revert.
  CHECK(resolve_collisions(cur, {Cell{2, 1}, Cell{2, 1}}) == cur);
  // One mover, one stayer on the contested cell: mover reverts.
  CHECK(resolve_collisions(cur, {Cell{3, 1}, Cell{3, 1}}) == cur);
  // Follow move: agent 0 steps into the cell agent 1 vacates.
  CHECK(resolve_collisions({Cell{2, 1}, Cell{3, 1}},
                           {Cell{3, 1}, Cell{4, 1}}) ==
        std::array<Cell, 2>{Cell{3, 1}, Cell{4, 1}});
  // Mover into the stayer's cell while the stayer also targets it.
  CHECK(resolve_collisions(cur, {Cell{1, 1}, Cell{1, 1}}) ==
        std::array<Cell, 2>{Cell{1, 1}, Cell{3, 1}});
}

TEST_CASE("movement turns the agent even when blocked") {
  LayoutSpec layout = fixture_layout();
  GameState s = fixture_state(layout);
  Rng rng(3);
  auto out = step(layout, s, {Action::kUp, Action::kStay}, rng);  // wall above
  CHECK(out.next_state.agents[0].position == Cell{1, 1});
  CHECK(out.next_state.agents[0].direction == Direction::kUp);
}

TEST_CASE("full cook-and-serve cycle with exact reward values") {
  LayoutSpec layout = fixture_layout();
  GameState s = fixture_state(layout);
  s.target_recipe = layout.recipe_pool[0];
  Rng rng(3);

  auto interact = [&](int agent) {
    JointAction ja;
    (agent == 0 ? ja.a0 : ja.a1) = Action::kInteract;
    auto out = step(layout, s, ja, rng);
    s = out.next_state;
    return out;
  };

  // Agent 0 at (1,1) facing the dispenser (1,0) fills the pot at (2,0) from
  // (2,1), three times; the fourth add is rejected (pot is cooking/full).
  for (int i = 0; i < 3; ++i) {
    s.agents[0].position = {1, 1};
    s.agents[0].direction = Direction::kUp;
    auto grab = interact(0);
    CHECK(grab.reward_shaped == doctest::Approx(kShapedIngredientPickup));
    REQUIRE(s.agents[0].inventory.has_value());
    s.agents[0].position = {2, 1};
    s.agents[0].direction = Direction::kUp;
    auto add = interact(0);
    CHECK(add.reward_shaped == doctest::Approx(kShapedPlaceInPot));
    CHECK(!s.agents[0].inventory.has_value());
  }
  const Cell pot{2, 0};
  CHECK(s.pots.at(pot).cooking);
  CHECK(s.pots.at(pot).cooking_timer == kCookTime);

  s.agents[0].position = {1, 1};
  s.agents[0].direction = Direction::kUp;
  s.agents[0].inventory = Item::make_ingredient(0);
  auto rejected = interact(0);
  CHECK(s.agents[0].inventory.has_value());  // cooking pot accepts nothing
  CHECK(rejected.reward_shaped == 0.0);
  s.agents[0].inventory.reset();

  // Exactly 20 elapsed steps from the start of cooking.
  while (!s.pots.at(pot).cooked) {
    auto out = step(layout, s, {Action::kStay, Action::kStay}, rng);
    s = out.next_state;
  }
  CHECK(s.t == 6 + kCookTime);  // 6 fill steps above, then the countdown

  // Plate the soup and deliver it: +20, flash, dish consumed.
  s.agents[0].position = {2, 1};
  s.agents[0].direction = Direction::kUp;
  s.agents[0].inventory = Item::make_plate();
  auto pickup = interact(0);
  CHECK(pickup.reward_shaped == doctest::Approx(kShapedDishPickup));
  REQUIRE(s.agents[0].inventory.has_value());
  CHECK(s.agents[0].inventory->kind == ItemKind::kDish);
  CHECK(s.agents[0].inventory->dish.cooked());
  CHECK(s.agents[0].inventory->dish.plated());
  CHECK(s.pots.at(pot).total() == 0);

  s.agents[0].position = {4, 1};
  s.agents[0].direction = Direction::kUp;  // serving at (4,0)
  auto deliver = interact(0);
  CHECK(deliver.reward_sparse == kRewardDeliver);
  CHECK(s.delivery_flash);
  CHECK(!s.agents[0].inventory.has_value());

  // Wrong-contents dish: −20, also consumed.
  Recipe wrong = encode_recipe({2}, false);
  wrong.set_cooked(true);
  wrong.set_plated(true);
  s.agents[0].inventory = Item::make_dish(wrong);
  auto bad = interact(0);
  CHECK(bad.reward_sparse == kRewardWrongDeliver);
  CHECK(!s.agents[0].inventory.has_value());
}

TEST_CASE("button press costs 5 and reveals the recipe for 10 steps") {
  LayoutSpec layout = fixture_layout();
  GameState s = fixture_state(layout);
  Rng rng(3);
  CHECK(!s.recipe_visible(layout));

  s.agents[0].position = {6, 1};
  s.agents[0].direction = Direction::kUp;  // button at (6,0)
  auto out = step(layout, s, {Action::kInteract, Action::kStay}, rng);
  CHECK(out.reward_sparse == kRewardButton);
  s = out.next_state;
  int visible_steps = 0;
  while (s.recipe_visible(layout)) {
    ++visible_steps;
    s = step(layout, s, {Action::kStay, Action::kStay}, rng).next_state;
  }
  CHECK(visible_steps == kButtonVisibleSteps);

  // A static indicator keeps the recipe permanently visible.
  LayoutSpec static_layout = fixture_layout(/*button=*/false);
  GameState s2 = fixture_state(static_layout);
  CHECK(s2.recipe_visible(static_layout));
}

TEST_CASE("counters hold one item and give it back") {
  LayoutSpec layout = fixture_layout();
  GameState s = fixture_state(layout);
  Rng rng(3);
  s.agents[0].position = {1, 1};
  s.agents[0].direction = Direction::kLeft;  // counter at (0,1)
  s.agents[0].inventory = Item::make_plate();
  s = step(layout, s, {Action::kInteract, Action::kStay}, rng).next_state;
  CHECK(!s.agents[0].inventory.has_value());
  CHECK(s.counters.at(Cell{0, 1}) == Item::make_plate());
  s = step(layout, s, {Action::kInteract, Action::kStay}, rng).next_state;
  CHECK(s.agents[0].inventory == Item::make_plate());
  CHECK(s.counters.empty());
}

TEST_CASE("observation tensor places features at hand-computed offsets") {
  LayoutSpec layout = fixture_layout();
  GameState s = fixture_state(layout);
  s.target_recipe = layout.recipe_pool[0];
  const int n = layout.n_ingredients;
  const int per_agent = 7 + n;  // position + 4 directions + plate/cooked/ings
  const int off_static = 2 * per_agent;
  const int off_disp = off_static + 6;
  const int off_dyn = off_disp + n;
  const int off_recipe = off_dyn + 2 + n;
  const int off_timer = off_recipe + 2 + n;

  s.agents[0].direction = Direction::kRight;
  s.agents[0].inventory = Item::make_ingredient(0);
  s.pots.at({2, 0}).counts[0] = 2;
  s.pots.at({2, 0}).cooking = true;
  s.pots.at({2, 0}).cooking_timer = 13;

  Observation obs = observe(s, 0, layout);  // centered on (1,1)
  CHECK(obs.channels == 25 + 5 * n);
  // Observer at the window center, facing right, holding one ingredient.
  CHECK(obs.at(2, 2, 0) == 1.0f);
  CHECK(obs.at(2, 2, 1 + int(Direction::kRight)) == 1.0f);
  CHECK(obs.at(2, 2, 5 + 2 + 0) == 1.0f);
  // Teammate at (3,1) = window (2,4), in the second per-agent block.
  CHECK(obs.at(2, 4, per_agent + 0) == 1.0f);
  // Pot tile (2,0) = window (1,3): static channel, contents, timer.
  CHECK(obs.at(1, 3, off_static + 2) == 1.0f);
  CHECK(obs.at(1, 3, off_dyn + 2 + 0) == 2.0f);
  CHECK(obs.at(1, 3, off_timer) == 13.0f);
  // Dispenser (1,0) = window (1,2).
  CHECK(obs.at(1, 2, off_disp + 0) == 1.0f);
  // Recipe hidden without a button press; cells outside the grid stay zero.
  CHECK(obs.at(1, 2, off_recipe + 2) == 0.0f);
  for (int c = 0; c < obs.channels; ++c) CHECK(obs.at(0, 0, c) == 0.0f);

  // After a button press the recipe counts appear at the indicator cell.
  s.button_visible_timer = 4;
  s.agents[0].position = {5, 1};  // button (6,0) = window (1,3)
  Observation obs2 = observe(s, 0, layout);
  CHECK(obs2.at(1, 3, off_recipe + 2) == 3.0f);
}

TEST_CASE("shaping coefficient anneals linearly to zero") {
  CHECK(shaping_coefficient(0, 100) == 1.0);
  CHECK(shaping_coefficient(50, 100) == 0.5);
  CHECK(shaping_coefficient(100, 100) == 0.0);
  CHECK(shaping_coefficient(500, 100) == 0.0);
}

TEST_CASE("episodes terminate at the configured horizon") {
  LayoutSpec layout = fixture_layout();
  EnvConfig cfg;
  cfg.horizon = 5;
  Rng rng(11);
  GameState s = reset(layout, cfg, rng);
  bool done = false;
  for (int t = 0; t < 5; ++t) {
    auto out = step(layout, s, {Action::kStay, Action::kStay}, rng);
    s = out.next_state;
    done = out.done;
    CHECK(done == (t == 4));
  }
  CHECK(done);
  CHECK_THROWS_AS(step(layout, s, {Action::kStay, Action::kStay}, rng),
                  EnvError);
}
