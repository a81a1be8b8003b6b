#include "aht/history.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

namespace aht {

Observation observation_at(const LearningHistory& h, int64_t t) {
  if (t < 0 || t >= h.T()) throw EnvError("observation_at: t out of range");
  Observation o;
  o.channels = h.channels;
  std::memcpy(o.data.data(), h.obs.data() + t * h.obs_stride(),
              sizeof(float) * h.obs_stride());
  return o;
}

std::vector<double> episode_returns(const LearningHistory& h) {
  std::vector<double> out;
  double acc = 0;
  for (int64_t t = 0; t < h.T(); ++t) {
    acc += h.rewards[t];
    if (h.dones[t]) {
      out.push_back(acc);
      acc = 0;
    }
  }
  if (h.T() > 0 && !h.dones.back()) out.push_back(acc);
  return out;
}

namespace {

// Next move toward `goal` (a station tile) along a shortest path that treats
// the partner's cell as a wall. Plain shortest-path movement livelocks when
// the partner camps on an equidistant route: the blocked step keeps being
// retried forever. Returns nothing when already beside the goal (orientation
// and interaction are the caller's business) or when no avoiding path exists.
std::optional<Action> route_avoiding(const LayoutSpec& layout, Cell from,
                                     Cell goal, Cell avoid) {
  const int w = layout.width;
  std::vector<int> dist(size_t(w * layout.height), -1);
  std::vector<Cell> queue;
  for (int d = 0; d < 4; ++d) {
    const Cell c = goal + offset(Direction(d));
    if (layout.is_floor(c) && !(c == avoid)) {
      dist[size_t(c.y * w + c.x)] = 0;
      queue.push_back(c);
    }
  }
  for (size_t head = 0; head < queue.size(); ++head) {
    const Cell c = queue[head];
    for (int d = 0; d < 4; ++d) {
      const Cell n = c + offset(Direction(d));
      if (!layout.is_floor(n) || n == avoid) continue;
      int& e = dist[size_t(n.y * w + n.x)];
      if (e >= 0) continue;
      e = dist[size_t(c.y * w + c.x)] + 1;
      queue.push_back(n);
    }
  }
  const int here = dist[size_t(from.y * w + from.x)];
  if (here <= 0) return std::nullopt;
  for (int d = 0; d < 4; ++d) {
    const Cell n = from + offset(Direction(d));
    if (layout.is_floor(n) && !(n == avoid) &&
        dist[size_t(n.y * w + n.x)] == here - 1)
      return Action(d);
  }
  return std::nullopt;
}

}  // namespace

H4EgoController::H4EgoController(const LayoutSpec& layout, int agent)
    : ctx_(make_teammate_context(layout, agent)) {
  // Elementwise minimum over the recipe pool: ingredients every possible
  // order needs. A pot filled to this base can always be completed once the
  // next order is revealed, so prefilling it never wastes a pot.
  base_.assign(size_t(layout.n_ingredients),
               std::numeric_limits<int>::max());
  for (const Recipe& r : layout.recipe_pool)
    for (int i = 0; i < layout.n_ingredients; ++i)
      base_[size_t(i)] = std::min(base_[size_t(i)], r.count(i));
}

// Ingredient work for the ego: stock-keeping across the recipe pool. Orders
// resample uniformly on every delivery, so the winning inventory policy with
// several pots is one finished soup per pool recipe — whatever is ordered
// next, a matching pot is usually already cooked or cooking. Each open pot is
// assigned a target recipe that keeps the pool covered and is filled toward
// it; the order-specific garnish goes in early, which also makes the pot
// incompatible with the current order so a greedy partner leaves it alone.
Action H4EgoController::prefill_action(const GameState& state) {
  const LayoutSpec& layout = *ctx_.layout;
  const AgentState& me = state.agents[size_t(ctx_.agent)];
  const auto& known = mem_.known_recipe;
  const auto& pool = layout.recipe_pool;

  bool any_active = false;
  for (const auto& [cell, pot] : state.pots) {
    (void)cell;
    any_active |= pot.cooking || pot.cooked;
  }
  const Cell partner = state.agents[size_t(1 - ctx_.agent)].position;
  const bool partner_camped = prev_other_ && *prev_other_ == partner;
  // A station whose every approach cell is under a parked partner cannot be
  // worked: steering at it just produces a standoff in the corridor.
  auto blocked_by_partner = [&](Cell c) {
    if (!partner_camped) return false;
    bool any_free = false;
    for (int d = 0; d < 4; ++d) {
      const Cell n = c + offset(Direction(d));
      if (layout.is_floor(n) && !(n == partner)) any_free = true;
    }
    return !any_free;
  };
  // Nearest reachable candidate, penalizing ones the partner would reach
  // first — racing it to the same station just produces a standoff.
  auto nearest = [&](const std::vector<Cell>& cands) -> std::optional<Cell> {
    std::optional<Cell> best;
    int best_d = kUnreachable;
    for (Cell c : cands) {
      if (blocked_by_partner(c)) continue;
      int d = ctx_.nav.approach_distance(layout, me.position, c);
      if (d == kUnreachable) continue;
      const int dp = ctx_.nav.approach_distance(layout, partner, c);
      if (dp != kUnreachable && dp < d) d += 4;
      if (!best || d < best_d) {
        best = c;
        best_d = d;
      }
    }
    return best;
  };
  // Sticky choice: keep steering to the previously chosen station while it is
  // still a valid candidate, so shifting distances don't cause dithering.
  // Hysteresis: abandon the sticky target when another candidate has become
  // clearly closer — hauling an ingredient past a pot that wants it is worse
  // than one target switch.
  auto choose = [&](const std::vector<Cell>& cands) -> std::optional<Cell> {
    if (fill_target_ && !blocked_by_partner(*fill_target_) &&
        std::find(cands.begin(), cands.end(), *fill_target_) != cands.end()) {
      const int keep =
          ctx_.nav.approach_distance(layout, me.position, *fill_target_);
      const auto best = nearest(cands);
      if (best && keep != kUnreachable &&
          keep <= ctx_.nav.approach_distance(layout, me.position, *best) + 3)
        return fill_target_;
    }
    fill_target_ = nearest(cands);
    return fill_target_;
  };

  auto fits = [&](const PotState& pot, const Recipe& r) {
    for (int j = 0; j < layout.n_ingredients; ++j)
      if (int(pot.counts[size_t(j)]) > r.count(j)) return false;
    return true;
  };
  // Pool coverage from soups already locked in (cooking or cooked), and the
  // open pots still up for assignment, in a stable cell order.
  std::vector<int> locked(pool.size(), 0);
  std::vector<std::pair<Cell, const PotState*>> open;
  for (const auto& [cell, pot] : state.pots) {
    if (pot.cooking || pot.cooked) {
      for (size_t r = 0; r < pool.size(); ++r)
        if (fits(pot, pool[r])) ++locked[r];
    } else {
      // Junk pots (contents fit no pool recipe) are unassignable; the
      // teammate's flush-and-clear recovery handles them.
      bool salvageable = false;
      for (const Recipe& r : pool) salvageable |= fits(pot, r);
      if (salvageable) open.emplace_back(cell, &pot);
    }
  }
  // Globally assign pool recipes to open pots (exhaustive: both counts are
  // tiny). Coverage of every pool recipe dominates; then prefer putting the
  // current order in the fuller pot and minimizing ingredients still to add.
  std::map<Cell, Recipe> target;
  {
    const size_t n_open = open.size();
    std::vector<size_t> pick(n_open, 0), best_pick;
    long best_score = std::numeric_limits<long>::min();
    for (;;) {
      long score = 0;
      std::vector<int> covered = locked;
      bool ok = true;
      for (size_t p = 0; p < n_open; ++p) {
        const Recipe& r = pool[pick[p]];
        if (!fits(*open[p].second, r)) {
          ok = false;
          break;
        }
        ++covered[pick[p]];
        if (known && r.same_contents(*known))
          score += 2 * open[p].second->total();
        for (int j = 0; j < layout.n_ingredients; ++j)
          score -= r.count(j) - int(open[p].second->counts[size_t(j)]);
      }
      if (ok) {
        for (int c : covered) score += c > 0 ? 100 : 0;
        if (score > best_score) {
          best_score = score;
          best_pick = pick;
        }
      }
      size_t p = 0;
      while (p < n_open && ++pick[p] == pool.size()) pick[p++] = 0;
      if (p == n_open) break;
    }
    for (size_t p = 0; p < best_pick.size(); ++p)
      target.emplace(open[p].first, pool[best_pick[p]]);
  }
  // Count the partner's carried ingredient as already delivered to the pot
  // it is best placed to fill: racing it there just duplicates the trip, and
  // the loser ends up shelving its copy.
  const Inventory& pinv = state.agents[size_t(1 - ctx_.agent)].inventory;
  std::optional<Cell> partner_fill;
  if (pinv && pinv->kind == ItemKind::kIngredient) {
    int best_d = 0;
    for (const auto& [cell, pot] : state.pots) {
      auto it = target.find(cell);
      if (it == target.end() ||
          int(pot.counts[size_t(pinv->ingredient)]) >=
              it->second.count(pinv->ingredient))
        continue;
      const int d = ctx_.nav.approach_distance(layout, partner, cell);
      if (d != kUnreachable && (!partner_fill || d < best_d)) {
        best_d = d;
        partner_fill = cell;
      }
    }
  }
  auto wants = [&](Cell cell, const PotState& pot, int i) {
    auto it = target.find(cell);
    if (it == target.end()) return false;
    int deficit = it->second.count(i) - int(pot.counts[size_t(i)]);
    if (partner_fill && *partner_fill == cell && i == pinv->ingredient)
      --deficit;
    return deficit > 0;
  };

  if (me.inventory) {
    if (me.inventory->kind != ItemKind::kIngredient) return Action::kStay;
    const int held = me.inventory->ingredient;
    std::vector<Cell> pots;
    std::vector<Cell> finishing;  // pots this ingredient fills to capacity
    for (const auto& [cell, pot] : state.pots) {
      if (!wants(cell, pot, held)) continue;
      pots.push_back(cell);
      int remaining = 0;
      for (int i = 0; i < layout.n_ingredients; ++i)
        remaining += target.at(cell).count(i) - int(pot.counts[size_t(i)]);
      if (remaining == 1) finishing.push_back(cell);
    }
    // Starting a cook dominates topping up another pot: the 20-step timer is
    // the bottleneck of every delivery, so a pot one ingredient short jumps
    // the queue.
    if (!finishing.empty()) pots = finishing;
    if (auto t = choose(pots))
      return ctx_.nav.approach_action(layout, me.position, me.direction, *t);
    fill_target_.reset();
    // A base ingredient will be wanted as soon as the active pot is served
    // and restarts; hold on to it so the refill is instant.
    if (base_[size_t(held)] > 0 && any_active) return Action::kStay;
    // Nothing wants it right now: shelve it instead of carrying it around.
    std::vector<Cell> shelves;
    for (Cell c : layout.cells_of(TileKind::kCounter))
      if (!state.counters.count(c)) shelves.push_back(c);
    if (auto t = choose(shelves))
      return ctx_.nav.approach_action(layout, me.position, me.direction, *t);
    fill_target_.reset();
    return Action::kStay;
  }

  std::vector<Cell> dispensers;
  for (const auto& [cell, pot] : state.pots) {
    auto it = target.find(cell);
    if (it == target.end()) continue;
    // Off-order pots get their distinguishing ingredient first: once it is
    // in, the pot no longer matches the current order and the partner's
    // greedy fill stops competing for it.
    std::optional<int> lock;
    if (known && !it->second.same_contents(*known) && fits(pot, *known)) {
      for (int i = 0; i < layout.n_ingredients; ++i)
        if (it->second.count(i) > known->count(i) &&
            int(pot.counts[size_t(i)]) < it->second.count(i))
          lock = i;
    }
    for (int i = 0; i < layout.n_ingredients; ++i) {
      if (lock && i != *lock) continue;
      if (!wants(cell, pot, i)) continue;
      for (Cell d : layout.cells_of(TileKind::kDispenser))
        if (layout.dispenser_at(d) == i) dispensers.push_back(d);
    }
  }
  if (auto t = choose(dispensers))
    return ctx_.nav.approach_action(layout, me.position, me.direction, *t);
  fill_target_.reset();
  return Action::kStay;
}

void H4EgoController::reset() {
  mem_ = PolicyMemory{};
  prev_pos_.reset();
  prev_dir_.reset();
  fill_target_.reset();
  prev_other_.reset();
}

void H4EgoController::observe(const GameState& state) {
  update_memory(ctx_, state, mem_);
  prev_pos_.reset();
  prev_dir_.reset();
  prev_other_ = state.agents[size_t(1 - ctx_.agent)].position;
}

Action H4EgoController::act(const GameState& state, Rng& rng) {
  update_memory(ctx_, state, mem_);
  const Cell pos = state.agents[size_t(ctx_.agent)].position;
  const Cell other = state.agents[size_t(1 - ctx_.agent)].position;

  const bool blocked = prev_pos_ && *prev_pos_ == pos;

  // Division of labor: when the partner already covers every soup in flight
  // (one plate or dish in play per active pot), stick to prep work instead
  // of racing for a redundant plate.
  int mask = 0;
  const Inventory& mine = state.agents[size_t(ctx_.agent)].inventory;
  const Inventory& theirs = state.agents[size_t(1 - ctx_.agent)].inventory;
  const auto on_service = [](const Inventory& inv) {
    return inv && (inv->kind == ItemKind::kPlate || inv->kind == ItemKind::kDish);
  };
  int n_active = 0;
  for (const auto& [cell, pot] : state.pots) {
    (void)cell;
    n_active += pot.cooking || pot.cooked ? 1 : 0;
  }
  const int n_service = int(on_service(mine)) + int(on_service(theirs));
  if (!on_service(mine) && on_service(theirs) && n_service >= n_active)
    mask = (1 << int(IntentType::kGetPlate)) |
           (1 << int(IntentType::kPickupCooked));

  // Ingredient work always goes through prefill_action below, which knows
  // which additions are safe across order resamples; the greedy fill is off.
  mask |= (1 << int(IntentType::kFetchIngredient)) |
          (1 << int(IntentType::kAddIngredient));



  // Don't race the partner to the indicator button: a doubled press doubles
  // the penalty. Yield the press when the partner stands clearly closer.
  if (!mem_.known_recipe) {
    int mine_d = kUnreachable, theirs_d = kUnreachable;
    for (Cell b : ctx_.layout->cells_of(TileKind::kIndicatorButton)) {
      const auto d = [&](Cell from) {
        return ctx_.nav.approach_distance(*ctx_.layout, from, b);
      };
      if (d(pos) != kUnreachable && (mine_d == kUnreachable || d(pos) < mine_d))
        mine_d = d(pos);
      if (d(other) != kUnreachable &&
          (theirs_d == kUnreachable || d(other) < theirs_d))
        theirs_d = d(other);
    }
    if (theirs_d != kUnreachable && mine_d != kUnreachable &&
        theirs_d + 2 <= mine_d)
      mask |= (1 << int(IntentType::kPressL));
  }

  // Holding a bare plate while a pot still has a long cook left wastes prep
  // time; stay on ingredients until the soup is nearly done.
  bool any_cooked = false, any_cooking = false;
  int min_timer = std::numeric_limits<int>::max();
  for (const auto& [cell, pot] : state.pots) {
    (void)cell;
    any_cooked |= pot.cooked;
    if (pot.cooking) {
      any_cooking = true;
      min_timer = std::min(min_timer, pot.cooking_timer);
    }
  }
  if (!any_cooked && any_cooking && min_timer > 14)
    mask |= (1 << int(IntentType::kGetPlate));

  Action a = Action::kStay;
  std::optional<Cell> goal;  // station the chosen action is heading for
  bool chosen = false;
  // A held ingredient is prefill business: act_h4 would only ever stage it.
  if (mine && mine->kind == ItemKind::kIngredient) {
    a = prefill_action(state);
    goal = fill_target_;
    chosen = true;
  }
  // Both agents holding plates: with a second soup in flight, cover the pot
  // the partner is not attending; otherwise the extra plate just crowds the
  // pot stands — shelve it and go back to prep work.
  if (!chosen && mine && mine->kind == ItemKind::kPlate && on_service(theirs) &&
      n_active >= 2) {
    std::optional<Cell> best;
    int best_d = -1;
    for (const auto& [cell, pot] : state.pots) {
      if (!(pot.cooking || pot.cooked)) continue;
      // Approaching ends in an interact, which plates the pot once cooked:
      // only cover pots that will actually satisfy the order. A mismatched
      // cooked pot is stock for a later order, not a pickup target.
      if (mem_.known_recipe) {
        bool match = true;
        for (int j = 0; j < ctx_.layout->n_ingredients; ++j)
          match &= int(pot.counts[size_t(j)]) == mem_.known_recipe->count(j);
        if (!match) continue;
      }
      const int d = ctx_.nav.approach_distance(*ctx_.layout, other, cell);
      if (d > best_d) {
        best_d = d;
        best = cell;
      }
    }
    if (best) {
      a = ctx_.nav.approach_action(*ctx_.layout, pos,
                                   state.agents[size_t(ctx_.agent)].direction,
                                   *best);
      goal = best;
      chosen = true;
    }
  }
  // Two plates in play for at most one soup: the second plate adds nothing —
  // shelve it and go back to prep work. (With two active soups the cover
  // branch above already claimed one pot instead.)
  bool redundant_plate =
      mine && mine->kind == ItemKind::kPlate && theirs &&
      theirs->kind == ItemKind::kPlate;
  // Exception: a soup is already out and this agent is the closer plate —
  // abandoning the pickup to shelve would strand the soup.
  if (redundant_plate) {
    for (const auto& [cell, pot] : state.pots) {
      if (!pot.cooked) continue;
      const int dm = ctx_.nav.approach_distance(*ctx_.layout, pos, cell);
      const int dt = ctx_.nav.approach_distance(*ctx_.layout, other, cell);
      if (dm != kUnreachable && (dt == kUnreachable || dm < dt))
        redundant_plate = false;
    }
  }
  if (!chosen && redundant_plate) {
    std::vector<Cell> shelves;
    for (Cell c : ctx_.layout->cells_of(TileKind::kCounter))
      if (!state.counters.count(c)) shelves.push_back(c);
    std::optional<Cell> best;
    int best_d = kUnreachable;
    for (Cell c : shelves) {
      const int d = ctx_.nav.approach_distance(*ctx_.layout, pos, c);
      if (d != kUnreachable && (!best || d < best_d)) {
        best = c;
        best_d = d;
      }
    }
    if (best) {
      a = ctx_.nav.approach_action(*ctx_.layout, pos,
                                   state.agents[size_t(ctx_.agent)].direction,
                                   *best);
      goal = best;
      chosen = true;
    }
  }
  // Holding a soup while the next order is still hidden: pre-position at the
  // pass so the delivery lands the moment the order is revealed. Interacting
  // blind risks a wrong delivery, so once in position just wait.
  if (!chosen && mine && mine->kind == ItemKind::kDish && !mem_.known_recipe) {
    std::optional<Cell> best;
    int best_d = kUnreachable;
    for (Cell c : ctx_.layout->cells_of(TileKind::kServing)) {
      const int d = ctx_.nav.approach_distance(*ctx_.layout, pos, c);
      if (d != kUnreachable && (!best || d < best_d)) {
        best = c;
        best_d = d;
      }
    }
    if (best) {
      a = ctx_.nav.approach_action(*ctx_.layout, pos,
                                   state.agents[size_t(ctx_.agent)].direction,
                                   *best);
      if (a == Action::kInteract) a = Action::kStay;
      goal = best;
      chosen = true;
    }
  }
  if (!chosen) {
    a = act_h4(ctx_, state, params_, mem_, rng, mask);
    if (a != Action::kStay) goal = mem_.prev_target;
  }

  if (a == Action::kStay) {
    a = prefill_action(state);
    if (a != Action::kStay) goal = fill_target_;
  }

  // Idle-yield: parking on a stand cell can wall the partner off from a
  // station indefinitely. With nothing to do and the partner close by, walk
  // away instead of standing still.
  if (a == Action::kStay) {
    const int d = std::abs(pos.x - other.x) + std::abs(pos.y - other.y);
    if (d <= 2) {
      int best_gain = 0;
      for (int dir = 0; dir < 4; ++dir) {
        const Cell dst = pos + offset(Direction(dir));
        if (!ctx_.layout->is_floor(dst) || dst == other) continue;
        const int nd = std::abs(dst.x - other.x) + std::abs(dst.y - other.y);
        if (nd - d > best_gain) {
          best_gain = nd - d;
          a = Action(dir);
        }
      }
    }
  }
  // Re-route moves around a stationary partner (one camping a station); the
  // default shortest path can retry the blocked step forever while an equally
  // short detour exists. A partner in transit is left to ordinary collision
  // resolution — walling a moving cell makes the reroute flap every step.
  const bool other_camped = prev_other_ && *prev_other_ == other;
  if (int(a) < 4 && goal && other_camped)
    if (auto r = route_avoiding(*ctx_.layout, pos, *goal, other)) a = *r;
  prev_other_ = other;

  const bool is_move = int(a) < 4;
  if (blocked && is_move && prev_dir_ && Direction(int(a)) == *prev_dir_) {
    // Same push failed last step: yield sideways once to break the standoff.
    a = Action::kStay;
    const bool vertical = *prev_dir_ == Direction::kUp ||
                          *prev_dir_ == Direction::kDown;
    const std::array<Direction, 2> side =
        vertical ? std::array{Direction::kLeft, Direction::kRight}
                 : std::array{Direction::kUp, Direction::kDown};
    for (Direction d : side) {
      const Cell dst = pos + offset(d);
      if (ctx_.layout->is_floor(dst) && !(dst == other)) {
        a = Action(int(d));
        break;
      }
    }
  }
  if (int(a) < 4) {
    prev_pos_ = pos;
    prev_dir_ = Direction(int(a));
  } else {
    prev_pos_.reset();
    prev_dir_.reset();
  }
  return a;
}

AnnealedExpertEgo::AnnealedExpertEgo(const LayoutSpec& layout,
                                     AnnealSchedule schedule, uint64_t seed)
    : expert_(layout, 0), schedule_(schedule), base_(seed), rng_(seed) {}

void AnnealedExpertEgo::begin_episode(uint64_t episode_idx) {
  expert_.reset();
  rng_ = base_.sub("ep").sub(episode_idx);
  eps_ = schedule_.epsilon(int(episode_idx));
}

Action AnnealedExpertEgo::act(const GameState& state, const Observation&) {
  if (rng_.uniform() < eps_) {
    expert_.observe(state);
    return Action(int(rng_.uniform_int(kNumActions)));
  }
  return expert_.act(state, rng_);
}

LearningHistory rollout_stream(const LayoutSpec& layout,
                               const TeammateSpec& teammate, EgoPolicy& ego,
                               const CollectorConfig& cfg, Rng rng,
                               const FlushCallback& flush) {
  if (cfg.recorded_steps_per_episode > layout.episode_length)
    throw EnvError("recorded prefix longer than the episode");
  LearningHistory h;
  h.channels = layout.obs_channels();
  const int stride = h.obs_stride();
  const int64_t total =
      int64_t(cfg.episodes_per_stream) * cfg.recorded_steps_per_episode;
  h.obs.reserve(size_t(total) * stride);
  h.actions.reserve(size_t(total));
  h.rewards.reserve(size_t(total));
  h.dones.reserve(size_t(total));
  h.teammate_actions.reserve(size_t(total));

  ScriptedTeammate tm(teammate, layout, 1);
  EnvConfig env_cfg;
  env_cfg.horizon = layout.episode_length;

  for (int ep = 0; ep < cfg.episodes_per_stream; ++ep) {
    Rng ep_rng = rng.sub("env").sub(uint64_t(ep));
    GameState s = reset(layout, env_cfg, ep_rng);
    tm.begin_episode(uint64_t(ep));
    ego.begin_episode(uint64_t(ep));
    for (int t = 0; t < cfg.recorded_steps_per_episode; ++t) {
      const Observation obs = observe(s, 0, layout);
      const Action a0 = ego.act(s, obs);
      const Action a1 = tm.act(s);
      const StepOutcome out = step(layout, s, {a0, a1}, ep_rng);
      h.obs.insert(h.obs.end(), obs.data.begin(), obs.data.begin() + stride);
      h.actions.push_back(int32_t(a0));
      h.teammate_actions.push_back(int32_t(a1));
      h.rewards.push_back(out.reward_sparse);
      h.dones.push_back(t + 1 == cfg.recorded_steps_per_episode ? 1 : 0);
      s = out.next_state;
    }
    if (flush && cfg.save_interval > 0 && (ep + 1) % cfg.save_interval == 0 &&
        ep + 1 < cfg.episodes_per_stream)
      flush(h, ep + 1);
  }
  if (flush) flush(h, cfg.episodes_per_stream);
  return h;
}

double quality_score(const std::vector<double>& returns) {
  const int64_t n = int64_t(returns.size());
  if (n < 1) throw EnvError("quality_score: empty return sequence");
  const int64_t w = std::min<int64_t>(n, std::max<int64_t>(5, n / 10));
  const double start =
      std::accumulate(returns.begin(), returns.begin() + w, 0.0) / double(w);
  const double end =
      std::accumulate(returns.end() - w, returns.end(), 0.0) / double(w);
  return end + (end - start);
}

std::vector<size_t> filter_streams(
    const std::vector<std::vector<double>>& per_stream_returns, size_t k) {
  if (k == 0 || k > per_stream_returns.size())
    throw EnvError("filter_streams: k out of range");
  std::vector<size_t> order(per_stream_returns.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<double> score(per_stream_returns.size());
  for (size_t i = 0; i < per_stream_returns.size(); ++i)
    score[i] = quality_score(per_stream_returns[i]);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  });
  order.resize(k);
  return order;
}

void relabel_expert(LearningHistory& h, const ExpertFn& expert) {
  h.expert_actions.resize(size_t(h.T()));
  for (int64_t t = 0; t < h.T(); ++t)
    h.expert_actions[size_t(t)] = int32_t(expert(observation_at(h, t), t));
}

ObservationGreedyExpert::ObservationGreedyExpert(const LayoutSpec& layout)
    : n_(layout.n_ingredients) {}

namespace {

// Greedy approach toward a window cell: interact when facing it from an
// adjacent cell, turn when adjacent, otherwise step along the longer axis.
Action move_toward(const Observation& obs, int wy, int wx) {
  const int dx = wx - 2;
  const int dy = wy - 2;
  const int dist = std::abs(dx) + std::abs(dy);
  Direction want;
  if (std::abs(dx) >= std::abs(dy) && dx != 0)
    want = dx > 0 ? Direction::kRight : Direction::kLeft;
  else if (dy != 0)
    want = dy > 0 ? Direction::kDown : Direction::kUp;
  else
    return Action::kStay;
  if (dist == 1) {
    // Direction one-hots for the observer sit in channels 1..4.
    Direction facing = Direction::kDown;
    for (int d = 0; d < 4; ++d)
      if (obs.at(2, 2, 1 + d) > 0.5f) facing = Direction(d);
    if (facing == want) return Action::kInteract;
  }
  return Action(int(want));
}

}  // namespace

Action ObservationGreedyExpert::act(const Observation& obs) const {
  const int n = n_;
  const int per_agent = 7 + n;
  const int off_static = 2 * per_agent;
  const int off_disp = off_static + 6;
  const int off_dyn = off_disp + n;
  const int off_recipe = off_dyn + 2 + n;
  const int off_timer = off_recipe + 2 + n;

  const bool held_plate = obs.at(2, 2, 5) > 0.5f;
  const bool held_cooked = obs.at(2, 2, 6) > 0.5f;
  int held_ings = 0;
  for (int i = 0; i < n; ++i) held_ings += int(obs.at(2, 2, 7 + i));

  // Nearest window cell satisfying pred, ties y-major.
  auto find = [&](auto&& pred) -> std::optional<std::pair<int, int>> {
    int best = 100, by = -1, bx = -1;
    for (int wy = 0; wy < 5; ++wy)
      for (int wx = 0; wx < 5; ++wx) {
        if (!pred(wy, wx)) continue;
        const int d = std::abs(wx - 2) + std::abs(wy - 2);
        if (d < best) {
          best = d;
          by = wy;
          bx = wx;
        }
      }
    if (by < 0) return std::nullopt;
    return std::make_pair(by, bx);
  };
  auto chan = [&](int c) {
    return [&, c](int wy, int wx) { return obs.at(wy, wx, c) > 0.5f; };
  };

  if (held_plate && held_cooked) {
    // Holding a plated dish: head for the serving window.
    if (auto t = find(chan(off_static + 1))) return move_toward(obs, t->first, t->second);
    return Action::kStay;
  }
  if (held_plate) {
    // Holding a bare plate: collect from a cooked (else cooking) pot.
    if (auto t = find(chan(off_dyn + 1))) return move_toward(obs, t->first, t->second);
    if (auto t = find([&](int wy, int wx) {
          return obs.at(wy, wx, off_timer) > 0.5f;
        }))
      return move_toward(obs, t->first, t->second);
    return Action::kStay;
  }
  if (held_ings > 0) {
    // Holding an ingredient: drop it in a fillable pot.
    if (auto t = find([&](int wy, int wx) {
          if (obs.at(wy, wx, off_static + 2) < 0.5f) return false;
          if (obs.at(wy, wx, off_dyn + 1) > 0.5f) return false;   // cooked
          if (obs.at(wy, wx, off_timer) > 0.5f) return false;     // cooking
          float total = 0;
          for (int i = 0; i < n; ++i) total += obs.at(wy, wx, off_dyn + 2 + i);
          return total < float(kPotCapacity);
        }))
      return move_toward(obs, t->first, t->second);
    return Action::kStay;
  }
  // Empty-handed: a ready pot calls for a plate.
  bool pot_ready = false;
  for (int wy = 0; wy < 5; ++wy)
    for (int wx = 0; wx < 5; ++wx)
      if (obs.at(wy, wx, off_dyn + 1) > 0.5f ||
          obs.at(wy, wx, off_timer) > 0.5f)
        pot_ready = true;
  if (pot_ready) {
    if (auto t = find(chan(off_static + 5))) return move_toward(obs, t->first, t->second);
    return Action::kStay;
  }
  // Otherwise fetch the most-needed visible recipe ingredient.
  int want_ing = -1;
  float want_count = 0;
  for (int i = 0; i < n; ++i)
    for (int wy = 0; wy < 5; ++wy)
      for (int wx = 0; wx < 5; ++wx)
        if (obs.at(wy, wx, off_recipe + 2 + i) > want_count) {
          want_count = obs.at(wy, wx, off_recipe + 2 + i);
          want_ing = i;
        }
  if (want_ing >= 0) {
    if (auto t = find(chan(off_disp + want_ing)))
      return move_toward(obs, t->first, t->second);
    return Action::kStay;
  }
  // Recipe unknown: press the indicator button if one is in view.
  if (auto t = find(chan(off_static + 4))) return move_toward(obs, t->first, t->second);
  if (auto t = find(chan(off_disp + 0))) return move_toward(obs, t->first, t->second);
  return Action::kStay;
}

}  // namespace aht
