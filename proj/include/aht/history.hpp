#pragma once

#include <functional>
#include <vector>

#include "aht/env.hpp"
#include "aht/teammates.hpp"

namespace aht {

// One stream's learning history: flat time-major tensors with per-episode
// boundaries implied by `dones`. Observations are stored flattened
// (T, 5, 5, C) row-major.
struct LearningHistory {
  int channels = 0;
  std::vector<float> obs;
  std::vector<int32_t> actions;
  std::vector<double> rewards;           // sparse returns only
  std::vector<uint8_t> dones;
  std::vector<int32_t> teammate_actions;
  std::vector<int32_t> expert_actions;   // empty until relabeled

  int64_t T() const { return int64_t(actions.size()); }
  int obs_stride() const { return 5 * 5 * channels; }
  bool has_expert() const { return !expert_actions.empty(); }

  friend bool operator==(const LearningHistory&, const LearningHistory&) =
      default;
};

// Reconstructs the dense observation at timestep t.
Observation observation_at(const LearningHistory& h, int64_t t);

// Per-episode sparse returns, split on the recorded done flags.
std::vector<double> episode_returns(const LearningHistory& h);

struct CollectorConfig {
  int num_streams = 1024;
  int recorded_steps_per_episode = 100;  // prefix of each episode kept
  int episodes_per_stream = 146;
  int save_interval = 20;                // episodes between incremental flushes
};

// Linear random-to-expert mixing schedule over a stream.
struct AnnealSchedule {
  int total_episodes = 146;
  double epsilon(int episode) const {
    if (total_episodes <= 1) return 0.0;
    const double e = 1.0 - double(episode) / double(total_episodes - 1);
    return e < 0.0 ? 0.0 : (e > 1.0 ? 1.0 : e);
  }
};

// Ego policy interface used during collection. Generation-side egos are
// scripted oracles and may read the full state (like the teammates); only
// evaluated policies are restricted to observations.
class EgoPolicy {
 public:
  virtual ~EgoPolicy() = default;
  virtual void begin_episode(uint64_t episode_idx) = 0;
  virtual Action act(const GameState& state, const Observation& obs) = 0;
};

class RandomEgo : public EgoPolicy {
 public:
  explicit RandomEgo(uint64_t seed) : base_(seed), rng_(seed) {}
  void begin_episode(uint64_t episode_idx) override {
    rng_ = base_.sub("ep").sub(episode_idx);
  }
  Action act(const GameState&, const Observation&) override {
    return Action(int(rng_.uniform_int(kNumActions)));
  }

 private:
  Rng base_;
  Rng rng_;
};

// Default-parameter greedy utility controller for the ego seat. Two identical
// deterministic controllers can livelock head-to-head (each blocks the other's
// shortest path forever), so when a movement attempt left the position
// unchanged — only possible through agent conflict, since navigation respects
// walls — the controller takes one deterministic perpendicular detour step.
class H4EgoController {
 public:
  explicit H4EgoController(const LayoutSpec& layout, int agent = 0);
  void reset();
  // Picks the next action and records it for blocked-move detection.
  Action act(const GameState& state, Rng& rng);
  // Updates beliefs without acting (an external action was taken instead).
  void observe(const GameState& state);

 private:
  Action prefill_action(const GameState& state);

  TeammateContext ctx_;
  H4Params params_;  // defaults
  PolicyMemory mem_;
  std::vector<int> base_;  // per-ingredient floor shared by the recipe pool
  std::optional<Cell> prev_pos_;
  std::optional<Direction> prev_dir_;
  std::optional<Cell> fill_target_;  // sticky station choice for prefill
  std::optional<Cell> prev_other_;   // partner cell on the previous step
};

// Acts via H4EgoController with probability 1 - eps(ep) and uniformly at
// random otherwise; eps decays linearly across the stream, so per-episode
// returns trend from random-level to expert-level.
class AnnealedExpertEgo : public EgoPolicy {
 public:
  AnnealedExpertEgo(const LayoutSpec& layout, AnnealSchedule schedule,
                    uint64_t seed);
  void begin_episode(uint64_t episode_idx) override;
  Action act(const GameState& state, const Observation& obs) override;

 private:
  H4EgoController expert_;
  AnnealSchedule schedule_;
  Rng base_;
  Rng rng_;
  double eps_ = 1.0;
};

// Invoked with the partial history after every `save_interval` episodes and
// once more at the end; `episodes_done` counts completed episodes.
using FlushCallback =
    std::function<void(const LearningHistory&, int episodes_done)>;

// Rolls one stream against a fixed teammate, recording the first
// `recorded_steps_per_episode` steps of each episode (the recorded prefix is
// self-contained: nothing after it can influence later episodes, so the
// simulation stops at the prefix). The recorded done flag marks prefix ends.
LearningHistory rollout_stream(const LayoutSpec& layout,
                               const TeammateSpec& teammate, EgoPolicy& ego,
                               const CollectorConfig& cfg, Rng rng,
                               const FlushCallback& flush = nullptr);

// score = mean(last w) + (mean(last w) - mean(first w)),
// w = min(N, max(5, floor(0.1 N))).
double quality_score(const std::vector<double>& returns);

// Indices of the k best streams by quality score, descending; ties broken by
// ascending stream index. Throws EnvError on k <= 0 or k > streams.
std::vector<size_t> filter_streams(
    const std::vector<std::vector<double>>& per_stream_returns, size_t k);

// Deterministic expert used for relabeling; receives the stored observation
// and its timestep.
using ExpertFn = std::function<Action(const Observation& obs, int64_t t)>;

// expert_actions[t] = expert(obs[t], t); all other fields unchanged.
void relabel_expert(LearningHistory& h, const ExpertFn& expert);

// Deterministic greedy expert over the 5x5 egocentric observation alone (no
// privileged state): priority-ordered target selection from the visible
// channels, greedy approach movement. Used as the default relabeling expert.
class ObservationGreedyExpert {
 public:
  explicit ObservationGreedyExpert(const LayoutSpec& layout);
  Action act(const Observation& obs) const;

 private:
  int n_ = 0;
};

}  // namespace aht
