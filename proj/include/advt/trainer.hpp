// Stochastic gradient ascent over a corpus: one prompt per step, constant step
// size, deterministic given the seed. Prompt choice and answer sampling use
// separate streams split from the master seed.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "advt/estimator.hpp"
#include "advt/policy.hpp"
#include "advt/schedule.hpp"

namespace advt {

enum class TrainMode { algorithm1, rejection_to_b };

struct TrainerConfig {
  TrainMode mode = TrainMode::algorithm1;
  AdvantageSchedule schedule;       // algorithm1 mode
  int rejection_b = 1;              // rejection mode
  int max_attempts = 10000;
  double step_size = 0.1;           // eta > 0
  int steps = 1;
  std::uint64_t seed = 0;
  int log_every = 1;
  ObjectiveFn log_objective;        // objective column; empty value() -> identity
};

struct TrajectoryRecord {
  int step = 0;                     // 1-based
  std::string prompt_id;
  double p_correct_before = 0.0;
  double objective = 0.0;           // corpus objective before the update; nan at a pole
  double grad_norm = 0.0;
  bool skipped = false;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
};

/// splitmix64; stream splitting for reproducible substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Runs cfg.steps updates in place. Throws std::invalid_argument on config
/// errors (empty corpus, steps < 1, eta <= 0, empty correct set in rejection
/// mode) and std::runtime_error naming the step if a parameter goes
/// non-finite (step size too large).
Trajectory train(TabularPolicy& pol, const Corpus& corpus, const TrainerConfig& cfg);

/// Max entry-wise deviation between the enumerated expected update and
/// exact_grad_objective under the induced transform (algorithm1 mode).
double expected_update_check(const TabularPolicy& pol, const Corpus& corpus,
                             const TrainerConfig& cfg, std::uint64_t budget = 10'000'000);

/// CSV: step,prompt_id,p_correct,objective,grad_norm,skipped
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

}  // namespace advt
