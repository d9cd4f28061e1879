// Stochastic gradient estimators for group sampling and rejection-until-B,
// plus the exact-expectation oracles that verify them against each other.
// All randomness flows through an explicit engine; oracles are pure.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "advt/policy.hpp"
#include "advt/schedule.hpp"

namespace advt {

struct GroupSample {
  int prompt_index = 0;
  std::vector<int> answers;        // y_1..y_M
  std::vector<uint8_t> rewards;    // R_i = 1 iff y_i in the correct set
  std::vector<int> loo_totals;     // S_i = sum_j R_j - R_i
};

struct GradientEstimate {
  Gradient grad;
  std::string schedule_label;
  int group_size = 0;
  std::string prompt_id;
  int num_correct = 0;
};

/// Uniform double in [0,1) from the top 53 bits of the engine; keeps sampling
/// independent of library distribution internals.
double uniform01(std::mt19937_64& rng);

/// Inverse-CDF draw from a probability vector.
int sample_index(const std::vector<double>& probs, std::mt19937_64& rng);

/// M i.i.d. answers from pi(.|x) with rewards and leave-one-out totals.
GroupSample sample_group(const TabularPolicy& pol, const PromptTask& task, int m,
                         std::mt19937_64& rng);

/// One draw of the group update (1/M) sum_i Z_i grad log pi(y_i|x).
GradientEstimate algorithm1_estimate(const TabularPolicy& pol, const PromptTask& task,
                                     const AdvantageSchedule& sched, std::mt19937_64& rng);

/// Closed form of its expectation: kappa(p) * grad_p_correct.
Gradient exact_expectation_oracle(const TabularPolicy& pol, const PromptTask& task,
                                  const AdvantageSchedule& sched);

/// Brute force over all V^M answer tuples, weighted by joint probability; no
/// appeal to the binomial identity. Throws std::length_error with the required
/// budget when V^M exceeds it.
Gradient tuple_enumeration_oracle(const TabularPolicy& pol, const PromptTask& task,
                                  const AdvantageSchedule& sched,
                                  std::uint64_t budget = 10'000'000);

struct RejectionOutcome {
  std::optional<GradientEstimate> estimate;  // empty means the step was skipped
  int attempts = 0;
  bool skipped() const { return !estimate.has_value(); }
};

/// Samples until B correct draws are collected (multiset), then returns
/// (1/B) sum grad log pi over them; skips after max_attempts draws or
/// immediately when the correct set is empty.
RejectionOutcome rejection_to_b_estimate(const TabularPolicy& pol, const PromptTask& task,
                                         int b, int max_attempts, std::mt19937_64& rng);

/// sum_{y in C} (pi(y|x)/p) grad log pi(y|x) = grad p / p, the gradient of
/// log p_correct. Throws std::domain_error when p_correct = 0.
Gradient conditional_expectation_oracle(const TabularPolicy& pol, const PromptTask& task);

}  // namespace advt
