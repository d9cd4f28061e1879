#include "advt/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "advt/transform.hpp"

namespace advt {

namespace {

bool is_correct(const PromptTask& task, int y) {
  return std::binary_search(task.correct.begin(), task.correct.end(), y);
}

// Adds w * grad log pi(y|x) into the row for x without allocating.
void add_scaled_grad_log_prob(std::vector<double>& row, const std::vector<double>& probs,
                              int y, double w) {
  for (size_t v = 0; v < probs.size(); ++v) row[v] -= w * probs[v];
  row[static_cast<size_t>(y)] += w;
}

}  // namespace

double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

int sample_index(const std::vector<double>& probs, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double cum = 0.0;
  for (size_t i = 0; i + 1 < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

GroupSample sample_group(const TabularPolicy& pol, const PromptTask& task, int m,
                         std::mt19937_64& rng) {
  if (m < 1) throw std::invalid_argument("sample_group: M must be >= 1");
  GroupSample group;
  group.prompt_index = pol.row_of(task.id);
  const auto probs = pol.probs(group.prompt_index);
  group.answers.resize(static_cast<size_t>(m));
  group.rewards.resize(static_cast<size_t>(m));
  group.loo_totals.resize(static_cast<size_t>(m));
  int total = 0;
  for (int i = 0; i < m; ++i) {
    const int y = sample_index(probs, rng);
    group.answers[static_cast<size_t>(i)] = y;
    group.rewards[static_cast<size_t>(i)] = is_correct(task, y) ? 1 : 0;
    total += group.rewards[static_cast<size_t>(i)];
  }
  for (int i = 0; i < m; ++i) {
    group.loo_totals[static_cast<size_t>(i)] = total - group.rewards[static_cast<size_t>(i)];
  }
  return group;
}

GradientEstimate algorithm1_estimate(const TabularPolicy& pol, const PromptTask& task,
                                     const AdvantageSchedule& sched, std::mt19937_64& rng) {
  const GroupSample group = sample_group(pol, task, sched.group_size, rng);
  const int x = group.prompt_index;
  const auto probs = pol.probs(x);
  const int m = sched.group_size;

  GradientEstimate est;
  est.grad = zero_gradient(pol);
  est.schedule_label = sched.label;
  est.group_size = m;
  est.prompt_id = task.id;

  auto& row = est.grad[static_cast<size_t>(x)];
  for (int i = 0; i < m; ++i) {
    const double z = advantage(sched, group.rewards[static_cast<size_t>(i)] != 0,
                               group.loo_totals[static_cast<size_t>(i)]);
    est.num_correct += group.rewards[static_cast<size_t>(i)];
    if (z != 0.0) add_scaled_grad_log_prob(row, probs, group.answers[static_cast<size_t>(i)], z);
  }
  for (double& v : row) v /= m;
  return est;
}

Gradient exact_expectation_oracle(const TabularPolicy& pol, const PromptTask& task,
                                  const AdvantageSchedule& sched) {
  const InducedTransform tr = induced(sched);
  const double kappa = eval_kappa(tr, p_correct(pol, task));
  Gradient g = grad_p_correct(pol, task);
  for (auto& row : g) {
    for (double& v : row) v *= kappa;
  }
  return g;
}

Gradient tuple_enumeration_oracle(const TabularPolicy& pol, const PromptTask& task,
                                  const AdvantageSchedule& sched, std::uint64_t budget) {
  const int x = pol.row_of(task.id);
  const int v = pol.vocab_size(x);
  const int m = sched.group_size;

  std::uint64_t tuples = 1;
  for (int i = 0; i < m; ++i) {
    if (tuples > budget / static_cast<std::uint64_t>(v)) {
      throw std::length_error("tuple_enumeration_oracle: V^M = " + std::to_string(v) + "^" +
                              std::to_string(m) + " exceeds budget " + std::to_string(budget));
    }
    tuples *= static_cast<std::uint64_t>(v);
  }

  const auto probs = pol.probs(x);
  std::vector<uint8_t> correct(static_cast<size_t>(v), 0);
  for (int y : task.correct) correct[static_cast<size_t>(y)] = 1;

  Gradient acc = zero_gradient(pol);
  auto& acc_row = acc[static_cast<size_t>(x)];
  std::vector<int> tuple(static_cast<size_t>(m), 0);

  for (std::uint64_t n = 0; n < tuples; ++n) {
    double joint = 1.0;
    int total = 0;
    for (int i = 0; i < m; ++i) {
      joint *= probs[static_cast<size_t>(tuple[static_cast<size_t>(i)])];
      total += correct[static_cast<size_t>(tuple[static_cast<size_t>(i)])];
    }
    // (1/M) sum_i Z_i grad log pi(y_i|x), weighted by the tuple probability.
    double z_sum = 0.0;
    for (int i = 0; i < m; ++i) {
      const int r = correct[static_cast<size_t>(tuple[static_cast<size_t>(i)])];
      const double z = advantage(sched, r != 0, total - r);
      z_sum += z;
      acc_row[static_cast<size_t>(tuple[static_cast<size_t>(i)])] += joint * z / m;
    }
    const double drift = joint * z_sum / m;
    for (size_t y = 0; y < probs.size(); ++y) acc_row[y] -= drift * probs[y];

    for (int i = 0; i < m; ++i) {
      if (++tuple[static_cast<size_t>(i)] < v) break;
      tuple[static_cast<size_t>(i)] = 0;
    }
  }
  return acc;
}

RejectionOutcome rejection_to_b_estimate(const TabularPolicy& pol, const PromptTask& task,
                                         int b, int max_attempts, std::mt19937_64& rng) {
  if (b < 1) throw std::invalid_argument("rejection_to_b_estimate: B must be >= 1");
  if (max_attempts < b) {
    throw std::invalid_argument("rejection_to_b_estimate: max_attempts must be >= B");
  }
  RejectionOutcome outcome;
  if (task.correct.empty()) return outcome;  // success impossible

  const int x = pol.row_of(task.id);
  const auto probs = pol.probs(x);
  std::vector<int> collected;
  collected.reserve(static_cast<size_t>(b));
  while (outcome.attempts < max_attempts && static_cast<int>(collected.size()) < b) {
    const int y = sample_index(probs, rng);
    ++outcome.attempts;
    if (is_correct(task, y)) collected.push_back(y);
  }
  if (static_cast<int>(collected.size()) < b) return outcome;

  GradientEstimate est;
  est.grad = zero_gradient(pol);
  est.schedule_label = "rejection_to_b";
  est.group_size = b;
  est.prompt_id = task.id;
  est.num_correct = b;
  auto& row = est.grad[static_cast<size_t>(x)];
  for (int y : collected) add_scaled_grad_log_prob(row, probs, y, 1.0);
  for (double& v : row) v /= b;
  outcome.estimate = std::move(est);
  return outcome;
}

Gradient conditional_expectation_oracle(const TabularPolicy& pol, const PromptTask& task) {
  const double p = p_correct(pol, task);
  if (p == 0.0) {
    throw std::domain_error("conditional_expectation_oracle: p_correct = 0 for task " +
                            task.id);
  }
  const int x = pol.row_of(task.id);
  const auto probs = pol.probs(x);
  Gradient g = zero_gradient(pol);
  auto& row = g[static_cast<size_t>(x)];
  for (int y : task.correct) {
    add_scaled_grad_log_prob(row, probs, y, probs[static_cast<size_t>(y)] / p);
  }
  return g;
}

}  // namespace advt
