// Tabular softmax policies over finite per-prompt answer vocabularies, with
// exact probabilities, gradients, rescaled objectives, and a finite-difference
// checker. One logit row per prompt; parameters are the raw logits.
#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "advt/specfun.hpp"
#include "advt/transform.hpp"

namespace advt {

struct PromptTask {
  std::string id;
  int vocab_size = 0;
  std::vector<int> correct;  // sorted, unique answer indices; may be empty
};

struct Corpus {
  std::vector<PromptTask> tasks;
  std::vector<double> weights;  // same length as tasks; nonnegative, positive sum
};

/// Uniform-weight corpus over the given tasks; validates every task.
Corpus make_corpus(std::vector<PromptTask> tasks);

/// Loads [[task]] entries with keys id, vocab_size, correct, optional weight.
Corpus load_corpus_toml(std::istream& is);
Corpus load_corpus_toml_file(const std::string& path);

/// Gradient with the same shape as the policy's logits.
using Gradient = std::vector<std::vector<double>>;

class TabularPolicy {
 public:
  TabularPolicy() = default;
  explicit TabularPolicy(const Corpus& corpus);  // all-zero logits (uniform policy)
  TabularPolicy(const Corpus& corpus, std::vector<std::vector<double>> logits);

  int num_prompts() const { return static_cast<int>(logits_.size()); }
  int vocab_size(int x) const;
  const std::string& prompt_id(int x) const;
  int row_of(const std::string& id) const;  // throws std::out_of_range

  const std::vector<double>& row(int x) const;
  std::vector<double>& mutable_row(int x);

  /// Max-subtracted softmax of row x; sums to 1 within 1e-12.
  std::vector<double> probs(int x) const;

  const std::vector<std::vector<double>>& logits() const { return logits_; }

  /// CSV rows "prompt_id,answer_index,logit" at 17 significant digits.
  void write_checkpoint_csv(std::ostream& os) const;

 private:
  void check_row(int x) const;
  std::vector<std::vector<double>> logits_;
  std::vector<std::string> ids_;
  std::map<std::string, int> index_;
};

Gradient zero_gradient(const TabularPolicy& pol);
double gradient_norm(const Gradient& g);
double gradient_dot(const Gradient& a, const Gradient& b);
double gradient_max_abs_diff(const Gradient& a, const Gradient& b);

/// sum_{y in C(x)} pi(y|x).
double p_correct(const TabularPolicy& pol, const PromptTask& task);

/// Exact softmax calculus: zero outside row x; indicator(y) - probs within it.
Gradient grad_log_prob(const TabularPolicy& pol, int x, int y);

/// sum_{y in C} pi(y|x) (indicator(y) - pi(.|x)) on row x.
Gradient grad_p_correct(const TabularPolicy& pol, const PromptTask& task);

/// A monotone rescaling h with its derivative, for objective evaluation.
struct ObjectiveFn {
  std::string label;
  std::function<double(double)> value;
  std::function<double(double)> slope;
};

ObjectiveFn ref_objective(specfun::RefTransform kind);
ObjectiveFn induced_objective(InducedTransform tr);

/// Weighted average over tasks of h(p_correct). Throws std::domain_error if h
/// is non-finite at some task's pass probability.
double exact_objective(const TabularPolicy& pol, const Corpus& corpus, const ObjectiveFn& h);

/// Weighted average of h'(p) * grad_p_correct.
Gradient exact_grad_objective(const TabularPolicy& pol, const Corpus& corpus,
                              const ObjectiveFn& h);

/// Central differences over every logit against exact_grad_objective; returns
/// the worst relative error with denominator max(1, |grad entry|).
double finite_diff_check(const TabularPolicy& pol, const Corpus& corpus, const ObjectiveFn& h,
                         double step = 1e-5);

}  // namespace advt
