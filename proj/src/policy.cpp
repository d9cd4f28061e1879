#include "advt/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <stdexcept>

#include "advt/textio.hpp"
#include "toml_lite.hpp"

namespace advt {

namespace {

void validate_task(const PromptTask& task) {
  if (task.id.empty()) throw std::invalid_argument("task: empty id");
  if (task.vocab_size < 1) {
    throw std::invalid_argument("task " + task.id + ": vocab_size must be >= 1");
  }
  for (int y : task.correct) {
    if (y < 0 || y >= task.vocab_size) {
      throw std::invalid_argument("task " + task.id + ": correct index " +
                                  std::to_string(y) + " outside vocabulary");
    }
  }
  if (!std::is_sorted(task.correct.begin(), task.correct.end()) ||
      std::adjacent_find(task.correct.begin(), task.correct.end()) != task.correct.end()) {
    throw std::invalid_argument("task " + task.id + ": correct set must be sorted and unique");
  }
}

void validate_corpus(const Corpus& corpus) {
  if (corpus.tasks.empty()) throw std::invalid_argument("corpus: no tasks");
  if (corpus.weights.size() != corpus.tasks.size()) {
    throw std::invalid_argument("corpus: weights/tasks length mismatch");
  }
  double total = 0.0;
  for (double w : corpus.weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("corpus: negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("corpus: weights must have positive sum");
  for (const auto& task : corpus.tasks) validate_task(task);
}

}  // namespace

Corpus make_corpus(std::vector<PromptTask> tasks) {
  Corpus corpus;
  corpus.weights.assign(tasks.size(), 1.0);
  corpus.tasks = std::move(tasks);
  validate_corpus(corpus);
  return corpus;
}

Corpus load_corpus_toml(std::istream& is) {
  const auto doc = toml_lite::parse(is);
  auto it = doc.table_arrays.find("task");
  if (it == doc.table_arrays.end() || it->second.empty()) {
    throw std::invalid_argument("corpus: no [[task]] entries");
  }
  Corpus corpus;
  for (const auto& table : it->second) {
    PromptTask task;
    for (const auto& [key, value] : table) {
      if (key == "id") {
        if (value.kind != toml_lite::Value::Kind::string) {
          throw std::invalid_argument("corpus: id must be a string");
        }
        task.id = value.str;
      } else if (key == "vocab_size") {
        if (value.kind != toml_lite::Value::Kind::integer) {
          throw std::invalid_argument("corpus: vocab_size must be an integer");
        }
        task.vocab_size = static_cast<int>(value.int_v);
      } else if (key == "correct") {
        if (value.kind != toml_lite::Value::Kind::array) {
          throw std::invalid_argument("corpus: correct must be an array");
        }
        for (const auto& item : value.array) {
          if (item.kind != toml_lite::Value::Kind::integer) {
            throw std::invalid_argument("corpus: correct entries must be integers");
          }
          task.correct.push_back(static_cast<int>(item.int_v));
        }
      } else if (key == "weight") {
        // handled in the second pass
      } else {
        throw std::invalid_argument("corpus: unknown key '" + key + "' in [[task]]");
      }
    }
    std::sort(task.correct.begin(), task.correct.end());
    task.correct.erase(std::unique(task.correct.begin(), task.correct.end()),
                       task.correct.end());
    corpus.tasks.push_back(std::move(task));
  }
  // Second pass for weights so defaults stay uniform.
  corpus.weights.assign(corpus.tasks.size(), 1.0);
  size_t i = 0;
  for (const auto& table : it->second) {
    auto w = table.find("weight");
    if (w != table.end()) corpus.weights[i] = w->second.as_number();
    ++i;
  }
  validate_corpus(corpus);
  return corpus;
}

Corpus load_corpus_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("corpus: cannot open " + path);
  return load_corpus_toml(in);
}

TabularPolicy::TabularPolicy(const Corpus& corpus) {
  validate_corpus(corpus);
  logits_.reserve(corpus.tasks.size());
  for (const auto& task : corpus.tasks) {
    logits_.emplace_back(static_cast<size_t>(task.vocab_size), 0.0);
    ids_.push_back(task.id);
    if (!index_.emplace(task.id, static_cast<int>(ids_.size()) - 1).second) {
      throw std::invalid_argument("policy: duplicate prompt id " + task.id);
    }
  }
}

TabularPolicy::TabularPolicy(const Corpus& corpus, std::vector<std::vector<double>> logits)
    : TabularPolicy(corpus) {
  if (logits.size() != logits_.size()) {
    throw std::invalid_argument("policy: logits row count does not match corpus");
  }
  for (size_t x = 0; x < logits.size(); ++x) {
    if (logits[x].size() != logits_[x].size()) {
      throw std::invalid_argument("policy: logits row " + std::to_string(x) +
                                  " does not match vocab size");
    }
    for (double v : logits[x]) {
      if (!std::isfinite(v)) throw std::invalid_argument("policy: non-finite logit");
    }
  }
  logits_ = std::move(logits);
}

void TabularPolicy::check_row(int x) const {
  if (x < 0 || x >= num_prompts()) {
    throw std::out_of_range("policy: prompt index " + std::to_string(x));
  }
}

int TabularPolicy::vocab_size(int x) const {
  check_row(x);
  return static_cast<int>(logits_[static_cast<size_t>(x)].size());
}

const std::string& TabularPolicy::prompt_id(int x) const {
  check_row(x);
  return ids_[static_cast<size_t>(x)];
}

int TabularPolicy::row_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("policy: unknown prompt id " + id);
  return it->second;
}

const std::vector<double>& TabularPolicy::row(int x) const {
  check_row(x);
  return logits_[static_cast<size_t>(x)];
}

std::vector<double>& TabularPolicy::mutable_row(int x) {
  check_row(x);
  return logits_[static_cast<size_t>(x)];
}

std::vector<double> TabularPolicy::probs(int x) const {
  check_row(x);
  const auto& row = logits_[static_cast<size_t>(x)];
  double max_logit = row[0];
  for (double v : row) max_logit = std::max(max_logit, v);
  std::vector<double> p(row.size());
  double z = 0.0;
  for (size_t y = 0; y < row.size(); ++y) {
    p[y] = std::exp(row[y] - max_logit);
    z += p[y];
  }
  for (double& v : p) v /= z;
  return p;
}

void TabularPolicy::write_checkpoint_csv(std::ostream& os) const {
  os << "prompt_id,answer_index,logit\n";
  for (int x = 0; x < num_prompts(); ++x) {
    for (size_t y = 0; y < logits_[static_cast<size_t>(x)].size(); ++y) {
      os << ids_[static_cast<size_t>(x)] << ',' << y << ','
         << fmt17(logits_[static_cast<size_t>(x)][y]) << "\n";
    }
  }
}

Gradient zero_gradient(const TabularPolicy& pol) {
  Gradient g(static_cast<size_t>(pol.num_prompts()));
  for (int x = 0; x < pol.num_prompts(); ++x) {
    g[static_cast<size_t>(x)].assign(static_cast<size_t>(pol.vocab_size(x)), 0.0);
  }
  return g;
}

double gradient_norm(const Gradient& g) {
  double sq = 0.0;
  for (const auto& row : g) {
    for (double v : row) sq += v * v;
  }
  return std::sqrt(sq);
}

double gradient_dot(const Gradient& a, const Gradient& b) {
  double dot = 0.0;
  for (size_t x = 0; x < a.size(); ++x) {
    for (size_t y = 0; y < a[x].size(); ++y) dot += a[x][y] * b[x][y];
  }
  return dot;
}

double gradient_max_abs_diff(const Gradient& a, const Gradient& b) {
  double worst = 0.0;
  for (size_t x = 0; x < a.size(); ++x) {
    for (size_t y = 0; y < a[x].size(); ++y) {
      worst = std::max(worst, std::abs(a[x][y] - b[x][y]));
    }
  }
  return worst;
}

double p_correct(const TabularPolicy& pol, const PromptTask& task) {
  const int x = pol.row_of(task.id);
  if (task.vocab_size != pol.vocab_size(x)) {
    throw std::invalid_argument("p_correct: task vocabulary does not match policy row");
  }
  const auto p = pol.probs(x);
  double total = 0.0;
  for (int y : task.correct) total += p[static_cast<size_t>(y)];
  return total;
}

Gradient grad_log_prob(const TabularPolicy& pol, int x, int y) {
  if (y < 0 || y >= pol.vocab_size(x)) {
    throw std::out_of_range("grad_log_prob: answer index outside vocabulary");
  }
  Gradient g = zero_gradient(pol);
  const auto p = pol.probs(x);
  auto& row = g[static_cast<size_t>(x)];
  for (size_t v = 0; v < p.size(); ++v) row[v] = -p[v];
  row[static_cast<size_t>(y)] += 1.0;
  return g;
}

Gradient grad_p_correct(const TabularPolicy& pol, const PromptTask& task) {
  const int x = pol.row_of(task.id);
  Gradient g = zero_gradient(pol);
  const auto p = pol.probs(x);
  double pc = 0.0;
  for (int y : task.correct) pc += p[static_cast<size_t>(y)];
  auto& row = g[static_cast<size_t>(x)];
  for (size_t v = 0; v < p.size(); ++v) row[v] = -p[v] * pc;
  for (int y : task.correct) row[static_cast<size_t>(y)] += p[static_cast<size_t>(y)];
  return g;
}

ObjectiveFn ref_objective(specfun::RefTransform kind) {
  ObjectiveFn fn;
  fn.label = specfun::ref_name(kind);
  fn.value = [kind](double t) { return specfun::ref_eval(kind, t); };
  fn.slope = [kind](double t) { return specfun::ref_deriv(kind, t); };
  return fn;
}

ObjectiveFn induced_objective(InducedTransform tr) {
  ObjectiveFn fn;
  fn.label = "induced:" + tr.label;
  auto shared = std::make_shared<InducedTransform>(std::move(tr));
  fn.value = [shared](double t) { return eval_h(*shared, t); };
  fn.slope = [shared](double t) { return eval_kappa(*shared, t); };
  return fn;
}

double exact_objective(const TabularPolicy& pol, const Corpus& corpus, const ObjectiveFn& h) {
  double total_weight = 0.0;
  double acc = 0.0;
  for (size_t i = 0; i < corpus.tasks.size(); ++i) {
    const double w = corpus.weights[i];
    if (w == 0.0) continue;
    const double p = p_correct(pol, corpus.tasks[i]);
    const double value = h.value(p);
    if (!std::isfinite(value)) {
      throw std::domain_error("exact_objective: h undefined at p = " + fmt17(p) +
                              " for task " + corpus.tasks[i].id);
    }
    acc += w * value;
    total_weight += w;
  }
  return acc / total_weight;
}

Gradient exact_grad_objective(const TabularPolicy& pol, const Corpus& corpus,
                              const ObjectiveFn& h) {
  double total_weight = 0.0;
  for (double w : corpus.weights) total_weight += w;
  Gradient g = zero_gradient(pol);
  for (size_t i = 0; i < corpus.tasks.size(); ++i) {
    const double w = corpus.weights[i];
    if (w == 0.0) continue;
    const double p = p_correct(pol, corpus.tasks[i]);
    const double slope = h.slope(p);
    if (!std::isfinite(slope)) {
      throw std::domain_error("exact_grad_objective: h' undefined at p = " + fmt17(p) +
                              " for task " + corpus.tasks[i].id);
    }
    const Gradient gp = grad_p_correct(pol, corpus.tasks[i]);
    const double scale = w / total_weight * slope;
    for (size_t x = 0; x < g.size(); ++x) {
      for (size_t y = 0; y < g[x].size(); ++y) g[x][y] += scale * gp[x][y];
    }
  }
  return g;
}

double finite_diff_check(const TabularPolicy& pol, const Corpus& corpus, const ObjectiveFn& h,
                         double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_diff_check: step must be > 0");
  const Gradient exact = exact_grad_objective(pol, corpus, h);
  TabularPolicy probe = pol;
  double worst = 0.0;
  for (int x = 0; x < pol.num_prompts(); ++x) {
    for (int y = 0; y < pol.vocab_size(x); ++y) {
      auto& row = probe.mutable_row(x);
      const double saved = row[static_cast<size_t>(y)];
      row[static_cast<size_t>(y)] = saved + step;
      const double up = exact_objective(probe, corpus, h);
      row[static_cast<size_t>(y)] = saved - step;
      const double down = exact_objective(probe, corpus, h);
      row[static_cast<size_t>(y)] = saved;
      const double fd = (up - down) / (2.0 * step);
      const double g = exact[static_cast<size_t>(x)][static_cast<size_t>(y)];
      worst = std::max(worst, std::abs(fd - g) / std::max(1.0, std::abs(g)));
    }
  }
  return worst;
}

}  // namespace advt
