#include "advt/transform.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "advt/specfun.hpp"
#include "advt/textio.hpp"

namespace advt {

namespace {

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

void require_unit_interval(double t, const char* who) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::domain_error(std::string(who) + ": t outside [0,1]");
  }
}

}  // namespace

InducedTransform induced(const AdvantageSchedule& sched) {
  InducedTransform tr;
  tr.group_size = sched.group_size;
  tr.label = sched.label;
  tr.phi.resize(static_cast<size_t>(sched.group_size));
  for (int s = 0; s < sched.group_size; ++s) {
    tr.phi[s] = sched.b[static_cast<size_t>(s)] - sched.a[static_cast<size_t>(s)];
  }
  return tr;
}

double eval_h(const InducedTransform& tr, double t) {
  require_unit_interval(t, "eval_h");
  const int m = tr.group_size;
  KahanSum acc;
  for (int s = 0; s < m; ++s) {
    acc.add(tr.phi[static_cast<size_t>(s)] * specfun::reg_inc_beta_int(s + 1, m - s, t));
  }
  return acc.sum / m;
}

double eval_h_single_pass(const InducedTransform& tr, double t) {
  require_unit_interval(t, "eval_h_single_pass");
  const int m = tr.group_size;
  const auto pmf = specfun::binom_pmf_row(m, t);
  // survival(s) = sum_{j>s} pmf[j], built from the top so each I_t shares the
  // same row.
  KahanSum survival;
  KahanSum acc;
  for (int s = m - 1; s >= 0; --s) {
    survival.add(pmf[static_cast<size_t>(s) + 1]);
    acc.add(tr.phi[static_cast<size_t>(s)] * survival.sum);
  }
  return acc.sum / m;
}

double eval_kappa(const InducedTransform& tr, double t) {
  require_unit_interval(t, "eval_kappa");
  const int m = tr.group_size;
  const auto pmf = specfun::binom_pmf_row(m - 1, t);
  KahanSum acc;
  for (int s = 0; s < m; ++s) {
    acc.add(tr.phi[static_cast<size_t>(s)] * pmf[static_cast<size_t>(s)]);
  }
  return acc.sum;
}

double eval_h_at_one(const InducedTransform& tr) {
  KahanSum acc;
  for (double p : tr.phi) acc.add(p);
  return acc.sum / tr.group_size;
}

double normalized_h(const InducedTransform& tr, double t) {
  const double h1 = eval_h_at_one(tr);
  if (h1 == 0.0) {
    throw std::domain_error("normalized_h: degenerate schedule, h(1) = 0");
  }
  return eval_h(tr, t) / h1;
}

double rejection_closed_form(int m, double t) {
  if (m < 1) throw std::domain_error("rejection_closed_form: M must be >= 1");
  if (!(t > 0.0 && t <= 1.0)) {
    throw std::domain_error("rejection_closed_form: t must be in (0,1]");
  }
  const double u = 1.0 - t;
  KahanSum acc;
  double power = 1.0;
  for (int r = 1; r <= m; ++r) {
    power *= u;
    acc.add(power / r);
  }
  return specfun::harmonic(m) - acc.sum;
}

double log_remainder_tail(int m, double t) {
  if (m < 1) throw std::domain_error("log_remainder_tail: M must be >= 1");
  if (!(t > 0.0 && t <= 1.0)) {
    throw std::domain_error("log_remainder_tail: t must be in (0,1]");
  }
  const double u = 1.0 - t;
  double term = std::pow(u, m + 1) / (m + 1);
  KahanSum acc;
  for (int r = m + 1; term > 0.0; ++r) {
    acc.add(term);
    if (term < acc.sum * 1e-18) break;
    term *= u * double(r) / double(r + 1);
  }
  return acc.sum;
}

SweepTable sweep(const InducedTransform& tr, std::span<const double> grid,
                 std::optional<double> eps) {
  const double h1 = eval_h_at_one(tr);
  if (h1 == 0.0) {
    throw std::domain_error("sweep: degenerate schedule, h(1) = 0");
  }
  SweepTable table;
  table.label = tr.label;
  table.group_size = tr.group_size;
  table.eps = eps;
  table.rows.reserve(grid.size());
  for (double t : grid) {
    SweepRow row;
    row.t = t;
    row.h = eval_h_single_pass(tr, t);
    row.kappa = eval_kappa(tr, t);
    row.h_normalized = row.h / h1;
    table.rows.push_back(row);
  }
  return table;
}

std::vector<double> uniform_grid(int n) {
  if (n < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
  std::vector<double> grid(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<size_t>(i)] = double(i) / double(n - 1);
  return grid;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepTable> tables) {
  os << "label,M,eps,t,h,kappa,h_normalized\n";
  for (const auto& table : tables) {
    for (const auto& row : table.rows) {
      os << table.label << ',';
      if (table.group_size) os << *table.group_size;
      os << ',';
      if (table.eps) os << fmt17(*table.eps);
      os << ',' << fmt17(row.t) << ',' << fmt17(row.h) << ',' << fmt17(row.kappa) << ','
         << fmt17(row.h_normalized) << "\n";
    }
  }
}

}  // namespace advt
