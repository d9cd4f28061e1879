#include "advt/schedule.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "advt/specfun.hpp"
#include "advt/textio.hpp"

namespace advt {

namespace {

void require_group_size(int m) {
  if (m < 1) throw std::invalid_argument("schedule: group size M must be >= 1");
}

double fit_node(int m, int s) {
  return m == 1 ? 0.5 : double(s) / double(m - 1);
}

AdvantageSchedule from_phi(int m, const std::vector<double>& phi, BernsteinSplit split,
                           std::string label) {
  AdvantageSchedule sched;
  sched.group_size = m;
  sched.a.resize(static_cast<size_t>(m));
  sched.b.resize(static_cast<size_t>(m));
  sched.label = std::move(label);
  for (int s = 0; s < m; ++s) {
    // Only b - a enters the induced objective; the split moves estimator
    // variance around without changing the expectation.
    if (split == BernsteinSplit::plain) {
      sched.a[s] = 0.0;
      sched.b[s] = phi[s];
    } else {
      double qbar = fit_node(m, s);
      sched.a[s] = -phi[s] * qbar;
      sched.b[s] = phi[s] * (1.0 - qbar);
    }
  }
  return sched;
}

}  // namespace

AdvantageSchedule vanilla_schedule(int m) {
  require_group_size(m);
  AdvantageSchedule sched;
  sched.group_size = m;
  sched.a.assign(static_cast<size_t>(m), 0.0);
  sched.b.assign(static_cast<size_t>(m), 1.0);
  sched.label = "vanilla";
  return sched;
}

AdvantageSchedule mean_of_correct_schedule(int m) {
  require_group_size(m);
  AdvantageSchedule sched;
  sched.group_size = m;
  sched.a.assign(static_cast<size_t>(m), 0.0);
  sched.b.resize(static_cast<size_t>(m));
  for (int s = 0; s < m; ++s) sched.b[s] = double(m) / double(s + 1);
  sched.label = "mean_of_correct";
  return sched;
}

AdvantageSchedule grpo_schedule(int m, double eps, VarianceConvention convention) {
  require_group_size(m);
  if (!(eps > 0.0)) throw std::invalid_argument("grpo: eps must be > 0");
  if (convention == VarianceConvention::sample && m < 2) {
    throw std::invalid_argument("grpo: sample variance convention needs M >= 2");
  }
  const double var_scale =
      convention == VarianceConvention::sample ? double(m) / double(m - 1) : 1.0;
  auto denom = [&](double q) { return std::sqrt(q * (1.0 - q) * var_scale) + eps; };

  AdvantageSchedule sched;
  sched.group_size = m;
  sched.a.resize(static_cast<size_t>(m));
  sched.b.resize(static_cast<size_t>(m));
  for (int s = 0; s < m; ++s) {
    const double q_lo = double(s) / double(m);        // group mean when R = 0
    const double q_hi = double(s + 1) / double(m);    // group mean when R = 1
    sched.a[s] = -q_lo / denom(q_lo);
    sched.b[s] = (1.0 - q_hi) / denom(q_hi);
  }
  sched.label = "grpo";
  return sched;
}

AdvantageSchedule grpo_variance_schedule(int m, double eps) {
  require_group_size(m);
  if (!(eps > 0.0)) throw std::invalid_argument("grpo_variance: eps must be > 0");
  AdvantageSchedule sched;
  sched.group_size = m;
  sched.a.resize(static_cast<size_t>(m));
  sched.b.resize(static_cast<size_t>(m));
  for (int s = 0; s < m; ++s) {
    const double q_lo = double(s) / double(m);
    const double q_hi = double(s + 1) / double(m);
    sched.a[s] = -q_lo / (q_lo * (1.0 - q_lo) + eps);
    sched.b[s] = (1.0 - q_hi) / (q_hi * (1.0 - q_hi) + eps);
  }
  sched.label = "grpo_variance";
  return sched;
}

AdvantageSchedule bernstein_fit(int m, const std::function<double(double)>& hprime,
                                BernsteinSplit split) {
  require_group_size(m);
  std::vector<double> phi(static_cast<size_t>(m));
  for (int s = 0; s < m; ++s) {
    const double node = fit_node(m, s);
    phi[s] = hprime(node);
    if (!std::isfinite(phi[s])) {
      throw std::invalid_argument("bernstein_fit: h' non-finite at node " + fmt17(node));
    }
  }
  return from_phi(m, phi, split, "bernstein");
}

AdvantageSchedule bernstein_poly_fit(int m, const std::vector<double>& hprime_coeffs,
                                     BernsteinSplit split) {
  require_group_size(m);
  int degree = static_cast<int>(hprime_coeffs.size()) - 1;
  while (degree > 0 && hprime_coeffs[static_cast<size_t>(degree)] == 0.0) --degree;
  const int n = m - 1;  // Bernstein basis degree
  if (degree > n) {
    throw std::invalid_argument("bernstein_poly_fit: h' degree " + std::to_string(degree) +
                                " exceeds M-1 = " + std::to_string(n));
  }
  // t^j = sum_{s>=j} [C(s,j)/C(n,j)] * C(n,s) t^s (1-t)^(n-s)
  std::vector<double> phi(static_cast<size_t>(m), 0.0);
  for (int s = 0; s <= n; ++s) {
    double v = 0.0;
    for (int j = 0; j <= std::min(s, degree); ++j) {
      const double c = hprime_coeffs[static_cast<size_t>(j)];
      if (c == 0.0) continue;
      v += c * std::exp(specfun::log_binom(s, j) - specfun::log_binom(n, j));
    }
    phi[s] = v;
  }
  return from_phi(m, phi, split, "bernstein_poly");
}

double advantage(const AdvantageSchedule& sched, bool reward, int loo_total) {
  if (loo_total < 0 || loo_total >= sched.group_size) {
    throw std::out_of_range("advantage: leave-one-out total outside [0, M-1]");
  }
  return reward ? sched.b[static_cast<size_t>(loo_total)]
                : sched.a[static_cast<size_t>(loo_total)];
}

void write_schedule(std::ostream& os, const AdvantageSchedule& sched) {
  os << "schedule " << sched.label << "\n";
  os << "M " << sched.group_size << "\n";
  os << "s a b\n";
  for (int s = 0; s < sched.group_size; ++s) {
    os << s << ' ' << fmt17(sched.a[static_cast<size_t>(s)]) << ' '
       << fmt17(sched.b[static_cast<size_t>(s)]) << "\n";
  }
}

AdvantageSchedule read_schedule(std::istream& is) {
  AdvantageSchedule sched;
  std::string keyword;
  if (!(is >> keyword) || keyword != "schedule" || !(is >> sched.label)) {
    throw std::invalid_argument("read_schedule: missing 'schedule <label>' line");
  }
  if (!(is >> keyword) || keyword != "M" || !(is >> sched.group_size) ||
      sched.group_size < 1) {
    throw std::invalid_argument("read_schedule: missing 'M <size>' line");
  }
  std::string col_s, col_a, col_b;
  if (!(is >> col_s >> col_a >> col_b) || col_s != "s" || col_a != "a" || col_b != "b") {
    throw std::invalid_argument("read_schedule: missing 's a b' header");
  }
  sched.a.resize(static_cast<size_t>(sched.group_size));
  sched.b.resize(static_cast<size_t>(sched.group_size));
  for (int s = 0; s < sched.group_size; ++s) {
    int idx;
    double a, b;
    if (!(is >> idx >> a >> b) || idx != s) {
      throw std::invalid_argument("read_schedule: bad row " + std::to_string(s));
    }
    sched.a[static_cast<size_t>(s)] = a;
    sched.b[static_cast<size_t>(s)] = b;
  }
  return sched;
}

}  // namespace advt
