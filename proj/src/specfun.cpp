#include "advt/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace advt::specfun {

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

}  // namespace

double log_binom(int n, int k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::domain_error("log_binom: need 0 <= k <= n");
  }
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binom_pmf(int n, int k, double t) {
  if (n < 0 || k < 0 || k > n) {
    throw std::domain_error("binom_pmf: need 0 <= k <= n");
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::domain_error("binom_pmf: t outside [0,1]");
  }
  if (t == 0.0) return k == 0 ? 1.0 : 0.0;
  if (t == 1.0) return k == n ? 1.0 : 0.0;
  if (k == 0) return std::pow(1.0 - t, n);
  if (k == n) return std::pow(t, n);
  return std::exp(log_binom(n, k) + k * std::log(t) + (n - k) * std::log1p(-t));
}

std::vector<double> binom_pmf_row(int n, double t) {
  if (n < 0) throw std::domain_error("binom_pmf_row: n < 0");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::domain_error("binom_pmf_row: t outside [0,1]");
  }
  std::vector<double> row(static_cast<size_t>(n) + 1, 0.0);
  if (t == 0.0) {
    row[0] = 1.0;
    return row;
  }
  if (t == 1.0) {
    row[static_cast<size_t>(n)] = 1.0;
    return row;
  }
  int mode = static_cast<int>(t * (n + 1));
  if (mode > n) mode = n;
  row[static_cast<size_t>(mode)] = binom_pmf(n, mode, t);
  const double ratio = t / (1.0 - t);
  // pmf(k+1)/pmf(k) = (n-k)/(k+1) * t/(1-t); entries far from the mode
  // underflow to zero on their own.
  for (int k = mode; k < n; ++k) {
    row[static_cast<size_t>(k) + 1] =
        row[static_cast<size_t>(k)] * (double(n - k) / double(k + 1)) * ratio;
  }
  for (int k = mode; k > 0; --k) {
    row[static_cast<size_t>(k) - 1] =
        row[static_cast<size_t>(k)] * (double(k) / double(n - k + 1)) / ratio;
  }
  return row;
}

double reg_inc_beta_int(int s_plus_1, int m_minus_s, double t) {
  if (s_plus_1 <= 0 || m_minus_s <= 0) {
    throw std::domain_error("reg_inc_beta_int: shape parameters must be positive");
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::domain_error("reg_inc_beta_int: t outside [0,1]");
  }
  if (t == 0.0) return 0.0;
  if (t == 1.0) return 1.0;

  const int m = s_plus_1 + m_minus_s - 1;  // group size M
  const int s = s_plus_1 - 1;              // 0 <= s <= M-1
  const double ratio = t / (1.0 - t);
  const double mode = t * (m + 1);

  KahanSum acc;
  if (double(s + 1) >= mode) {
    // Upper tail j = s+1..M directly; terms decrease from j = s+1.
    double term = binom_pmf(m, s + 1, t);
    acc.add(term);
    for (int j = s + 1; j < m; ++j) {
      term *= (double(m - j) / double(j + 1)) * ratio;
      acc.add(term);
      if (term < acc.sum * 1e-18) break;
    }
    double v = acc.sum;
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  }
  // Lower tail j = s..0 is the shorter one; terms decrease from j = s.
  double term = binom_pmf(m, s, t);
  acc.add(term);
  for (int j = s; j > 0; --j) {
    term *= (double(j) / double(m - j + 1)) / ratio;
    acc.add(term);
    if (term < acc.sum * 1e-18) break;
  }
  double v = 1.0 - acc.sum;
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

double harmonic(int m) {
  if (m < 1) throw std::domain_error("harmonic: m must be >= 1");
  // Smallest terms first.
  double sum = 0.0;
  for (int r = m; r >= 1; --r) sum += 1.0 / r;
  return sum;
}

double ref_eval(RefTransform kind, double t) {
  switch (kind) {
    case RefTransform::identity:
      return t;
    case RefTransform::log:
      return std::log(t);
    case RefTransform::two_arcsin_sqrt:
      return 2.0 * std::asin(std::sqrt(t));
    case RefTransform::logit:
      return std::log(t) - std::log1p(-t);
  }
  throw std::logic_error("ref_eval: unknown transform");
}

double ref_deriv(RefTransform kind, double t) {
  switch (kind) {
    case RefTransform::identity:
      return 1.0;
    case RefTransform::log:
      return 1.0 / t;
    case RefTransform::two_arcsin_sqrt:
      return 1.0 / std::sqrt(t * (1.0 - t));
    case RefTransform::logit:
      return 1.0 / (t * (1.0 - t));
  }
  throw std::logic_error("ref_deriv: unknown transform");
}

const char* ref_name(RefTransform kind) {
  switch (kind) {
    case RefTransform::identity:
      return "identity";
    case RefTransform::log:
      return "log";
    case RefTransform::two_arcsin_sqrt:
      return "arcsin";
    case RefTransform::logit:
      return "logit";
  }
  return "?";
}

RefTransform ref_from_name(const std::string& name) {
  if (name == "identity") return RefTransform::identity;
  if (name == "log") return RefTransform::log;
  if (name == "arcsin" || name == "two_arcsin_sqrt") return RefTransform::two_arcsin_sqrt;
  if (name == "logit") return RefTransform::logit;
  throw std::invalid_argument("unknown reference transform: " + name);
}

}  // namespace advt::specfun
