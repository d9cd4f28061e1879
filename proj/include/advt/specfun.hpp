// Scalar kernels: log-binomial, binomial pmf, integer-shape regularized
// incomplete beta, harmonic numbers, and the reference rescaling functions.
// All functions are pure and thread-safe.
#pragma once

#include <string>
#include <vector>

namespace advt::specfun {

/// ln C(n,k) for 0 <= k <= n, via lgamma. Throws std::domain_error otherwise.
double log_binom(int n, int k);

/// C(n,k) t^k (1-t)^(n-k) with the 0^0 = 1 endpoint convention.
/// Throws std::domain_error for t outside [0,1] or k outside [0,n].
double binom_pmf(int n, int k, double t);

/// The full pmf row [binom_pmf(n,0,t), ..., binom_pmf(n,n,t)], computed by a
/// ratio recurrence outward from the mode so no entry is reached through an
/// underflowed predecessor.
std::vector<double> binom_pmf_row(int n, double t);

/// I_t(s+1, M-s) for the integer shapes that appear in induced transforms,
/// evaluated as the exact binomial survival sum
///   sum_{j=s+1}^{M} C(M,j) t^j (1-t)^(M-j),   M = s_plus_1 + m_minus_s - 1.
/// Whichever tail is shorter is summed (complement otherwise); result is
/// clamped to [0,1], with I_0 = 0 and I_1 = 1 exactly.
/// Throws std::domain_error on non-positive shapes or t outside [0,1].
double reg_inc_beta_int(int s_plus_1, int m_minus_s, double t);

/// H_m = sum_{r=1}^{m} 1/r. Throws std::domain_error for m < 1.
double harmonic(int m);

/// Monotone reference rescalings of the pass probability t in (0,1).
enum class RefTransform { identity, log, two_arcsin_sqrt, logit };

double ref_eval(RefTransform kind, double t);
double ref_deriv(RefTransform kind, double t);

const char* ref_name(RefTransform kind);
RefTransform ref_from_name(const std::string& name);  // throws std::invalid_argument

}  // namespace advt::specfun
