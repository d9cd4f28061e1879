// The monotone objective transform h_M induced by an advantage schedule:
//   h_M(t) = (1/M) sum_s phi_s I_t(s+1, M-s),  phi_s = b_s - a_s,
// its derivative kappa (a Bernstein-basis polynomial in phi), closed-form
// references, and grid sweeps.
#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "advt/schedule.hpp"

namespace advt {

struct InducedTransform {
  int group_size = 0;       // M
  std::vector<double> phi;  // phi_s = b_s - a_s
  std::string label;
};

InducedTransform induced(const AdvantageSchedule& sched);

/// Direct summation over s: one incomplete-beta evaluation per coefficient.
double eval_h(const InducedTransform& tr, double t);

/// O(M) path sharing one pmf row across all s via suffix survival sums.
/// Agrees with eval_h to well under 1e-10; used by sweeps.
double eval_h_single_pass(const InducedTransform& tr, double t);

/// h_M'(t) = sum_s phi_s C(M-1,s) t^s (1-t)^(M-1-s).
double eval_kappa(const InducedTransform& tr, double t);

/// h_M(1) = (1/M) sum_s phi_s, exact.
double eval_h_at_one(const InducedTransform& tr);

/// eval_h(t) / eval_h(1). Throws std::domain_error when h(1) = 0.
double normalized_h(const InducedTransform& tr, double t);

/// Closed form of the mean-of-correct transform (finite rearrangement of the
/// log + harmonic identity): H_M - sum_{r=1}^{M} (1-t)^r / r, for t in (0,1].
double rejection_closed_form(int m, double t);

/// The convergent tail sum_{r=M+1}^inf (1-t)^r / r, i.e. the exact difference
/// h_M(t) - log(t) - H_M for the mean-of-correct transform, evaluated without
/// cancellation. t in (0,1].
double log_remainder_tail(int m, double t);

struct SweepRow {
  double t = 0.0;
  double h = 0.0;
  double kappa = 0.0;
  double h_normalized = 0.0;
};

struct SweepTable {
  std::string label;
  std::optional<int> group_size;  // empty for reference-transform rows
  std::optional<double> eps;
  std::vector<SweepRow> rows;
};

/// Row per grid point; throws std::domain_error if the normalized column is
/// requested of a schedule with h(1) = 0.
SweepTable sweep(const InducedTransform& tr, std::span<const double> grid,
                 std::optional<double> eps = std::nullopt);

/// n uniform points on [0,1] including both endpoints.
std::vector<double> uniform_grid(int n = 101);

/// CSV with header "label,M,eps,t,h,kappa,h_normalized"; floats at 17
/// significant digits; empty cells for absent M/eps.
void write_sweep_csv(std::ostream& os, std::span<const SweepTable> tables);

}  // namespace advt
