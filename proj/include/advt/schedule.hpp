// Advantage weight tables (a_s, b_s): one row per leave-one-out reward total
// s, giving the per-sample weight Z = (1-R) a_s + R b_s for group size M.
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace advt {

struct AdvantageSchedule {
  int group_size = 0;      // M
  std::vector<double> a;   // weight when the sample is incorrect, index s = 0..M-1
  std::vector<double> b;   // weight when the sample is correct
  std::string label;
};

enum class VarianceConvention { population, sample };
enum class BernsteinSplit { plain, centered };

/// Z = R, the unweighted correctness indicator.
AdvantageSchedule vanilla_schedule(int m);

/// Z = R * M/(S+1); the group estimate averages grad log pi over the correct
/// samples and is zero when none are correct.
AdvantageSchedule mean_of_correct_schedule(int m);

/// Group-standardized rewards (R - mean)/(std + eps) in conditional form with
/// q_s = s/M. `convention` picks the variance denominator; `sample` needs
/// M >= 2. Throws std::invalid_argument for eps <= 0.
AdvantageSchedule grpo_schedule(int m, double eps,
                                VarianceConvention convention = VarianceConvention::population);

/// Like grpo_schedule but dividing by variance + eps instead of std + eps.
AdvantageSchedule grpo_variance_schedule(int m, double eps);

/// Node-rule fit: a_s = 0, b_s = hprime(s/(M-1)) (node 1/2 when M = 1).
/// Throws std::invalid_argument naming the node if hprime is non-finite there.
AdvantageSchedule bernstein_fit(int m, const std::function<double(double)>& hprime,
                                BernsteinSplit split = BernsteinSplit::plain);

/// Exact fit for polynomial targets: hprime(t) = sum_j coeffs[j] t^j converted
/// to the degree-(M-1) Bernstein basis, so the induced derivative reproduces
/// hprime identically when deg(hprime) <= M-1.
AdvantageSchedule bernstein_poly_fit(int m, const std::vector<double>& hprime_coeffs,
                                     BernsteinSplit split = BernsteinSplit::plain);

/// Table lookup Z(R, S). Throws std::out_of_range for S outside [0, M-1].
double advantage(const AdvantageSchedule& sched, bool reward, int loo_total);

/// Plain-text table round-trip: label, M, then one "s a_s b_s" row per s.
void write_schedule(std::ostream& os, const AdvantageSchedule& sched);
AdvantageSchedule read_schedule(std::istream& is);

}  // namespace advt
