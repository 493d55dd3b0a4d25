#include "riskcbs/allocation.hpp"

#include <algorithm>
#include <stdexcept>

namespace riskcbs {

std::vector<double> initial_allocation(AllocationStrategy strategy, double delta_total,
                                       const std::vector<double>& utilities, int n) {
  if (n < 1) throw std::invalid_argument("initial_allocation: need at least one agent");
  if (delta_total < 0.0) throw std::invalid_argument("initial_allocation: negative budget");

  std::vector<double> weights(n, 1.0);
  if (strategy != AllocationStrategy::Uniform) {
    if (static_cast<int>(utilities.size()) != n) {
      throw std::invalid_argument("initial_allocation: utilities size mismatch");
    }
    for (int i = 0; i < n; ++i) {
      if (!(utilities[i] > 0.0)) {
        throw std::invalid_argument("initial_allocation: utilities must be positive");
      }
      weights[i] = strategy == AllocationStrategy::Utility ? utilities[i] : 1.0 / utilities[i];
    }
  }

  double wsum = 0.0;
  for (double w : weights) wsum += w;

  std::vector<double> alloc(n);
  double assigned = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    alloc[i] = delta_total * weights[i] / wsum;
    assigned += alloc[i];
  }
  alloc[n - 1] = delta_total - assigned;  // absorb rounding residue
  return alloc;
}

std::optional<std::vector<double>> reallocate(const std::vector<double>& budgets,
                                              const std::vector<double>& delta_min,
                                              const std::vector<char>& failing) {
  const int n = static_cast<int>(budgets.size());
  double required = 0.0, available = 0.0;
  for (int i = 0; i < n; ++i) {
    if (failing[i]) {
      required += delta_min[i] - budgets[i];
    } else {
      available += budgets[i] - delta_min[i];
    }
  }
  // The two sums often describe the same quantity split differently (the
  // global budget frequently sits exactly on a sum of path risks), so a
  // strict comparison can fail on rounding noise alone. Reject only a
  // shortfall beyond accumulated rounding error.
  constexpr double kFeasSlack = 1e-12;
  if (required > available + kFeasSlack) return std::nullopt;

  std::vector<double> next = budgets;
  for (int i = 0; i < n; ++i) {
    if (failing[i]) next[i] = delta_min[i];
  }
  double need = required;
  for (int j = 0; j < n && need > 0.0; ++j) {
    if (failing[j]) continue;
    const double surplus = budgets[j] - delta_min[j];
    const double give = std::min(surplus, need);
    next[j] = give == surplus ? delta_min[j] : budgets[j] - give;
    need -= give;
  }
  return next;
}

}  // namespace riskcbs
