#pragma once

#include <optional>
#include <vector>

namespace riskcbs {

enum class AllocationStrategy { Uniform, Utility, InverseUtility };

// Split the global budget across n agents. Uniform ignores utilities; the
// proportional strategies require strictly positive utilities (throws
// std::invalid_argument otherwise). The last agent absorbs the rounding
// residue so the shares sum to delta_total exactly.
std::vector<double> initial_allocation(AllocationStrategy strategy, double delta_total,
                                       const std::vector<double>& utilities, int n);

// One reallocation round: failing agents are raised to exactly their minimum
// feasible risk, funded by debiting passing agents' surplus in ascending
// agent order. Returns nullopt when the total need exceeds the total surplus.
// The returned allocation never sums to more than the input one.
std::optional<std::vector<double>> reallocate(const std::vector<double>& budgets,
                                              const std::vector<double>& delta_min,
                                              const std::vector<char>& failing);

}  // namespace riskcbs
