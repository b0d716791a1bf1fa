#ifndef COVERKIT_ORACLE_HPP
#define COVERKIT_ORACLE_HPP

#include <cstdint>

#include "coverkit/automata.hpp"

namespace coverkit {

inline constexpr uint64_t kNoStepBudget = UINT64_C(0xffffffffffffffff);
inline constexpr int kDefaultRunCap = 4096;

/// Exact, certificate-free coverability decision for acyclic machines.
/// Searches, level by level, for per-run copy counts such that every run of
/// each length gets at least one node, counts fit the level capacity, and
/// each parent's extensions fit among its |branching| * count children.
/// Exact because every run has a unique parent run, so any feasible profile
/// is realizable as an actual labeled tree by greedy child allocation.
/// Throws std::invalid_argument on cyclic input.
bool oracle_coverable_acyclic(const Transducer& d, int branching_count,
                              uint64_t step_budget = kNoStepBudget);

/// The same level-profile search on the first `depth` levels only. For a
/// cyclic machine this is a necessary condition for coverability, not a
/// decision. Throws RunCapExceeded when a level's run set outgrows run_cap.
bool oracle_tree_search(const Transducer& d, int branching_count, int depth,
                        int run_cap = kDefaultRunCap,
                        uint64_t step_budget = kNoStepBudget);

} // namespace coverkit

#endif
