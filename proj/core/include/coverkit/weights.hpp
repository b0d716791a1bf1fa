#ifndef COVERKIT_WEIGHTS_HPP
#define COVERKIT_WEIGHTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coverkit/automata.hpp"

namespace coverkit {

/// Certificate for simple coverability: positive per-state and
/// per-transition weights.
struct WeightDistribution {
    std::vector<uint64_t> state_weight;               // by state index
    std::vector<std::vector<uint64_t>> trans_weight;  // [q][dir], 0 when undefined

    uint64_t at(int q) const { return state_weight[q]; }
    uint64_t at(int q, int dir) const { return trans_weight[q][dir]; }
};

enum class WeightCondition { INIT_ONE, FANOUT, DOMINATE, POSITIVE };

const char* to_string(WeightCondition c);

struct WeightViolation {
    WeightCondition condition;
    int state = -1;
    int dir = -1;          // -1 for state-level conditions
    uint64_t lhs = 0;      // the two sides of the failed inequality
    uint64_t rhs = 0;
    std::string message;
};

/// Checks the three certificate conditions plus w(q0) = 1. Empty result
/// means the distribution is valid. Throws ParseError when a weight (from a
/// parsed document) references an undefined transition.
std::vector<WeightViolation> validate_weights(const Transducer& d,
                                              int branching_count,
                                              const WeightDistribution& w);

struct ObstructionStep {
    int state;
    uint64_t forced_weight;
};

struct CoverDecision {
    bool coverable = false;
    std::optional<WeightDistribution> certificate;
    std::vector<ObstructionStep> obstruction; // monotone growth chain on failure
};

/// Upper bound |branching|^|Q| on certificate weights, saturating.
uint64_t weight_cap(const Transducer& d, int branching_count);

/// Decides simple coverability by Kleene iteration of
///   W(q) = ceil(sum over defined (q,dir) of max(1, W(target)) / |branching|)
/// from all ones (W(q) = 1 for states without successors). Coverable iff the
/// iteration stabilizes with all weights within the cap and W(q0) = 1; the
/// certificate then sets transWeight(q,dir) = max(1, W(target)) and always
/// passes validate_weights. States unreachable from q0 are pruned first and
/// reported with weight 1.
CoverDecision solve_weights(const Transducer& d, int branching_count);

/// Least k in [1, min(|alphabet|, max out-degree)] (at least 1) for which
/// solve_weights certifies coverability. Such k always exists.
int minimal_branching(const Transducer& d);

} // namespace coverkit

#endif
