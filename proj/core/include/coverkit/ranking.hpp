#ifndef COVERKIT_RANKING_HPP
#define COVERKIT_RANKING_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "coverkit/automata.hpp"
#include "coverkit/generator.hpp"

namespace coverkit {

inline constexpr uint64_t kInfRank = std::numeric_limits<uint64_t>::max();

/// Combined weight-ranking certificate for coverability under a Büchi spec,
/// memory-indexed (memoryless = one memory value). Weights live on machine
/// state x spec state x memory triples and on their per-direction,
/// per-input transition slices; ranks extend the triples with the
/// realizability sink.
struct WeightRanking {
    std::vector<std::string> memory_names; // ordered; size >= 1
    int initial_memory = 0;

    // table dimensions (fixed at construction)
    int nq = 0, ns = 0, nm = 0, npsi = 0, nups = 0;

    std::vector<uint64_t> state_weight; // [q][s][m]
    std::vector<uint64_t> trans_weight; // [q][s][m][psi][ups][m2]
    std::vector<uint64_t> rank;         // [q or sink][s][m]; sink row is q == nq

    static WeightRanking make(int nq, int ns, int nm, int npsi, int nups);

    size_t sw_idx(int q, int s, int m) const {
        return (static_cast<size_t>(q) * ns + s) * nm + m;
    }
    size_t tw_idx(int q, int s, int m, int psi, int ups, int m2) const {
        return ((((static_cast<size_t>(q) * ns + s) * nm + m) * npsi + psi) * nups + ups) * nm + m2;
    }
    size_t rk_idx(int q_or_sink, int s, int m) const {
        return (static_cast<size_t>(q_or_sink) * ns + s) * nm + m;
    }
    uint64_t sw(int q, int s, int m) const { return state_weight[sw_idx(q, s, m)]; }
    uint64_t tw(int q, int s, int m, int psi, int ups, int m2) const {
        return trans_weight[tw_idx(q, s, m, psi, ups, m2)];
    }
    uint64_t rk(int q_or_sink, int s, int m) const { return rank[rk_idx(q_or_sink, s, m)]; }
    uint64_t rk_sink(int s, int m) const { return rank[rk_idx(nq, s, m)]; }
};

enum class RankingCondition {
    INIT_ONE,
    SUPPORT,
    FANOUT,
    PER_DIRECTION,
    DOMINATE,
    RANK_INIT,
    RANK_DEC,
    RANK_FIN,
    SINK_DEC,
    SINK_FIN,
};

const char* to_string(RankingCondition c);

struct RankingViolation {
    RankingCondition condition;
    int q = -1; // machine state, nq for the sink
    int s = -1;
    int m = -1;
    int psi = -1;
    int ups = -1;
    int m2 = -1;
    std::string message;
};

/// Checks every certificate condition; empty result means valid. With
/// strict_init the initial weight and rank are anchored at (q0, s0, m0)
/// instead of the default post-initial (q0, delta(s0,(root,L(q0))), m0).
/// Violations never cascade: a FANOUT hit on a triple suppresses that
/// triple's PER_DIRECTION reports (the former implies the latter here).
std::vector<RankingViolation> validate_weight_ranking(const Transducer& d,
                                                      const BuchiSpec& b,
                                                      const CoverProblem& p,
                                                      const WeightRanking& c,
                                                      bool strict_init = false);

struct RealizabilityResult {
    bool realizable = false;
    std::vector<uint64_t> ranks;    // per spec state; kInfRank = unrealizable from there
    int root_output = -1;           // a minimal-rank first output when realizable
};

/// Classical ranking restricted to the realizability sink: realizable iff
/// some first output is defined at (s0, root) with a finite-rank successor.
/// Ranks are bounded by |S|.
RealizabilityResult solve_realizability(const BuchiSpec& b,
                                        const std::vector<std::string>& branching,
                                        const std::string& root_direction);

struct SearchStats {
    int memories_tried = 0;
    uint64_t weight_bound = 0;   // largest slice weight the search had to consider
    uint64_t weight_cap = 0;     // cap in force (certificates are bounded by it)
    uint64_t rank_bound = 0;     // rank domain bound at the largest memory tried
    uint64_t nodes_explored = 0; // assignments attempted
};

enum class BuchiCoverStatus { CERTIFIED, NO_CERTIFICATE_WITHIN_BOUNDS };

/// There is deliberately no refuting status: exhausting the bounds does not
/// decide uncoverability.
struct BuchiCoverDecision {
    BuchiCoverStatus status = BuchiCoverStatus::NO_CERTIFICATE_WITHIN_BOUNDS;
    std::optional<WeightRanking> certificate;
    int memory_used = 0;
    SearchStats stats;
};

inline constexpr uint64_t kWeightCapClamp = UINT64_C(1) << 20;

/// Iterative-deepening certificate search: memory sizes 1..max_memory, rank
/// domain {0..R, inf} with R = |Q|*|S| when memoryless and (|Q|+1)*|S|*|M|
/// otherwise. Deterministic given declared orders; the first certificate in
/// search order is returned and always passes the validator, and its
/// generator covers the machine and passes the cycle-acceptance check.
BuchiCoverDecision solve_weight_ranking(const Transducer& d,
                                        const BuchiSpec& b,
                                        const CoverProblem& p,
                                        int max_memory,
                                        std::optional<uint64_t> weight_cap = std::nullopt,
                                        uint64_t step_budget = UINT64_C(0xffffffffffffffff));

/// Witness-tree generator for a valid weight-ranking. Children of a triple's
/// copies are allocated per direction: positively weighted (psi, m') slices
/// in declared order consume copy slots, target copies cycling in index
/// order; leftover slots route to the sink through a minimal-rank output
/// (ties by declared output order, then memory order).
CoverGenerator build_buchi_cover_generator(const Transducer& d,
                                           const BuchiSpec& b,
                                           const CoverProblem& p,
                                           const WeightRanking& c);

struct VerifyReport {
    bool coverage_ok = true;
    std::vector<Word> missing;
    bool acceptance_ok = true;
    // product nodes (generator class id, spec state) of an offending
    // accepting-free cycle's strongly connected component
    std::vector<std::pair<int, int>> bad_scc;
    // (class, direction) pairs whose child letter the spec cannot read
    std::vector<std::pair<int, int>> undefined_moves;
};

/// (a) coverage: machine words of length <= depth+1 appear among the
/// unfolding's prefix labels; (b) acceptance: in the generator synchronized
/// with the spec, every reachable cycle contains an accepting spec state --
/// checked exactly through strongly-connected components, deciding all
/// infinite paths of the regular tree.
VerifyReport verify_generator(const CoverGenerator& g,
                              const Transducer& d,
                              const BuchiSpec& b,
                              const CoverProblem& p,
                              int depth);

/// Exact coverage of the machine language by the generator's unfolding (all
/// word lengths), via carrier-set reachability. Returns an uncovered word
/// when coverage fails.
std::optional<Word> exact_coverage_gap(const CoverGenerator& g, const Transducer& d);

} // namespace coverkit

#endif
