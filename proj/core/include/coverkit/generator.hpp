#ifndef COVERKIT_GENERATOR_HPP
#define COVERKIT_GENERATOR_HPP

#include <set>
#include <string>
#include <vector>

#include "coverkit/automata.hpp"
#include "coverkit/weights.hpp"

namespace coverkit {

/// Child slot left unconstrained by coverage.
inline constexpr int kFreeChild = -1;

/// Finite-state generator of a regular witness tree. A node class is a
/// machine state (or the realizability sink) with a copy index, optionally
/// tagged with a spec state and a memory value; unfolding the class graph
/// from the root yields the labeled tree.
struct CoverGenerator {
    struct Node {
        int core = kSinkState; // machine state index, kSinkState for the sink
        int spec = -1;         // spec state index, -1 when untagged
        int mem = -1;          // memory index, -1 when untagged
        int copy = 0;
        int label = 0;         // alphabet index
    };

    std::vector<std::string> directions; // tree branching, declared order
    std::vector<std::string> alphabet;
    std::vector<std::string> core_state_names;
    std::vector<std::string> spec_state_names; // empty when untagged
    std::vector<std::string> memory_names;     // empty when untagged

    std::vector<Node> nodes;
    int root = 0;
    // children[class][direction] = class index, or kFreeChild
    std::vector<std::vector<int>> children;

    int arity() const { return static_cast<int>(directions.size()); }
};

/// Builds the witness-tree generator for a valid weight distribution. Node
/// classes are (state, copy) pairs with copy < w(state); the branching_count
/// * w(q) child slots of the copies of q are walked in direction-major,
/// copy-minor order and handed to the transitions of q in declared order,
/// transWeight(q,dir) slots each; the j-th slot of a transition targets copy
/// j mod w(target). Remaining slots are FREE. Throws std::invalid_argument
/// on an invalid distribution.
CoverGenerator build_cover_generator(const Transducer& d,
                                     const std::vector<std::string>& branching,
                                     const WeightDistribution& w);

/// Fully labeled finite tree of the given depth, nodes in heap order
/// (children of node n are n*arity + 1 + dir).
struct TreePrefix {
    int depth = 0;
    int arity = 1;
    std::vector<std::string> directions;
    std::vector<std::string> alphabet;
    std::vector<int> labels;      // per node, alphabet indices
    std::vector<bool> free_fill;  // true where the label is filler

    size_t node_count() const { return labels.size(); }
};

/// Unfolds the generator to `depth`, labeling FREE subtrees with `fill`.
TreePrefix materialize_prefix(const CoverGenerator& g, int depth, int fill);

struct CoverageReport {
    bool ok = true;
    std::vector<Word> missing; // machine words absent from the prefix labels
};

/// ok iff every machine word of length <= t.depth+1 appears among the
/// prefix labels of t.
CoverageReport check_coverage(const TreePrefix& t, const Transducer& d);

/// Prefix label words of the generator's non-FREE nodes up to `depth`.
std::set<Word> generator_prefix_words(const CoverGenerator& g, int depth);

/// Class ids reachable at each unfolding level, with multiplicity, FREE
/// slots skipped. levels[i] lists the classes of the depth-i nodes.
std::vector<std::vector<int>> unfold_levels(const CoverGenerator& g, int depth);

} // namespace coverkit

#endif
