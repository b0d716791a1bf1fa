#ifndef COVERKIT_AUTOMATA_HPP
#define COVERKIT_AUTOMATA_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace coverkit {

/// A finite word over a machine's output alphabet, as symbol indices.
using Word = std::vector<int>;

/// A finite run, as state indices. kSinkState marks the pseudo-state that
/// tracks realizability-only continuations.
using RunTrace = std::vector<int>;

inline constexpr int kSinkState = -1;

/// Node-labeled finite graph over a direction set. Its language is the set
/// of labels of paths from the initial state (the initial label included).
/// The transition map is partial; label-nondeterminism (two directions from
/// one state leading to equally labeled states) is allowed at this level.
struct Transducer {
    std::vector<std::string> directions;   // declared order is canonical
    std::vector<std::string> alphabet;     // declared order is canonical
    std::vector<std::string> state_names;
    std::vector<int> labels;               // state -> alphabet index, total
    int initial = 0;
    // trans[q][dir] = target state index, or -1 when undefined
    std::vector<std::vector<int>> trans;

    int num_states() const { return static_cast<int>(state_names.size()); }
    int num_directions() const { return static_cast<int>(directions.size()); }
    int num_symbols() const { return static_cast<int>(alphabet.size()); }

    bool is_full() const;
    int out_degree(int q) const;
    int max_out_degree() const;
    int find_state(const std::string& name) const;       // -1 if absent
    int find_symbol(const std::string& name) const;      // -1 if absent
    int find_direction(const std::string& name) const;   // -1 if absent
};

/// Deterministic Büchi word automaton over input x output letter pairs.
/// delta is structurally deterministic: at most one successor per letter.
struct BuchiSpec {
    std::vector<std::string> inputs;    // declared order is canonical
    std::vector<std::string> outputs;
    std::vector<std::string> state_names;
    int initial = 0;
    std::vector<int> accepting;         // sorted state indices
    // delta[s][in][out] = target state index, or -1 when undefined
    std::vector<std::vector<std::vector<int>>> delta;

    int num_states() const { return static_cast<int>(state_names.size()); }
    int num_inputs() const { return static_cast<int>(inputs.size()); }
    int num_outputs() const { return static_cast<int>(outputs.size()); }
    bool is_accepting(int s) const;
    int find_state(const std::string& name) const;
    int find_output(const std::string& name) const;
    int next(int s, int in, int out) const { return delta[s][in][out]; }
};

/// A coverability instance: the machine, the tree branching set, the fixed
/// direction of the root, and an optional correctness spec.
/// Invariants: root in branching; spec.inputs == branching; spec outputs
/// contain the machine alphabet.
struct CoverProblem {
    Transducer machine;
    std::vector<std::string> branching;
    std::string root_direction;
    std::optional<BuchiSpec> spec;

    int branching_count() const { return static_cast<int>(branching.size()); }
    int root_index() const;
};

/// Validates the CoverProblem invariants; throws std::invalid_argument.
CoverProblem make_cover_problem(Transducer machine,
                                std::vector<std::string> branching,
                                std::string root_direction,
                                std::optional<BuchiSpec> spec = std::nullopt);

/// Convenience: branching u0..u(n-1), root u0.
std::vector<std::string> default_branching(int n);

struct DeterminismWitness {
    int state = -1;
    int dir_a = -1;
    int dir_b = -1;
};

struct DeterminismResult {
    bool deterministic = true;
    std::optional<DeterminismWitness> witness;
};

/// True iff no state has two distinct direction-successors with equal labels.
DeterminismResult validate_determinism(const Transducer& m);

/// Label-subset construction. The result is deterministic, keeps the input
/// alphabet, and agrees with m on path labels of every length. Its states
/// are canonical sets of input states reachable by a common label sequence;
/// its direction set is sized to the maximum out-degree after merging.
Transducer determinize_transducer(const Transducer& m);

/// All path labels of m of length <= max_len (lengths counted in symbols;
/// every word starts with the initial state's label). Requires max_len >= 1.
std::set<Word> language_upto(const Transducer& m, int max_len);

struct NonblockingResult {
    bool ok = true;
    // On failure: the machine transition that no input letter can match.
    int stuck_state = -1;
    int stuck_dir = -1;   // -1 with ok=false means the root letter itself
};

/// Explores machine/spec state pairs from (q0, delta(s0,(root,L(q0)))).
/// For every machine transition out of a reachable pair some input must
/// admit the successor's label; recursion follows all admitting inputs.
NonblockingResult product_nonblocking_check(const Transducer& d,
                                            const BuchiSpec& b,
                                            const CoverProblem& p);

/// States reachable from the initial state (sorted).
std::vector<int> reachable_states(const Transducer& m);

/// True iff the transition graph restricted to reachable states is acyclic.
bool is_acyclic(const Transducer& m);

} // namespace coverkit

#endif
