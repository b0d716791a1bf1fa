#include "coverkit/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "coverkit/errors.hpp"

namespace coverkit {

namespace {

struct Run {
    int parent; // index into the previous level, -1 at level 0
    int state;
};

struct LevelSearch {
    const Transducer& d;
    const uint64_t ups;
    const int run_cap;
    uint64_t budget;

    LevelSearch(const Transducer& d, int branching_count, int run_cap, uint64_t budget)
        : d(d), ups(branching_count), run_cap(run_cap), budget(budget) {}

    void step() {
        if (budget == kNoStepBudget) return;
        if (budget == 0) throw StepBudgetExceeded("oracle step budget exhausted");
        --budget;
    }

    // children of `runs`, grouped by parent, ordered by child label
    std::vector<Run> extend(const std::vector<Run>& runs) const {
        std::vector<Run> next;
        for (size_t i = 0; i < runs.size(); ++i) {
            std::vector<int> targets;
            for (int dir = 0; dir < d.num_directions(); ++dir) {
                int t = d.trans[runs[i].state][dir];
                if (t >= 0) targets.push_back(t);
            }
            std::sort(targets.begin(), targets.end(),
                      [&](int a, int b) { return d.labels[a] < d.labels[b]; });
            for (int t : targets) next.push_back({static_cast<int>(i), t});
        }
        return next;
    }

    // DFS over the counts of one level, then recurse into the next one.
    // prev_counts are the chosen counts of the parent level.
    bool assign_level(const std::vector<Run>& runs, const std::vector<uint64_t>& prev_counts,
                      int max_level, int level) {
        if (level > max_level || runs.empty()) return true;
        if (static_cast<int>(runs.size()) > run_cap)
            throw RunCapExceeded("oracle: " + std::to_string(runs.size()) +
                                 " runs at level " + std::to_string(level));

        std::vector<uint64_t> parent_left(prev_counts.size());
        for (size_t p = 0; p < prev_counts.size(); ++p) parent_left[p] = ups * prev_counts[p];
        std::vector<int> siblings_left(prev_counts.size(), 0);
        for (const Run& r : runs) siblings_left[r.parent]++;

        std::vector<uint64_t> counts(runs.size(), 0);
        return assign_run(runs, parent_left, siblings_left, counts, 0, max_level, level);
    }

    bool assign_run(const std::vector<Run>& runs, std::vector<uint64_t>& parent_left,
                    std::vector<int>& siblings_left, std::vector<uint64_t>& counts,
                    size_t idx, int max_level, int level) {
        if (idx == runs.size()) {
            auto next = extend(runs);
            return assign_level(next, counts, max_level, level + 1);
        }
        const int p = runs[idx].parent;
        // each remaining sibling still needs at least one node
        if (parent_left[p] < static_cast<uint64_t>(siblings_left[p])) return false;
        uint64_t hi = parent_left[p] - (siblings_left[p] - 1);
        siblings_left[p]--;
        for (uint64_t c = 1; c <= hi; ++c) {
            step();
            counts[idx] = c;
            parent_left[p] -= c;
            if (assign_run(runs, parent_left, siblings_left, counts, idx + 1, max_level, level))
                return true;
            parent_left[p] += c;
        }
        counts[idx] = 0;
        siblings_left[p]++;
        return false;
    }

    bool search(int max_level) {
        std::vector<Run> root{{-1, d.initial}};
        std::vector<uint64_t> root_count{1}; // level 0 holds exactly the root
        auto next = extend(root);
        return assign_level(next, root_count, max_level, 1);
    }
};

int longest_run_levels(const Transducer& d) {
    // acyclic reachable part: longest path length from the initial state
    auto reach = reachable_states(d);
    std::vector<int> depth(d.num_states(), -1);
    depth[d.initial] = 0;
    // relax in topological fashion: |Q| passes suffice on a DAG
    int best = 0;
    for (size_t pass = 0; pass < reach.size(); ++pass) {
        bool changed = false;
        for (int q : reach) {
            if (depth[q] < 0) continue;
            for (int dir = 0; dir < d.num_directions(); ++dir) {
                int t = d.trans[q][dir];
                if (t >= 0 && depth[t] < depth[q] + 1) {
                    depth[t] = depth[q] + 1;
                    best = std::max(best, depth[t]);
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
    return best;
}

} // namespace

bool oracle_coverable_acyclic(const Transducer& d, int branching_count, uint64_t step_budget) {
    if (branching_count < 1)
        throw std::invalid_argument("oracle_coverable_acyclic: empty branching set");
    if (!validate_determinism(d).deterministic)
        throw std::invalid_argument("oracle_coverable_acyclic: machine is nondeterministic");
    if (!is_acyclic(d))
        throw std::invalid_argument("oracle_coverable_acyclic: machine has a reachable cycle");
    LevelSearch s(d, branching_count, kDefaultRunCap, step_budget);
    return s.search(longest_run_levels(d));
}

bool oracle_tree_search(const Transducer& d, int branching_count, int depth, int run_cap,
                        uint64_t step_budget) {
    if (branching_count < 1)
        throw std::invalid_argument("oracle_tree_search: empty branching set");
    if (!validate_determinism(d).deterministic)
        throw std::invalid_argument("oracle_tree_search: machine is nondeterministic");
    if (depth < 0) throw std::invalid_argument("oracle_tree_search: negative depth");
    LevelSearch s(d, branching_count, run_cap, step_budget);
    return s.search(depth);
}

} // namespace coverkit
