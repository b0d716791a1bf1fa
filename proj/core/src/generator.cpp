#include "coverkit/generator.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace coverkit {

CoverGenerator build_cover_generator(const Transducer& d,
                                     const std::vector<std::string>& branching,
                                     const WeightDistribution& w) {
    const int ups = static_cast<int>(branching.size());
    if (!validate_weights(d, ups, w).empty())
        throw std::invalid_argument("build_cover_generator: invalid weight distribution");

    // per machine state: child map (copy, direction) -> (target state, target copy)
    // shared by all copies of the state
    struct Slot {
        int target_state = -1;
        int target_copy = 0;
    };
    std::vector<std::vector<Slot>> plan(d.num_states()); // [q][dir * w(q) + copy]
    for (int q = 0; q < d.num_states(); ++q) {
        const uint64_t wq = w.state_weight[q];
        plan[q].assign(static_cast<size_t>(ups) * wq, Slot{});
        size_t cursor = 0;
        for (int dir = 0; dir < d.num_directions(); ++dir) {
            int target = d.trans[q][dir];
            if (target < 0) continue;
            const uint64_t quota = w.trans_weight[q][dir];
            const uint64_t wt = w.state_weight[target];
            for (uint64_t j = 0; j < quota; ++j) {
                plan[q][cursor].target_state = target;
                plan[q][cursor].target_copy = static_cast<int>(j % wt);
                ++cursor;
            }
        }
        // remaining slots stay FREE
    }

    CoverGenerator g;
    g.directions = branching;
    g.alphabet = d.alphabet;
    g.core_state_names = d.state_names;

    std::map<std::pair<int, int>, int> ids; // (state, copy) -> class id
    auto intern = [&](int state, int copy) {
        auto it = ids.find({state, copy});
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(g.nodes.size());
        ids[{state, copy}] = id;
        CoverGenerator::Node n;
        n.core = state;
        n.copy = copy;
        n.label = d.labels[state];
        g.nodes.push_back(n);
        g.children.emplace_back(ups, kFreeChild);
        return id;
    };

    g.root = intern(d.initial, 0);
    std::deque<int> work{g.root};
    std::vector<bool> expanded;
    while (!work.empty()) {
        int id = work.front();
        work.pop_front();
        if (static_cast<size_t>(id) < expanded.size() && expanded[id]) continue;
        if (static_cast<size_t>(id) >= expanded.size()) expanded.resize(id + 1, false);
        expanded[id] = true;
        const auto node = g.nodes[id];
        const uint64_t wq = w.state_weight[node.core];
        for (int dir = 0; dir < ups; ++dir) {
            const Slot& slot = plan[node.core][static_cast<size_t>(dir) * wq + node.copy];
            if (slot.target_state < 0) continue;
            int child = intern(slot.target_state, slot.target_copy);
            g.children[id][dir] = child;
            if (static_cast<size_t>(child) >= expanded.size() || !expanded[child])
                work.push_back(child);
        }
    }
    return g;
}

TreePrefix materialize_prefix(const CoverGenerator& g, int depth, int fill) {
    if (depth < 0) throw std::invalid_argument("materialize_prefix: negative depth");
    if (fill < 0 || fill >= static_cast<int>(g.alphabet.size()))
        throw std::invalid_argument("materialize_prefix: fill symbol out of range");
    const int k = g.arity();
    size_t total = 1, level = 1;
    for (int i = 0; i < depth; ++i) {
        level *= k;
        total += level;
    }
    TreePrefix t;
    t.depth = depth;
    t.arity = k;
    t.directions = g.directions;
    t.alphabet = g.alphabet;
    t.labels.assign(total, fill);
    t.free_fill.assign(total, true);

    // walk the tree alongside the class graph; FREE subtrees keep the filler
    std::vector<int> node_class(total, kFreeChild);
    node_class[0] = g.root;
    t.labels[0] = g.nodes[g.root].label;
    t.free_fill[0] = false;
    for (size_t n = 0; n < total; ++n) {
        if (node_class[n] < 0) continue;
        size_t first_child = n * k + 1;
        if (first_child >= total) continue;
        for (int dir = 0; dir < k; ++dir) {
            int child = g.children[node_class[n]][dir];
            if (child == kFreeChild) continue;
            size_t cn = first_child + dir;
            node_class[cn] = child;
            t.labels[cn] = g.nodes[child].label;
            t.free_fill[cn] = false;
        }
    }
    return t;
}

CoverageReport check_coverage(const TreePrefix& t, const Transducer& d) {
    if (t.alphabet != d.alphabet)
        throw std::invalid_argument("check_coverage: alphabet mismatch");
    std::set<Word> have;
    std::vector<Word> words(t.node_count());
    words[0] = {t.labels[0]};
    have.insert(words[0]);
    for (size_t n = 1; n < t.node_count(); ++n) {
        size_t parent = (n - 1) / t.arity;
        words[n] = words[parent];
        words[n].push_back(t.labels[n]);
        have.insert(words[n]);
    }
    CoverageReport rep;
    for (const Word& w : language_upto(d, t.depth + 1)) {
        if (!have.count(w)) {
            rep.ok = false;
            rep.missing.push_back(w);
        }
    }
    return rep;
}

std::set<Word> generator_prefix_words(const CoverGenerator& g, int depth) {
    std::set<Word> out;
    // BFS over (class, word) pairs level by level; words grow by child labels
    std::vector<std::pair<int, Word>> frontier{{g.root, {g.nodes[g.root].label}}};
    out.insert(frontier[0].second);
    for (int level = 0; level < depth; ++level) {
        std::vector<std::pair<int, Word>> next;
        std::set<std::pair<int, Word>> seen;
        for (const auto& [id, word] : frontier) {
            for (int dir = 0; dir < g.arity(); ++dir) {
                int child = g.children[id][dir];
                if (child == kFreeChild) continue;
                Word w = word;
                w.push_back(g.nodes[child].label);
                out.insert(w);
                if (seen.insert({child, w}).second) next.push_back({child, w});
            }
        }
        frontier = std::move(next);
    }
    return out;
}

std::vector<std::vector<int>> unfold_levels(const CoverGenerator& g, int depth) {
    std::vector<std::vector<int>> levels(depth + 1);
    levels[0] = {g.root};
    for (int i = 0; i < depth; ++i) {
        for (int id : levels[i])
            for (int dir = 0; dir < g.arity(); ++dir) {
                int child = g.children[id][dir];
                if (child != kFreeChild) levels[i + 1].push_back(child);
            }
    }
    return levels;
}

} // namespace coverkit
