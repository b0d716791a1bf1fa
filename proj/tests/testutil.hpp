#ifndef COVERKIT_TESTUTIL_HPP
#define COVERKIT_TESTUTIL_HPP

#include <random>
#include <string>
#include <vector>

#include "coverkit/automata.hpp"
#include "coverkit/json_io.hpp"

namespace coverkit::testutil {

inline std::string fixture_path(const char* name) {
    return std::string(COVERKIT_FIXTURE_DIR) + "/" + name;
}

inline Transducer load_machine(const char* name) {
    return parse_transducer(read_file(fixture_path(name)));
}

inline BuchiSpec load_spec(const char* name) {
    return parse_buchi_spec(read_file(fixture_path(name)));
}

/// Deterministic acyclic machine: states in topological order, per state at
/// most one successor per output symbol, all edges forward.
inline Transducer random_acyclic(std::mt19937& rng, int max_states, int max_syms) {
    Transducer m;
    int n = 2 + static_cast<int>(rng() % (max_states - 1));
    int syms = 2 + static_cast<int>(rng() % (max_syms - 1));
    for (int a = 0; a < syms; ++a) m.alphabet.push_back(std::string(1, char('a' + a)));
    m.directions = {"d0", "d1", "d2"};
    for (int q = 0; q < n; ++q) {
        m.state_names.push_back("q" + std::to_string(q));
        m.labels.push_back(static_cast<int>(rng() % syms));
    }
    m.initial = 0;
    m.trans.assign(n, std::vector<int>(3, -1));
    for (int q = 0; q < n - 1; ++q) {
        int dir = 0;
        for (int sym = 0; sym < syms && dir < 3; ++sym) {
            std::vector<int> pool;
            for (int t = q + 1; t < n; ++t)
                if (m.labels[t] == sym) pool.push_back(t);
            if (pool.empty() || rng() % 100 >= 60) continue;
            m.trans[q][dir++] = pool[rng() % pool.size()];
        }
    }
    return m;
}

/// Possibly label-nondeterministic machine (duplicate successor labels).
inline Transducer random_nondet(std::mt19937& rng, int max_states, int max_syms) {
    Transducer m;
    int n = 2 + static_cast<int>(rng() % (max_states - 1));
    int syms = 2 + static_cast<int>(rng() % (max_syms - 1));
    for (int a = 0; a < syms; ++a) m.alphabet.push_back(std::string(1, char('a' + a)));
    m.directions = {"d0", "d1", "d2"};
    for (int q = 0; q < n; ++q) {
        m.state_names.push_back("q" + std::to_string(q));
        m.labels.push_back(static_cast<int>(rng() % syms));
    }
    m.initial = 0;
    m.trans.assign(n, std::vector<int>(3, -1));
    for (int q = 0; q < n; ++q)
        for (int d = 0; d < 3; ++d)
            if (rng() % 100 < 55) m.trans[q][d] = static_cast<int>(rng() % n);
    return m;
}

/// Deterministic (possibly cyclic) machine for pipeline property tests.
inline Transducer random_deterministic(std::mt19937& rng, int max_states, int max_syms) {
    Transducer m;
    int n = 1 + static_cast<int>(rng() % max_states);
    int syms = 2 + static_cast<int>(rng() % (max_syms - 1));
    for (int a = 0; a < syms; ++a) m.alphabet.push_back(std::string(1, char('a' + a)));
    m.directions = {"d0", "d1", "d2"};
    for (int q = 0; q < n; ++q) {
        m.state_names.push_back("q" + std::to_string(q));
        m.labels.push_back(static_cast<int>(rng() % syms));
    }
    m.initial = 0;
    m.trans.assign(n, std::vector<int>(3, -1));
    for (int q = 0; q < n; ++q) {
        int dir = 0;
        for (int sym = 0; sym < syms && dir < 3; ++sym) {
            std::vector<int> pool;
            for (int t = 0; t < n; ++t)
                if (m.labels[t] == sym) pool.push_back(t);
            if (pool.empty() || rng() % 100 >= 50) continue;
            m.trans[q][dir++] = pool[rng() % pool.size()];
        }
    }
    return m;
}

/// Random partial deterministic Büchi spec over the given letter sets.
inline BuchiSpec random_dbw(std::mt19937& rng, int max_states,
                            std::vector<std::string> inputs,
                            std::vector<std::string> outputs,
                            int density_pct) {
    BuchiSpec b;
    b.inputs = std::move(inputs);
    b.outputs = std::move(outputs);
    int n = 1 + static_cast<int>(rng() % max_states);
    for (int s = 0; s < n; ++s) b.state_names.push_back("s" + std::to_string(s));
    b.initial = 0;
    b.delta.assign(n, std::vector<std::vector<int>>(b.num_inputs(),
                                                    std::vector<int>(b.num_outputs(), -1)));
    for (int s = 0; s < n; ++s)
        for (int u = 0; u < b.num_inputs(); ++u)
            for (int o = 0; o < b.num_outputs(); ++o)
                if (rng() % 100 < static_cast<unsigned>(density_pct))
                    b.delta[s][u][o] = static_cast<int>(rng() % n);
    for (int s = 0; s < n; ++s)
        if (rng() % 100 < 40) b.accepting.push_back(s);
    if (b.accepting.empty()) b.accepting.push_back(static_cast<int>(rng() % n));
    return b;
}

/// Unrolls a machine to the given run length bound: states are (state,
/// level) pairs, so the result is acyclic with the same words up to
/// depth+1 symbols.
inline Transducer unroll(const Transducer& d, int depth) {
    Transducer m;
    m.alphabet = d.alphabet;
    m.directions = d.directions;
    std::vector<std::vector<int>> id(depth + 1, std::vector<int>(d.num_states(), -1));
    std::vector<std::pair<int, int>> items;
    auto intern = [&](int lvl, int q) {
        if (id[lvl][q] < 0) {
            id[lvl][q] = static_cast<int>(items.size());
            items.push_back({lvl, q});
            m.state_names.push_back(d.state_names[q] + "@" + std::to_string(lvl));
            m.labels.push_back(d.labels[q]);
        }
        return id[lvl][q];
    };
    m.initial = intern(0, d.initial);
    for (size_t i = 0; i < items.size(); ++i) {
        auto [lvl, q] = items[i];
        if (lvl == depth) continue;
        for (int dd = 0; dd < d.num_directions(); ++dd)
            if (d.trans[q][dd] >= 0) intern(lvl + 1, d.trans[q][dd]);
    }
    m.trans.assign(m.num_states(), std::vector<int>(m.num_directions(), -1));
    for (size_t i = 0; i < items.size(); ++i) {
        auto [lvl, q] = items[i];
        if (lvl == depth) continue;
        for (int dd = 0; dd < d.num_directions(); ++dd)
            if (d.trans[q][dd] >= 0)
                m.trans[i][dd] = id[lvl + 1][d.trans[q][dd]];
    }
    return m;
}

} // namespace coverkit::testutil

#endif
