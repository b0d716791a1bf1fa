#include "coverkit/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace coverkit {

namespace {

int index_of(const std::vector<std::string>& v, const std::string& s) {
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] == s) return static_cast<int>(i);
    return -1;
}

} // namespace

bool Transducer::is_full() const {
    for (int q = 0; q < num_states(); ++q)
        for (int d = 0; d < num_directions(); ++d)
            if (trans[q][d] < 0) return false;
    return true;
}

int Transducer::out_degree(int q) const {
    int deg = 0;
    for (int d = 0; d < num_directions(); ++d)
        if (trans[q][d] >= 0) ++deg;
    return deg;
}

int Transducer::max_out_degree() const {
    int best = 0;
    for (int q = 0; q < num_states(); ++q) best = std::max(best, out_degree(q));
    return best;
}

int Transducer::find_state(const std::string& name) const { return index_of(state_names, name); }
int Transducer::find_symbol(const std::string& name) const { return index_of(alphabet, name); }
int Transducer::find_direction(const std::string& name) const { return index_of(directions, name); }

bool BuchiSpec::is_accepting(int s) const {
    return std::binary_search(accepting.begin(), accepting.end(), s);
}

int BuchiSpec::find_state(const std::string& name) const { return index_of(state_names, name); }
int BuchiSpec::find_output(const std::string& name) const { return index_of(outputs, name); }

int CoverProblem::root_index() const {
    for (size_t i = 0; i < branching.size(); ++i)
        if (branching[i] == root_direction) return static_cast<int>(i);
    return -1;
}

std::vector<std::string> default_branching(int n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back("u" + std::to_string(i));
    return out;
}

CoverProblem make_cover_problem(Transducer machine,
                                std::vector<std::string> branching,
                                std::string root_direction,
                                std::optional<BuchiSpec> spec) {
    if (branching.empty())
        throw std::invalid_argument("cover problem: branching set is empty");
    if (index_of(branching, root_direction) < 0)
        throw std::invalid_argument("cover problem: root direction '" + root_direction +
                                    "' is not in the branching set");
    if (spec) {
        if (spec->inputs != branching)
            throw std::invalid_argument("cover problem: spec inputs differ from the branching set");
        for (const auto& sym : machine.alphabet)
            if (spec->find_output(sym) < 0)
                throw std::invalid_argument("cover problem: spec outputs miss machine symbol '" + sym + "'");
    }
    CoverProblem p;
    p.machine = std::move(machine);
    p.branching = std::move(branching);
    p.root_direction = std::move(root_direction);
    p.spec = std::move(spec);
    return p;
}

DeterminismResult validate_determinism(const Transducer& m) {
    for (int q = 0; q < m.num_states(); ++q) {
        for (int a = 0; a < m.num_directions(); ++a) {
            int qa = m.trans[q][a];
            if (qa < 0) continue;
            for (int b = a + 1; b < m.num_directions(); ++b) {
                int qb = m.trans[q][b];
                if (qb < 0) continue;
                if (m.labels[qa] == m.labels[qb]) {
                    DeterminismResult r;
                    r.deterministic = false;
                    r.witness = DeterminismWitness{q, a, b};
                    return r;
                }
            }
        }
    }
    return {};
}

Transducer determinize_transducer(const Transducer& m) {
    using StateSet = std::vector<int>; // sorted

    std::map<StateSet, int> ids;
    std::vector<StateSet> sets;
    std::vector<std::vector<std::pair<int, StateSet>>> succs; // (label, target set)

    StateSet init{m.initial};
    ids[init] = 0;
    sets.push_back(init);

    std::deque<int> work{0};
    int max_deg = 0;
    while (!work.empty()) {
        int id = work.front();
        work.pop_front();
        // group successors of the whole set by label
        std::map<int, StateSet> by_label;
        for (int q : sets[id]) {
            for (int d = 0; d < m.num_directions(); ++d) {
                int t = m.trans[q][d];
                if (t < 0) continue;
                by_label[m.labels[t]].push_back(t);
            }
        }
        std::vector<std::pair<int, StateSet>> row;
        for (auto& [label, states] : by_label) {
            std::sort(states.begin(), states.end());
            states.erase(std::unique(states.begin(), states.end()), states.end());
            row.emplace_back(label, states);
        }
        max_deg = std::max(max_deg, static_cast<int>(row.size()));
        if (static_cast<size_t>(id) >= succs.size()) succs.resize(id + 1);
        succs[id] = row;
        for (auto& [label, states] : succs[id]) {
            auto it = ids.find(states);
            if (it == ids.end()) {
                int nid = static_cast<int>(sets.size());
                ids[states] = nid;
                sets.push_back(states);
                work.push_back(nid);
            }
        }
    }
    succs.resize(sets.size());

    Transducer out;
    out.alphabet = m.alphabet;
    out.directions = default_branching(std::max(max_deg, 1));
    for (size_t i = 0; i < out.directions.size(); ++i) out.directions[i] = "d" + std::to_string(i);
    out.initial = 0;
    for (const auto& set : sets) {
        std::string name = "{";
        for (size_t i = 0; i < set.size(); ++i) {
            if (i) name += ",";
            name += m.state_names[set[i]];
        }
        name += "}";
        out.state_names.push_back(name);
        out.labels.push_back(m.labels[set[0]]);
    }
    // set members share a label: every member was reached by the same word
    for (size_t id = 0; id < sets.size(); ++id) {
        std::vector<int> row(out.directions.size(), -1);
        int d = 0;
        for (auto& [label, states] : succs[id]) row[d++] = ids.at(states);
        out.trans.push_back(std::move(row));
    }
    return out;
}

std::set<Word> language_upto(const Transducer& m, int max_len) {
    if (max_len < 1) throw std::invalid_argument("language_upto: max_len must be >= 1");
    std::set<Word> words;
    // frontier maps each word to the set of states reachable by it, so the
    // enumeration also works for label-nondeterministic machines
    std::map<Word, std::vector<int>> frontier;
    Word first{m.labels[m.initial]};
    frontier[first] = {m.initial};
    words.insert(first);
    for (int len = 1; len < max_len; ++len) {
        std::map<Word, std::vector<int>> next;
        for (const auto& [word, states] : frontier) {
            for (int q : states) {
                for (int d = 0; d < m.num_directions(); ++d) {
                    int t = m.trans[q][d];
                    if (t < 0) continue;
                    Word w = word;
                    w.push_back(m.labels[t]);
                    auto& bucket = next[w];
                    if (std::find(bucket.begin(), bucket.end(), t) == bucket.end())
                        bucket.push_back(t);
                }
            }
        }
        if (next.empty()) break;
        for (const auto& [word, states] : next) words.insert(word);
        frontier = std::move(next);
    }
    return words;
}

NonblockingResult product_nonblocking_check(const Transducer& d,
                                            const BuchiSpec& b,
                                            const CoverProblem& p) {
    NonblockingResult res;
    const int root = p.root_index();
    // map machine labels into the spec's output indexing
    std::vector<int> out_of(d.num_symbols(), -1);
    for (int a = 0; a < d.num_symbols(); ++a) out_of[a] = b.find_output(d.alphabet[a]);

    int s_init = b.next(b.initial, root, out_of[d.labels[d.initial]]);
    if (s_init < 0) {
        res.ok = false;
        res.stuck_state = d.initial;
        res.stuck_dir = -1;
        return res;
    }
    std::set<std::pair<int, int>> seen;
    std::deque<std::pair<int, int>> work;
    seen.insert({d.initial, s_init});
    work.push_back({d.initial, s_init});
    while (!work.empty()) {
        auto [q, s] = work.front();
        work.pop_front();
        for (int psi = 0; psi < d.num_directions(); ++psi) {
            int q2 = d.trans[q][psi];
            if (q2 < 0) continue;
            bool matched = false;
            for (int u = 0; u < b.num_inputs(); ++u) {
                int s2 = b.next(s, u, out_of[d.labels[q2]]);
                if (s2 < 0) continue;
                matched = true;
                if (seen.insert({q2, s2}).second) work.push_back({q2, s2});
            }
            if (!matched) {
                res.ok = false;
                res.stuck_state = q;
                res.stuck_dir = psi;
                return res;
            }
        }
    }
    return res;
}

std::vector<int> reachable_states(const Transducer& m) {
    std::vector<bool> seen(m.num_states(), false);
    std::deque<int> work{m.initial};
    seen[m.initial] = true;
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (int d = 0; d < m.num_directions(); ++d) {
            int t = m.trans[q][d];
            if (t >= 0 && !seen[t]) {
                seen[t] = true;
                work.push_back(t);
            }
        }
    }
    std::vector<int> out;
    for (int q = 0; q < m.num_states(); ++q)
        if (seen[q]) out.push_back(q);
    return out;
}

bool is_acyclic(const Transducer& m) {
    auto reach = reachable_states(m);
    std::vector<int> color(m.num_states(), 0); // 0 white, 1 grey, 2 black
    std::vector<std::pair<int, int>> stack;    // (state, next direction)
    for (int start : reach) {
        if (color[start] != 0) continue;
        stack.push_back({start, 0});
        color[start] = 1;
        while (!stack.empty()) {
            auto& [q, d] = stack.back();
            if (d >= m.num_directions()) {
                color[q] = 2;
                stack.pop_back();
                continue;
            }
            int t = m.trans[q][d++];
            if (t < 0) continue;
            if (color[t] == 1) return false;
            if (color[t] == 0) {
                color[t] = 1;
                stack.push_back({t, 0});
            }
        }
    }
    return true;
}

} // namespace coverkit
