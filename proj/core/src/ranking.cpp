#include "coverkit/ranking.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "coverkit/errors.hpp"

namespace coverkit {

namespace {

std::vector<int> output_map(const Transducer& d, const BuchiSpec& b) {
    std::vector<int> out(d.num_symbols(), -1);
    for (int a = 0; a < d.num_symbols(); ++a) out[a] = b.find_output(d.alphabet[a]);
    return out;
}

void check_compat(const Transducer& d, const BuchiSpec& b, const CoverProblem& p) {
    if (b.inputs != p.branching)
        throw std::invalid_argument("spec inputs differ from the branching set");
    if (p.root_index() < 0)
        throw std::invalid_argument("root direction is not in the branching set");
    for (const auto& sym : d.alphabet)
        if (b.find_output(sym) < 0)
            throw std::invalid_argument("spec outputs miss machine symbol '" + sym + "'");
}

uint64_t sat_pow(uint64_t base, uint64_t exp) {
    uint64_t r = 1;
    for (uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && r > kInfRank / base) return kInfRank;
        r *= base;
    }
    return r;
}

/// Least realizability measure over spec states: finite exactly where the
/// sink can keep every input answered forever; bounded by |S|.
std::vector<uint64_t> sink_measure(const BuchiSpec& b) {
    const int ns = b.num_states();
    const uint64_t bound = static_cast<uint64_t>(ns);
    std::vector<uint64_t> rho(ns, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int s = 0; s < ns; ++s) {
            uint64_t val = 0;
            bool accepting = b.is_accepting(s);
            uint64_t worst = 0;
            bool dead = false;
            for (int u = 0; u < b.num_inputs() && !dead; ++u) {
                uint64_t best = kInfRank;
                for (int o = 0; o < b.num_outputs(); ++o) {
                    int t = b.next(s, u, o);
                    if (t >= 0) best = std::min(best, rho[t]);
                }
                if (best == kInfRank) dead = true;
                else worst = std::max(worst, best);
            }
            if (dead) val = kInfRank;
            else if (accepting) val = 0;
            else {
                val = worst + 1;
                if (val > bound) val = kInfRank;
            }
            if (val > rho[s]) {
                rho[s] = val;
                changed = true;
            }
        }
    }
    return rho;
}

std::vector<bool> reaches_accepting(const BuchiSpec& b) {
    std::vector<bool> can(b.num_states(), false);
    std::deque<int> work;
    for (int f : b.accepting) {
        can[f] = true;
        work.push_back(f);
    }
    // reverse reachability over the delta graph
    while (!work.empty()) {
        int t = work.front();
        work.pop_front();
        for (int s = 0; s < b.num_states(); ++s) {
            if (can[s]) continue;
            bool hits = false;
            for (int u = 0; u < b.num_inputs() && !hits; ++u)
                for (int o = 0; o < b.num_outputs() && !hits; ++o)
                    if (b.next(s, u, o) == t) hits = true;
            if (hits) {
                can[s] = true;
                work.push_back(s);
            }
        }
    }
    return can;
}

} // namespace

const char* to_string(RankingCondition c) {
    switch (c) {
        case RankingCondition::INIT_ONE: return "INIT_ONE";
        case RankingCondition::SUPPORT: return "SUPPORT";
        case RankingCondition::FANOUT: return "FANOUT";
        case RankingCondition::PER_DIRECTION: return "PER_DIRECTION";
        case RankingCondition::DOMINATE: return "DOMINATE";
        case RankingCondition::RANK_INIT: return "RANK_INIT";
        case RankingCondition::RANK_DEC: return "RANK_DEC";
        case RankingCondition::RANK_FIN: return "RANK_FIN";
        case RankingCondition::SINK_DEC: return "SINK_DEC";
        case RankingCondition::SINK_FIN: return "SINK_FIN";
    }
    return "?";
}

WeightRanking WeightRanking::make(int nq, int ns, int nm, int npsi, int nups) {
    WeightRanking c;
    c.nq = nq;
    c.ns = ns;
    c.nm = nm;
    c.npsi = npsi;
    c.nups = nups;
    for (int i = 0; i < nm; ++i) c.memory_names.push_back("m" + std::to_string(i));
    c.state_weight.assign(static_cast<size_t>(nq) * ns * nm, 0);
    c.trans_weight.assign(static_cast<size_t>(nq) * ns * nm * npsi * nups * nm, 0);
    c.rank.assign(static_cast<size_t>(nq + 1) * ns * nm, kInfRank);
    return c;
}

std::vector<RankingViolation> validate_weight_ranking(const Transducer& d,
                                                      const BuchiSpec& b,
                                                      const CoverProblem& p,
                                                      const WeightRanking& c,
                                                      bool strict_init) {
    check_compat(d, b, p);
    if (c.nq != d.num_states() || c.ns != b.num_states() || c.npsi != d.num_directions() ||
        c.nups != p.branching_count() || c.nm != static_cast<int>(c.memory_names.size()))
        throw std::invalid_argument("certificate dimensions do not match the instance");
    if (c.initial_memory < 0 || c.initial_memory >= c.nm)
        throw std::invalid_argument("initial memory out of range");

    const auto out_of = output_map(d, b);
    const int root = p.root_index();
    const int m0 = c.initial_memory;
    std::vector<RankingViolation> out;

    auto add = [&](RankingCondition cond, int q, int s, int m, int psi, int ups, int m2,
                   std::string msg) {
        RankingViolation v;
        v.condition = cond;
        v.q = q;
        v.s = s;
        v.m = m;
        v.psi = psi;
        v.ups = ups;
        v.m2 = m2;
        v.message = std::move(msg);
        out.push_back(v);
    };

    // initial anchor
    int s_init = b.next(b.initial, root, out_of[d.labels[d.initial]]);
    int anchor_s = strict_init ? b.initial : s_init;
    if (anchor_s < 0) {
        add(RankingCondition::INIT_ONE, d.initial, -1, m0, -1, -1, -1,
            "spec has no transition for the root letter");
        add(RankingCondition::RANK_INIT, d.initial, -1, m0, -1, -1, -1,
            "spec has no transition for the root letter");
    } else {
        if (c.sw(d.initial, anchor_s, m0) != 1)
            add(RankingCondition::INIT_ONE, d.initial, anchor_s, m0, -1, -1, -1,
                "initial weight must be 1, got " +
                    std::to_string(c.sw(d.initial, anchor_s, m0)));
        if (c.rk(d.initial, anchor_s, m0) == kInfRank)
            add(RankingCondition::RANK_INIT, d.initial, anchor_s, m0, -1, -1, -1,
                "initial rank must be finite");
    }

    // weight conditions
    for (int q = 0; q < c.nq; ++q)
        for (int s = 0; s < c.ns; ++s)
            for (int m = 0; m < c.nm; ++m) {
                const uint64_t w = c.sw(q, s, m);
                uint64_t total = 0;
                bool fanout_hit = false;
                for (int psi = 0; psi < c.npsi; ++psi)
                    for (int u = 0; u < c.nups; ++u)
                        for (int m2 = 0; m2 < c.nm; ++m2) {
                            uint64_t t = c.tw(q, s, m, psi, u, m2);
                            total = (total > kInfRank - t) ? kInfRank : total + t;
                        }
                if (total > static_cast<uint64_t>(c.nups) * w) {
                    fanout_hit = true;
                    add(RankingCondition::FANOUT, q, s, m, -1, -1, -1,
                        "outgoing weight " + std::to_string(total) + " exceeds " +
                            std::to_string(c.nups) + "*w = " +
                            std::to_string(static_cast<uint64_t>(c.nups) * w));
                }
                if (!fanout_hit)
                    for (int u = 0; u < c.nups; ++u) {
                        uint64_t dir_sum = 0;
                        for (int psi = 0; psi < c.npsi; ++psi)
                            for (int m2 = 0; m2 < c.nm; ++m2) dir_sum += c.tw(q, s, m, psi, u, m2);
                        if (dir_sum > w)
                            add(RankingCondition::PER_DIRECTION, q, s, m, -1, u, -1,
                                "direction " + p.branching[u] + " carries " +
                                    std::to_string(dir_sum) + " > w = " + std::to_string(w));
                    }
                for (int psi = 0; psi < c.npsi; ++psi) {
                    const int q2 = d.trans[q][psi];
                    for (int u = 0; u < c.nups; ++u) {
                        const int s2 = q2 < 0 ? -1 : b.next(s, u, out_of[d.labels[q2]]);
                        for (int m2 = 0; m2 < c.nm; ++m2) {
                            uint64_t t = c.tw(q, s, m, psi, u, m2);
                            if (t == 0) continue;
                            if (q2 < 0 || s2 < 0) {
                                add(RankingCondition::SUPPORT, q, s, m, psi, u, m2,
                                    "weight on a combined transition that does not exist");
                                continue;
                            }
                            uint64_t wt = c.sw(q2, s2, m2);
                            if (wt == 0)
                                add(RankingCondition::DOMINATE, q, s, m, psi, u, m2,
                                    "positive weight into an uncovered target triple");
                            else if (t < wt)
                                add(RankingCondition::DOMINATE, q, s, m, psi, u, m2,
                                    "transition weight " + std::to_string(t) +
                                        " below target weight " + std::to_string(wt));
                        }
                    }
                }
            }

    // rank conditions on machine triples
    for (int q = 0; q < c.nq; ++q)
        for (int s = 0; s < c.ns; ++s)
            for (int m = 0; m < c.nm; ++m) {
                const uint64_t r = c.rk(q, s, m);
                if (r == kInfRank) continue;
                const bool acc = b.is_accepting(s);
                const RankingCondition cond =
                    acc ? RankingCondition::RANK_FIN : RankingCondition::RANK_DEC;
                for (int u = 0; u < c.nups; ++u) {
                    uint64_t dir_sum = 0;
                    for (int psi = 0; psi < c.npsi; ++psi) {
                        const int q2 = d.trans[q][psi];
                        const int s2 = q2 < 0 ? -1 : b.next(s, u, out_of[d.labels[q2]]);
                        for (int m2 = 0; m2 < c.nm; ++m2) {
                            uint64_t t = c.tw(q, s, m, psi, u, m2);
                            if (t == 0) continue;
                            dir_sum += t;
                            if (q2 < 0 || s2 < 0) continue; // reported as SUPPORT
                            uint64_t rt = c.rk(q2, s2, m2);
                            if (acc ? rt == kInfRank : rt >= r)
                                add(cond, q, s, m, psi, u, m2,
                                    acc ? "successor rank must be finite"
                                        : "rank must strictly decrease along weighted moves");
                        }
                    }
                    if (dir_sum < c.sw(q, s, m)) {
                        bool found = false;
                        for (int o = 0; o < b.num_outputs() && !found; ++o) {
                            int s2 = b.next(s, u, o);
                            if (s2 < 0) continue;
                            for (int m2 = 0; m2 < c.nm && !found; ++m2) {
                                uint64_t rs = c.rk_sink(s2, m2);
                                if (acc ? rs != kInfRank : rs < r) found = true;
                            }
                        }
                        if (!found)
                            add(cond, q, s, m, -1, u, -1,
                                acc ? "leftover direction lacks a finite-rank sink escape"
                                    : "leftover direction lacks a smaller-rank sink escape");
                    }
                }
            }

    // sink rules
    for (int s = 0; s < c.ns; ++s)
        for (int m = 0; m < c.nm; ++m) {
            const uint64_t r = c.rk_sink(s, m);
            if (r == kInfRank) continue;
            const bool acc = b.is_accepting(s);
            for (int u = 0; u < c.nups; ++u) {
                bool found = false;
                for (int o = 0; o < b.num_outputs() && !found; ++o) {
                    int s2 = b.next(s, u, o);
                    if (s2 < 0) continue;
                    for (int m2 = 0; m2 < c.nm && !found; ++m2) {
                        uint64_t rs = c.rk_sink(s2, m2);
                        if (acc ? rs != kInfRank : rs < r) found = true;
                    }
                }
                if (!found)
                    add(acc ? RankingCondition::SINK_FIN : RankingCondition::SINK_DEC, c.nq, s, m,
                        -1, u, -1,
                        acc ? "accepting sink lacks a finite continuation"
                            : "sink rank must strictly decrease in every direction");
            }
        }

    return out;
}

RealizabilityResult solve_realizability(const BuchiSpec& b,
                                        const std::vector<std::string>& branching,
                                        const std::string& root_direction) {
    if (b.inputs != branching)
        throw std::invalid_argument("solve_realizability: branching differs from spec inputs");
    int root = -1;
    for (size_t i = 0; i < branching.size(); ++i)
        if (branching[i] == root_direction) root = static_cast<int>(i);
    if (root < 0) throw std::invalid_argument("solve_realizability: unknown root direction");

    RealizabilityResult res;
    res.ranks = sink_measure(b);
    uint64_t best = kInfRank;
    for (int o = 0; o < b.num_outputs(); ++o) {
        int t = b.next(b.initial, root, o);
        if (t < 0) continue;
        if (res.ranks[t] < best) {
            best = res.ranks[t];
            res.root_output = o;
        }
    }
    res.realizable = best != kInfRank;
    if (!res.realizable) res.root_output = -1;
    return res;
}

// ---------------------------------------------------------------------------
// certificate search
// ---------------------------------------------------------------------------

namespace {

struct Slice {
    int psi;
    int m2;
};

struct Search {
    const Transducer& d;
    const BuchiSpec& b;
    int root;
    std::vector<int> out_of;
    std::vector<uint64_t> rho;           // sink measure per spec state
    std::vector<bool> can_reach_f;       // per spec state
    std::vector<std::vector<uint64_t>> esc; // [s][u] best sink escape measure
    int nm = 1;
    uint64_t rank_bound = 0;
    uint64_t step_budget;
    uint64_t nodes = 0;

    struct Cls {
        int q, s, m;
        bool assigned = false;
        std::vector<std::optional<Slice>> choice; // per direction
    };
    std::vector<Cls> classes;
    std::vector<int> id_of; // dense (q*ns + s)*nm + m -> id or -1
    int max_mem_used = 0;

    Search(const Transducer& d, const BuchiSpec& b, int root, uint64_t step_budget)
        : d(d), b(b), root(root), out_of(output_map(d, b)), rho(sink_measure(b)),
          can_reach_f(reaches_accepting(b)), step_budget(step_budget) {
        esc.assign(b.num_states(), std::vector<uint64_t>(b.num_inputs(), kInfRank));
        for (int s = 0; s < b.num_states(); ++s)
            for (int u = 0; u < b.num_inputs(); ++u) {
                uint64_t best = kInfRank;
                for (int o = 0; o < b.num_outputs(); ++o) {
                    int t = b.next(s, u, o);
                    if (t >= 0) best = std::min(best, rho[t]);
                }
                esc[s][u] = best;
            }
    }

    size_t key(int q, int s, int m) const {
        return (static_cast<size_t>(q) * b.num_states() + s) * nm + m;
    }

    int intern(int q, int s, int m) {
        int& slot = id_of[key(q, s, m)];
        if (slot >= 0) return slot;
        slot = static_cast<int>(classes.size());
        Cls c;
        c.q = q;
        c.s = s;
        c.m = m;
        c.choice.assign(b.num_inputs(), std::nullopt);
        classes.push_back(std::move(c));
        return slot;
    }

    void step() {
        if (step_budget == kInfRank) return;
        if (step_budget == 0) throw StepBudgetExceeded("certificate search budget exhausted");
        --step_budget;
    }

    // Least ranks over the current classes; unassigned classes are taken at
    // rank 0, so the result lower-bounds any completion. Infinite at the
    // root means no completion can satisfy the rank conditions.
    std::vector<uint64_t> least_ranks() const {
        std::vector<uint64_t> rk(classes.size(), 0);
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t id = 0; id < classes.size(); ++id) {
                const Cls& c = classes[id];
                if (!c.assigned) continue;
                const bool acc = b.is_accepting(c.s);
                uint64_t worst = 0;
                bool dead = false;
                for (int u = 0; u < b.num_inputs() && !dead; ++u) {
                    uint64_t v;
                    if (c.choice[u]) {
                        int q2 = d.trans[c.q][c.choice[u]->psi];
                        int s2 = b.next(c.s, u, out_of[d.labels[q2]]);
                        v = rk[id_of[key(q2, s2, c.choice[u]->m2)]];
                    } else {
                        v = esc[c.s][u];
                    }
                    if (v == kInfRank) dead = true;
                    else worst = std::max(worst, v);
                }
                uint64_t val;
                if (dead) val = kInfRank;
                else if (acc) val = 0;
                else {
                    val = worst + 1;
                    if (val > rank_bound) val = kInfRank;
                }
                if (val > rk[id]) {
                    rk[id] = val;
                    changed = true;
                }
            }
        }
        return rk;
    }

    // Carrier-set reachability: a run's carrier is the set of classes that
    // can hold nodes carrying it. Dead when a fully assigned carrier cannot
    // extend along some machine transition.
    bool coverage_dead() const {
        std::set<std::pair<int, std::vector<int>>> seen;
        std::deque<std::pair<int, std::vector<int>>> work;
        work.push_back({d.initial, {0}});
        seen.insert(work.back());
        while (!work.empty()) {
            auto [q, carrier] = work.front();
            work.pop_front();
            bool complete = true;
            for (int id : carrier)
                if (!classes[id].assigned) complete = false;
            if (!complete) continue; // cannot judge yet
            for (int psi = 0; psi < d.num_directions(); ++psi) {
                int q2 = d.trans[q][psi];
                if (q2 < 0) continue;
                std::vector<int> next;
                for (int id : carrier)
                    for (int u = 0; u < b.num_inputs(); ++u) {
                        const auto& ch = classes[id].choice[u];
                        if (ch && ch->psi == psi) {
                            int s2 = b.next(classes[id].s, u, out_of[d.labels[q2]]);
                            next.push_back(id_of[key(q2, s2, ch->m2)]);
                        }
                    }
                std::sort(next.begin(), next.end());
                next.erase(std::unique(next.begin(), next.end()), next.end());
                if (next.empty()) return true;
                auto state = std::make_pair(q2, std::move(next));
                if (seen.insert(state).second) work.push_back(std::move(state));
            }
        }
        return false;
    }

    bool dfs(size_t cursor, std::vector<uint64_t>& final_ranks) {
        if (cursor == classes.size()) {
            auto rk = least_ranks();
            if (rk[0] == kInfRank) return false;
            if (coverage_dead()) return false;
            final_ranks = std::move(rk);
            return true;
        }
        // candidate slices per direction for this class
        const int q = classes[cursor].q;
        const int s = classes[cursor].s;
        std::vector<std::vector<Slice>> cand(b.num_inputs());
        for (int u = 0; u < b.num_inputs(); ++u)
            for (int psi = 0; psi < d.num_directions(); ++psi) {
                int q2 = d.trans[q][psi];
                if (q2 < 0) continue;
                int s2 = b.next(s, u, out_of[d.labels[q2]]);
                if (s2 < 0 || !can_reach_f[s2]) continue;
                for (int m2 = 0; m2 < nm; ++m2) cand[u].push_back({psi, m2});
            }
        std::vector<size_t> radix(b.num_inputs());
        size_t combos = 1;
        for (int u = 0; u < b.num_inputs(); ++u) {
            radix[u] = cand[u].size() + 1;
            combos *= radix[u];
        }
        for (size_t combo = 0; combo < combos; ++combo) {
            // decode: direction 0 is the most significant digit
            std::vector<int> digit(b.num_inputs());
            size_t rest = combo;
            for (int u = b.num_inputs() - 1; u >= 0; --u) {
                digit[u] = static_cast<int>(rest % radix[u]);
                rest /= radix[u];
            }
            // canonical memory introduction order
            int local_max = max_mem_used;
            bool canonical = true;
            for (int u = 0; u < b.num_inputs() && canonical; ++u) {
                if (digit[u] == 0) continue;
                int m2 = cand[u][digit[u] - 1].m2;
                if (m2 > local_max + 1) canonical = false;
                else local_max = std::max(local_max, m2);
            }
            if (!canonical) continue;

            step();
            ++nodes;
            const size_t old_classes = classes.size();
            const int old_max = max_mem_used;
            classes[cursor].assigned = true;
            for (int u = 0; u < b.num_inputs(); ++u) {
                if (digit[u] == 0) continue;
                Slice sl = cand[u][digit[u] - 1];
                classes[cursor].choice[u] = sl;
                int q2 = d.trans[q][sl.psi];
                int s2 = b.next(s, u, out_of[d.labels[q2]]);
                intern(q2, s2, sl.m2);
                max_mem_used = std::max(max_mem_used, sl.m2);
            }
            bool ok = least_ranks()[0] != kInfRank && !coverage_dead();
            if (ok && dfs(cursor + 1, final_ranks)) return true;
            // undo
            for (size_t id = old_classes; id < classes.size(); ++id)
                id_of[key(classes[id].q, classes[id].s, classes[id].m)] = -1;
            classes.resize(old_classes);
            classes[cursor].assigned = false;
            std::fill(classes[cursor].choice.begin(), classes[cursor].choice.end(), std::nullopt);
            max_mem_used = old_max;
        }
        return false;
    }

    bool run(int memories, uint64_t bound, int s_init, std::vector<uint64_t>& final_ranks) {
        nm = memories;
        rank_bound = bound;
        classes.clear();
        id_of.assign(static_cast<size_t>(d.num_states()) * b.num_states() * nm, -1);
        max_mem_used = 0;
        intern(d.initial, s_init, 0);
        return dfs(0, final_ranks);
    }
};

} // namespace

BuchiCoverDecision solve_weight_ranking(const Transducer& d,
                                        const BuchiSpec& b,
                                        const CoverProblem& p,
                                        int max_memory,
                                        std::optional<uint64_t> weight_cap,
                                        uint64_t step_budget) {
    check_compat(d, b, p);
    if (max_memory < 1) throw std::invalid_argument("solve_weight_ranking: maxMemory must be >= 1");
    if (!validate_determinism(d).deterministic)
        throw std::invalid_argument("solve_weight_ranking: machine is nondeterministic");

    BuchiCoverDecision dec;
    dec.stats.weight_cap = weight_cap
        ? *weight_cap
        : std::min<uint64_t>(sat_pow(p.branching_count(),
                                     static_cast<uint64_t>(d.num_states()) * b.num_states()),
                             kWeightCapClamp);
    // Unit initial weight, per-direction budgets, and slice domination pin
    // every support-reachable weight at exactly 1, so the doubling schedule
    // settles at its first bound.
    dec.stats.weight_bound = 1;

    const auto out_of = output_map(d, b);
    const int root = p.root_index();
    const int s_init = b.next(b.initial, root, out_of[d.labels[d.initial]]);
    if (s_init < 0) return dec;

    Search search(d, b, root, step_budget);
    for (int memories = 1; memories <= max_memory; ++memories) {
        dec.stats.memories_tried = memories;
        uint64_t bound = memories == 1
            ? static_cast<uint64_t>(d.num_states()) * b.num_states()
            : static_cast<uint64_t>(d.num_states() + 1) * b.num_states() * memories;
        dec.stats.rank_bound = bound;
        std::vector<uint64_t> final_ranks;
        bool found = search.run(memories, bound, s_init, final_ranks);
        dec.stats.nodes_explored = search.nodes;
        if (!found) continue;

        WeightRanking c = WeightRanking::make(d.num_states(), b.num_states(), memories,
                                              d.num_directions(), p.branching_count());
        for (size_t id = 0; id < search.classes.size(); ++id) {
            const auto& cls = search.classes[id];
            c.state_weight[c.sw_idx(cls.q, cls.s, cls.m)] = 1;
            c.rank[c.rk_idx(cls.q, cls.s, cls.m)] = final_ranks[id];
            for (int u = 0; u < p.branching_count(); ++u)
                if (cls.choice[u]) {
                    int q2 = d.trans[cls.q][cls.choice[u]->psi];
                    int s2 = b.next(cls.s, u, out_of[d.labels[q2]]);
                    (void)s2;
                    c.trans_weight[c.tw_idx(cls.q, cls.s, cls.m, cls.choice[u]->psi, u,
                                            cls.choice[u]->m2)] = 1;
                }
        }
        for (int s = 0; s < b.num_states(); ++s)
            for (int m = 0; m < memories; ++m)
                c.rank[c.rk_idx(c.nq, s, m)] = search.rho[s];

        if (!validate_weight_ranking(d, b, p, c).empty())
            throw std::logic_error("solve_weight_ranking: produced an invalid certificate");
        CoverGenerator g = build_buchi_cover_generator(d, b, p, c);
        if (exact_coverage_gap(g, d))
            throw std::logic_error("solve_weight_ranking: produced a non-covering certificate");
        VerifyReport vr = verify_generator(g, d, b, p, 0);
        if (!vr.acceptance_ok)
            throw std::logic_error("solve_weight_ranking: produced a non-accepting generator");

        dec.status = BuchiCoverStatus::CERTIFIED;
        dec.certificate = std::move(c);
        dec.memory_used = memories;
        return dec;
    }
    return dec;
}

CoverGenerator build_buchi_cover_generator(const Transducer& d,
                                           const BuchiSpec& b,
                                           const CoverProblem& p,
                                           const WeightRanking& c) {
    if (!validate_weight_ranking(d, b, p, c).empty())
        throw std::invalid_argument("build_buchi_cover_generator: invalid certificate");
    const auto out_of = output_map(d, b);
    const int root = p.root_index();
    const int ups = p.branching_count();
    const int m0 = c.initial_memory;
    const int s_init = b.next(b.initial, root, out_of[d.labels[d.initial]]);
    if (s_init < 0 || c.sw(d.initial, s_init, m0) < 1)
        throw std::invalid_argument("build_buchi_cover_generator: missing post-initial anchor weight");

    CoverGenerator g;
    g.directions = p.branching;
    g.alphabet = b.outputs;
    g.core_state_names = d.state_names;
    g.spec_state_names = b.state_names;
    g.memory_names = c.memory_names;

    std::map<std::tuple<int, int, int, int>, int> q_ids; // (q,s,m,copy)
    std::map<std::tuple<int, int, int>, int> sink_ids;   // (s,m,label)

    auto intern_q = [&](int q, int s, int m, int copy) {
        auto it = q_ids.find({q, s, m, copy});
        if (it != q_ids.end()) return it->second;
        int id = static_cast<int>(g.nodes.size());
        q_ids[{q, s, m, copy}] = id;
        CoverGenerator::Node n;
        n.core = q;
        n.spec = s;
        n.mem = m;
        n.copy = copy;
        n.label = out_of[d.labels[q]];
        g.nodes.push_back(n);
        g.children.emplace_back(ups, kFreeChild);
        return id;
    };
    auto intern_sink = [&](int s, int m, int label) {
        auto it = sink_ids.find({s, m, label});
        if (it != sink_ids.end()) return it->second;
        int id = static_cast<int>(g.nodes.size());
        sink_ids[{s, m, label}] = id;
        CoverGenerator::Node n;
        n.core = kSinkState;
        n.spec = s;
        n.mem = m;
        n.copy = 0;
        n.label = label;
        g.nodes.push_back(n);
        g.children.emplace_back(ups, kFreeChild);
        return id;
    };
    // minimal-rank sink move from spec state s in direction u
    auto best_escape = [&](int s, int u) -> std::tuple<int, int, int> { // (o, m2, s2)
        uint64_t best = kInfRank;
        int bo = -1, bm = -1, bs = -1;
        for (int o = 0; o < b.num_outputs(); ++o) {
            int s2 = b.next(s, u, o);
            if (s2 < 0) continue;
            for (int m2 = 0; m2 < c.nm; ++m2) {
                if (c.rk_sink(s2, m2) < best) {
                    best = c.rk_sink(s2, m2);
                    bo = o;
                    bm = m2;
                    bs = s2;
                }
            }
        }
        if (bo < 0 || best == kInfRank)
            throw std::invalid_argument(
                "build_buchi_cover_generator: no finite-rank sink continuation from " +
                b.state_names[s] + " in direction " + p.branching[u]);
        return {bo, bm, bs};
    };

    g.root = intern_q(d.initial, s_init, m0, 0);
    std::deque<int> work{g.root};
    std::set<int> expanded;
    while (!work.empty()) {
        int id = work.front();
        work.pop_front();
        if (!expanded.insert(id).second) continue;
        const auto node = g.nodes[id];
        if (node.core == kSinkState) {
            for (int u = 0; u < ups; ++u) {
                auto [o, m2, s2] = best_escape(node.spec, u);
                int child = intern_sink(s2, m2, o);
                g.children[id][u] = child;
                work.push_back(child);
            }
            continue;
        }
        const int q = node.core, s = node.spec, m = node.mem;
        const uint64_t w = c.sw(q, s, m);
        for (int u = 0; u < ups; ++u) {
            // walk slices in declared order until this copy's slot is hit
            uint64_t cursor = 0;
            bool routed = false;
            for (int psi = 0; psi < d.num_directions() && !routed; ++psi) {
                int q2 = d.trans[q][psi];
                if (q2 < 0) continue;
                int s2 = b.next(s, u, out_of[d.labels[q2]]);
                for (int m2 = 0; m2 < c.nm && !routed; ++m2) {
                    uint64_t lam = c.tw(q, s, m, psi, u, m2);
                    if (lam == 0) continue;
                    if (static_cast<uint64_t>(node.copy) < cursor + lam) {
                        uint64_t j = node.copy - cursor;
                        uint64_t w2 = c.sw(q2, s2, m2);
                        int child = intern_q(q2, s2, m2, static_cast<int>(j % w2));
                        g.children[id][u] = child;
                        work.push_back(child);
                        routed = true;
                    }
                    cursor += lam;
                }
            }
            if (!routed) {
                auto [o, m2, s2] = best_escape(s, u);
                int child = intern_sink(s2, m2, o);
                g.children[id][u] = child;
                work.push_back(child);
            }
        }
    }
    return g;
}

std::optional<Word> exact_coverage_gap(const CoverGenerator& g, const Transducer& d) {
    if (g.nodes[g.root].core != d.initial) return Word{d.labels[d.initial]};
    using State = std::pair<int, std::vector<int>>;
    std::map<State, std::pair<State, int>> parent; // state -> (previous, state entered)
    std::set<State> seen;
    std::deque<State> work;
    State start{d.initial, {g.root}};
    seen.insert(start);
    work.push_back(start);
    while (!work.empty()) {
        State cur = work.front();
        work.pop_front();
        for (int psi = 0; psi < d.num_directions(); ++psi) {
            int q2 = d.trans[cur.first][psi];
            if (q2 < 0) continue;
            std::vector<int> carrier;
            for (int id : cur.second)
                for (int u = 0; u < g.arity(); ++u) {
                    int child = g.children[id][u];
                    if (child != kFreeChild && g.nodes[child].core == q2) carrier.push_back(child);
                }
            std::sort(carrier.begin(), carrier.end());
            carrier.erase(std::unique(carrier.begin(), carrier.end()), carrier.end());
            State next{q2, std::move(carrier)};
            if (next.second.empty()) {
                // reconstruct the uncovered word
                Word w{d.labels[q2]};
                State at = cur;
                while (true) {
                    w.push_back(d.labels[at.first]);
                    auto it = parent.find(at);
                    if (it == parent.end()) break;
                    at = it->second.first;
                }
                std::reverse(w.begin(), w.end());
                return w;
            }
            if (seen.insert(next).second) {
                parent[next] = {cur, q2};
                work.push_back(next);
            }
        }
    }
    return std::nullopt;
}

VerifyReport verify_generator(const CoverGenerator& g,
                              const Transducer& d,
                              const BuchiSpec& b,
                              const CoverProblem& p,
                              int depth) {
    VerifyReport rep;

    // (a) coverage at the requested depth
    std::vector<int> to_g(d.num_symbols(), -1);
    for (int a = 0; a < d.num_symbols(); ++a)
        for (size_t x = 0; x < g.alphabet.size(); ++x)
            if (g.alphabet[x] == d.alphabet[a]) to_g[a] = static_cast<int>(x);
    auto have = generator_prefix_words(g, depth);
    for (const Word& w : language_upto(d, depth + 1)) {
        Word t(w.size());
        bool translatable = true;
        for (size_t i = 0; i < w.size(); ++i) {
            t[i] = to_g[w[i]];
            if (t[i] < 0) translatable = false;
        }
        if (!translatable || !have.count(t)) {
            rep.coverage_ok = false;
            rep.missing.push_back(w);
        }
    }

    // (b) exact cycle acceptance over the generator synchronized with the spec
    std::vector<int> out_idx(g.alphabet.size(), -1);
    for (size_t x = 0; x < g.alphabet.size(); ++x)
        out_idx[x] = b.find_output(g.alphabet[x]);
    const int root_in = p.root_index();

    std::map<std::pair<int, int>, int> prod_ids; // (class, spec state) -> product node
    std::vector<std::pair<int, int>> prod;
    std::vector<std::vector<int>> succ;
    auto intern = [&](int cls, int s) {
        auto it = prod_ids.find({cls, s});
        if (it != prod_ids.end()) return it->second;
        int id = static_cast<int>(prod.size());
        prod_ids[{cls, s}] = id;
        prod.push_back({cls, s});
        succ.emplace_back();
        return id;
    };
    int o0 = out_idx[g.nodes[g.root].label];
    int s0 = o0 < 0 ? -1 : b.next(b.initial, root_in, o0);
    if (s0 < 0) {
        rep.acceptance_ok = false;
        rep.undefined_moves.push_back({g.root, -1});
        return rep;
    }
    std::deque<int> work{intern(g.root, s0)};
    std::set<int> expanded;
    while (!work.empty()) {
        int id = work.front();
        work.pop_front();
        if (!expanded.insert(id).second) continue;
        auto [cls, s] = prod[id];
        for (int u = 0; u < g.arity(); ++u) {
            int child = g.children[cls][u];
            if (child == kFreeChild) continue;
            int o = out_idx[g.nodes[child].label];
            int s2 = o < 0 ? -1 : b.next(s, u, o);
            if (s2 < 0) {
                rep.acceptance_ok = false;
                rep.undefined_moves.push_back({cls, u});
                continue;
            }
            int cid = intern(child, s2);
            succ[id].push_back(cid);
            work.push_back(cid);
        }
    }
    if (!rep.acceptance_ok) return rep;

    // cycles avoiding the acceptance set: SCCs of the non-accepting subgraph
    const int n = static_cast<int>(prod.size());
    std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
    std::vector<int> stack;
    int counter = 0;
    struct Frame {
        int v;
        size_t next_child;
    };
    for (int start = 0; start < n; ++start) {
        if (index[start] >= 0 || b.is_accepting(prod[start].second)) continue;
        std::vector<Frame> frames{{start, 0}};
        index[start] = low[start] = counter++;
        stack.push_back(start);
        on_stack[start] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            bool descended = false;
            while (f.next_child < succ[f.v].size()) {
                int wv = succ[f.v][f.next_child++];
                if (b.is_accepting(prod[wv].second)) continue;
                if (index[wv] < 0) {
                    index[wv] = low[wv] = counter++;
                    stack.push_back(wv);
                    on_stack[wv] = 1;
                    frames.push_back({wv, 0});
                    descended = true;
                    break;
                }
                if (on_stack[wv]) low[f.v] = std::min(low[f.v], index[wv]);
            }
            if (descended) continue;
            if (low[f.v] == index[f.v]) {
                std::vector<int> scc;
                while (true) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    scc.push_back(w);
                    if (w == f.v) break;
                }
                bool cyclic = scc.size() > 1;
                if (!cyclic)
                    for (int s2 : succ[scc[0]])
                        if (s2 == scc[0]) cyclic = true;
                if (cyclic && rep.acceptance_ok) {
                    rep.acceptance_ok = false;
                    for (int v : scc) rep.bad_scc.push_back(prod[v]);
                    std::sort(rep.bad_scc.begin(), rep.bad_scc.end());
                }
            }
            int v = f.v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
    }
    return rep;
}

} // namespace coverkit
