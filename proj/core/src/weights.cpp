#include "coverkit/weights.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "coverkit/errors.hpp"

namespace coverkit {

namespace {

constexpr uint64_t kSaturated = std::numeric_limits<uint64_t>::max();

uint64_t sat_mul(uint64_t a, uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSaturated / b) return kSaturated;
    return a * b;
}

uint64_t sat_add(uint64_t a, uint64_t b) {
    if (a > kSaturated - b) return kSaturated;
    return a + b;
}

uint64_t ceil_div(uint64_t a, uint64_t b) { return a / b + (a % b != 0); }

} // namespace

const char* to_string(WeightCondition c) {
    switch (c) {
        case WeightCondition::INIT_ONE: return "INIT_ONE";
        case WeightCondition::FANOUT: return "FANOUT";
        case WeightCondition::DOMINATE: return "DOMINATE";
        case WeightCondition::POSITIVE: return "POSITIVE";
    }
    return "?";
}

std::vector<WeightViolation> validate_weights(const Transducer& d,
                                              int branching_count,
                                              const WeightDistribution& w) {
    if (branching_count < 1)
        throw std::invalid_argument("validate_weights: empty branching set");
    if (w.state_weight.size() != static_cast<size_t>(d.num_states()) ||
        w.trans_weight.size() != static_cast<size_t>(d.num_states()))
        throw std::invalid_argument("validate_weights: weight maps do not match the machine");
    for (int q = 0; q < d.num_states(); ++q)
        for (int dir = 0; dir < d.num_directions(); ++dir)
            if (d.trans[q][dir] < 0 && w.trans_weight[q][dir] != 0)
                throw ParseError("weight on undefined transition " + d.state_names[q] + "/" +
                                 d.directions[dir]);

    std::vector<WeightViolation> out;
    const uint64_t ups = static_cast<uint64_t>(branching_count);

    if (w.state_weight[d.initial] != 1) {
        WeightViolation v;
        v.condition = WeightCondition::INIT_ONE;
        v.state = d.initial;
        v.lhs = w.state_weight[d.initial];
        v.rhs = 1;
        v.message = "w(" + d.state_names[d.initial] + ") must be 1";
        out.push_back(v);
    }
    for (int q = 0; q < d.num_states(); ++q) {
        uint64_t total = 0;
        for (int dir = 0; dir < d.num_directions(); ++dir)
            if (d.trans[q][dir] >= 0) total = sat_add(total, w.trans_weight[q][dir]);
        uint64_t budget = sat_mul(ups, w.state_weight[q]);
        if (budget < total) {
            WeightViolation v;
            v.condition = WeightCondition::FANOUT;
            v.state = q;
            v.lhs = budget;
            v.rhs = total;
            v.message = std::to_string(branching_count) + "*w(" + d.state_names[q] +
                        ") < sum of outgoing transition weights";
            out.push_back(v);
        }
        for (int dir = 0; dir < d.num_directions(); ++dir) {
            int t = d.trans[q][dir];
            if (t < 0) continue;
            uint64_t tw = w.trans_weight[q][dir];
            if (tw == 0) {
                WeightViolation v;
                v.condition = WeightCondition::POSITIVE;
                v.state = q;
                v.dir = dir;
                v.lhs = 0;
                v.rhs = 1;
                v.message = "w(" + d.state_names[q] + "," + d.directions[dir] + ") must be positive";
                out.push_back(v);
            }
            if (tw < w.state_weight[t]) {
                WeightViolation v;
                v.condition = WeightCondition::DOMINATE;
                v.state = q;
                v.dir = dir;
                v.lhs = tw;
                v.rhs = w.state_weight[t];
                v.message = "w(" + d.state_names[q] + "," + d.directions[dir] + ") < w(" +
                            d.state_names[t] + ")";
                out.push_back(v);
            }
        }
    }
    return out;
}

uint64_t weight_cap(const Transducer& d, int branching_count) {
    uint64_t cap = 1;
    for (int i = 0; i < d.num_states(); ++i) cap = sat_mul(cap, branching_count);
    return cap;
}

CoverDecision solve_weights(const Transducer& d, int branching_count) {
    if (branching_count < 1)
        throw std::invalid_argument("solve_weights: empty branching set");
    auto det = validate_determinism(d);
    if (!det.deterministic)
        throw std::invalid_argument("solve_weights: machine is nondeterministic; determinize first");

    const uint64_t cap = weight_cap(d, branching_count);
    const uint64_t ups = static_cast<uint64_t>(branching_count);

    std::vector<bool> reach(d.num_states(), false);
    for (int q : reachable_states(d)) reach[q] = true;

    CoverDecision decision;
    std::vector<uint64_t> w(d.num_states(), 1);
    // Kleene iteration from all ones; weights only grow
    while (true) {
        bool changed = false;
        bool broke = false;
        for (int q = 0; q < d.num_states() && !broke; ++q) {
            if (!reach[q] || d.out_degree(q) == 0) continue;
            uint64_t total = 0;
            for (int dir = 0; dir < d.num_directions(); ++dir) {
                int t = d.trans[q][dir];
                if (t >= 0) total = sat_add(total, std::max<uint64_t>(1, w[t]));
            }
            uint64_t need = std::max<uint64_t>(1, ceil_div(total, ups));
            if (need > w[q]) {
                w[q] = need;
                changed = true;
                decision.obstruction.push_back({q, need});
                if (need > cap || (q == d.initial && need > 1)) broke = true;
            }
        }
        if (broke) {
            decision.coverable = false;
            return decision;
        }
        if (!changed) break;
    }
    if (w[d.initial] != 1) { // already caught above; kept as a guard
        decision.coverable = false;
        return decision;
    }

    decision.coverable = true;
    decision.obstruction.clear();
    WeightDistribution cert;
    cert.state_weight = w;
    cert.trans_weight.assign(d.num_states(), std::vector<uint64_t>(d.num_directions(), 0));
    for (int q = 0; q < d.num_states(); ++q)
        for (int dir = 0; dir < d.num_directions(); ++dir) {
            int t = d.trans[q][dir];
            if (t >= 0) cert.trans_weight[q][dir] = std::max<uint64_t>(1, w[t]);
        }
    decision.certificate = std::move(cert);
    return decision;
}

int minimal_branching(const Transducer& d) {
    int hi = std::min(d.num_symbols(), d.max_out_degree());
    hi = std::max(hi, 1);
    for (int k = 1; k <= hi; ++k)
        if (solve_weights(d, k).coverable) return k;
    return hi; // unreachable: k = max out-degree always certifies
}

} // namespace coverkit
