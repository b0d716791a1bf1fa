#include "coverkit/json_io.hpp"

#include <fstream>
#include <sstream>

#include "coverkit/errors.hpp"

namespace coverkit {

using nlohmann::json;

namespace {

json parse_or_throw(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

const json& field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw ParseError(std::string("missing field '") + name + "'");
    return *it;
}

std::vector<std::string> string_array(const json& j, const char* name) {
    const json& arr = field(j, name);
    if (!arr.is_array()) throw ParseError(std::string("'") + name + "' must be an array");
    std::vector<std::string> out;
    for (const auto& e : arr) {
        if (!e.is_string()) throw ParseError(std::string("'") + name + "' must hold strings");
        out.push_back(e.get<std::string>());
    }
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t k = i + 1; k < out.size(); ++k)
            if (out[i] == out[k])
                throw ParseError(std::string("duplicate entry '") + out[i] + "' in '" + name + "'");
    return out;
}

uint64_t weight_value(const json& v, const std::string& key) {
    if (!v.is_number_unsigned() && !v.is_number_integer())
        throw ParseError("weight '" + key + "' must be a nonnegative integer");
    auto i = v.get<int64_t>();
    if (i < 0) throw ParseError("weight '" + key + "' must be nonnegative");
    return static_cast<uint64_t>(i);
}

std::vector<std::string> split_key(const std::string& key, size_t parts) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (out.size() + 1 < parts) {
        size_t slash = key.find('/', pos);
        if (slash == std::string::npos) break;
        out.push_back(key.substr(pos, slash - pos));
        pos = slash + 1;
    }
    out.push_back(key.substr(pos));
    if (out.size() != parts)
        throw ParseError("certificate key '" + key + "' must have " + std::to_string(parts) +
                         " components");
    return out;
}

} // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Transducer transducer_from_json(const json& j) {
    Transducer m;
    m.directions = string_array(j, "directions");
    m.alphabet = string_array(j, "alphabet");
    if (m.directions.empty()) throw ParseError("transducer needs at least one direction");
    if (m.alphabet.empty()) throw ParseError("transducer needs a nonempty alphabet");

    const json& states = field(j, "states");
    if (!states.is_array() || states.empty())
        throw ParseError("'states' must be a nonempty array");
    for (const auto& st : states) {
        std::string id = field(st, "id").get<std::string>();
        std::string label = field(st, "label").get<std::string>();
        if (m.find_state(id) >= 0) throw ParseError("duplicate state '" + id + "'");
        int sym = m.find_symbol(label);
        if (sym < 0)
            throw ParseError("state '" + id + "' labeled with undeclared symbol '" + label + "'");
        m.state_names.push_back(id);
        m.labels.push_back(sym);
    }
    std::string init = field(j, "initial").get<std::string>();
    m.initial = m.find_state(init);
    if (m.initial < 0) throw ParseError("initial state '" + init + "' is not declared");

    m.trans.assign(m.num_states(), std::vector<int>(m.num_directions(), -1));
    const json& transitions = field(j, "transitions");
    if (!transitions.is_array()) throw ParseError("'transitions' must be an array");
    for (const auto& tr : transitions) {
        std::string from = field(tr, "from").get<std::string>();
        std::string dir = field(tr, "dir").get<std::string>();
        std::string to = field(tr, "to").get<std::string>();
        int q = m.find_state(from);
        int dd = m.find_direction(dir);
        int t = m.find_state(to);
        if (q < 0) throw ParseError("transition from undeclared state '" + from + "'");
        if (dd < 0) throw ParseError("transition over undeclared direction '" + dir + "'");
        if (t < 0) throw ParseError("transition to undeclared state '" + to + "'");
        if (m.trans[q][dd] >= 0)
            throw ParseError("duplicate transition (" + from + ", " + dir + ")");
        m.trans[q][dd] = t;
    }
    return m;
}

Transducer parse_transducer(const std::string& text) {
    return transducer_from_json(parse_or_throw(text));
}

json transducer_to_json(const Transducer& m) {
    json j;
    j["directions"] = m.directions;
    j["alphabet"] = m.alphabet;
    json states = json::array();
    for (int q = 0; q < m.num_states(); ++q)
        states.push_back({{"id", m.state_names[q]}, {"label", m.alphabet[m.labels[q]]}});
    j["states"] = states;
    j["initial"] = m.state_names[m.initial];
    json transitions = json::array();
    for (int q = 0; q < m.num_states(); ++q)
        for (int d = 0; d < m.num_directions(); ++d)
            if (m.trans[q][d] >= 0)
                transitions.push_back({{"from", m.state_names[q]},
                                       {"dir", m.directions[d]},
                                       {"to", m.state_names[m.trans[q][d]]}});
    j["transitions"] = transitions;
    return j;
}

BuchiSpec buchi_spec_from_json(const json& j) {
    BuchiSpec b;
    b.inputs = string_array(j, "inputs");
    b.outputs = string_array(j, "outputs");
    if (b.inputs.empty() || b.outputs.empty())
        throw ParseError("spec needs nonempty inputs and outputs");
    b.state_names = string_array(j, "states");
    if (b.state_names.empty()) throw ParseError("spec needs at least one state");
    std::string init = field(j, "initial").get<std::string>();
    b.initial = b.find_state(init);
    if (b.initial < 0) throw ParseError("initial spec state '" + init + "' is not declared");
    for (const auto& acc : field(j, "accepting")) {
        int s = b.find_state(acc.get<std::string>());
        if (s < 0) throw ParseError("accepting state is not declared");
        b.accepting.push_back(s);
    }
    std::sort(b.accepting.begin(), b.accepting.end());
    b.accepting.erase(std::unique(b.accepting.begin(), b.accepting.end()), b.accepting.end());

    b.delta.assign(b.num_states(),
                   std::vector<std::vector<int>>(b.num_inputs(),
                                                 std::vector<int>(b.num_outputs(), -1)));
    for (const auto& tr : field(j, "transitions")) {
        std::string from = field(tr, "from").get<std::string>();
        std::string in = field(tr, "input").get<std::string>();
        std::string out = field(tr, "output").get<std::string>();
        std::string to = field(tr, "to").get<std::string>();
        int s = b.find_state(from);
        int t = b.find_state(to);
        int u = -1, o = -1;
        for (size_t i = 0; i < b.inputs.size(); ++i)
            if (b.inputs[i] == in) u = static_cast<int>(i);
        o = b.find_output(out);
        if (s < 0 || t < 0) throw ParseError("spec transition references an undeclared state");
        if (u < 0) throw ParseError("spec transition over undeclared input '" + in + "'");
        if (o < 0) throw ParseError("spec transition over undeclared output '" + out + "'");
        if (b.delta[s][u][o] >= 0)
            throw ParseError("duplicate spec transition (" + from + ", " + in + ", " + out + ")");
        b.delta[s][u][o] = t;
    }
    return b;
}

BuchiSpec parse_buchi_spec(const std::string& text) {
    return buchi_spec_from_json(parse_or_throw(text));
}

json buchi_spec_to_json(const BuchiSpec& b) {
    json j;
    j["inputs"] = b.inputs;
    j["outputs"] = b.outputs;
    j["states"] = b.state_names;
    j["initial"] = b.state_names[b.initial];
    json acc = json::array();
    for (int s : b.accepting) acc.push_back(b.state_names[s]);
    j["accepting"] = acc;
    json transitions = json::array();
    for (int s = 0; s < b.num_states(); ++s)
        for (int u = 0; u < b.num_inputs(); ++u)
            for (int o = 0; o < b.num_outputs(); ++o)
                if (b.delta[s][u][o] >= 0)
                    transitions.push_back({{"from", b.state_names[s]},
                                           {"input", b.inputs[u]},
                                           {"output", b.outputs[o]},
                                           {"to", b.state_names[b.delta[s][u][o]]}});
    j["transitions"] = transitions;
    return j;
}

WeightDistribution parse_weight_distribution(const std::string& text, const Transducer& d) {
    json j = parse_or_throw(text);
    WeightDistribution w;
    w.state_weight.assign(d.num_states(), 0);
    w.trans_weight.assign(d.num_states(), std::vector<uint64_t>(d.num_directions(), 0));
    if (j.contains("stateWeight"))
        for (auto it = j["stateWeight"].begin(); it != j["stateWeight"].end(); ++it) {
            int q = d.find_state(it.key());
            if (q < 0) throw ParseError("stateWeight references unknown state '" + it.key() + "'");
            w.state_weight[q] = weight_value(it.value(), it.key());
        }
    if (j.contains("transWeight"))
        for (auto it = j["transWeight"].begin(); it != j["transWeight"].end(); ++it) {
            auto parts = split_key(it.key(), 2);
            int q = d.find_state(parts[0]);
            int dir = d.find_direction(parts[1]);
            if (q < 0 || dir < 0)
                throw ParseError("transWeight key '" + it.key() + "' does not name a transition");
            if (d.trans[q][dir] < 0)
                throw ParseError("weight on undefined transition '" + it.key() + "'");
            w.trans_weight[q][dir] = weight_value(it.value(), it.key());
        }
    return w;
}

json weight_distribution_to_json(const Transducer& d, const WeightDistribution& w) {
    json j;
    json sw = json::object();
    for (int q = 0; q < d.num_states(); ++q)
        if (w.state_weight[q] != 0) sw[d.state_names[q]] = w.state_weight[q];
    json tw = json::object();
    for (int q = 0; q < d.num_states(); ++q)
        for (int dir = 0; dir < d.num_directions(); ++dir)
            if (w.trans_weight[q][dir] != 0)
                tw[d.state_names[q] + "/" + d.directions[dir]] = w.trans_weight[q][dir];
    j["stateWeight"] = sw;
    j["transWeight"] = tw;
    return j;
}

WeightRanking parse_weight_ranking(const std::string& text, const Transducer& d,
                                   const BuchiSpec& b, const CoverProblem& p) {
    json j = parse_or_throw(text);
    std::vector<std::string> memory = string_array(j, "memory");
    if (memory.empty()) throw ParseError("certificate needs a nonempty memory set");
    WeightRanking c = WeightRanking::make(d.num_states(), b.num_states(),
                                          static_cast<int>(memory.size()), d.num_directions(),
                                          p.branching_count());
    c.memory_names = memory;
    std::string m0 = field(j, "initialMemory").get<std::string>();
    c.initial_memory = -1;
    for (size_t i = 0; i < memory.size(); ++i)
        if (memory[i] == m0) c.initial_memory = static_cast<int>(i);
    if (c.initial_memory < 0) throw ParseError("initialMemory '" + m0 + "' not in the memory set");

    auto mem_index = [&](const std::string& name, const std::string& key) {
        for (size_t i = 0; i < memory.size(); ++i)
            if (memory[i] == name) return static_cast<int>(i);
        throw ParseError("unknown memory '" + name + "' in key '" + key + "'");
    };
    auto spec_index = [&](const std::string& name, const std::string& key) {
        int s = b.find_state(name);
        if (s < 0) throw ParseError("unknown spec state '" + name + "' in key '" + key + "'");
        return s;
    };
    auto state_index = [&](const std::string& name, const std::string& key) {
        int q = d.find_state(name);
        if (q < 0) throw ParseError("unknown state '" + name + "' in key '" + key + "'");
        return q;
    };
    auto ups_index = [&](const std::string& name, const std::string& key) {
        for (size_t i = 0; i < p.branching.size(); ++i)
            if (p.branching[i] == name) return static_cast<int>(i);
        throw ParseError("unknown branching direction '" + name + "' in key '" + key + "'");
    };

    if (j.contains("stateWeight"))
        for (auto it = j["stateWeight"].begin(); it != j["stateWeight"].end(); ++it) {
            auto parts = split_key(it.key(), 3);
            c.state_weight[c.sw_idx(state_index(parts[0], it.key()), spec_index(parts[1], it.key()),
                                    mem_index(parts[2], it.key()))] =
                weight_value(it.value(), it.key());
        }
    if (j.contains("transWeight"))
        for (auto it = j["transWeight"].begin(); it != j["transWeight"].end(); ++it) {
            auto parts = split_key(it.key(), 6);
            int q = state_index(parts[0], it.key());
            int psi = d.find_direction(parts[3]);
            if (psi < 0) throw ParseError("unknown machine direction '" + parts[3] + "'");
            c.trans_weight[c.tw_idx(q, spec_index(parts[1], it.key()),
                                    mem_index(parts[2], it.key()), psi,
                                    ups_index(parts[4], it.key()),
                                    mem_index(parts[5], it.key()))] =
                weight_value(it.value(), it.key());
        }
    if (j.contains("rank"))
        for (auto it = j["rank"].begin(); it != j["rank"].end(); ++it) {
            auto parts = split_key(it.key(), 3);
            int q = parts[0] == "q_bot" ? c.nq : state_index(parts[0], it.key());
            uint64_t r;
            if (it.value().is_string()) {
                if (it.value().get<std::string>() != "inf")
                    throw ParseError("rank '" + it.key() + "' must be an integer or \"inf\"");
                r = kInfRank;
            } else {
                r = weight_value(it.value(), it.key());
            }
            c.rank[c.rk_idx(q, spec_index(parts[1], it.key()), mem_index(parts[2], it.key()))] = r;
        }
    return c;
}

json weight_ranking_to_json(const Transducer& d, const BuchiSpec& b, const CoverProblem& p,
                            const WeightRanking& c) {
    json j;
    j["memory"] = c.memory_names;
    j["initialMemory"] = c.memory_names[c.initial_memory];
    json sw = json::object();
    for (int q = 0; q < c.nq; ++q)
        for (int s = 0; s < c.ns; ++s)
            for (int m = 0; m < c.nm; ++m)
                if (c.sw(q, s, m) != 0)
                    sw[d.state_names[q] + "/" + b.state_names[s] + "/" + c.memory_names[m]] =
                        c.sw(q, s, m);
    json tw = json::object();
    for (int q = 0; q < c.nq; ++q)
        for (int s = 0; s < c.ns; ++s)
            for (int m = 0; m < c.nm; ++m)
                for (int psi = 0; psi < c.npsi; ++psi)
                    for (int u = 0; u < c.nups; ++u)
                        for (int m2 = 0; m2 < c.nm; ++m2)
                            if (c.tw(q, s, m, psi, u, m2) != 0)
                                tw[d.state_names[q] + "/" + b.state_names[s] + "/" +
                                   c.memory_names[m] + "/" + d.directions[psi] + "/" +
                                   p.branching[u] + "/" + c.memory_names[m2]] =
                                    c.tw(q, s, m, psi, u, m2);
    json rk = json::object();
    for (int q = 0; q <= c.nq; ++q)
        for (int s = 0; s < c.ns; ++s)
            for (int m = 0; m < c.nm; ++m) {
                uint64_t r = c.rk(q, s, m);
                if (r == kInfRank) continue;
                std::string qn = q == c.nq ? "q_bot" : d.state_names[q];
                rk[qn + "/" + b.state_names[s] + "/" + c.memory_names[m]] = r;
            }
    j["stateWeight"] = sw;
    j["transWeight"] = tw;
    j["rank"] = rk;
    return j;
}

json generator_to_json(const CoverGenerator& g) {
    json j;
    j["directions"] = g.directions;
    j["alphabet"] = g.alphabet;
    j["root"] = g.root;
    json nodes = json::array();
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        const auto& n = g.nodes[i];
        json e;
        e["id"] = i;
        e["core"] = n.core == kSinkState ? "q_bot" : g.core_state_names[n.core];
        if (n.spec >= 0) e["spec"] = g.spec_state_names[n.spec];
        if (n.mem >= 0) e["mem"] = g.memory_names[n.mem];
        e["copy"] = n.copy;
        e["label"] = g.alphabet[n.label];
        nodes.push_back(e);
    }
    j["nodes"] = nodes;
    json children = json::array();
    for (const auto& row : g.children) {
        json r = json::array();
        for (int child : row)
            if (child == kFreeChild) r.push_back(nullptr);
            else r.push_back(child);
        children.push_back(r);
    }
    j["children"] = children;
    return j;
}

std::string prefix_to_dot(const TreePrefix& t) {
    std::ostringstream os;
    os << "digraph cover {\n  rankdir=TB;\n  node [shape=circle];\n";
    for (size_t n = 0; n < t.node_count(); ++n) {
        os << "  n" << n << " [label=\"" << t.alphabet[t.labels[n]] << "\"";
        if (t.free_fill[n]) os << ", style=dashed";
        os << "];\n";
    }
    for (size_t n = 1; n < t.node_count(); ++n) {
        size_t parent = (n - 1) / t.arity;
        int dir = static_cast<int>((n - 1) % t.arity);
        os << "  n" << parent << " -> n" << n << " [label=\"" << t.directions[dir] << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace coverkit
