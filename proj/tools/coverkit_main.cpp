// coverkit -- decide tree coverability of transducer languages, synthesize
// witness trees, and search/validate certificates for coverability under a
// deterministic Büchi specification.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coverkit/errors.hpp"
#include "coverkit/json_io.hpp"
#include "coverkit/oracle.hpp"
#include "coverkit/ranking.hpp"
#include "coverkit/weights.hpp"

using nlohmann::json;
using namespace coverkit;

namespace {

struct CommonOpts {
    int branching = 0;
    std::vector<std::string> directions;
    std::string root;
    std::string format = "text";
};

void add_branching_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--branching", o.branching, "branching size; directions named u0..u(N-1)");
    cmd->add_option("--directions", o.directions, "explicit branching directions")
        ->delimiter(',');
    cmd->add_option("--root", o.root, "root direction (default: first)");
}

std::vector<std::string> branching_of(const CommonOpts& o) {
    if (!o.directions.empty()) return o.directions;
    if (o.branching > 0) return default_branching(o.branching);
    throw CLI::ValidationError("--branching or --directions is required");
}

std::string root_of(const CommonOpts& o, const std::vector<std::string>& branching) {
    return o.root.empty() ? branching.front() : o.root;
}

uint64_t env_step_budget() {
    const char* v = std::getenv("COVERKIT_STEP_BUDGET");
    if (!v) return kNoStepBudget;
    return std::strtoull(v, nullptr, 10);
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string word_str(const Word& w, const std::vector<std::string>& alphabet) {
    std::string s;
    for (int sym : w) s += alphabet[sym];
    return s;
}

json weights_report(const Transducer& d, const std::vector<WeightViolation>& v) {
    json arr = json::array();
    for (const auto& e : v) {
        json r;
        r["condition"] = to_string(e.condition);
        r["state"] = d.state_names[e.state];
        if (e.dir >= 0) r["dir"] = d.directions[e.dir];
        r["lhs"] = e.lhs;
        r["rhs"] = e.rhs;
        r["message"] = e.message;
        arr.push_back(r);
    }
    return arr;
}

json ranking_report(const Transducer& d, const BuchiSpec& b,
                    const std::vector<RankingViolation>& v) {
    json arr = json::array();
    for (const auto& e : v) {
        json r;
        r["condition"] = to_string(e.condition);
        if (e.q >= 0) r["state"] = e.q == d.num_states() ? "q_bot" : d.state_names[e.q];
        if (e.s >= 0) r["spec"] = b.state_names[e.s];
        r["message"] = e.message;
        arr.push_back(r);
    }
    return arr;
}

int run_cover_solve(const std::string& path, const CommonOpts& o) {
    Transducer d = parse_transducer(read_file(path));
    auto branching = branching_of(o);
    CoverDecision dec = solve_weights(d, static_cast<int>(branching.size()));
    json rep;
    rep["coverable"] = dec.coverable;
    rep["branching"] = branching;
    if (dec.coverable) rep["certificate"] = weight_distribution_to_json(d, *dec.certificate);
    else {
        json trace = json::array();
        for (const auto& step : dec.obstruction)
            trace.push_back({{"state", d.state_names[step.state]},
                             {"forcedWeight", step.forced_weight}});
        rep["obstruction"] = trace;
    }
    if (o.format == "json") emit(rep);
    else {
        std::cout << (dec.coverable ? "coverable" : "not coverable") << " with branching "
                  << branching.size() << "\n";
        if (dec.coverable)
            for (int q = 0; q < d.num_states(); ++q)
                std::cout << "  w(" << d.state_names[q] << ") = "
                          << dec.certificate->state_weight[q] << "\n";
        else
            std::cout << "  obstruction steps: " << dec.obstruction.size() << "\n";
    }
    return dec.coverable ? 0 : 1;
}

int run_cover_check(const std::string& path, const std::string& cert_path, const CommonOpts& o) {
    Transducer d = parse_transducer(read_file(path));
    auto branching = branching_of(o);
    WeightDistribution w = parse_weight_distribution(read_file(cert_path), d);
    auto violations = validate_weights(d, static_cast<int>(branching.size()), w);
    if (o.format == "json") {
        json rep;
        rep["valid"] = violations.empty();
        rep["violations"] = weights_report(d, violations);
        emit(rep);
    } else if (violations.empty()) {
        std::cout << "certificate valid\n";
    } else {
        for (const auto& v : violations)
            std::cout << to_string(v.condition) << ": " << v.message << "\n";
    }
    return violations.empty() ? 0 : 1;
}

int run_cover_tree(const std::string& path, const std::string& cert_path, int depth,
                   const std::string& fill, const CommonOpts& o) {
    Transducer d = parse_transducer(read_file(path));
    auto branching = branching_of(o);
    WeightDistribution w;
    if (!cert_path.empty()) {
        w = parse_weight_distribution(read_file(cert_path), d);
        if (!validate_weights(d, static_cast<int>(branching.size()), w).empty()) {
            std::cerr << "error: certificate is not valid for this branching\n";
            return 1;
        }
    } else {
        CoverDecision dec = solve_weights(d, static_cast<int>(branching.size()));
        if (!dec.coverable) {
            std::cerr << "error: not coverable with branching " << branching.size() << "\n";
            return 1;
        }
        w = *dec.certificate;
    }
    CoverGenerator g = build_cover_generator(d, branching, w);
    int fill_sym = fill.empty() ? d.labels[d.initial] : d.find_symbol(fill);
    if (fill_sym < 0) throw ParseError("fill symbol '" + fill + "' is not in the alphabet");
    TreePrefix t = materialize_prefix(g, depth, fill_sym);
    if (o.format == "dot") std::cout << prefix_to_dot(t);
    else if (o.format == "json") {
        json rep;
        rep["generator"] = generator_to_json(g);
        emit(rep);
    } else {
        std::cout << "generator with " << g.nodes.size() << " classes; prefix depth " << depth
                  << " has " << t.node_count() << " nodes\n";
    }
    return 0;
}

int run_buchi_solve(const std::string& mpath, const std::string& spath, int max_memory,
                    std::optional<uint64_t> weight_cap, const CommonOpts& o) {
    Transducer d = parse_transducer(read_file(mpath));
    BuchiSpec b = parse_buchi_spec(read_file(spath));
    auto branching = branching_of(o);
    CoverProblem p = make_cover_problem(d, branching, root_of(o, branching), b);
    BuchiCoverDecision dec = solve_weight_ranking(d, b, p, max_memory, weight_cap,
                                                  env_step_budget());
    json rep;
    rep["status"] = dec.status == BuchiCoverStatus::CERTIFIED ? "CERTIFIED"
                                                              : "NO_CERTIFICATE_WITHIN_BOUNDS";
    rep["searchStats"] = {{"memoriesTried", dec.stats.memories_tried},
                          {"weightBound", dec.stats.weight_bound},
                          {"weightCap", dec.stats.weight_cap},
                          {"rankBound", dec.stats.rank_bound},
                          {"nodesExplored", dec.stats.nodes_explored}};
    if (dec.status == BuchiCoverStatus::CERTIFIED) {
        rep["memory"] = dec.memory_used;
        rep["certificate"] = weight_ranking_to_json(d, b, p, *dec.certificate);
        rep["generator"] = generator_to_json(build_buchi_cover_generator(d, b, p, *dec.certificate));
    } else {
        rep["note"] = "no certificate within the searched bounds; this is not a refutation "
                      "of coverability";
    }
    if (o.format == "json") emit(rep);
    else {
        std::cout << rep["status"].get<std::string>();
        if (dec.status == BuchiCoverStatus::CERTIFIED)
            std::cout << " with memory " << dec.memory_used;
        std::cout << " (nodes explored: " << dec.stats.nodes_explored << ")\n";
        if (dec.status != BuchiCoverStatus::CERTIFIED)
            std::cout << "note: " << rep["note"].get<std::string>() << "\n";
    }
    return dec.status == BuchiCoverStatus::CERTIFIED ? 0 : 1;
}

int run_buchi_verify(const std::string& mpath, const std::string& spath,
                     const std::string& cert_path, int depth, bool strict_init,
                     const CommonOpts& o) {
    Transducer d = parse_transducer(read_file(mpath));
    BuchiSpec b = parse_buchi_spec(read_file(spath));
    auto branching = branching_of(o);
    CoverProblem p = make_cover_problem(d, branching, root_of(o, branching), b);
    WeightRanking c = parse_weight_ranking(read_file(cert_path), d, b, p);
    auto violations = validate_weight_ranking(d, b, p, c, strict_init);
    json rep;
    rep["valid"] = violations.empty();
    rep["violations"] = ranking_report(d, b, violations);
    bool ok = violations.empty();
    if (ok) {
        CoverGenerator g = build_buchi_cover_generator(d, b, p, c);
        VerifyReport vr = verify_generator(g, d, b, p, depth);
        json v;
        v["coverageOk"] = vr.coverage_ok;
        json missing = json::array();
        for (const auto& w : vr.missing) missing.push_back(word_str(w, d.alphabet));
        v["missing"] = missing;
        v["acceptanceOk"] = vr.acceptance_ok;
        json scc = json::array();
        for (auto [cls, s] : vr.bad_scc)
            scc.push_back({{"class", cls}, {"spec", b.state_names[s]}});
        v["badScc"] = scc;
        rep["verification"] = v;
        ok = vr.coverage_ok && vr.acceptance_ok;
    }
    if (o.format == "json") emit(rep);
    else {
        std::cout << (ok ? "certificate valid; generator verified"
                         : "certificate or generator check failed")
                  << "\n";
        for (const auto& v : violations)
            std::cout << to_string(v.condition) << ": " << v.message << "\n";
    }
    return ok ? 0 : 1;
}

int run_realizable(const std::string& spath, const CommonOpts& o) {
    BuchiSpec b = parse_buchi_spec(read_file(spath));
    auto branching = branching_of(o);
    RealizabilityResult res = solve_realizability(b, branching, root_of(o, branching));
    json rep;
    rep["realizable"] = res.realizable;
    json ranks = json::object();
    for (int s = 0; s < b.num_states(); ++s) {
        if (res.ranks[s] == kInfRank) ranks[b.state_names[s]] = "inf";
        else ranks[b.state_names[s]] = res.ranks[s];
    }
    rep["ranks"] = ranks;
    if (res.root_output >= 0) rep["rootOutput"] = b.outputs[res.root_output];
    if (o.format == "json") emit(rep);
    else std::cout << (res.realizable ? "realizable" : "unrealizable") << "\n";
    return res.realizable ? 0 : 1;
}

int run_oracle_acyclic(const std::string& path, const CommonOpts& o) {
    Transducer d = parse_transducer(read_file(path));
    auto branching = branching_of(o);
    bool ok = oracle_coverable_acyclic(d, static_cast<int>(branching.size()), env_step_budget());
    if (o.format == "json") emit(json{{"coverable", ok}});
    else std::cout << (ok ? "coverable" : "not coverable") << "\n";
    return ok ? 0 : 1;
}

int run_oracle_levels(const std::string& path, int depth, int run_cap, const CommonOpts& o) {
    Transducer d = parse_transducer(read_file(path));
    auto branching = branching_of(o);
    bool ok = oracle_tree_search(d, static_cast<int>(branching.size()), depth, run_cap,
                                 env_step_budget());
    if (o.format == "json") emit(json{{"feasible", ok}, {"depth", depth}});
    else
        std::cout << (ok ? "level profiles feasible" : "no level profile") << " up to depth "
                  << depth << "\n";
    return ok ? 0 : 1;
}

int run_det(const std::string& path, const CommonOpts& o) {
    Transducer d = parse_transducer(read_file(path));
    Transducer det = determinize_transducer(d);
    if (o.format == "text") {
        std::cout << det.num_states() << " states, " << det.num_directions() << " directions\n";
    } else {
        emit(transducer_to_json(det));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coverkit: tree coverability of transducer languages"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string machine, spec, cert, fill;
    int depth = 0, max_memory = 1, run_cap = kDefaultRunCap;
    uint64_t weight_cap_arg = 0;
    bool strict_init = false;

    auto* cover = app.add_subcommand("cover", "simple coverability");
    cover->require_subcommand(1);
    auto* cs = cover->add_subcommand("solve", "decide coverability, emit a certificate");
    cs->add_option("machine", machine)->required();
    add_branching_opts(cs, o);
    cs->add_option("--format", o.format);
    auto* cc = cover->add_subcommand("check", "validate a weight distribution");
    cc->add_option("machine", machine)->required();
    cc->add_option("--cert", cert)->required();
    add_branching_opts(cc, o);
    cc->add_option("--format", o.format);
    auto* ct = cover->add_subcommand("tree", "emit the witness-tree generator / DOT prefix");
    ct->add_option("machine", machine)->required();
    ct->add_option("--cert", cert);
    ct->add_option("--depth", depth)->required();
    ct->add_option("--fill", fill);
    add_branching_opts(ct, o);
    ct->add_option("--format", o.format);

    auto* buchi = app.add_subcommand("buchi", "coverability with a Büchi spec");
    buchi->require_subcommand(1);
    auto* bs = buchi->add_subcommand("solve", "search for a weight-ranking certificate");
    bs->add_option("machine", machine)->required();
    bs->add_option("spec", spec)->required();
    bs->add_option("--max-memory", max_memory);
    bs->add_option("--weight-cap", weight_cap_arg);
    add_branching_opts(bs, o);
    bs->add_option("--format", o.format);
    auto* bv = buchi->add_subcommand("verify", "validate a certificate and verify its generator");
    bv->add_option("machine", machine)->required();
    bv->add_option("spec", spec)->required();
    bv->add_option("--cert", cert)->required();
    bv->add_option("--depth", depth);
    bv->add_flag("--strict-init", strict_init,
                 "anchor the initial weight/rank at the pre-initial spec state");
    add_branching_opts(bv, o);
    bv->add_option("--format", o.format);

    auto* rz = app.add_subcommand("realizable", "decide spec realizability");
    rz->add_option("spec", spec)->required();
    add_branching_opts(rz, o);
    rz->add_option("--format", o.format);

    auto* oracle = app.add_subcommand("oracle", "certificate-free diagnostics");
    oracle->require_subcommand(1);
    auto* oa = oracle->add_subcommand("acyclic", "exact decision for acyclic machines");
    oa->add_option("machine", machine)->required();
    add_branching_opts(oa, o);
    oa->add_option("--format", o.format);
    auto* ol = oracle->add_subcommand("levels", "level-profile feasibility up to a depth");
    ol->add_option("machine", machine)->required();
    ol->add_option("--depth", depth)->required();
    ol->add_option("--run-cap", run_cap);
    add_branching_opts(ol, o);
    ol->add_option("--format", o.format);

    auto* det = app.add_subcommand("det", "determinize a transducer");
    det->add_option("machine", machine)->required();
    det->add_option("--format", o.format);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cs->parsed()) return run_cover_solve(machine, o);
        if (cc->parsed()) return run_cover_check(machine, cert, o);
        if (ct->parsed()) return run_cover_tree(machine, cert, depth, fill, o);
        if (bs->parsed())
            return run_buchi_solve(machine, spec, max_memory,
                                   weight_cap_arg ? std::optional<uint64_t>(weight_cap_arg)
                                                  : std::nullopt,
                                   o);
        if (bv->parsed()) return run_buchi_verify(machine, spec, cert, depth, strict_init, o);
        if (rz->parsed()) return run_realizable(spec, o);
        if (oa->parsed()) return run_oracle_acyclic(machine, o);
        if (ol->parsed()) return run_oracle_levels(machine, depth, run_cap, o);
        if (det->parsed()) return run_det(machine, o);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const StepBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RunCapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
