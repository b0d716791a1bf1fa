#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "coverkit/json_io.hpp"
#include "testutil.hpp"

using namespace coverkit;
using namespace coverkit::testutil;

namespace {

struct CliResult {
    int status;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(COVERKIT_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int rc = pclose(pipe);
    return {WEXITSTATUS(rc), out};
}

std::string fx(const char* name) { return fixture_path(name); }

} // namespace

TEST_CASE("cover solve exit codes") {
    CHECK(run_cli("cover solve " + fx("fig1.json") + " --branching 2").status == 0);
    CHECK(run_cli("cover solve " + fx("fig3.json") + " --branching 2").status == 1);
    CHECK(run_cli("cover solve " + fx("fig3.json") + " --branching 3").status == 0);
    CHECK(run_cli("cover solve " + fx("fig2.json") + " --branching 2").status == 0);
}

TEST_CASE("cover check validates the annotated certificate") {
    auto res = run_cli("cover check " + fx("fig4.json") + " --cert " + fx("fig4-weights.json") +
                       " --branching 2");
    CHECK(res.status == 0);
}

TEST_CASE("cover tree emits DOT") {
    auto res = run_cli("cover tree " + fx("fig1.json") +
                       " --branching 2 --depth 4 --format dot");
    CHECK(res.status == 0);
    CHECK(res.out.find("digraph") != std::string::npos);
    CHECK(res.out.find("style=dashed") != std::string::npos);
}

TEST_CASE("buchi solve exit codes and phrasing") {
    auto no = run_cli("buchi solve " + fx("fig2.json") + " " + fx("buchispec.json") +
                      " --branching 2 --max-memory 1");
    CHECK(no.status == 1);
    CHECK(no.out.find("not a refutation") != std::string::npos);

    auto yes = run_cli("buchi solve " + fx("fig2.json") + " " + fx("buchispec.json") +
                       " --branching 2 --max-memory 4");
    CHECK(yes.status == 0);
}

TEST_CASE("buchi verify round-trips a solved certificate") {
    auto solved = run_cli("buchi solve " + fx("fig2.json") + " " + fx("buchispec.json") +
                          " --branching 2 --max-memory 4 --format json");
    REQUIRE(solved.status == 0);
    auto j = nlohmann::json::parse(solved.out);
    std::string cert_path = "cli_cert_roundtrip.json";
    {
        std::ofstream f(cert_path);
        f << j["certificate"].dump(2) << "\n";
    }
    auto verified = run_cli("buchi verify " + fx("fig2.json") + " " + fx("buchispec.json") +
                            " --cert " + cert_path + " --branching 2 --depth 6");
    CHECK(verified.status == 0);
}

TEST_CASE("realizable") {
    CHECK(run_cli("realizable " + fx("buchispec.json") + " --branching 2").status == 0);
}

TEST_CASE("oracle subcommands") {
    CHECK(run_cli("oracle acyclic " + fx("fig1.json") + " --branching 2").status == 0);
    CHECK(run_cli("oracle levels " + fx("fig3.json") + " --branching 2 --depth 3").status == 1);
    CHECK(run_cli("oracle levels " + fx("fig2.json") + " --branching 2 --depth 6").status == 0);
}

TEST_CASE("det output reparses") {
    auto res = run_cli("det " + fx("fig2.json") + " --format json");
    CHECK(res.status == 0);
    Transducer det = parse_transducer(res.out);
    CHECK(validate_determinism(det).deterministic);
}

TEST_CASE("input errors exit with 2") {
    CHECK(run_cli("cover solve /nonexistent.json --branching 2").status == 2);
    CHECK(run_cli("cover solve " + fx("fig1.json")).status == 2); // no branching
}

TEST_CASE("reports are byte-identical across runs") {
    std::vector<std::string> cmds = {
        "cover solve " + fx("fig1.json") + " --branching 2 --format json",
        "cover solve " + fx("fig3.json") + " --branching 2 --format json",
        "buchi solve " + fx("fig2.json") + " " + fx("buchispec.json") +
            " --branching 2 --max-memory 4 --format json",
        "cover tree " + fx("fig4.json") + " --branching 2 --depth 3 --format dot",
    };
    for (const auto& cmd : cmds) {
        auto a = run_cli(cmd);
        auto b = run_cli(cmd);
        CHECK(a.status == b.status);
        CHECK(a.out == b.out);
    }
}
