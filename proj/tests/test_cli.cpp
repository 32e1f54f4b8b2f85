// End-to-end checks of the qprod binary: exit codes, output formats, and
// determinism. The binary path and fixture directory come from the build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

RunResult run_cli(const std::string& args) {
    const std::string out_file =
        std::string("/tmp/qprod_cli_out_") + std::to_string(::rand()) + ".txt";
    const std::string cmd = std::string(QPROD_CLI_PATH) + " " + args + " > " +
                            shell_quote(out_file) + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(out_file);
    std::ostringstream os;
    os << in.rdbuf();
    r.out = os.str();
    std::remove(out_file.c_str());
    return r;
}

std::string fixture(const std::string& name) {
    return std::string(QPROD_FIXTURE_DIR) + "/" + name;
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

std::size_t count_occurrences(const std::string& s, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = s.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

} // namespace

TEST_CASE("spectrum: canonical well emits bound and resonance rows for both families") {
    const RunResult r = run_cli("spectrum --potential " + fixture("well.json") +
                                " --region -10,10,-6,6");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("kind,family,re_z,im_z,re_E,im_E,residual\n", 0) == 0);
    CHECK(count_occurrences(r.out, "Bound,right-in") == 2);
    CHECK(count_occurrences(r.out, "AntiBound,right-out") == 2);
    CHECK(count_occurrences(r.out, "Resonance,right-in") >= 4);
}

TEST_CASE("spectrum: free potential yields an empty spectrum, exit 0") {
    const RunResult r = run_cli("spectrum --potential " + fixture("free.json") +
                                " --region 0.5,9,-5,-0.001");
    CHECK(r.exit_code == 0);
    CHECK(count_lines(r.out) == 1); // header only
}

TEST_CASE("spectrum: malformed potential file exits 3") {
    const RunResult r = run_cli("spectrum --potential " + fixture("malformed.json") +
                                " --region 0.5,9,-5,-0.001");
    CHECK(r.exit_code == 3);
    const RunResult missing =
        run_cli("spectrum --potential /nonexistent.json --region 0.5,9,-5,-0.001");
    CHECK(missing.exit_code == 3);
}

TEST_CASE("usage errors exit 1") {
    const RunResult r = run_cli("spectrum --region 0,1,0,1");
    CHECK(r.exit_code == 1);
    const RunResult bad = run_cli("product --potential " + fixture("well.json") +
                                  " --state-a nope:0 --state-b bound:0");
    CHECK(bad.exit_code == 1);
}

TEST_CASE("determinism: identical runs produce byte-identical output") {
    const std::string args = "spectrum --potential " + fixture("well.json") +
                             " --region -10,10,-6,-0.001 --family in";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("figure: SVG carries the wedge and flags the divergent resonances") {
    const RunResult r = run_cli("figure --potential " + fixture("well.json") +
                                " --region -24,24,-6,6 --format svg --wedge res:1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("<svg") != std::string::npos);
    CHECK(r.out.find("class=\"wedge\"") != std::string::npos);
    // the wedge anchored at z2 contains exactly the four lowest resonances
    std::size_t divergent_res = 0;
    std::size_t pos = 0;
    while ((pos = r.out.find("data-kind=\"Resonance\"", pos)) != std::string::npos) {
        const std::size_t end = r.out.find('>', pos);
        const std::string tag = r.out.substr(pos, end - pos);
        if (tag.find("data-divergent=\"true\"") != std::string::npos) ++divergent_res;
        pos = end;
    }
    CHECK(divergent_res == 4);
}

TEST_CASE("figure: empty spectrum still yields an axes-only SVG") {
    const RunResult r = run_cli("figure --potential " + fixture("free.json") +
                                " --region 0.5,9,-5,-0.001 --format svg");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("<svg") != std::string::npos);
    CHECK(r.out.find("data-kind") == std::string::npos);
}

TEST_CASE("figure CSV mode agrees with spectrum CSV row-for-row") {
    const std::string tail = " --potential " + fixture("well.json") + " --region -10,10,-6,6";
    const RunResult fig = run_cli("figure" + tail + " --format csv");
    const RunResult spec = run_cli("spectrum" + tail);
    CHECK(fig.exit_code == 0);
    CHECK(fig.out == spec.out);
}

TEST_CASE("product: bound pair reports Zero with a residual") {
    const RunResult r = run_cli("product --potential " + fixture("well.json") +
                                " --state-a bound:0 --state-b bound:1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("Zero (residual") != std::string::npos);
}

TEST_CASE("regint: lower imaginary axis is divergent") {
    const RunResult r = run_cli("regint --k 0,-1 --lambda-seq 1e-2,1e-3");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("k_re,k_im,lambda,j_re,j_im,classification\n", 0) == 0);
    CHECK(count_occurrences(r.out, "Divergent") == 2);
}

TEST_CASE("table: tag matrix over the reference configuration") {
    const RunResult r = run_cli("table --potential " + fixture("table_fixture.json") +
                                " --region 0.5,9,-3,-0.001");
    CHECK(r.exit_code == 0);
    CHECK(count_lines(r.out) == 9); // header + 8 states
    CHECK(r.out.find("KroneckerDelta") != std::string::npos);
    CHECK(r.out.find("DiracDelta") != std::string::npos);
    CHECK(r.out.find("Divergent") != std::string::npos);
}

TEST_CASE("verify: canonical well passes the battery") {
    const RunResult r = run_cli("verify --potential " + fixture("well.json") +
                                " --region -10,10,-6,-0.001");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
    CHECK(count_occurrences(r.out, "[PASS]") >= 5);
}

TEST_CASE("atomic output: --out file is written completely") {
    const std::string out = "/tmp/qprod_cli_spectrum.csv";
    std::remove(out.c_str());
    const RunResult r = run_cli("spectrum --potential " + fixture("well.json") +
                                " --region 0.5,9,-5,-0.001 --out " + out);
    CHECK(r.exit_code == 0);
    std::ifstream in(out);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    CHECK(os.str().rfind("kind,family", 0) == 0);
    std::remove(out.c_str());
}
