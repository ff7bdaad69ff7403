#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "sis/runconfig.hpp"

using namespace sis;

namespace {

#ifndef SIS_CLI_PATH
#define SIS_CLI_PATH "sistool"
#endif

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string out_file = "/tmp/sis_cli_out.txt";
    const std::string cmd = std::string(SIS_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = (rc >= 0 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("dilation subcommand: accept, reject, digits") {
    auto q = run_cli("dilation --matrix [[1,1],[1,-1]]");
    CHECK(q.exit_code == 0);
    CHECK(q.output.find("d_A=2") != std::string::npos);

    auto bad = run_cli("dilation --matrix [[2,0],[0,1]]");
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("rejected") != std::string::npos);

    auto three = run_cli("dilation --matrix [[3]]");
    CHECK(three.exit_code == 0);
    CHECK(three.output.find("(0), (1), (2)") != std::string::npos);
}

TEST_CASE("registry list prints the built-in keys") {
    auto r = run_cli("registry list");
    CHECK(r.exit_code == 0);
    for (const char* key : {"haar", "shannon", "hardy-shannon", "journe", "shannon-wavelet"})
        CHECK(r.output.find(key) != std::string::npos);
}

TEST_CASE("spectral subcommand tabulates sigma on a grid") {
    write_file("/tmp/sis_spec.cfg",
               "example = haar\ngrid.min = -1\ngrid.max = 1\ngrid.step = 0.25\nout = /tmp/sis_spec.csv\n");
    auto r = run_cli("spectral -c /tmp/sis_spec.cfg");
    CHECK(r.exit_code == 0);
    const std::string csv = slurp("/tmp/sis_spec.csv");
    CHECK(csv.find("xi,sigma") != std::string::npos);
    CHECK(csv.find("0,1\n") != std::string::npos);  // sigma(0) = 1
    int rows = 0;
    for (char c : csv) rows += (c == '\n');
    CHECK(rows == 10);  // header + 9 grid points
}

TEST_CASE("criteria subcommand: expected failure matches its label (exit 0)") {
    write_file("/tmp/sis_crit.cfg",
               "example = hardy-shannon\nG = all\nseed = 42\nprobe.samples = 3000\n"
               "out = /tmp/sis_crit.json\ndeterministic = true\n");
    auto r = run_cli("criteria -c /tmp/sis_crit.cfg");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("consensus: FAIL") != std::string::npos);
    const std::string json = slurp("/tmp/sis_crit.json");
    CHECK(json.find("\"ground_truth\": \"incomplete\"") != std::string::npos);
    CHECK(json.find("\"match\": true") != std::string::npos);
    CHECK(json.find("timestamp") == std::string::npos);  // deterministic
}

TEST_CASE("criteria subcommand: deliberate mislabel exits 1") {
    write_file("/tmp/sis_bad.cfg",
               "example = hardy-shannon\nG = all\nlabel = complete\nseed = 42\n"
               "probe.samples = 3000\nout = /tmp/sis_bad.json\ndeterministic = true\n");
    auto r = run_cli("criteria -c /tmp/sis_bad.cfg");
    CHECK(r.exit_code == 1);
}

TEST_CASE("criteria subcommand: hypothesis violation exits 2") {
    write_file("/tmp/sis_hyp.cfg",
               "example = shannon\nG = interval(-1,1)\nseed = 42\nprobe.samples = 3000\n"
               "out = /tmp/sis_hyp.json\ndeterministic = true\n");
    auto r = run_cli("criteria -c /tmp/sis_hyp.cfg");
    CHECK(r.exit_code == 2);
}

TEST_CASE("criteria reports are byte-identical for identical config and seed") {
    write_file("/tmp/sis_det.cfg",
               "example = haar\nseed = 42\nprobe.samples = 3000\ndeterministic = true\n");
    auto a = run_cli("criteria -c /tmp/sis_det.cfg --out /tmp/sis_det_a.json");
    auto b = run_cli("criteria -c /tmp/sis_det.cfg --out /tmp/sis_det_b.json");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    CHECK(slurp("/tmp/sis_det_a.json") == slurp("/tmp/sis_det_b.json"));
    CHECK(!slurp("/tmp/sis_det_a.json").empty());
}

TEST_CASE("csv format emits per-criterion traces") {
    write_file("/tmp/sis_csv.cfg",
               "example = shannon\nseed = 42\nprobe.samples = 3000\nformat = csv\n"
               "out = /tmp/sis_csv.json\ndeterministic = true\n");
    auto r = run_cli("criteria -c /tmp/sis_csv.cfg");
    CHECK(r.exit_code == 0);
    const std::string trace = slurp("/tmp/sis_csv.C3_cesaro.csv");
    CHECK(trace.find("criterion,j,eps,value,se,denom") != std::string::npos);
    CHECK(trace.find("C3_cesaro,0,") != std::string::npos);
}

TEST_CASE("wavelet subcommand") {
    write_file("/tmp/sis_wav.cfg",
               "example = shannon-wavelet\nseed = 42\nprobe.samples = 3000\n"
               "out = /tmp/sis_wav.json\ndeterministic = true\n");
    auto r = run_cli("wavelet -c /tmp/sis_wav.cfg");
    CHECK(r.exit_code == 0);
    const std::string json = slurp("/tmp/sis_wav.json");
    CHECK(json.find("\"calderon\"") != std::string::npos);
    CHECK(json.find("\"PASS\"") != std::string::npos);

    write_file("/tmp/sis_wavp.cfg",
               "example = shannon-wavelet-perturbed\nseed = 42\nprobe.samples = 3000\n"
               "out = /tmp/sis_wavp.json\ndeterministic = true\n");
    auto p = run_cli("wavelet -c /tmp/sis_wavp.cfg");
    CHECK(p.exit_code == 0);  // failure is the declared expectation
    CHECK(slurp("/tmp/sis_wavp.json").find("\"verdict\": \"FAIL\"") != std::string::npos);
}

TEST_CASE("kernel backend flag and probe overrides") {
    write_file("/tmp/sis_k.cfg", "example = haar\nseed = 42\nprobe.samples = 3000\ndeterministic = true\n");
    auto r = run_cli("--kernels scalar criteria -c /tmp/sis_k.cfg --samples 2000 --jmax 30 "
                     "--out /tmp/sis_k.json");
    CHECK(r.exit_code == 0);
    const std::string json = slurp("/tmp/sis_k.json");
    CHECK(json.find("\"kernels\": \"scalar\"") != std::string::npos);
    CHECK(json.find("\"samples\": 2000") != std::string::npos);
    CHECK(json.find("\"jmax\": 30") != std::string::npos);
}

TEST_CASE("config round trip") {
    RunConfig c;
    c.example = "hardy-shannon";
    c.G = "halfspace(0,0)";
    c.label_complete = true;
    c.seed = 1234;
    c.probe_jmax = 30;
    c.probe_samples = 5000;
    c.probe_epsilon = 1e-3;
    c.quad_rel_tol = 1e-10;
    c.grid_min = -2.0;
    c.grid_max = 2.0;
    c.grid_step = 0.125;
    c.wavelet_jrange = 20;
    c.out = "report.json";
    c.format = "csv";
    c.deterministic = true;
    const RunConfig back = RunConfig::parse(c.serialize());
    CHECK(back == c);
    CHECK(back.hash_hex() == c.hash_hex());

    // registry example configs round trip too
    for (const char* key : {"haar", "shannon", "bspline:2", "quincunx-shannon"}) {
        RunConfig rc;
        rc.example = key;
        CHECK(RunConfig::parse(rc.serialize()) == rc);
    }
}

TEST_CASE("config rejects unknown keys and malformed values") {
    CHECK_THROWS(RunConfig::parse("example = haar\nbogus = 1\n"));
    CHECK_THROWS(RunConfig::parse("example = haar\nprobe.jmax = abc\n"));
    CHECK_THROWS(RunConfig::parse("example = haar\ndilation = [[2.5]]\n"));
    CHECK_THROWS(RunConfig::parse("example = haar\nformat = xml\n"));
}
