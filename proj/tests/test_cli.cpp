// End-to-end tests driving the installed command-line binary.  The test
// runner provides QPFORMS_CLI_PATH (path to the binary) and QPFORMS_DATA_DIR
// (directory with the .form fixtures).

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include <sys/wait.h>

namespace {

struct RunResult {
    int code = -1;
    std::string out;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("QPFORMS_CLI_PATH");
    REQUIRE_MESSAGE(bin != nullptr, "QPFORMS_CLI_PATH not set");
    std::string cmd = std::string(bin) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = out;
    return r;
}

std::string data_file(const std::string& name) {
    const char* dir = std::getenv("QPFORMS_DATA_DIR");
    REQUIRE_MESSAGE(dir != nullptr, "QPFORMS_DATA_DIR not set");
    return std::string(dir) + "/" + name;
}

std::string write_temp(const std::string& name, const std::string& contents) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << contents;
    out.close();
    return path.string();
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("cli solve: zero found, sound exhaustion, budget, refusal") {
    RunResult hit = run_cli("solve " + data_file("pythagoras.form") + " --k 3");
    CHECK(hit.code == 0);
    CHECK(contains(hit.out, "outcome: zero_found"));
    CHECK(contains(hit.out, "witness:"));

    RunResult no = run_cli("solve " + data_file("cubic_124.form") + " --k 3");
    CHECK(no.code == 1);
    CHECK(contains(no.out, "outcome: exhausted_no_liftable"));

    RunResult budget =
        run_cli("solve " + data_file("pythagoras.form") + " --k 3 --max-candidates 2");
    CHECK(budget.code == 3);
    CHECK(contains(budget.out, "outcome: budget_exhausted"));

    RunResult refused = run_cli("solve " + data_file("pythagoras.form") + " --k 63");
    CHECK(refused.code == 4);
    CHECK(contains(refused.out, "refused"));
}

TEST_CASE("cli solve: json record") {
    RunResult r = run_cli("solve " + data_file("pythagoras.form") + " --k 3 --json");
    CHECK(r.code == 0);
    nlohmann::json rec = nlohmann::json::parse(r.out);
    CHECK(rec["command"] == "solve");
    CHECK(rec["outcome"] == "zero_found");
    CHECK(rec["witness"].is_array());
    CHECK(rec["residue_zero_count"].get<long>() >= 1);
}

TEST_CASE("cli lift: smooth point, refusal, arity error") {
    RunResult ok = run_cli("lift " + data_file("pythagoras.form") + " --point 3,4,1");
    CHECK(ok.code == 0);
    CHECK(contains(ok.out, "ok: yes"));
    CHECK(contains(ok.out, "branch: smooth-point"));
    CHECK(contains(ok.out, "coordinate: 0"));

    RunResult bad = run_cli("lift " + data_file("pythagoras.form") + " --point 1,1,1");
    CHECK(bad.code == 3);
    CHECK(contains(bad.out, "ok: no"));
    CHECK(contains(bad.out, "reason:"));

    RunResult arity = run_cli("lift " + data_file("pythagoras.form") + " --point 3,4");
    CHECK(arity.code == 2);
    CHECK(contains(arity.out, "parse error"));
}

TEST_CASE("cli levels and expand") {
    std::string vecs = write_temp("qpforms_cli_vecs.txt",
                                  "1 0 0\n0 1 0\n3 4 5  # an exact zero\n");
    RunResult lv = run_cli("levels " + data_file("pythagoras.form") + " --vectors " + vecs);
    CHECK(lv.code == 0);
    CHECK(contains(lv.out, "0: valuation 0 level 0"));
    CHECK(contains(lv.out, "2: zero"));

    std::string basis = write_temp("qpforms_cli_basis.txt", "1 0 0\n");
    RunResult ex = run_cli("expand " + data_file("pythagoras.form") + " --basis " + basis +
                           " --dir 0,1,0");
    CHECK(ex.code == 0);
    CHECK(contains(ex.out, "j=0"));
    CHECK(contains(ex.out, "j=2"));

    RunResult arity = run_cli("expand " + data_file("pythagoras.form") + " --basis " + basis +
                              " --dir 0,1");
    CHECK(arity.code == 2);
}

TEST_CASE("cli anisotropy: witness and certificate") {
    RunResult yes = run_cli("anisotropy " + data_file("pythagoras.form") + " --k 1 --json");
    CHECK(yes.code == 0);
    nlohmann::json rec = nlohmann::json::parse(yes.out);
    CHECK(rec["primitive_zero_exists"] == true);
    std::vector<long> w = rec["witness"].get<std::vector<long>>();
    REQUIRE(w.size() == 3);
    CHECK((w[0] % 2 != 0 || w[1] % 2 != 0 || w[2] % 2 != 0));
    CHECK((w[0] * w[0] + w[1] * w[1] - w[2] * w[2]) % 2 == 0);

    RunResult no = run_cli("anisotropy " + data_file("quartic_aniso.form") + " --k 4");
    CHECK(no.code == 1);
    CHECK(contains(no.out, "certified: no primitive zero mod p^4"));
}

TEST_CASE("cli bounds: headline value with replay") {
    RunResult r = run_cli("bounds --r3 4 --r2 10 --r1 20 --prime-class 2 --replay");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "class 2: bound 3191 (replay ok)"));
    CHECK(contains(r.out, "cubic-unit-cubes: (4,10,20) -> (3,22,62)"));
    CHECK(contains(r.out, "cubic-generic: (1,37,236) -> (0,37,467)"));
}

TEST_CASE("cli bounds: table across prime classes") {
    RunResult r = run_cli("bounds --r3 2 --r2 0 --r1 0 --prime-class all --json");
    CHECK(r.code == 0);
    nlohmann::json rec = nlohmann::json::parse(r.out);
    REQUIRE(rec["rows"].size() == 5);
    std::map<std::string, long> got;
    for (const auto& row : rec["rows"])
        got[row["class"].get<std::string>()] = row["bound"].get<long>();
    CHECK(got["2"] == 107);
    CHECK(got["3"] == 184);
    CHECK(got["1mod3"] == 119);
    CHECK(got["2mod3"] == 107);
    CHECK(got["any"] == 184);
}

TEST_CASE("cli verify: round trip, tamper detection, garbage input") {
    RunResult r = run_cli("bounds --r3 4 --r2 10 --r1 20 --prime-class 2 --json");
    REQUIRE(r.code == 0);
    nlohmann::json rec = nlohmann::json::parse(r.out);
    nlohmann::json cert = rec["rows"][0];
    CHECK(cert["bound"].get<long>() == 3191);

    std::string good = write_temp("qpforms_cli_cert.json", cert.dump(2));
    RunResult ok = run_cli("verify " + good);
    CHECK(ok.code == 0);
    CHECK(contains(ok.out, "replay: ok (bound 3191)"));

    cert["bound"] = 3190;
    std::string bad = write_temp("qpforms_cli_cert_bad.json", cert.dump(2));
    RunResult fail = run_cli("verify " + bad);
    CHECK(fail.code == 1);
    CHECK(contains(fail.out, "replay: FAILED"));

    std::string garbage = write_temp("qpforms_cli_cert_garbage.json", "not a certificate");
    RunResult parse = run_cli("verify " + garbage);
    CHECK(parse.code == 2);
}

TEST_CASE("cli construct: drivers, stuck exit, misuse") {
    RunResult q = run_cli("construct " + data_file("quartic_12481.form") +
                          " --driver quartic-q2");
    CHECK(q.code == 0);
    CHECK(contains(q.out, "status: zero"));
    CHECK(contains(q.out, "levels-0123-hensel"));
    CHECK(contains(q.out, "witness:"));

    RunResult stuck = run_cli("construct " + data_file("quartic_aniso.form") +
                              " --driver quartic-q2");
    CHECK(stuck.code == 3);
    CHECK(contains(stuck.out, "status: stuck"));
    CHECK(contains(stuck.out, "no rule applies"));

    RunResult c2 = run_cli("construct " + data_file("cubic_sum.form") +
                           " --driver cubic-p2mod3");
    CHECK(c2.code == 0);
    CHECK(contains(c2.out, "unit-cube-line-lift"));

    RunResult c3 = run_cli("construct " + data_file("cubic_p3_123.form") +
                           " --driver cubic-p3 --json");
    CHECK(c3.code == 0);
    nlohmann::json rec = nlohmann::json::parse(c3.out);
    CHECK(rec["status"] == "zero");
    std::vector<std::string> trace = rec["trace"].get<std::vector<std::string>>();
    CHECK(std::find(trace.begin(), trace.end(), "terminal-001-sl") != trace.end());

    RunResult c3stuck = run_cli("construct " + data_file("cubic_p3_12.form") +
                                " --driver cubic-p3");
    CHECK(c3stuck.code == 3);

    RunResult wrongp = run_cli("construct " + data_file("cubic_p3_123.form") +
                               " --driver cubic-p2mod3");
    CHECK(wrongp.code == 3);
    CHECK(contains(wrongp.out, "invalid prime"));

    RunResult aux = run_cli("construct " + data_file("quartic_12481.form") +
                            " --driver quartic-q2 --aux " + data_file("cubic_sum.form"));
    CHECK(aux.code == 3);
    CHECK(contains(aux.out, "not applicable"));

    RunResult bogus = run_cli("construct " + data_file("quartic_12481.form") +
                              " --driver septic-q9");
    CHECK(bogus.code == 2);
    CHECK(contains(bogus.out, "unknown driver"));
}

TEST_CASE("cli parse failures exit with the parse code") {
    RunResult nosub = run_cli("");
    CHECK(nosub.code == 2);

    RunResult badflag = run_cli("solve --frobnicate");
    CHECK(badflag.code == 2);

    std::string broken = write_temp("qpforms_cli_broken.form", "p=2 n=2\n1 4 0\n");
    RunResult badform = run_cli("solve " + broken + " --k 1");
    CHECK(badform.code == 2);
    CHECK(contains(badform.out, "parse error"));

    RunResult missing = run_cli("solve /nonexistent/nowhere.form --k 1");
    CHECK(missing.code == 2);
}
