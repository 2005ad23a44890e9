// The command-line driver: subcommand behavior, the exit-code contract, and
// machine-readable reports.  Each test shells out to the built binary the way
// a user would, so argument parsing and file I/O are exercised for real.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "ffot/axioms.hpp"
#include "ffot/encoders.hpp"
#include "ffot/machine_io.hpp"
#include "ffot/printer.hpp"
#include "ffot/structure_io.hpp"
#include "ffot/tm_io.hpp"
#include "testgen.hpp"

using namespace ffot;

namespace {

struct RunResult {
    int code = -1;
    std::string out;  // stdout and stderr combined
};

// Shell out to the driver; arguments are single-quoted so spaces and empty
// strings survive.  A leading "ENV=val " prefix can ride along in `env`.
RunResult run_cli(const std::vector<std::string>& args, const std::string& env = "") {
    std::string cmd = env + std::string(FFOT_CLI_PATH);
    for (const std::string& a : args) cmd += " '" + a + "'";
    cmd += " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string sample(const std::string& file) {
    return std::string(FFOT_SOURCE_DIR) + "/samples/" + file;
}

// scratch directory for files the tests generate and read back
std::string scratch(const std::string& file) {
    static std::filesystem::path dir = [] {
        auto p = std::filesystem::temp_directory_path() / "ffot_cli_tests";
        std::filesystem::create_directories(p);
        return p;
    }();
    return (dir / file).string();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("axioms subcommand prints the generator output verbatim") {
    struct Case {
        const char* id;
        std::vector<Formula> want;
    };
    Vocabulary rfc = testgen::rfc_vocab();
    std::vector<Case> cases = {{"eq", equality_axioms(rfc)},
                               {"psa", peano_successor_axioms()},
                               {"psa_f", finite_peano_axioms()},
                               {"dof", dense_ordered_field_axioms()},
                               {"dof_f", finite_dof_axioms()}};
    for (const Case& c : cases) {
        CAPTURE(c.id);
        RunResult r = run_cli({"axioms", c.id});
        REQUIRE(r.code == 0);
        std::vector<std::string> got = lines_of(r.out);
        REQUIRE(got.size() == c.want.size());
        for (size_t i = 0; i < got.size(); ++i)
            CHECK(got[i] == print_sentence(c.want[i]));
    }

    CHECK(run_cli({"axioms", "nonsense"}).code == 2);
}

TEST_CASE("build then check-model closes the loop") {
    std::string file = scratch("psa3.structure");
    REQUIRE(run_cli({"build", "psa_f", "3", "--out", file}).code == 0);

    SECTION("the written file satisfies its own axiom set") {
        RunResult r = run_cli({"check-model", file, "--axioms", "psa_f"});
        CHECK(r.code == 0);
        CHECK(r.out.find("all sentences hold") != std::string::npos);
    }

    SECTION("a broken structure is falsified with a witness") {
        // break the successor chain: make S constant, violating injectivity
        FiniteStructure A = read_structure(read_text_file(file), psa_f_vocab());
        auto& table = A.function_tables[A.vocab.function_index("S")];
        for (int& v : table) v = 0;
        std::string bad = scratch("psa3_broken.structure");
        write_text_file(bad, write_structure(A));

        RunResult r = run_cli({"check-model", bad, "--axioms", "psa_f"});
        CHECK(r.code == 1);
        CHECK(r.out.find("FALSE") != std::string::npos);
        CHECK(r.out.find("fails at") != std::string::npos);
    }

    SECTION("a malformed file is an input error") {
        std::string bad = scratch("garbage.structure");
        write_text_file(bad, "domain banana\n");
        RunResult r = run_cli({"check-model", bad, "--axioms", "psa_f"});
        CHECK(r.code == 2);
        CHECK(r.out.find("error") != std::string::npos);
    }

    SECTION("dof_f structures pass their axioms too") {
        std::string f2 = scratch("dof2.structure");
        REQUIRE(run_cli({"build", "dof_f", "2", "--out", f2}).code == 0);
        CHECK(run_cli({"check-model", f2, "--axioms", "dof_f"}).code == 0);
    }
}

TEST_CASE("compute resolves declared inputs and encoded words") {
    std::string machine = sample("fixpoint.machine");

    RunResult pos = run_cli({"compute", machine, "--input", "I_pos", "--max-size", "3"});
    CHECK(pos.code == 0);
    CHECK(pos.out.find("output O_pos") != std::string::npos);

    RunResult neg = run_cli({"compute", machine, "--input", "I_neg", "--max-size", "3"});
    CHECK(neg.code == 0);
    CHECK(neg.out.find("output O_neg") != std::string::npos);

    SECTION("a compiled machine decides words through the same door") {
        std::string compiled = scratch("parity.machine");
        REQUIRE(run_cli({"compile-tm", sample("parity.tmspec"), "--finite", "--out",
                         compiled})
                    .code == 0);

        RunResult acc = run_cli({"compute", compiled, "--word", "0", "--max-size", "3"});
        CHECK(acc.code == 0);
        CHECK(acc.out.find("output accept") != std::string::npos);

        // an undersized bound cannot support any model: unknown
        RunResult unk = run_cli({"compute", compiled, "--word", "11", "--max-size", "2"});
        CHECK(unk.code == 4);
        CHECK(unk.out.find("unknown") != std::string::npos);
    }

    SECTION("missing input selector is a usage error") {
        CHECK(run_cli({"compute", machine}).code == 2);
    }
}

TEST_CASE("min-size prints a size or none") {
    RunResult none = run_cli({"min-size", "--axioms", "eq", "--axioms", "psa",
                              "--max", "4"});
    CHECK(none.code == 4);
    CHECK(none.out.find("none") != std::string::npos);

    RunResult some = run_cli({"min-size", "--axioms", "psa_f", "--max", "3"});
    CHECK(some.code == 0);
    CHECK(some.out.find("size 2") != std::string::npos);
}

TEST_CASE("find-models counts per size and respects flags") {
    RunResult r = run_cli({"find-models", "--axioms", "psa_f", "--min-size", "1",
                           "--max-size", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("size 1: 0 models") != std::string::npos);
    CHECK(r.out.find("size 2: 2 models") != std::string::npos);
    CHECK(r.out.find("size 3: 8 models") != std::string::npos);
    CHECK(r.out.find("total: 10 models") != std::string::npos);

    SECTION("--print dumps structure files that parse back") {
        RunResult p = run_cli({"find-models", "--axioms", "psa_f", "--min-size", "2",
                               "--max-size", "2", "--print"});
        REQUIRE(p.code == 0);
        size_t at = p.out.find("domain 2");
        REQUIRE(at != std::string::npos);
        // the tail of the output is a sequence of structure files; read one
        size_t end = p.out.find("\n\n", at);
        std::string text = p.out.substr(at, end == std::string::npos
                                                ? std::string::npos
                                                : end - at);
        FiniteStructure A = read_structure(text, psa_f_vocab());
        CHECK(A.size == 2);
    }

    SECTION("--limit stops early") {
        RunResult l = run_cli({"find-models", "--axioms", "psa_f", "--min-size", "1",
                               "--max-size", "3", "--limit", "3"});
        CHECK(l.code == 0);
        CHECK(l.out.find("total: 3 models") != std::string::npos);
        CHECK(l.out.find("stopped at --limit") != std::string::npos);
    }

    SECTION("an empty range is a usage error") {
        CHECK(run_cli({"find-models", "--axioms", "psa_f", "--min-size", "3",
                       "--max-size", "1"})
                  .code == 2);
    }
}

TEST_CASE("validate passes the shipped machine and flags a broken one") {
    RunResult ok = run_cli({"validate", sample("fixpoint.machine"), "--max-size", "3"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("well-defined") != std::string::npos);

    // two outputs that can hold together: the second output is implied by
    // the first whenever R is invariant, so a shared model exists
    Machine m = read_machine(read_text_file(sample("fixpoint.machine")));
    m.outputs[1] = {"O_also", {parse_sentence("R(f(f(c)))", m.vocab)}};
    std::string bad = scratch("overlapping.machine");
    write_text_file(bad, write_machine(m));

    RunResult broken = run_cli({"validate", bad, "--max-size", "3"});
    CHECK(broken.code == 1);
    CHECK(broken.out.find("violation") != std::string::npos);
    CHECK(broken.out.find("NOT well-defined") != std::string::npos);
}

TEST_CASE("compile subcommands reproduce the library compilers byte for byte") {
    SECTION("deterministic, finite and infinite variants") {
        TmSpec parity = read_tm_file(sample("parity.tmspec"));
        for (bool infinite : {false, true}) {
            CAPTURE(infinite);
            std::string out = scratch("compiled.machine");
            std::vector<std::string> args = {"compile-tm", sample("parity.tmspec"),
                                             infinite ? "--infinite" : "--finite",
                                             "--out", out};
            REQUIRE(run_cli(args).code == 0);
            Machine want =
                infinite ? tm_to_ffot_infinite(parity).machine
                         : tm_to_ffot_finite(parity).machine;
            CHECK(read_text_file(out) == write_machine(want));
        }
    }

    SECTION("nondeterministic pair") {
        std::string out = scratch("pair.machine");
        REQUIRE(run_cli({"compile-ntm-pair", sample("guess_one.tmspec"),
                         sample("all_zeros.tmspec"), "--out", out})
                    .code == 0);
        Machine want = ntm_pair_to_ffot(read_tm_file(sample("guess_one.tmspec")),
                                        read_tm_file(sample("all_zeros.tmspec")))
                           .machine;
        CHECK(read_text_file(out) == write_machine(want));
    }

    SECTION("a nondeterministic spec cannot compile deterministically") {
        RunResult r = run_cli({"compile-tm", sample("guess_one.tmspec")});
        CHECK(r.code == 2);
        CHECK(r.out.find("deterministic") != std::string::npos);
    }
}

TEST_CASE("simulate runs both machine flavors") {
    RunResult even = run_cli({"simulate", sample("parity.tmspec"), "101"});
    CHECK(even.code == 0);
    CHECK(even.out.find("accepted after 4 steps") != std::string::npos);

    RunResult odd = run_cli({"simulate", sample("parity.tmspec"), "1"});
    CHECK(odd.code == 1);
    CHECK(odd.out.find("rejected") != std::string::npos);

    RunResult path = run_cli({"simulate", sample("guess_one.tmspec"), "001"});
    CHECK(path.code == 0);
    CHECK(path.out.find("shortest path 3 steps") != std::string::npos);

    RunResult stuck = run_cli({"simulate", sample("guess_one.tmspec"), "000"});
    CHECK(stuck.code == 1);
    CHECK(stuck.out.find("no accepting path") != std::string::npos);

    // the empty word rides as an empty positional argument
    RunResult empty = run_cli({"simulate", sample("parity.tmspec"), ""});
    CHECK(empty.code == 0);
}

TEST_CASE("reports are line-delimited and deterministic across jobs") {
    std::string compiled = scratch("parity_report.machine");
    REQUIRE(run_cli({"compile-tm", sample("parity.tmspec"), "--finite", "--out",
                     compiled})
                .code == 0);

    auto payload = [](const std::string& path) {
        // everything except the argv echo and the trailing wall-clock line
        std::vector<std::string> keep;
        for (const std::string& l : lines_of(read_text_file(path)))
            if (l.find("\"argv\"") == std::string::npos &&
                l.find("\"wall_ms\"") == std::string::npos)
                keep.push_back(l);
        return keep;
    };

    std::string rep1 = scratch("report_j1.jsonl");
    std::string rep4 = scratch("report_j4.jsonl");
    REQUIRE(run_cli({"compute", compiled, "--word", "1", "--max-size", "3",
                     "--jobs", "1", "--report", rep1})
                .code == 0);
    REQUIRE(run_cli({"compute", compiled, "--word", "1", "--max-size", "3",
                     "--jobs", "4", "--report", rep4})
                .code == 0);

    std::vector<std::string> p1 = payload(rep1);
    std::vector<std::string> p4 = payload(rep4);
    REQUIRE(p1 == p4);

    // the payload names the verdict, the input digest, and the exit code
    bool saw_output = false, saw_digest = false, saw_exit = false;
    for (const std::string& l : p1) {
        saw_output = saw_output || l.find("\"status\":\"output\"") != std::string::npos;
        saw_digest = saw_digest || l.find("\"digest\"") != std::string::npos;
        saw_exit = saw_exit || l.find("\"exit\":0") != std::string::npos;
    }
    CHECK(saw_output);
    CHECK(saw_digest);
    CHECK(saw_exit);

    // wall clock is the last line, kept out of the comparable payload
    std::vector<std::string> raw = lines_of(read_text_file(rep1));
    REQUIRE_FALSE(raw.empty());
    CHECK(raw.back().find("wall_ms") != std::string::npos);
}

TEST_CASE("the time budget environment variable caps searches") {
    // a zero budget expires before any search starts, so even a theory with
    // easy models can only answer unknown
    RunResult capped = run_cli({"min-size", "--axioms", "psa_f", "--max", "3"},
                               "FFOT_TIME_BUDGET_MS=0 ");
    CHECK(capped.code == 4);
    CHECK(capped.out.find("unknown (time budget exhausted)") != std::string::npos);

    // a search that finds models before the deadline reports them and the cap
    std::string vf = scratch("fat.vocab");
    write_text_file(vf, "function p 2\nfunction q 2\nconstant c\n");
    RunResult cut = run_cli({"find-models", "--vocab", vf, "--axioms", "eq",
                             "--min-size", "3", "--max-size", "3",
                             "--no-symmetry-breaking"},
                            "FFOT_TIME_BUDGET_MS=5 ");
    CHECK(cut.code == 0);
    CHECK(cut.out.find("time budget exhausted") != std::string::npos);
}

TEST_CASE("usage and file errors exit with code 2") {
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"compute", "/nonexistent.machine", "--input", "x"}).code == 2);
    CHECK(run_cli({"min-size", "--max", "3"}).code == 2);  // no vocabulary source
    CHECK(run_cli({}).code == 2);                          // subcommand required
    CHECK(run_cli({"--version"}).code == 0);
}
