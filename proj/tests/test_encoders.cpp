#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>
#include <vector>

#include "ffot/encoders.hpp"
#include "ffot/machine_io.hpp"
#include "ffot/model_finder.hpp"
#include "ffot/printer.hpp"
#include "ffot/tm_io.hpp"
#include "naive_eval.hpp"

using namespace ffot;

namespace {

TmSpec load_spec(const std::string& file) {
    return read_tm_file(std::string(FFOT_SOURCE_DIR) + "/samples/" + file);
}

std::vector<std::string> binary_words(int max_len) {
    std::vector<std::string> out{""};
    for (int len = 1; len <= max_len; ++len)
        for (int bits = 0; bits < (1 << len); ++bits) {
            std::string w;
            for (int i = len - 1; i >= 0; --i) w += ((bits >> i) & 1) ? '1' : '0';
            out.push_back(w);
        }
    return out;
}

int count_ones(const std::string& w) {
    int n = 0;
    for (char c : w) n += (c == '1');
    return n;
}

std::vector<std::string> prints(const std::vector<Formula>& fs) {
    std::vector<std::string> out;
    for (const Formula& f : fs) out.push_back(print_sentence(f));
    return out;
}

}  // namespace

TEST_CASE("constant names for states and symbols") {
    TmNames names = compile_names(load_spec("parity.tmspec"));
    CHECK(names.symbol_constant.at("L") == "L");
    CHECK(names.symbol_constant.at("b") == "b");
    CHECK(names.symbol_constant.at("0") == "sym_0");
    CHECK(names.symbol_constant.at("1") == "sym_1");
    CHECK(names.state_constant.at("s0") == "s0");
    CHECK(names.state_constant.at("sa") == "sa");

    SECTION("reserved spellings and collisions are suffixed away") {
        TmSpec odd;
        odd.states = {"S", "sym_0", "q+"};
        odd.input_alphabet = {"0"};
        odd.tape_alphabet = {"0", "L", "b"};
        odd.initial = "S";
        odd.accept = "sym_0";
        odd.reject = "q+";
        TmNames n = compile_names(odd);
        CHECK(n.symbol_constant.at("0") == "sym_0");  // symbols assign first
        CHECK(n.state_constant.at("S") == "S_2");     // S is the successor function
        CHECK(n.state_constant.at("sym_0") == "sym_0_2");
        CHECK(n.state_constant.at("q+") == "sym_q_");
    }
}

TEST_CASE("rule sentences take the documented shapes") {
    TmSpec parity = load_spec("parity.tmspec");
    TmNames names = compile_names(parity);
    Vocabulary v = tm_to_ffot_finite(parity).machine.vocab;

    std::vector<std::string> rs = prints(rule_sentences(parity, names, v));
    // one sentence per non-halting state and tape symbol
    REQUIRE(rs.size() == 2 * 4);

    // first-use order follows the rule list: (s0,L) heads it
    CHECK(rs[0] ==
          "forall x. (((I(x) = s0) & (C(x, H(x)) = L)) -> "
          "(((I(S(x)) = s0) & (C(S(x), H(x)) = L)) & (H(S(x)) = S(H(x)))))");
    // a RIGHT rule over a letter
    CHECK(rs[2] ==
          "forall x. (((I(x) = s0) & (C(x, H(x)) = sym_1)) -> "
          "(((I(S(x)) = s1) & (C(S(x), H(x)) = sym_1)) & (H(S(x)) = S(H(x)))))");
    // the deciding PAUSE rule at the blank
    CHECK(rs[3] ==
          "forall x. (((I(x) = s0) & (C(x, H(x)) = b)) -> "
          "(((I(S(x)) = sa) & (C(S(x), H(x)) = b)) & (H(S(x)) = H(x))))");

    SECTION("LEFT moves pin the old head as successor of the new one") {
        TmSpec m;
        m.states = {"t0", "acc", "rej"};
        m.tape_alphabet = {"L", "b"};
        m.initial = "t0";
        m.accept = "acc";
        m.reject = "rej";
        m.rules = {{"t0", "b", "t0", "b", Move::Left}, {"t0", "L", "acc", "L", Move::Pause}};
        std::vector<std::string> ms = prints(
            rule_sentences(m, compile_names(m), tm_to_ffot_finite(m).machine.vocab));
        CHECK(ms[0] ==
              "forall x. (((I(x) = t0) & (C(x, H(x)) = b)) -> "
              "(((I(S(x)) = t0) & (C(S(x), H(x)) = b)) & (S(H(S(x))) = H(x))))");
    }

    SECTION("a two-rule group becomes a two-way disjunction") {
        TmSpec n1 = load_spec("guess_one.tmspec");
        TmNames nn = compile_names(n1);
        Vocabulary nv;
        nv.function("S", 1).function("C", 2).function("H", 1).function("I", 1);
        nv.constant("zero").constant("L").constant("b").constant("sym_0").constant("sym_1");
        nv.constant("s0_1").constant("sa_1").constant("h");
        std::vector<std::string> ns = prints(rule_sentences(n1, nn, nv));
        REQUIRE(ns.size() == 1 * 4);  // one non-halting state, four symbols
        CHECK(ns[2] ==
              "forall x. (((I(x) = s0_1) & (C(x, H(x)) = sym_1)) -> "
              "((((I(S(x)) = sa_1) & (C(S(x), H(x)) = sym_1)) & (H(S(x)) = H(x))) | "
              "(((I(S(x)) = s0_1) & (C(S(x), H(x)) = sym_1)) & (H(S(x)) = S(H(x))))))");
    }
}

TEST_CASE("halting sentences: first-reach and absorption") {
    Vocabulary v;
    v.function("S", 1).function("I", 1);
    v.constant("sa").constant("sr").constant("h");
    std::vector<std::string> hs = prints(halting_sentences("sa", "sr", v));
    REQUIRE(hs.size() == 4);
    CHECK(hs[0] == "forall x. (((I(S(x)) = sa) & ~(I(x) = sa)) -> (h = S(x)))");
    CHECK(hs[1] == "forall x. ((I(x) = sa) -> (I(S(x)) = sa))");
    CHECK(hs[2] == "forall x. (((I(S(x)) = sr) & ~(I(x) = sr)) -> (h = S(x)))");
    CHECK(hs[3] == "forall x. ((I(x) = sr) -> (I(S(x)) = sr))");
}

TEST_CASE("deterministic compilation assembles the documented theory") {
    TmSpec parity = load_spec("parity.tmspec");
    CompiledTm fin = tm_to_ffot_finite(parity);
    const Machine& m = fin.machine;

    SECTION("vocabulary") {
        CHECK(m.vocab.function_index("S") == 0);
        CHECK(m.vocab.function_index("C") == 1);
        CHECK(m.vocab.function_index("H") == 2);
        CHECK(m.vocab.function_index("I") == 3);
        std::vector<std::string> want = {"zero", "L",  "b",  "sym_0", "sym_1", "s0",
                                         "s1",   "sa", "sr", "e",     "h"};
        CHECK(m.vocab.constants() == want);
    }

    SECTION("theory layout") {
        std::vector<std::string> ts = prints(m.theory);
        size_t eq = equality_axioms(m.vocab).size();
        size_t psa = finite_peano_axioms().size();
        REQUIRE(ts.size() == 3 + eq + psa + 8 + 4 + 3);

        CHECK(ts[0] == "(((H(zero) = S(zero)) & (C(zero, zero) = L)) & (I(zero) = s0))");
        CHECK(ts[1] == "forall y. ((C(zero, y) = b) -> (C(zero, S(y)) = b))");
        CHECK(ts[2] == "forall x. forall y. (~(H(x) = y) -> (C(S(x), y) = C(x, y)))");
        CHECK(std::vector<std::string>(ts.begin() + 3, ts.begin() + 3 + eq) ==
              prints(equality_axioms(m.vocab)));
        CHECK(std::vector<std::string>(ts.begin() + 3 + eq, ts.begin() + 3 + eq + psa) ==
              prints(finite_peano_axioms()));
        // separation tail: verdicts apart, letters off the blank
        CHECK(ts[ts.size() - 3] == "~(sa = sr)");
        CHECK(ts[ts.size() - 2] == "~(sym_0 = b)");
        CHECK(ts[ts.size() - 1] == "~(sym_1 = b)");
    }

    SECTION("outputs and encoding") {
        REQUIRE(m.outputs.size() == 2);
        CHECK(m.outputs[0].label == "accept");
        CHECK(print_sentence(m.outputs[0].sentences.at(0)) == "(I(h) = sa)");
        CHECK(m.outputs[1].label == "reject");
        CHECK(print_sentence(m.outputs[1].sentences.at(0)) == "(I(h) = sr)");
        REQUIRE(m.encoding.has_value());
        CHECK_FALSE(m.encoding->add_distinctness);
        std::vector<std::string> phi = prints(encode_word(*m.encoding, m.vocab, "01"));
        REQUIRE(phi.size() == 3);  // two letters and the terminator, nothing else
        CHECK(phi[0] == "(C(zero, S(zero)) = sym_0)");
        CHECK(phi[1] == "(C(zero, S(S(zero))) = sym_1)");
        CHECK(phi[2] == "(C(zero, S(S(S(zero)))) = b)");
    }

    SECTION("the machine definition is well-formed") {
        CHECK(machine_definition_errors(m).empty());
    }

    SECTION("infinite variant swaps the successor axioms and drops e") {
        CompiledTm inf = tm_to_ffot_infinite(parity);
        CHECK(inf.machine.vocab.constant_index("e") < 0);
        std::vector<std::string> all = prints(inf.machine.theory);
        std::set<std::string> ts(all.begin(), all.end());
        for (const Formula& f : peano_successor_axioms())
            CHECK(ts.count(print_sentence(f)));
        CHECK(machine_definition_errors(inf.machine).empty());
    }

    SECTION("compilation preconditions") {
        // all_zeros is deterministic but loops instead of rejecting, so the
        // missing-reject check is what fires for it.
        REQUIRE_THROWS_WITH(tm_to_ffot_finite(load_spec("all_zeros.tmspec")),
                            Catch::Matchers::ContainsSubstring("reject state"));
        TmSpec broken = parity;
        broken.rules.pop_back();
        REQUIRE_THROWS_WITH(tm_to_ffot_finite(broken),
                            Catch::Matchers::ContainsSubstring("invalid machine spec"));
        TmSpec guess = load_spec("guess_one.tmspec");
        guess.states.push_back("sr_1");  // give it a reject state, keep the 2-way guess
        guess.reject = "sr_1";
        REQUIRE_THROWS_WITH(tm_to_ffot_finite(guess),
                            Catch::Matchers::ContainsSubstring("needs a deterministic machine"));
    }
}

TEST_CASE("compiled parity machine matches the simulator") {
    TmSpec parity = load_spec("parity.tmspec");
    Machine m = tm_to_ffot_finite(parity).machine;

    for (const std::string& w : binary_words(2)) {
        CAPTURE(w);
        SimResult sim = simulate_tm(parity, w);
        SearchConfig cfg;
        cfg.min_size = 1;
        cfg.max_size = (int)sim.steps + 1;
        Decision d = decide_word(m, w, "accept", "reject", cfg);
        CHECK(d.verdict == (count_ones(w) % 2 == 0 ? Decision::Verdict::Accept
                                                   : Decision::Verdict::Reject));
        CHECK(d.detail.status == ComputeResult::Status::Output);
    }
}

TEST_CASE("model size equals simulator steps plus one") {
    TmSpec parity = load_spec("parity.tmspec");
    Machine m = tm_to_ffot_finite(parity).machine;

    for (const std::string w : {"", "0", "1", "10"}) {
        CAPTURE(w);
        SimResult sim = simulate_tm(parity, w);
        MinSizeResult got = measure_resources(m, w, (int)sim.steps + 2);
        REQUIRE(got.size.has_value());
        CHECK(*got.size == sim.steps + 1);
    }
}

TEST_CASE("minimal models halt at the top of the chain") {
    TmSpec parity = load_spec("parity.tmspec");
    CompiledTm fin = tm_to_ffot_finite(parity);
    Machine m = fin.machine;

    std::vector<Formula> premises = m.theory;
    for (const Formula& f : encode_word(*m.encoding, m.vocab, "11")) premises.push_back(f);

    SimResult sim = simulate_tm(parity, "11");
    SearchConfig cfg;
    cfg.min_size = (int)sim.steps + 1;
    cfg.max_size = (int)sim.steps + 1;
    SearchOutcome found = find_models(m.vocab, premises, cfg);
    REQUIRE_FALSE(found.models.empty());

    Formula accept = m.outputs[0].sentences[0];
    Formula reject = m.outputs[1].sentences[0];
    for (const FiniteStructure& a : found.models) {
        // the halting time is the capped top of the number line
        CHECK(a.constant_value("h") == a.constant_value("e"));
        // every model announces exactly one verdict, here acceptance
        CHECK(naive::holds(a, accept, {}));
        CHECK_FALSE(naive::holds(a, reject, {}));
        // absorption: the state at h never changes again
        int h = a.constant_value("h");
        const auto& ivals = a.function_tables[a.vocab.function_index("I")];
        const auto& svals = a.function_tables[a.vocab.function_index("S")];
        CHECK(ivals[svals[h]] == ivals[h]);
    }
}

TEST_CASE("infinite compilation has no bounded models") {
    TmSpec parity = load_spec("parity.tmspec");
    Machine m = tm_to_ffot_infinite(parity).machine;

    std::vector<Formula> premises = m.theory;
    for (const Formula& f : encode_word(*m.encoding, m.vocab, "1")) premises.push_back(f);

    SearchConfig cfg;
    cfg.min_size = 1;
    cfg.max_size = 3;
    SearchOutcome found = find_models(m.vocab, premises, cfg);
    CHECK(found.models.empty());
    CHECK(found.sizes_checked == std::vector<int>{1, 2, 3});
}

TEST_CASE("pair compilation assembles the documented theory") {
    TmSpec n1 = load_spec("guess_one.tmspec");
    TmSpec n2 = load_spec("all_zeros.tmspec");
    CompiledTm pair = ntm_pair_to_ffot(n1, n2);
    const Machine& m = pair.machine;

    SECTION("vocabulary order") {
        std::vector<std::string> want = {"zero", "L",    "b",    "sym_0", "sym_1",
                                         "s0_1", "sa_1", "s0_2", "sa_2",  "e",
                                         "h"};
        CHECK(m.vocab.constants() == want);
    }

    SECTION("the five leading sentences") {
        std::vector<std::string> ts = prints(m.theory);
        CHECK(ts[0] == "((H(zero) = S(zero)) & (C(zero, zero) = L))");
        CHECK(ts[1] == "((I(zero) = s0_1) | (I(zero) = s0_2))");
        CHECK(ts[2] == "forall y. ((C(zero, y) = b) -> (C(zero, S(y)) = b))");
        CHECK(ts[3] == "forall x. forall y. (~(H(x) = y) -> (C(S(x), y) = C(x, y)))");
        CHECK(ts[4] == "((I(h) = sa_1) | (I(h) = sa_2))");
    }

    SECTION("rules of both halves and a shared halting apparatus") {
        std::vector<std::string> all = prints(m.theory);
        std::set<std::string> ts(all.begin(), all.end());
        Vocabulary v = m.vocab;
        for (const Formula& f : rule_sentences(n1, pair.names, v))
            CHECK(ts.count(print_sentence(f)));
        for (const Formula& f : rule_sentences(n2, pair.names, v))
            CHECK(ts.count(print_sentence(f)));
        for (const Formula& f : halting_sentences("sa_1", "sa_2", v))
            CHECK(ts.count(print_sentence(f)));
    }

    SECTION("separation tail: all state pairs, letters off the blank") {
        std::vector<std::string> ts = prints(m.theory);
        std::vector<std::string> tail(ts.end() - 8, ts.end());
        std::vector<std::string> want = {
            "~(s0_1 = sa_1)", "~(s0_1 = s0_2)", "~(s0_1 = sa_2)", "~(sa_1 = s0_2)",
            "~(sa_1 = sa_2)", "~(s0_2 = sa_2)", "~(sym_0 = b)",   "~(sym_1 = b)",
        };
        CHECK(tail == want);
    }

    SECTION("outputs name the accepting halves") {
        REQUIRE(m.outputs.size() == 2);
        CHECK(m.outputs[0].label == "accept");
        CHECK(print_sentence(m.outputs[0].sentences.at(0)) == "(I(h) = sa_1)");
        CHECK(m.outputs[1].label == "reject");
        CHECK(print_sentence(m.outputs[1].sentences.at(0)) == "(I(h) = sa_2)");
        CHECK(machine_definition_errors(m).empty());
    }

    SECTION("pair preconditions") {
        REQUIRE_THROWS_WITH(ntm_pair_to_ffot(n1, n1),
                            Catch::Matchers::ContainsSubstring("share the state name"));
        REQUIRE_THROWS_WITH(ntm_pair_to_ffot(load_spec("parity.tmspec"), n2),
                            Catch::Matchers::ContainsSubstring("must not have reject states"));
        TmSpec other = n2;
        other.input_alphabet = {"0"};
        std::erase_if(other.rules, [](const TmRule& r) { return r.read == "1"; });
        other.tape_alphabet = {"0", "L", "b"};
        REQUIRE_THROWS_WITH(ntm_pair_to_ffot(n1, other),
                            Catch::Matchers::ContainsSubstring("share the input alphabet"));
    }
}

TEST_CASE("pair machine decides membership the way the path search does") {
    TmSpec n1 = load_spec("guess_one.tmspec");
    TmSpec n2 = load_spec("all_zeros.tmspec");
    Machine m = ntm_pair_to_ffot(n1, n2).machine;

    for (const std::string& w : binary_words(2)) {
        CAPTURE(w);
        bool in_language = simulate_ntm(n1, w).status == NtmResult::Status::Accepted;
        bool complement = simulate_ntm(n2, w).status == NtmResult::Status::Accepted;
        REQUIRE(in_language != complement);  // the halves really are complementary

        SearchConfig cfg;
        cfg.min_size = 1;
        cfg.max_size = 4;
        ComputeResult r = compute(m, encode_word(*m.encoding, m.vocab, w), cfg);
        REQUIRE(r.status == ComputeResult::Status::Output);
        CHECK(r.label == (in_language ? "accept" : "reject"));
    }

    SECTION("a three-letter word, matching the longer run") {
        SearchConfig cfg;
        cfg.min_size = 1;
        cfg.max_size = 5;
        ComputeResult r = compute(m, encode_word(*m.encoding, m.vocab, "010"), cfg);
        REQUIRE(r.status == ComputeResult::Status::Output);
        CHECK(r.label == "accept");
    }
}

TEST_CASE("pair models replay as legal accepting runs of exactly one half") {
    TmSpec n1 = load_spec("guess_one.tmspec");
    TmSpec n2 = load_spec("all_zeros.tmspec");
    CompiledTm pair = ntm_pair_to_ffot(n1, n2);
    Machine m = pair.machine;

    for (const std::string w : {"0", "1", "01"}) {
        CAPTURE(w);
        bool in_language = count_ones(w) > 0;

        std::vector<Formula> premises = m.theory;
        for (const Formula& f : encode_word(*m.encoding, m.vocab, w)) premises.push_back(f);
        SearchConfig cfg;
        cfg.min_size = 4;
        cfg.max_size = 4;
        SearchOutcome found = find_models(m.vocab, premises, cfg);
        REQUIRE_FALSE(found.models.empty());

        for (const FiniteStructure& a : found.models) {
            Trace tr = extract_trace(a, pair.names);
            std::vector<std::string> v1 = trace_violations(tr, n1);
            std::vector<std::string> v2 = trace_violations(tr, n2);
            CAPTURE(v1, v2);
            // every model runs the half that accepts w; the rejecting half
            // never appears because its runs cannot reach an accept state
            CHECK(v1.empty() == in_language);
            CHECK(v2.empty() == !in_language);
        }
    }

    SECTION("a corrupted run table is flagged") {
        std::vector<Formula> premises = m.theory;
        for (const Formula& f : encode_word(*m.encoding, m.vocab, "1")) premises.push_back(f);
        SearchConfig cfg;
        cfg.min_size = 4;
        cfg.max_size = 4;
        SearchOutcome found = find_models(m.vocab, premises, cfg);
        REQUIRE_FALSE(found.models.empty());
        FiniteStructure a = found.models[0];
        // rewrite the state at time 1 to the other half's start state
        auto& ivals = a.function_tables[a.vocab.function_index("I")];
        int t1 = a.function_tables[a.vocab.function_index("S")][a.constant_value("zero")];
        ivals[t1] = a.constant_value("s0_2");
        Trace tr = extract_trace(a, pair.names);
        CHECK_FALSE(trace_violations(tr, n1).empty());
        CHECK_FALSE(trace_violations(tr, n2).empty());
    }
}

TEST_CASE("compiled machines survive the file format") {
    TmSpec parity = load_spec("parity.tmspec");
    Machine m = tm_to_ffot_finite(parity).machine;
    Machine back = read_machine(write_machine(m));
    CHECK(prints(back.theory) == prints(m.theory));
    CHECK(back.outputs.size() == m.outputs.size());
    REQUIRE(back.encoding.has_value());
    CHECK_FALSE(back.encoding->add_distinctness);
    CHECK(write_machine(back) == write_machine(m));

    Machine pair = ntm_pair_to_ffot(load_spec("guess_one.tmspec"),
                                    load_spec("all_zeros.tmspec")).machine;
    CHECK(write_machine(read_machine(write_machine(pair))) == write_machine(pair));
}
