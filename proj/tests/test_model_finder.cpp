// Bounded model search against a generate-and-filter oracle, plus the
// worked search problems: the one-relation example machine theory, the
// successor axioms (no finite models), and their finite variant.

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "ffot/axioms.hpp"
#include "ffot/model_finder.hpp"
#include "ffot/parser.hpp"
#include "ffot/printer.hpp"
#include "ffot/structure.hpp"
#include "naive_eval.hpp"
#include "testgen.hpp"

using namespace ffot;

namespace {

SearchConfig at(int n) {
    SearchConfig cfg;
    cfg.min_size = cfg.max_size = n;
    return cfg;
}

// the trusted reference: enumerate every structure, keep those where every
// sentence holds under the naive evaluator, sort by canonical encoding
std::vector<FiniteStructure> filter_models(const Vocabulary& v, int n,
                                           const std::vector<Formula>& sentences) {
    std::vector<FiniteStructure> out;
    for (const FiniteStructure& a : testgen::all_structures(v, n)) {
        bool ok = true;
        for (const Formula& s : sentences)
            if (!naive::holds(a, s, {})) {
                ok = false;
                break;
            }
        if (ok) out.push_back(a);
    }
    std::sort(out.begin(), out.end(), [](const FiniteStructure& a, const FiniteStructure& b) {
        return canonical_form(a) < canonical_form(b);
    });
    return out;
}

std::vector<std::string> canon_list(const std::vector<FiniteStructure>& ms) {
    std::vector<std::string> out;
    for (const auto& m : ms) out.push_back(canonical_form(m));
    return out;
}

}  // namespace

TEST_CASE("exhaustive search equals generate-and-filter on the sweep") {
    Vocabulary v = testgen::rfc_vocab();
    auto sentences = testgen::sweep_sentences();
    int checked = 0;
    for (int n = 1; n <= 3; ++n) {
        for (const Formula& s : sentences) {
            std::vector<Formula> problem = {s};
            auto expected = filter_models(v, n, problem);
            for (bool pruning : {true, false}) {
                SearchConfig cfg = at(n);
                cfg.symmetry_breaking = false;
                cfg.pruning = pruning;
                SearchOutcome out = find_models(v, problem, cfg);
                REQUIRE(out.models.size() == expected.size());
                REQUIRE(canon_list(out.models) == canon_list(expected));
                REQUIRE_FALSE(out.budget_exhausted);
                ++checked;
            }
        }
    }
    REQUIRE(checked == 3 * 12 * 2);
}

TEST_CASE("search handles multi-sentence problems like single conjunctions") {
    Vocabulary v = testgen::rfc_vocab();
    std::vector<Formula> problem = {
        parse_sentence("forall x. (R(x) <-> R(f(x)))", v),
        parse_sentence("R(c)", v),
    };
    for (int n = 1; n <= 3; ++n) {
        auto expected = filter_models(v, n, problem);
        SearchConfig cfg = at(n);
        cfg.symmetry_breaking = false;
        SearchOutcome out = find_models(v, problem, cfg);
        REQUIRE(canon_list(out.models) == canon_list(expected));
    }
}

TEST_CASE("symmetry breaking keeps at least one model per isomorphism class") {
    Vocabulary v = testgen::rfc_vocab();
    auto sentences = testgen::sweep_sentences();
    for (int n = 1; n <= 3; ++n) {
        auto perms = testgen::all_permutations(n);
        for (const Formula& s : sentences) {
            std::vector<Formula> problem = {s};
            auto full = filter_models(v, n, problem);
            SearchConfig cfg = at(n);
            cfg.symmetry_breaking = true;
            SearchOutcome out = find_models(v, problem, cfg);

            // every returned structure is a model ...
            std::set<std::string> full_set;
            for (const auto& m : full) full_set.insert(canonical_form(m));
            std::set<std::string> got;
            for (const auto& m : out.models) {
                REQUIRE(full_set.count(canonical_form(m)) == 1);
                got.insert(canonical_form(m));
            }
            // ... and every isomorphism class of models is represented
            for (const auto& m : full) {
                bool covered = false;
                for (const auto& p : perms) {
                    if (got.count(canonical_form(apply_isomorphism(m, p))) == 1) {
                        covered = true;
                        break;
                    }
                }
                REQUIRE(covered);
            }
        }
    }
}

TEST_CASE("returned models are deduplicated and canonically ordered") {
    Vocabulary v = testgen::rfc_vocab();
    std::vector<Formula> problem = {parse_sentence("forall x. (R(x) -> R(f(x)))", v)};
    for (bool sym : {false, true}) {
        SearchConfig cfg = at(3);
        cfg.symmetry_breaking = sym;
        SearchOutcome out = find_models(v, problem, cfg);
        auto canon = canon_list(out.models);
        for (size_t i = 1; i < canon.size(); ++i) REQUIRE(canon[i - 1] < canon[i]);
    }
}

TEST_CASE("worker count does not change the result") {
    Vocabulary v = testgen::rfc_vocab();
    std::vector<Formula> problem = {parse_sentence("forall x. (R(x) -> R(f(x)))", v)};
    for (bool sym : {false, true}) {
        SearchConfig cfg;
        cfg.min_size = 1;
        cfg.max_size = 3;
        cfg.symmetry_breaking = sym;
        cfg.jobs = 1;
        SearchOutcome one = find_models(v, problem, cfg);
        cfg.jobs = 4;
        SearchOutcome four = find_models(v, problem, cfg);
        REQUIRE(one.models.size() == four.models.size());
        REQUIRE(canon_list(one.models) == canon_list(four.models));
        for (size_t i = 0; i < one.models.size(); ++i)
            REQUIRE(one.models[i] == four.models[i]);
        REQUIRE(one.leaves_examined == four.leaves_examined);
        REQUIRE(one.sizes_checked == four.sizes_checked);
    }
}

TEST_CASE("model limit truncates deterministically") {
    Vocabulary v = testgen::rfc_vocab();
    std::vector<Formula> problem = {parse_sentence("forall x. (R(x) -> R(f(x)))", v)};
    SearchConfig cfg = at(3);
    cfg.symmetry_breaking = false;
    SearchOutcome all = find_models(v, problem, cfg);
    REQUIRE(all.models.size() > 5);
    REQUIRE_FALSE(all.limit_reached);

    cfg.model_limit = 5;
    SearchOutcome five = find_models(v, problem, cfg);
    REQUIRE(five.models.size() == 5);
    REQUIRE(five.limit_reached);
    // limited runs are sequential, so a rerun gives the identical list
    SearchOutcome again = find_models(v, problem, cfg);
    REQUIRE(canon_list(five.models) == canon_list(again.models));

    cfg.model_limit = 100000;
    SearchOutcome plenty = find_models(v, problem, cfg);
    REQUIRE(plenty.models.size() == all.models.size());
    REQUIRE_FALSE(plenty.limit_reached);
}

TEST_CASE("a zero time budget reports exhaustion instead of lying") {
    Vocabulary v = testgen::rfc_vocab();
    std::vector<Formula> problem = {parse_sentence("forall x. (R(x) -> R(f(x)))", v)};
    SearchConfig cfg = at(3);
    cfg.time_budget = std::chrono::milliseconds(0);
    SearchOutcome out = find_models(v, problem, cfg);
    REQUIRE(out.budget_exhausted);
    REQUIRE(out.models.empty());

    BoundedVerdict verdict = entails_at(v, problem, {}, {parse_sentence("R(c)", v)}, cfg);
    REQUIRE(verdict.status == VerdictStatus::BudgetExhausted);

    MinSizeResult ms = find_min_model_size(v, problem, 3, cfg);
    REQUIRE(ms.budget_exhausted);
    REQUIRE_FALSE(ms.size.has_value());
}

TEST_CASE("bounded entailment on the one-relation example machine") {
    Vocabulary v = testgen::rfc_vocab();
    std::vector<Formula> theory = {parse_sentence("forall x. (R(x) <-> R(f(x)))", v)};
    SearchConfig cfg;
    cfg.min_size = 1;
    cfg.max_size = 3;

    SECTION("R(c) forces R(f(c)) at every size in range") {
        BoundedVerdict out = entails_at(v, theory, {parse_sentence("R(c)", v)},
                                        {parse_sentence("R(f(c))", v)}, cfg);
        REQUIRE(out.status == VerdictStatus::EntailedAtBound);
        REQUIRE(out.models_examined > 0);
        REQUIRE(out.sizes_checked == std::vector<int>{1, 2, 3});
    }

    SECTION("~R(c) forces ~R(f(f(c)))") {
        BoundedVerdict out = entails_at(v, theory, {parse_sentence("~R(c)", v)},
                                        {parse_sentence("~R(f(f(c)))", v)}, cfg);
        REQUIRE(out.status == VerdictStatus::EntailedAtBound);
    }

    SECTION("R(c) does not force ~R(f(c))") {
        BoundedVerdict out = entails_at(v, theory, {parse_sentence("R(c)", v)},
                                        {parse_sentence("~R(f(c))", v)}, cfg);
        REQUIRE(out.status == VerdictStatus::Refuted);
        REQUIRE(out.witness.has_value());
        // the witness really is a model of the premises that breaks the goal
        REQUIRE(eval_formula(*out.witness, theory[0]));
        REQUIRE(eval_formula(*out.witness, parse_sentence("R(c)", v)));
        REQUIRE_FALSE(eval_formula(*out.witness, parse_sentence("~R(f(c))", v)));
        REQUIRE(out.falsified.has_value());
        REQUIRE(print_sentence(*out.falsified) == "~R(f(c))");
    }

    SECTION("unsatisfiable premises give no-models, not entailment") {
        BoundedVerdict out =
            entails_at(v, {parse_sentence("forall x. ~(x = x)", v)}, {},
                       {parse_sentence("R(c)", v)}, cfg);
        REQUIRE(out.status == VerdictStatus::NoModelsAtBound);
        REQUIRE(out.models_examined == 0);
    }
}

TEST_CASE("the refutation witness is the canonically least counter-model") {
    Vocabulary v = testgen::rfc_vocab();
    std::vector<Formula> phi = {parse_sentence("R(c)", v)};
    Formula goal = parse_sentence("R(f(c))", v);

    // oracle: smallest size first, canonical byte order within a size
    std::optional<FiniteStructure> expected;
    for (int n = 1; n <= 2 && !expected; ++n) {
        for (const auto& a : filter_models(v, n, phi)) {
            if (!naive::holds(a, goal, {})) {
                expected = a;
                break;
            }
        }
    }
    REQUIRE(expected.has_value());

    SearchConfig cfg;
    cfg.min_size = 1;
    cfg.max_size = 2;
    cfg.symmetry_breaking = false;
    BoundedVerdict out = entails_at(v, {}, phi, {goal}, cfg);
    REQUIRE(out.status == VerdictStatus::Refuted);
    REQUIRE(canonical_form(*out.witness) == canonical_form(*expected));
}

TEST_CASE("satisfiability probes and minimum model sizes") {
    Vocabulary v = testgen::rfc_vocab();

    SECTION("the example theory has a one-element model") {
        auto [sat, model] =
            satisfiable_at(v, {parse_sentence("forall x. (R(x) <-> R(f(x)))", v)}, 1);
        REQUIRE(sat);
        REQUIRE(model.has_value());
        REQUIRE(model->size == 1);
        MinSizeResult ms = find_min_model_size(
            v, {parse_sentence("forall x. (R(x) <-> R(f(x)))", v)}, 4);
        REQUIRE(ms.size == 1);
    }

    SECTION("a sentence forcing two elements has minimum size two") {
        std::vector<Formula> s = {parse_sentence("exists x. exists y. ~(x = y)", v)};
        auto [sat1, m1] = satisfiable_at(v, s, 1);
        REQUIRE_FALSE(sat1);
        REQUIRE_FALSE(m1.has_value());
        MinSizeResult ms = find_min_model_size(v, s, 4);
        REQUIRE(ms.size == 2);
    }

    SECTION("contradictions have no minimum size") {
        MinSizeResult ms =
            find_min_model_size(v, {parse_sentence("forall x. ~(x = x)", v)}, 3);
        REQUIRE_FALSE(ms.size.has_value());
        REQUIRE_FALSE(ms.budget_exhausted);
    }
}

TEST_CASE("successor axioms have no finite models at small sizes") {
    Vocabulary v = psa_vocab();
    std::vector<Formula> problem = equality_axioms(v);
    for (const Formula& s : peano_successor_axioms()) problem.push_back(s);
    for (int n = 1; n <= 6; ++n) {
        SearchConfig cfg = at(n);
        SearchOutcome out = find_models(v, problem, cfg);
        REQUIRE(out.models.empty());
        REQUIRE_FALSE(out.budget_exhausted);
    }
}

TEST_CASE("finite successor axioms become satisfiable at size two") {
    Vocabulary v = psa_f_vocab();
    std::vector<Formula> problem = equality_axioms(v);
    for (const Formula& s : finite_peano_axioms()) problem.push_back(s);

    // one element cannot work: the chain still forbids S(x) = zero, and the
    // single element would have to be its own successor and zero at once
    auto [sat1, m1] = satisfiable_at(v, problem, 1);
    REQUIRE_FALSE(sat1);

    MinSizeResult ms = find_min_model_size(v, problem, 4);
    REQUIRE(ms.size == 2);

    // the constructed two-element chain is among the size-2 models
    SearchConfig cfg = at(2);
    cfg.symmetry_breaking = false;
    SearchOutcome out = find_models(v, problem, cfg);
    REQUIRE_FALSE(out.models.empty());
    std::set<std::string> canon;
    for (const auto& m : out.models) canon.insert(canonical_form(m));
    REQUIRE(canon.count(canonical_form(build_psa_f_structure(1))) == 1);
}

TEST_CASE("ordered field axioms admit no tiny models") {
    Vocabulary v = dof_vocab();
    std::vector<Formula> problem = equality_axioms(v);
    for (const Formula& s : dense_ordered_field_axioms()) problem.push_back(s);
    for (int n = 1; n <= 3; ++n) {
        SearchConfig cfg = at(n);
        SearchOutcome out = find_models(v, problem, cfg);
        REQUIRE(out.models.empty());
        REQUIRE_FALSE(out.budget_exhausted);
    }
}

TEST_CASE("axiomatic equality is searched as an ordinary table") {
    Vocabulary v;
    v.constant("c").constant("d");
    std::vector<Formula> problem = equality_axioms(v);
    problem.push_back(parse_sentence("~(c = d)", v));

    SECTION("no one-element model: reflexivity forces c = d") {
        SearchConfig cfg = at(1);
        cfg.equality = EqualityMode::Axiomatic;
        cfg.symmetry_breaking = false;
        SearchOutcome out = find_models(v, problem, cfg);
        REQUIRE(out.models.empty());
    }

    SECTION("two elements: the equality table must be the identity") {
        SearchConfig cfg = at(2);
        cfg.equality = EqualityMode::Axiomatic;
        cfg.symmetry_breaking = false;
        SearchOutcome out = find_models(v, problem, cfg);
        REQUIRE(out.models.size() == 2);  // c,d at (0,1) and at (1,0)
        for (const auto& m : out.models) {
            REQUIRE(m.equality == EqualityMode::Axiomatic);
            REQUIRE(m.equality_table == std::vector<char>({1, 0, 0, 1}));
            REQUIRE(m.constant_values[0] != m.constant_values[1]);
            REQUIRE(check_model(m, problem).all_hold);
        }

        cfg.symmetry_breaking = true;
        SearchOutcome reps = find_models(v, problem, cfg);
        REQUIRE(reps.models.size() == 1);
    }
}

TEST_CASE("canonical encodings are injective and sized as documented") {
    Vocabulary v = testgen::rfc_vocab();

    SECTION("distinct structures never collide at sizes 1 to 3") {
        for (int n = 1; n <= 3; ++n) {
            auto all = testgen::all_structures(v, n);
            std::set<std::string> seen;
            for (const auto& a : all) seen.insert(canonical_form(a));
            REQUIRE(seen.size() == all.size());
        }
    }

    SECTION("isomorphic but differently labeled structures differ") {
        FiniteStructure a = FiniteStructure::empty_of(v, 2);
        a.set_constant("c", 0);
        a.set_function("f", {0}, 1);
        a.set_function("f", {1}, 0);
        a.set_relation("R", {0}, true);
        FiniteStructure b = apply_isomorphism(a, {1, 0});
        REQUIRE_FALSE(a == b);
        REQUIRE(canonical_form(a) != canonical_form(b));
        REQUIRE(canonical_form(a) == canonical_form(a));
    }

    SECTION("byte length grows as the table sizes dictate") {
        // header 'F' + 4 size bytes + 1 mode byte, then one bit per relation
        // entry and n bits per function entry and constant
        for (int n : {2, 4, 8}) {
            long long bits = n            // R table: n entries, 1 bit each
                             + n * n      // f table: n entries, n bits each
                             + n;         // constant c: n bits
            long long expect = 6 + (bits + 7) / 8;
            FiniteStructure a = FiniteStructure::empty_of(v, n);
            REQUIRE(static_cast<long long>(canonical_form(a).size()) == expect);
        }
    }
}

TEST_CASE("size ranges accumulate models in ascending size order") {
    Vocabulary v = testgen::rfc_vocab();
    std::vector<Formula> problem = {parse_sentence("R(c)", v)};
    SearchConfig cfg;
    cfg.min_size = 1;
    cfg.max_size = 2;
    cfg.symmetry_breaking = false;
    SearchOutcome out = find_models(v, problem, cfg);
    auto expect1 = filter_models(v, 1, problem);
    auto expect2 = filter_models(v, 2, problem);
    REQUIRE(out.models.size() == expect1.size() + expect2.size());
    REQUIRE(out.sizes_checked == std::vector<int>{1, 2});
    for (size_t i = 0; i < expect1.size(); ++i)
        REQUIRE(canonical_form(out.models[i]) == canonical_form(expect1[i]));
    for (size_t i = 0; i < expect2.size(); ++i)
        REQUIRE(canonical_form(out.models[expect1.size() + i]) ==
                canonical_form(expect2[i]));

    SECTION("degenerate ranges are rejected") {
        SearchConfig bad;
        bad.min_size = 0;
        bad.max_size = 2;
        REQUIRE_THROWS_AS(find_models(v, problem, bad), Error);
        bad.min_size = 3;
        bad.max_size = 2;
        REQUIRE_THROWS_AS(find_models(v, problem, bad), Error);
    }
}

TEST_CASE("search rejects sentences that do not fit the vocabulary") {
    Vocabulary v = testgen::rfc_vocab();
    Vocabulary w;
    w.relation("Q", 1).constant("c");
    Formula alien = parse_sentence("Q(c)", w);
    REQUIRE_THROWS_AS(find_models(v, {alien}, at(1)), VocabularyError);
}
