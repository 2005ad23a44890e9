#pragma once

// Compilation of tape machines into finite-theory machines.  The theory
// describes a whole run as one table: C(x, y) is the symbol in cell y at
// time x, I(x) the state at time x, H(x) the head cell at time x, and the
// constant h names the first halting time.  Successor S drives both the
// time axis and the cell addresses; zero starts both.
//
// Two shapes come out of here:
//   - tm_to_ffot_infinite / tm_to_ffot_finite: a deterministic machine with
//     accept and reject states becomes a machine with outputs "accept" and
//     "reject".  The infinite form uses the unbounded successor axioms and
//     has no finite models at all; the finite form swaps in the capped
//     successor axioms (top element e) so bounded search can run it.
//   - ntm_pair_to_ffot: two nondeterministic halves with disjoint states and
//     complementary languages become one machine whose theory permits a run
//     of either half but insists the run accepts; "accept" means the first
//     half's accept state was reached, "reject" the second's.
//
// Pair halves must not have reject states.  Once a run halts no rule group
// constrains the next time step, so a halted-but-not-accepting run could be
// continued arbitrarily — including straight into an accept state — and the
// theory could no longer tell the halves apart.  Halves that loop instead
// of rejecting keep every non-accepting run under rule control forever, and
// the forced-acceptance sentence then excludes those runs outright.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ffot/axioms.hpp"
#include "ffot/machine.hpp"
#include "ffot/parser.hpp"
#include "ffot/structure.hpp"
#include "ffot/tm.hpp"
#include "ffot/vocabulary.hpp"

namespace ffot {

// ---- naming ---------------------------------------------------------------

// How the machine's raw states and tape symbols appear as constants.
struct TmNames {
    std::map<std::string, std::string> state_constant;
    std::map<std::string, std::string> symbol_constant;
};

namespace detail {

// Deterministic raw-name -> constant-name assignment.  Identifiers keep
// their spelling when free; anything else (like the letters 0 and 1) gets a
// sym_ prefix; collisions and structural names are suffixed away.
class NameMap {
  public:
    NameMap() : used_{"S", "C", "I", "H", "h", "e", "zero", "x", "y"} {}

    std::string add(const std::string& raw) {
        auto it = fwd_.find(raw);
        if (it != fwd_.end()) return it->second;
        std::string base;
        if (is_identifier(raw)) {
            base = raw;
        } else {
            base = "sym_";
            for (char c : raw)
                base += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
        }
        std::string name = base;
        for (int k = 2; used_.count(name); ++k) name = base + "_" + std::to_string(k);
        used_.insert(name);
        fwd_[raw] = name;
        return name;
    }

  private:
    std::map<std::string, std::string> fwd_;
    std::set<std::string> used_;
};

}  // namespace detail

// Symbols first (marker, blank, input letters, the rest of the tape
// alphabet), then states, so symbol constants win ties for a spelling.
inline TmNames compile_names(const TmSpec& spec) {
    detail::NameMap nm;
    TmNames names;
    names.symbol_constant[spec.marker] = nm.add(spec.marker);
    names.symbol_constant[spec.blank] = nm.add(spec.blank);
    for (const auto& c : spec.input_alphabet) names.symbol_constant[c] = nm.add(c);
    for (const auto& c : spec.tape_alphabet)
        if (!names.symbol_constant.count(c)) names.symbol_constant[c] = nm.add(c);
    for (const auto& t : spec.states) names.state_constant[t] = nm.add(t);
    return names;
}

// ---- sentence builders ----------------------------------------------------

namespace detail {

inline std::string mu_clause(const std::string& state_c, const std::string& sym_c) {
    return "((I(x) = " + state_c + ") & (C(x, H(x)) = " + sym_c + "))";
}

inline std::string move_clause(Move m) {
    switch (m) {
        case Move::Right: return "(H(S(x)) = S(H(x)))";
        case Move::Pause: return "(H(S(x)) = H(x))";
        case Move::Left: return "(S(H(S(x))) = H(x))";
    }
    return "";
}

inline std::string rule_effect(const TmRule& r, const TmNames& names) {
    return "(((I(S(x)) = " + names.state_constant.at(r.next) + ") & (C(S(x), H(x)) = " +
           names.symbol_constant.at(r.write) + ")) & " + move_clause(r.move) + ")";
}

}  // namespace detail

// One sentence per (state, read symbol) pair that has rules, in first-use
// order: whenever the machine is in that state over that symbol, the next
// time step realizes one of the pair's rules.
inline std::vector<Formula> rule_sentences(const TmSpec& spec, const TmNames& names,
                                           const Vocabulary& vocab) {
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::vector<const TmRule*>> groups;
    for (const TmRule& r : spec.rules) {
        auto key = std::make_pair(r.state, r.read);
        if (!groups.count(key)) order.push_back(key);
        groups[key].push_back(&r);
    }
    std::vector<Formula> out;
    for (const auto& key : order) {
        std::string effect;
        for (const TmRule* r : groups[key]) {
            std::string one = detail::rule_effect(*r, names);
            effect = effect.empty() ? one : "(" + effect + " | " + one + ")";
        }
        std::string mu = detail::mu_clause(names.state_constant.at(key.first),
                                           names.symbol_constant.at(key.second));
        out.push_back(parse_formula("forall x. (" + mu + " -> " + effect + ")", vocab));
    }
    return out;
}

// Four sentences: h is the first time each halting state is entered, and
// both halting states absorb.
inline std::vector<Formula> halting_sentences(const std::string& first_const,
                                              const std::string& second_const,
                                              const Vocabulary& vocab) {
    std::vector<Formula> out;
    for (const std::string& s : {first_const, second_const}) {
        out.push_back(parse_formula(
            "forall x. (((I(S(x)) = " + s + ") & ~(I(x) = " + s + ")) -> (h = S(x)))", vocab));
        out.push_back(
            parse_formula("forall x. ((I(x) = " + s + ") -> (I(S(x)) = " + s + "))", vocab));
    }
    return out;
}

// ---- compilation ----------------------------------------------------------

struct CompiledTm {
    Machine machine;
    TmNames names;
};

namespace detail {

inline void require_valid(const TmSpec& spec) {
    TmReport rep = validate_tm(spec);
    if (!rep.ok()) throw Error("invalid machine spec" +
                               (spec.name.empty() ? "" : " " + spec.name) + ": " +
                               rep.errors.front());
}

inline WordEncodingConfig tape_word_encoding(const TmSpec& spec, const TmNames& names,
                                             const Vocabulary& vocab) {
    WordEncodingConfig enc;
    enc.sequence.gamma = parse_term("C(zero, S(y))", vocab, {"y"});
    enc.sequence.sigma = parse_term("S(y)", vocab, {"y"});
    enc.sequence.delta = parse_term("zero", vocab);
    for (const auto& c : spec.input_alphabet) {
        enc.alphabet.push_back(names.symbol_constant.at(c));
        enc.letters.push_back(c);
    }
    enc.blank = names.symbol_constant.at(spec.blank);
    // the theory itself carries the symbol-separation sentences
    enc.add_distinctness = false;
    return enc;
}

inline std::string eq_output_sentence(const std::string& state_const) {
    return "(I(h) = " + state_const + ")";
}

}  // namespace detail

// Shared core of both deterministic compilations.
inline CompiledTm compile_deterministic(const TmSpec& spec, bool finite) {
    detail::require_valid(spec);
    if (!is_deterministic(spec))
        throw Error("deterministic compilation needs a deterministic machine");
    if (!spec.reject) throw Error("deterministic compilation needs a reject state");

    CompiledTm out;
    out.names = compile_names(spec);
    const TmNames& names = out.names;

    Vocabulary v;
    v.function("S", 1).function("C", 2).function("H", 1).function("I", 1);
    v.constant("zero");
    v.constant(names.symbol_constant.at(spec.marker));
    v.constant(names.symbol_constant.at(spec.blank));
    for (const auto& c : spec.input_alphabet) v.constant(names.symbol_constant.at(c));
    for (const auto& c : spec.tape_alphabet) {
        const std::string& n = names.symbol_constant.at(c);
        if (v.constant_index(n) < 0) v.constant(n);
    }
    for (const auto& t : spec.states) v.constant(names.state_constant.at(t));
    if (finite) v.constant("e");
    v.constant("h");

    const std::string marker = names.symbol_constant.at(spec.marker);
    const std::string blank = names.symbol_constant.at(spec.blank);
    const std::string init_state = names.state_constant.at(spec.initial);
    const std::string acc = names.state_constant.at(spec.accept);
    const std::string rej = names.state_constant.at(*spec.reject);

    Machine& m = out.machine;
    m.vocab = v;
    // starting configuration: head on cell 1, marker in cell 0, initial state
    m.theory.push_back(parse_formula("(((H(zero) = S(zero)) & (C(zero, zero) = " + marker +
                                         ")) & (I(zero) = " + init_state + "))",
                                     v));
    // everything right of the word starts blank
    m.theory.push_back(parse_formula(
        "forall y. ((C(zero, y) = " + blank + ") -> (C(zero, S(y)) = " + blank + "))", v));
    // cells away from the head never change
    m.theory.push_back(
        parse_formula("forall x. forall y. (~(H(x) = y) -> (C(S(x), y) = C(x, y)))", v));
    for (const Formula& f : equality_axioms(v)) m.theory.push_back(f);
    for (const Formula& f : finite ? finite_peano_axioms() : peano_successor_axioms())
        m.theory.push_back(f);
    for (const Formula& f : rule_sentences(spec, names, v)) m.theory.push_back(f);
    for (const Formula& f : halting_sentences(acc, rej, v)) m.theory.push_back(f);
    // separation: without these a model could conflate the two verdicts, or
    // shorten the word by folding a letter into the blank
    m.theory.push_back(parse_formula("~(" + acc + " = " + rej + ")", v));
    for (const auto& c : spec.input_alphabet)
        m.theory.push_back(
            parse_formula("~(" + names.symbol_constant.at(c) + " = " + blank + ")", v));

    m.outputs.push_back({"accept", {parse_formula(detail::eq_output_sentence(acc), v)}});
    m.outputs.push_back({"reject", {parse_formula(detail::eq_output_sentence(rej), v)}});
    m.encoding = detail::tape_word_encoding(spec, names, v);
    return out;
}

inline CompiledTm tm_to_ffot_infinite(const TmSpec& spec) {
    return compile_deterministic(spec, false);
}

inline CompiledTm tm_to_ffot_finite(const TmSpec& spec) {
    return compile_deterministic(spec, true);
}

// Two halves, one machine: a model runs whichever half it likes, but it must
// run it to acceptance.
inline CompiledTm ntm_pair_to_ffot(const TmSpec& n1, const TmSpec& n2) {
    detail::require_valid(n1);
    detail::require_valid(n2);
    if (n1.reject || n2.reject)
        throw Error("pair halves must not have reject states; loop instead of rejecting");
    for (const auto& t : n1.states)
        for (const auto& u : n2.states)
            if (t == u) throw Error("pair halves share the state name " + t);
    if (std::set<std::string>(n1.input_alphabet.begin(), n1.input_alphabet.end()) !=
        std::set<std::string>(n2.input_alphabet.begin(), n2.input_alphabet.end()))
        throw Error("pair halves must share the input alphabet");
    if (n1.marker != n2.marker || n1.blank != n2.blank)
        throw Error("pair halves must share the marker and blank symbols");

    // one name table across both halves; shared tape symbols collapse to the
    // same constant, states are disjoint by the check above
    detail::NameMap nm;
    CompiledTm out;
    TmNames& names = out.names;
    auto add_symbol = [&](const std::string& raw) {
        if (!names.symbol_constant.count(raw)) names.symbol_constant[raw] = nm.add(raw);
    };
    add_symbol(n1.marker);
    add_symbol(n1.blank);
    for (const auto& c : n1.input_alphabet) add_symbol(c);
    for (const auto& c : n1.tape_alphabet) add_symbol(c);
    for (const auto& c : n2.tape_alphabet) add_symbol(c);
    for (const auto& t : n1.states) names.state_constant[t] = nm.add(t);
    for (const auto& t : n2.states) names.state_constant[t] = nm.add(t);

    Vocabulary v;
    v.function("S", 1).function("C", 2).function("H", 1).function("I", 1);
    v.constant("zero");
    v.constant(names.symbol_constant.at(n1.marker));
    v.constant(names.symbol_constant.at(n1.blank));
    for (const auto& c : n1.input_alphabet) v.constant(names.symbol_constant.at(c));
    auto add_tape_constants = [&](const TmSpec& half) {
        for (const auto& c : half.tape_alphabet) {
            const std::string& n = names.symbol_constant.at(c);
            if (v.constant_index(n) < 0) v.constant(n);
        }
    };
    add_tape_constants(n1);
    add_tape_constants(n2);
    std::vector<std::string> state_consts;
    for (const TmSpec* half : {&n1, &n2})
        for (const auto& t : half->states) {
            state_consts.push_back(names.state_constant.at(t));
            v.constant(state_consts.back());
        }
    v.constant("e");
    v.constant("h");

    const std::string marker = names.symbol_constant.at(n1.marker);
    const std::string blank = names.symbol_constant.at(n1.blank);
    const std::string start1 = names.state_constant.at(n1.initial);
    const std::string start2 = names.state_constant.at(n2.initial);
    const std::string acc1 = names.state_constant.at(n1.accept);
    const std::string acc2 = names.state_constant.at(n2.accept);

    Machine& m = out.machine;
    m.vocab = v;
    // shared starting configuration, but the initial state picks a half
    m.theory.push_back(
        parse_formula("((H(zero) = S(zero)) & (C(zero, zero) = " + marker + "))", v));
    m.theory.push_back(
        parse_formula("((I(zero) = " + start1 + ") | (I(zero) = " + start2 + "))", v));
    m.theory.push_back(parse_formula(
        "forall y. ((C(zero, y) = " + blank + ") -> (C(zero, S(y)) = " + blank + "))", v));
    m.theory.push_back(
        parse_formula("forall x. forall y. (~(H(x) = y) -> (C(S(x), y) = C(x, y)))", v));
    // the run must end in one of the accept states: rejecting runs are not
    // models of this theory at all
    m.theory.push_back(
        parse_formula("((I(h) = " + acc1 + ") | (I(h) = " + acc2 + "))", v));
    for (const Formula& f : equality_axioms(v)) m.theory.push_back(f);
    for (const Formula& f : finite_peano_axioms()) m.theory.push_back(f);
    for (const Formula& f : rule_sentences(n1, names, v)) m.theory.push_back(f);
    for (const Formula& f : rule_sentences(n2, names, v)) m.theory.push_back(f);
    for (const Formula& f : halting_sentences(acc1, acc2, v)) m.theory.push_back(f);
    // full state separation keeps the halves from bleeding into each other
    for (size_t i = 0; i < state_consts.size(); ++i)
        for (size_t j = i + 1; j < state_consts.size(); ++j)
            m.theory.push_back(
                parse_formula("~(" + state_consts[i] + " = " + state_consts[j] + ")", v));
    for (const auto& c : n1.input_alphabet)
        m.theory.push_back(
            parse_formula("~(" + names.symbol_constant.at(c) + " = " + blank + ")", v));

    m.outputs.push_back({"accept", {parse_formula(detail::eq_output_sentence(acc1), v)}});
    m.outputs.push_back({"reject", {parse_formula(detail::eq_output_sentence(acc2), v)}});
    m.encoding = detail::tape_word_encoding(n1, names, v);
    return out;
}

// ---- run-table inspection -------------------------------------------------

// A model of a compiled theory read back as a run: one entry per element of
// the successor chain out of zero, in chain order.
struct TraceStep {
    std::string state;              // raw state name, "?" if no state matches
    long long head = -1;            // chain position of the head, -1 if off it
    std::vector<std::string> tape;  // raw symbol per chain cell, "?" if none
};

struct Trace {
    std::vector<TraceStep> steps;
    long long halt_time = -1;  // chain position of h, -1 if off the chain
};

inline Trace extract_trace(const FiniteStructure& a, const TmNames& names) {
    // walk zero, S(zero), ... until the chain repeats
    std::vector<int> chain;
    std::map<int, long long> position;
    const std::vector<int>& succ = a.function_tables[a.vocab.function_index("S")];
    for (int t = a.constant_value("zero"); !position.count(t); t = succ[t]) {
        position[t] = (long long)chain.size();
        chain.push_back(t);
    }

    std::map<int, std::string> state_of, symbol_of;
    for (const auto& [raw, cname] : names.state_constant) {
        int e = a.constant_value(cname);
        state_of[e] = state_of.count(e) ? state_of[e] + "|" + raw : raw;
    }
    for (const auto& [raw, cname] : names.symbol_constant) {
        int e = a.constant_value(cname);
        symbol_of[e] = symbol_of.count(e) ? symbol_of[e] + "|" + raw : raw;
    }

    const std::vector<int>& ivals = a.function_tables[a.vocab.function_index("I")];
    const std::vector<int>& hvals = a.function_tables[a.vocab.function_index("H")];
    const std::vector<int>& cvals = a.function_tables[a.vocab.function_index("C")];

    Trace tr;
    for (int t : chain) {
        TraceStep step;
        step.state = state_of.count(ivals[t]) ? state_of[ivals[t]] : "?";
        step.head = position.count(hvals[t]) ? position[hvals[t]] : -1;
        for (int cell : chain) {
            int sym = cvals[(long long)t * a.size + cell];
            step.tape.push_back(symbol_of.count(sym) ? symbol_of[sym] : "?");
        }
        tr.steps.push_back(step);
    }
    int h = a.constant_value("h");
    tr.halt_time = position.count(h) ? position[h] : -1;
    return tr;
}

// Checks that a trace is an accepting run of `spec`: starts in the initial
// state on cell 1, follows some rule at every step before the halt, and sits
// in the accept state at the halt.  Returns human-readable violations;
// empty means legal.
inline std::vector<std::string> trace_violations(const Trace& tr, const TmSpec& spec) {
    std::vector<std::string> bad;
    if (tr.steps.empty()) return {"empty trace"};
    if (tr.halt_time < 0) bad.push_back("halting time is off the successor chain");
    long long upto = tr.halt_time < 0 ? (long long)tr.steps.size() - 1
                                      : std::min<long long>(tr.halt_time,
                                                            (long long)tr.steps.size() - 1);
    if (tr.steps[0].state != spec.initial)
        bad.push_back("starts in " + tr.steps[0].state + ", not " + spec.initial);
    if (tr.steps[0].head != 1) bad.push_back("head starts off cell 1");
    for (long long k = 0; k < upto; ++k) {
        const TraceStep& cur = tr.steps[k];
        const TraceStep& nxt = tr.steps[k + 1];
        if (cur.head < 0 || cur.head >= (long long)cur.tape.size()) {
            bad.push_back("step " + std::to_string(k) + ": head is off the tape");
            continue;
        }
        const std::string& read = cur.tape[cur.head];
        bool matched = false;
        for (const TmRule& r : spec.rules) {
            if (r.state != cur.state || r.read != read) continue;
            if (r.next != nxt.state) continue;
            long long want_head = cur.head + (r.move == Move::Right
                                                  ? 1
                                                  : r.move == Move::Left ? -1 : 0);
            if (nxt.head != want_head) continue;
            bool cells_ok = nxt.tape.size() == cur.tape.size();
            for (size_t y = 0; cells_ok && y < cur.tape.size(); ++y) {
                const std::string& want =
                    ((long long)y == cur.head) ? r.write : cur.tape[y];
                cells_ok = (nxt.tape[y] == want);
            }
            if (cells_ok) {
                matched = true;
                break;
            }
        }
        if (!matched)
            bad.push_back("step " + std::to_string(k) + ": no rule of " +
                          (spec.name.empty() ? "the machine" : spec.name) +
                          " produces the next configuration");
    }
    long long halt = std::min<long long>(upto, (long long)tr.steps.size() - 1);
    if (tr.steps[halt].state != spec.accept)
        bad.push_back("run ends in " + tr.steps[halt].state + ", not " + spec.accept);
    return bad;
}

}  // namespace ffot
