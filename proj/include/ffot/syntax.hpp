#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ffot/vocabulary.hpp"

namespace ffot {

// Terms and formulas are plain value-semantic trees. Immutability is by
// convention: helpers build fresh trees instead of mutating.
struct Term {
    enum class Kind { Variable, Constant, Apply };

    Kind kind;
    std::string name;
    std::vector<Term> args;

    static Term var(std::string n) { return {Kind::Variable, std::move(n), {}}; }
    static Term constant(std::string n) { return {Kind::Constant, std::move(n), {}}; }
    static Term apply(std::string n, std::vector<Term> a) {
        return {Kind::Apply, std::move(n), std::move(a)};
    }

    bool operator==(const Term&) const = default;

    bool is_ground() const {
        if (kind == Kind::Variable) return false;
        for (const auto& a : args)
            if (!a.is_ground()) return false;
        return true;
    }
};

struct Formula {
    enum class Kind { Atom, Equal, Not, And, Or, Implies, Iff, Forall, Exists };

    Kind kind;
    std::string name;         // Atom: relation symbol; Forall/Exists: bound variable
    std::vector<Term> terms;  // Atom: arguments; Equal: the two operands
    std::vector<Formula> sub;

    bool operator==(const Formula&) const = default;
};

using Sentence = Formula;

// Convenience builders, used heavily by the axiom generators and tests.
inline Formula atom(std::string rel, std::vector<Term> args) {
    return {Formula::Kind::Atom, std::move(rel), std::move(args), {}};
}
inline Formula equal(Term a, Term b) {
    return {Formula::Kind::Equal, "", {std::move(a), std::move(b)}, {}};
}
inline Formula negation(Formula f) {
    return {Formula::Kind::Not, "", {}, {std::move(f)}};
}
inline Formula conj(Formula a, Formula b) {
    return {Formula::Kind::And, "", {}, {std::move(a), std::move(b)}};
}
inline Formula disj(Formula a, Formula b) {
    return {Formula::Kind::Or, "", {}, {std::move(a), std::move(b)}};
}
inline Formula implies(Formula a, Formula b) {
    return {Formula::Kind::Implies, "", {}, {std::move(a), std::move(b)}};
}
inline Formula iff(Formula a, Formula b) {
    return {Formula::Kind::Iff, "", {}, {std::move(a), std::move(b)}};
}
inline Formula forall(std::string var, Formula body) {
    return {Formula::Kind::Forall, std::move(var), {}, {std::move(body)}};
}
inline Formula exists(std::string var, Formula body) {
    return {Formula::Kind::Exists, std::move(var), {}, {std::move(body)}};
}

// Left-associated chains; empty input is rejected (no boolean literals in the
// language).
inline Formula conj_all(std::vector<Formula> fs) {
    if (fs.empty()) throw Error("conj_all: empty conjunction");
    Formula out = std::move(fs[0]);
    for (size_t i = 1; i < fs.size(); ++i) out = conj(std::move(out), std::move(fs[i]));
    return out;
}
inline Formula disj_all(std::vector<Formula> fs) {
    if (fs.empty()) throw Error("disj_all: empty disjunction");
    Formula out = std::move(fs[0]);
    for (size_t i = 1; i < fs.size(); ++i) out = disj(std::move(out), std::move(fs[i]));
    return out;
}

namespace detail {

inline void term_vars(const Term& t, std::set<std::string>& out) {
    if (t.kind == Term::Kind::Variable) out.insert(t.name);
    for (const auto& a : t.args) term_vars(a, out);
}

inline void free_vars_rec(const Formula& f, std::set<std::string>& bound,
                          std::set<std::string>& out) {
    switch (f.kind) {
        case Formula::Kind::Atom:
        case Formula::Kind::Equal: {
            std::set<std::string> vs;
            for (const auto& t : f.terms) term_vars(t, vs);
            for (const auto& v : vs)
                if (!bound.count(v)) out.insert(v);
            break;
        }
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            bool fresh = bound.insert(f.name).second;
            free_vars_rec(f.sub[0], bound, out);
            if (fresh) bound.erase(f.name);
            break;
        }
        default:
            for (const auto& s : f.sub) free_vars_rec(s, bound, out);
    }
}

}  // namespace detail

inline std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    detail::free_vars_rec(f, bound, out);
    return out;
}

inline bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

inline bool has_quantifier(const Formula& f) {
    if (f.kind == Formula::Kind::Forall || f.kind == Formula::Kind::Exists) return true;
    for (const auto& s : f.sub)
        if (has_quantifier(s)) return true;
    return false;
}

namespace detail {

inline void term_consts(const Term& t, std::set<std::string>& out) {
    if (t.kind == Term::Kind::Constant) out.insert(t.name);
    for (const auto& a : t.args) term_consts(a, out);
}

inline void nested_fns(const Term& t, bool inside, std::set<std::string>& out) {
    if (t.kind == Term::Kind::Apply) {
        if (inside) out.insert(t.name);
        for (const auto& a : t.args) nested_fns(a, true, out);
    }
}

inline void formula_nested_fns(const Formula& f, std::set<std::string>& out) {
    for (const auto& t : f.terms) nested_fns(t, false, out);
    for (const auto& s : f.sub) formula_nested_fns(s, out);
}

inline void formula_consts(const Formula& f, std::set<std::string>& out) {
    for (const auto& t : f.terms) term_consts(t, out);
    for (const auto& s : f.sub) formula_consts(s, out);
}

}  // namespace detail

// functions whose application appears inside another application's
// argument — their values address other symbols' tables
inline std::set<std::string> nested_function_symbols(const Formula& f) {
    std::set<std::string> out;
    detail::formula_nested_fns(f, out);
    return out;
}

// every constant symbol occurring anywhere in the formula
inline std::set<std::string> sentence_constants(const Formula& f) {
    std::set<std::string> out;
    detail::formula_consts(f, out);
    return out;
}

namespace detail {

inline Term subst_term(const Term& t, const std::string& var, const Term& repl) {
    if (t.kind == Term::Kind::Variable) return t.name == var ? repl : t;
    Term out = t;
    for (auto& a : out.args) a = subst_term(a, var, repl);
    return out;
}

}  // namespace detail

// Capture-free substitution of a ground term for a free variable. Ground
// replacement terms cannot be captured, so no renaming is ever needed.
inline Formula substitute(const Formula& f, const std::string& var, const Term& replacement) {
    if (!replacement.is_ground())
        throw EvalError("substitute: replacement term must be ground");
    switch (f.kind) {
        case Formula::Kind::Atom:
        case Formula::Kind::Equal: {
            Formula out = f;
            for (auto& t : out.terms) t = detail::subst_term(t, var, replacement);
            return out;
        }
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            if (f.name == var) return f;  // shadowed; nothing free below
            Formula out = f;
            out.sub[0] = substitute(f.sub[0], var, replacement);
            return out;
        }
        default: {
            Formula out = f;
            for (auto& s : out.sub) s = substitute(s, var, replacement);
            return out;
        }
    }
}

inline Term substitute_term(const Term& t, const std::string& var, const Term& replacement) {
    if (!replacement.is_ground())
        throw EvalError("substitute: replacement term must be ground");
    return detail::subst_term(t, var, replacement);
}

namespace detail {

inline void validate_term(const Term& t, const Vocabulary& vocab,
                          const std::set<std::string>& bound) {
    switch (t.kind) {
        case Term::Kind::Variable:
            if (!bound.count(t.name))
                throw VocabularyError("unbound variable: " + t.name);
            break;
        case Term::Kind::Constant:
            if (vocab.constant_index(t.name) < 0)
                throw VocabularyError("undeclared constant: " + t.name);
            if (!t.args.empty()) throw VocabularyError("constant with arguments: " + t.name);
            break;
        case Term::Kind::Apply: {
            auto ar = vocab.function_arity(t.name);
            if (!ar) throw VocabularyError("undeclared function: " + t.name);
            if (static_cast<int>(t.args.size()) != *ar)
                throw VocabularyError("arity mismatch for function " + t.name);
            for (const auto& a : t.args) validate_term(a, vocab, bound);
            break;
        }
    }
}

inline void validate_rec(const Formula& f, const Vocabulary& vocab,
                         std::set<std::string>& bound) {
    switch (f.kind) {
        case Formula::Kind::Atom: {
            auto ar = vocab.relation_arity(f.name);
            if (!ar) throw VocabularyError("undeclared relation: " + f.name);
            if (static_cast<int>(f.terms.size()) != *ar)
                throw VocabularyError("arity mismatch for relation " + f.name);
            for (const auto& t : f.terms) validate_term(t, vocab, bound);
            break;
        }
        case Formula::Kind::Equal:
            if (f.terms.size() != 2) throw VocabularyError("equality needs two operands");
            for (const auto& t : f.terms) validate_term(t, vocab, bound);
            break;
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            if (!is_identifier(f.name))
                throw VocabularyError("bad bound variable: " + f.name);
            bool fresh = bound.insert(f.name).second;
            validate_rec(f.sub[0], vocab, bound);
            if (fresh) bound.erase(f.name);
            break;
        }
        case Formula::Kind::Not:
            if (f.sub.size() != 1) throw VocabularyError("negation needs one operand");
            validate_rec(f.sub[0], vocab, bound);
            break;
        default:
            if (f.sub.size() != 2) throw VocabularyError("binary connective needs two operands");
            for (const auto& s : f.sub) validate_rec(s, vocab, bound);
    }
}

}  // namespace detail

// Checks declarations and arities against a vocabulary; throws on failure.
// Free variables are allowed (callers that need sentences also check
// is_sentence).
inline void validate_formula(const Formula& f, const Vocabulary& vocab) {
    std::set<std::string> bound;
    detail::validate_rec(f, vocab, bound);
}

}  // namespace ffot
