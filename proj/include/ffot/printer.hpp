#pragma once

#include <string>

#include "ffot/syntax.hpp"

namespace ffot {

inline std::string print_term(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Variable:
        case Term::Kind::Constant:
            return t.name;
        case Term::Kind::Apply: {
            std::string out = t.name + "(";
            for (size_t i = 0; i < t.args.size(); ++i) {
                if (i) out += ", ";
                out += print_term(t.args[i]);
            }
            return out + ")";
        }
    }
    return {};
}

namespace detail {

inline std::string print_formula(const Formula& f);

// Children of connectives need parentheses only when they are quantified:
// equality and binary connectives already wrap themselves.
inline std::string print_child(const Formula& f) {
    if (f.kind == Formula::Kind::Forall || f.kind == Formula::Kind::Exists)
        return "(" + print_formula(f) + ")";
    return print_formula(f);
}

inline std::string print_formula(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::Atom: {
            if (f.terms.empty()) return f.name;
            std::string out = f.name + "(";
            for (size_t i = 0; i < f.terms.size(); ++i) {
                if (i) out += ", ";
                out += print_term(f.terms[i]);
            }
            return out + ")";
        }
        case Formula::Kind::Equal:
            return "(" + print_term(f.terms[0]) + " = " + print_term(f.terms[1]) + ")";
        case Formula::Kind::Not:
            return "~" + print_child(f.sub[0]);
        case Formula::Kind::And:
            return "(" + print_child(f.sub[0]) + " & " + print_child(f.sub[1]) + ")";
        case Formula::Kind::Or:
            return "(" + print_child(f.sub[0]) + " | " + print_child(f.sub[1]) + ")";
        case Formula::Kind::Implies:
            return "(" + print_child(f.sub[0]) + " -> " + print_child(f.sub[1]) + ")";
        case Formula::Kind::Iff:
            return "(" + print_child(f.sub[0]) + " <-> " + print_child(f.sub[1]) + ")";
        // a quantifier body is a full formula extending maximally right, so
        // it never needs parentheses of its own
        case Formula::Kind::Forall:
            return "forall " + f.name + ". " + print_formula(f.sub[0]);
        case Formula::Kind::Exists:
            return "exists " + f.name + ". " + print_formula(f.sub[0]);
    }
    return {};
}

}  // namespace detail

// Canonical, fully parenthesised rendering; parsing it back yields the same
// tree.
inline std::string print_sentence(const Formula& f) { return detail::print_formula(f); }
inline std::string print_formula(const Formula& f) { return detail::print_formula(f); }

}  // namespace ffot
