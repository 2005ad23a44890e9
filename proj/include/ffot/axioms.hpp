#pragma once

// Generators for the standard axiom sets (equality, successor arithmetic,
// ordered fields, and their finite variants) plus constructors for the
// concrete finite models the finite variants are designed around.

#include <string>
#include <vector>

#include "ffot/parser.hpp"
#include "ffot/structure.hpp"
#include "ffot/syntax.hpp"
#include "ffot/vocabulary.hpp"

namespace ffot {

// --- vocabularies ---------------------------------------------------------

inline Vocabulary psa_vocab() {
    Vocabulary v;
    v.function("S", 1).constant("zero");
    return v;
}

inline Vocabulary psa_f_vocab() {
    Vocabulary v;
    v.function("S", 1).constant("zero").constant("e");
    return v;
}

inline Vocabulary dof_vocab() {
    Vocabulary v;
    v.relation("lt", 2).relation("le", 2);
    v.function("plus", 2).function("times", 2);
    v.constant("zero").constant("one");
    return v;
}

inline Vocabulary dof_f_vocab() {
    Vocabulary v;
    v.relation("lt", 2).relation("le", 2).relation("approx", 2);
    v.function("plus", 2).function("times", 2);
    v.constant("zero").constant("one");
    v.constant("e").constant("neg_e").constant("r").constant("inv_r").constant("neg_r");
    return v;
}

// --- equality axioms ------------------------------------------------------

// Reflexivity, symmetry, transitivity, then one congruence sentence per
// relation and per function in declaration order.  Nullary relations get no
// congruence sentence (there are no arguments to vary).
inline std::vector<Formula> equality_axioms(const Vocabulary& vocab) {
    std::vector<Formula> out;
    Vocabulary bare;  // the three equivalence sentences mention no symbols
    out.push_back(parse_sentence("forall x. (x = x)", bare));
    out.push_back(parse_sentence("forall x. forall y. ((x = y) -> (y = x))", bare));
    out.push_back(parse_sentence(
        "forall x. forall y. forall z. (((x = y) & (y = z)) -> (x = z))", bare));

    auto congruence = [](int arity, const std::string& name, bool is_relation) {
        std::vector<Term> xs, ys;
        for (int i = 1; i <= arity; ++i) {
            xs.push_back(Term::var("x" + std::to_string(i)));
            ys.push_back(Term::var("y" + std::to_string(i)));
        }
        std::vector<Formula> eqs;
        for (int i = 0; i < arity; ++i) eqs.push_back(equal(xs[i], ys[i]));
        Formula body =
            is_relation
                ? implies(conj_all(eqs), iff(atom(name, xs), atom(name, ys)))
                : implies(conj_all(eqs),
                          equal(Term::apply(name, xs), Term::apply(name, ys)));
        for (int i = arity; i >= 1; --i)
            body = forall("y" + std::to_string(i), std::move(body));
        for (int i = arity; i >= 1; --i)
            body = forall("x" + std::to_string(i), std::move(body));
        return body;
    };

    for (const auto& r : vocab.relations())
        if (r.arity > 0) out.push_back(congruence(r.arity, r.name, true));
    for (const auto& f : vocab.functions())
        out.push_back(congruence(f.arity, f.name, false));
    return out;
}

// --- successor axioms -----------------------------------------------------

inline std::vector<Formula> peano_successor_axioms() {
    Vocabulary v = psa_vocab();
    return {
        parse_sentence("forall x. ~(S(x) = zero)", v),
        parse_sentence("forall x. forall y. ((S(x) = S(y)) -> (x = y))", v),
        parse_sentence("forall x. ~(S(x) = x)", v),
    };
}

inline std::vector<Formula> finite_peano_axioms() {
    Vocabulary v = psa_f_vocab();
    return {
        parse_sentence("forall x. ~(S(x) = zero)", v),
        parse_sentence(
            "forall x. forall y. ((S(x) = S(y)) -> ((x = y) | (S(x) = e)))", v),
        parse_sentence("forall x. ((S(x) = x) <-> (x = e))", v),
    };
}

// --- ordered field axioms -------------------------------------------------

inline std::vector<Formula> dense_ordered_field_axioms() {
    Vocabulary v = dof_vocab();
    const char* texts[] = {
        "forall x. ((plus(x, zero) = x) & (times(x, zero) = zero))",
        "lt(zero, one)",
        "forall x. forall y. forall z. (plus(plus(x, y), z) = plus(x, plus(y, z)))",
        "forall x. forall y. (plus(x, y) = plus(y, x))",
        "forall x. forall y. forall z. (times(times(x, y), z) = times(x, times(y, z)))",
        "forall x. forall y. (times(x, y) = times(y, x))",
        "forall x. forall y. forall z. (times(plus(x, y), z) = plus(times(x, z), times(y, z)))",
        "forall x. exists y. (plus(x, y) = zero)",
        "forall x. forall y. (le(zero, y) -> le(x, plus(x, y)))",
        "forall x. (~(x = zero) -> (exists y. (times(x, y) = one)))",
        "forall x. forall y. forall z. ((lt(x, y) & lt(y, z)) -> lt(x, z))",
        "forall x. ~lt(x, x)",
        "forall x. forall y. forall z. (le(x, y) -> le(plus(x, z), plus(y, z)))",
        "forall x. forall y. (le(x, y) <-> (lt(x, y) | (x = y)))",
        "forall x. forall y. forall z. ((lt(zero, z) & le(x, y)) -> le(times(x, z), times(y, z)))",
        "forall x. forall y. ((lt(x, y) | (x = y)) | lt(y, x))",
    };
    std::vector<Formula> out;
    for (const char* t : texts) out.push_back(parse_sentence(t, v));
    return out;
}

// The saturating-arithmetic variant: the primed sentences first (bounds,
// approximate equality, saturation at +-e, guarded associativity and
// distributivity), then the base set minus the three exact
// associativity/distributivity laws.
inline std::vector<Formula> finite_dof_axioms() {
    Vocabulary v = dof_f_vocab();
    const char* primed[] = {
        "((((le(zero, inv_r) & (times(r, inv_r) = one)) & (times(r, r) = e))"
        " & (plus(neg_e, e) = zero)) & (plus(neg_r, r) = zero))",
        "forall x. forall y. (approx(x, y) <->"
        " (le(x, plus(y, inv_r)) & le(y, plus(x, inv_r))))",
        "forall x. (le(zero, x) -> (plus(e, x) = e))",
        "forall x. (le(one, x) -> (times(e, x) = e))",
        "forall x. (le(x, e) & le(neg_e, x))",
        "forall x. forall y. forall z. ((((lt(neg_e, plus(x, y))"
        " & lt(plus(x, y), e)) & lt(neg_e, plus(y, z))) & lt(plus(y, z), e))"
        " -> (plus(plus(x, y), z) = plus(x, plus(y, z))))",
        "forall x. forall y. forall z. ((((lt(neg_e, times(x, y))"
        " & lt(times(x, y), e)) & lt(neg_e, times(y, z))) & lt(times(y, z), e))"
        " -> approx(times(times(x, y), z), times(x, times(y, z))))",
        "forall x. forall y. forall z. ((((((lt(neg_e, plus(x, y))"
        " & lt(plus(x, y), e)) & lt(neg_e, times(x, z))) & lt(times(x, z), e))"
        " & lt(neg_e, times(y, z))) & lt(times(y, z), e))"
        " -> approx(times(plus(x, y), z), plus(times(x, z), times(y, z))))",
    };
    std::vector<Formula> out;
    for (const char* t : primed) out.push_back(parse_sentence(t, v));
    // base sentences, skipping exact +assoc, *assoc and distributivity
    std::vector<Formula> base = dense_ordered_field_axioms();
    for (size_t i = 0; i < base.size(); ++i)
        if (i != 2 && i != 4 && i != 6) out.push_back(base[i]);
    return out;
}

// Pairwise inequations over the given constants, pairs in list order.
inline std::vector<Formula> distinct_constants_axioms(const std::vector<std::string>& cs) {
    if (cs.size() < 2) throw Error("distinct_constants_axioms needs >= 2 constants");
    std::vector<Formula> out;
    for (size_t i = 0; i < cs.size(); ++i)
        for (size_t j = i + 1; j < cs.size(); ++j)
            out.push_back(negation(equal(Term::constant(cs[i]), Term::constant(cs[j]))));
    return out;
}

// --- concrete finite models ----------------------------------------------

// The successor chain 0 -> 1 -> ... -> n with a fixpoint at the top:
// S(i) = i+1 below n, S(n) = n, zero = 0, e = n.
inline FiniteStructure build_psa_f_structure(int n) {
    if (n < 0) throw Error("build_psa_f_structure needs n >= 0");
    FiniteStructure a = FiniteStructure::empty_of(psa_f_vocab(), n + 1);
    a.set_constant("zero", 0);
    a.set_constant("e", n);
    for (int i = 0; i <= n; ++i) a.set_function("S", {i}, i < n ? i + 1 : i);
    return a;
}

// Fixed-point fractions {a/m : a in [-m^3, m^3]} with saturating addition and
// rounded multiplication.  Element index i represents the numerator i - m^3.
//   e = m^3/m = m^2,  neg_e = -m^2,  r = m,  inv_r = 1/m  (as rationals)
// Multiplication maps to the nearest representable to ab/m^2, ties rounding
// toward zero, clamped to +-e.  approx is filled from its defining sentence
// using the structure's own plus/le tables.
inline FiniteStructure build_dof_f_structure(int m) {
    if (m < 2) throw Error("build_dof_f_structure needs m >= 2");
    const int top = m * m * m;      // numerator of e
    const int n = 2 * top + 1;      // domain size
    auto idx = [top](int numer) { return numer + top; };

    FiniteStructure a = FiniteStructure::empty_of(dof_f_vocab(), n);
    a.set_constant("zero", idx(0));
    a.set_constant("one", idx(m));
    a.set_constant("e", idx(top));
    a.set_constant("neg_e", idx(-top));
    a.set_constant("r", idx(m * m));
    a.set_constant("inv_r", idx(1));
    a.set_constant("neg_r", idx(-m * m));

    auto& plus = a.function_table("plus");
    auto& times = a.function_table("times");
    auto& lt = a.relation_table("lt");
    auto& le = a.relation_table("le");
    for (int p = -top; p <= top; ++p) {
        for (int q = -top; q <= top; ++q) {
            long long rank = static_cast<long long>(idx(p)) * n + idx(q);
            int sum = p + q;
            if (sum >= top) sum = top;
            if (sum <= -top) sum = -top;
            plus[rank] = idx(sum);

            // nearest integer to pq/m, ties toward zero
            long long prod = static_cast<long long>(p) * q;
            long long mag = prod < 0 ? -prod : prod;
            long long quot = mag / m, rem = mag % m;
            if (2 * rem > m) ++quot;
            if (quot > top) quot = top;
            int near = static_cast<int>(prod < 0 ? -quot : quot);
            times[rank] = idx(near);

            lt[rank] = p < q ? 1 : 0;
            le[rank] = p <= q ? 1 : 0;
        }
    }
    auto& approx = a.relation_table("approx");
    for (int p = -top; p <= top; ++p) {
        for (int q = -top; q <= top; ++q) {
            int q_up = a.function_tables[a.vocab.function_index("plus")]
                                        [static_cast<long long>(idx(q)) * n + idx(1)];
            int p_up = a.function_tables[a.vocab.function_index("plus")]
                                        [static_cast<long long>(idx(p)) * n + idx(1)];
            bool ok = le[static_cast<long long>(idx(p)) * n + q_up] &&
                      le[static_cast<long long>(idx(q)) * n + p_up];
            approx[static_cast<long long>(idx(p)) * n + idx(q)] = ok ? 1 : 0;
        }
    }
    return a;
}

}  // namespace ffot
