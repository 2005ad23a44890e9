#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ffot/syntax.hpp"
#include "ffot/vocabulary.hpp"

namespace ffot {

// How the "=" atom is evaluated: as identity on domain elements, or as an
// ordinary binary relation supplied in equality_table (so that congruence
// models, where = is a proper equivalence, are expressible).
enum class EqualityMode { Interpreted, Axiomatic };

namespace detail {

inline long long pow_ll(long long base, int exp) {
    long long out = 1;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

}  // namespace detail

// Rank of an argument tuple in lexicographic order (first argument most
// significant).  Function tables and relation bitmaps are indexed by rank, so
// iterating ranks visits tuples in lexicographic order.
inline long long tuple_rank(const std::vector<int>& tuple, int n) {
    long long rank = 0;
    for (int a : tuple) rank = rank * n + a;
    return rank;
}

inline std::vector<int> tuple_of_rank(long long rank, int arity, int n) {
    std::vector<int> tuple(arity, 0);
    for (int i = arity - 1; i >= 0; --i) {
        tuple[i] = static_cast<int>(rank % n);
        rank /= n;
    }
    return tuple;
}

// A finite structure over a fixed vocabulary.  The domain is always
// {0,...,size-1}; interpretations are stored densely, in vocabulary
// declaration order, so two structures over the same vocabulary compare and
// serialize deterministically.
struct FiniteStructure {
    Vocabulary vocab;
    int size = 1;
    std::vector<int> constant_values;               // per constant
    std::vector<std::vector<int>> function_tables;  // per function, rank-indexed
    std::vector<std::vector<char>> relation_tables; // per relation, rank-indexed 0/1
    EqualityMode equality = EqualityMode::Interpreted;
    std::vector<char> equality_table;               // n*n, axiomatic mode only

    bool operator==(const FiniteStructure& other) const = default;

    static FiniteStructure empty_of(const Vocabulary& v, int n,
                                    EqualityMode mode = EqualityMode::Interpreted) {
        FiniteStructure a;
        a.vocab = v;
        a.size = n;
        a.equality = mode;
        a.constant_values.assign(v.constants().size(), 0);
        for (const auto& f : v.functions())
            a.function_tables.emplace_back(detail::pow_ll(n, f.arity), 0);
        for (const auto& r : v.relations())
            a.relation_tables.emplace_back(detail::pow_ll(n, r.arity), 0);
        if (mode == EqualityMode::Axiomatic) {
            a.equality_table.assign(static_cast<size_t>(n) * n, 0);
            for (int i = 0; i < n; ++i) a.equality_table[i * n + i] = 1;
        }
        return a;
    }

    int constant_value(const std::string& name) const {
        int i = vocab.constant_index(name);
        if (i < 0) throw EvalError("unknown constant " + name);
        return constant_values[i];
    }

    void set_constant(const std::string& name, int v) {
        int i = vocab.constant_index(name);
        if (i < 0) throw EvalError("unknown constant " + name);
        constant_values[i] = v;
    }

    std::vector<int>& function_table(const std::string& name) {
        int i = vocab.function_index(name);
        if (i < 0) throw EvalError("unknown function " + name);
        return function_tables[i];
    }

    std::vector<char>& relation_table(const std::string& name) {
        int i = vocab.relation_index(name);
        if (i < 0) throw EvalError("unknown relation " + name);
        return relation_tables[i];
    }

    void set_function(const std::string& name, const std::vector<int>& args, int v) {
        function_table(name)[tuple_rank(args, size)] = v;
    }

    void set_relation(const std::string& name, const std::vector<int>& args, bool v) {
        relation_table(name)[tuple_rank(args, size)] = v ? 1 : 0;
    }

    bool equal_elements(int a, int b) const {
        if (equality == EqualityMode::Interpreted) return a == b;
        return equality_table[static_cast<size_t>(a) * size + b] != 0;
    }

    // Checks the representation invariants: total tables of the right shape,
    // every referenced element in range.
    void validate() const {
        if (size < 1) throw Error("structure size must be >= 1");
        if (constant_values.size() != vocab.constants().size())
            throw Error("constant table shape mismatch");
        for (int v : constant_values)
            if (v < 0 || v >= size) throw Error("constant value out of range");
        if (function_tables.size() != vocab.functions().size())
            throw Error("function table count mismatch");
        for (size_t i = 0; i < function_tables.size(); ++i) {
            size_t want = detail::pow_ll(size, vocab.functions()[i].arity);
            if (function_tables[i].size() != want)
                throw Error("function table for " + vocab.functions()[i].name +
                            " is not total");
            for (int v : function_tables[i])
                if (v < 0 || v >= size)
                    throw Error("function value out of range in " +
                                vocab.functions()[i].name);
        }
        if (relation_tables.size() != vocab.relations().size())
            throw Error("relation table count mismatch");
        for (size_t i = 0; i < relation_tables.size(); ++i) {
            size_t want = detail::pow_ll(size, vocab.relations()[i].arity);
            if (relation_tables[i].size() != want)
                throw Error("relation table for " + vocab.relations()[i].name +
                            " has the wrong shape");
        }
        if (equality == EqualityMode::Axiomatic) {
            if (equality_table.size() != static_cast<size_t>(size) * size)
                throw Error("axiomatic equality needs an n*n table");
        } else if (!equality_table.empty()) {
            throw Error("interpreted equality must not carry a table");
        }
    }
};

// Variable bindings during evaluation.  Scoped like a stack so that nested
// quantifiers shadow outer bindings of the same name.
class Environment {
  public:
    Environment() = default;
    Environment(std::initializer_list<std::pair<std::string, int>> binds) {
        for (const auto& [k, v] : binds) bind(k, v);
    }

    void bind(const std::string& name, int value) { binds_.emplace_back(name, value); }
    void unbind() { binds_.pop_back(); }

    std::optional<int> lookup(const std::string& name) const {
        for (auto it = binds_.rbegin(); it != binds_.rend(); ++it)
            if (it->first == name) return it->second;
        return std::nullopt;
    }

  private:
    std::vector<std::pair<std::string, int>> binds_;
};

inline int eval_term(const FiniteStructure& A, const Term& t, const Environment& env) {
    switch (t.kind) {
        case Term::Kind::Variable: {
            auto v = env.lookup(t.name);
            if (!v) throw EvalError("unbound variable " + t.name);
            return *v;
        }
        case Term::Kind::Constant:
            return A.constant_value(t.name);
        case Term::Kind::Apply: {
            int i = A.vocab.function_index(t.name);
            if (i < 0) throw EvalError("unknown function " + t.name);
            long long rank = 0;
            for (const Term& arg : t.args) rank = rank * A.size + eval_term(A, arg, env);
            return A.function_tables[i][rank];
        }
    }
    throw EvalError("malformed term");
}

namespace detail {

inline bool eval_rec(const FiniteStructure& A, const Formula& f, Environment& env) {
    switch (f.kind) {
        case Formula::Kind::Atom: {
            int i = A.vocab.relation_index(f.name);
            if (i < 0) throw EvalError("unknown relation " + f.name);
            long long rank = 0;
            for (const Term& arg : f.terms) rank = rank * A.size + eval_term(A, arg, env);
            return A.relation_tables[i][rank] != 0;
        }
        case Formula::Kind::Equal:
            return A.equal_elements(eval_term(A, f.terms[0], env),
                                    eval_term(A, f.terms[1], env));
        case Formula::Kind::Not:
            return !eval_rec(A, f.sub[0], env);
        case Formula::Kind::And:
            return eval_rec(A, f.sub[0], env) && eval_rec(A, f.sub[1], env);
        case Formula::Kind::Or:
            return eval_rec(A, f.sub[0], env) || eval_rec(A, f.sub[1], env);
        case Formula::Kind::Implies:
            return !eval_rec(A, f.sub[0], env) || eval_rec(A, f.sub[1], env);
        case Formula::Kind::Iff:
            return eval_rec(A, f.sub[0], env) == eval_rec(A, f.sub[1], env);
        case Formula::Kind::Forall:
            for (int a = 0; a < A.size; ++a) {
                env.bind(f.name, a);
                bool ok = eval_rec(A, f.sub[0], env);
                env.unbind();
                if (!ok) return false;
            }
            return true;
        case Formula::Kind::Exists:
            for (int a = 0; a < A.size; ++a) {
                env.bind(f.name, a);
                bool ok = eval_rec(A, f.sub[0], env);
                env.unbind();
                if (ok) return true;
            }
            return false;
    }
    throw EvalError("malformed formula");
}

}  // namespace detail

// Classical two-valued truth with quantifiers ranging over {0,...,size-1}.
inline bool eval_formula(const FiniteStructure& A, const Formula& f,
                         const Environment& env = {}) {
    Environment scratch = env;
    return detail::eval_rec(A, f, scratch);
}

struct Assignment {
    std::string var;
    int value;
    bool operator==(const Assignment&) const = default;
};

struct SentenceVerdict {
    Formula sentence;
    bool holds = false;
    // For a false sentence with a leading universal prefix: the
    // lexicographically smallest assignment to the prefix variables under
    // which the matrix fails.
    std::vector<Assignment> witness;
};

struct ModelReport {
    std::vector<SentenceVerdict> verdicts;
    bool all_hold = true;
};

inline ModelReport check_model(const FiniteStructure& A,
                               const std::vector<Formula>& sentences) {
    ModelReport report;
    for (const Formula& s : sentences) {
        validate_formula(s, A.vocab);
        SentenceVerdict v;
        v.sentence = s;
        v.holds = eval_formula(A, s);
        if (!v.holds) {
            // peel the leading forall prefix and search assignments in
            // lexicographic order for the first failing one
            std::vector<std::string> prefix;
            const Formula* matrix = &s;
            while (matrix->kind == Formula::Kind::Forall) {
                prefix.push_back(matrix->name);
                matrix = &matrix->sub[0];
            }
            if (!prefix.empty()) {
                std::vector<int> assign(prefix.size(), 0);
                bool done = false;
                while (!done) {
                    Environment env;
                    for (size_t i = 0; i < prefix.size(); ++i)
                        env.bind(prefix[i], assign[i]);
                    if (!eval_formula(A, *matrix, env)) {
                        for (size_t i = 0; i < prefix.size(); ++i)
                            v.witness.push_back({prefix[i], assign[i]});
                        break;
                    }
                    int i = static_cast<int>(assign.size()) - 1;
                    while (i >= 0 && assign[i] == A.size - 1) assign[i--] = 0;
                    if (i < 0) done = true;
                    else ++assign[i];
                }
            }
            report.all_hold = false;
        }
        report.verdicts.push_back(std::move(v));
    }
    return report;
}

// Relabels the structure along a permutation of the domain.  Satisfaction of
// every sentence is preserved (the map is an isomorphism by construction).
inline FiniteStructure apply_isomorphism(const FiniteStructure& A,
                                         const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != A.size)
        throw Error("permutation size does not match the domain");
    std::vector<char> seen(A.size, 0);
    for (int v : perm) {
        if (v < 0 || v >= A.size || seen[v]) throw Error("not a permutation");
        seen[v] = 1;
    }
    FiniteStructure B = A;
    for (size_t i = 0; i < A.constant_values.size(); ++i)
        B.constant_values[i] = perm[A.constant_values[i]];
    for (size_t fi = 0; fi < A.function_tables.size(); ++fi) {
        int arity = A.vocab.functions()[fi].arity;
        for (long long rank = 0; rank < static_cast<long long>(A.function_tables[fi].size());
             ++rank) {
            std::vector<int> args = tuple_of_rank(rank, arity, A.size);
            for (int& a : args) a = perm[a];
            B.function_tables[fi][tuple_rank(args, A.size)] =
                perm[A.function_tables[fi][rank]];
        }
    }
    for (size_t ri = 0; ri < A.relation_tables.size(); ++ri) {
        int arity = A.vocab.relations()[ri].arity;
        for (long long rank = 0; rank < static_cast<long long>(A.relation_tables[ri].size());
             ++rank) {
            std::vector<int> args = tuple_of_rank(rank, arity, A.size);
            for (int& a : args) a = perm[a];
            B.relation_tables[ri][tuple_rank(args, A.size)] = A.relation_tables[ri][rank];
        }
    }
    if (A.equality == EqualityMode::Axiomatic) {
        for (int a = 0; a < A.size; ++a)
            for (int b = 0; b < A.size; ++b)
                B.equality_table[static_cast<size_t>(perm[a]) * A.size + perm[b]] =
                    A.equality_table[static_cast<size_t>(a) * A.size + b];
    }
    return B;
}

}  // namespace ffot
