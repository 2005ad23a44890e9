#pragma once

// Exhaustive bounded model search: backtracking over interpretation cells
// (constants, then function table entries in first-argument-major order, then
// relation memberships) with three-valued constraint pruning over ground
// instances, optional least-number symmetry breaking, and deterministic
// parallel partitioning of the search space.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ffot/structure.hpp"
#include "ffot/syntax.hpp"
#include "ffot/vocabulary.hpp"

namespace ffot {

struct SearchConfig {
    int min_size = 1;
    int max_size = 1;
    long long model_limit = 0;  // 0 = return all
    EqualityMode equality = EqualityMode::Interpreted;
    bool symmetry_breaking = true;
    bool pruning = true;
    int jobs = 1;
    std::optional<std::chrono::milliseconds> time_budget;
};

struct SearchOutcome {
    std::vector<FiniteStructure> models;  // sizes ascending, canonical order within size
    std::vector<int> sizes_checked;
    long long leaves_examined = 0;
    bool budget_exhausted = false;
    bool limit_reached = false;
};

// Deterministic byte encoding, injective for a fixed vocabulary and size:
// relation tables as bitmaps, function entries and constants as n-bit one-hot
// fields, all in declaration/rank order.
inline std::string canonical_form(const FiniteStructure& A) {
    std::string out;
    out.push_back('F');
    for (int sh = 24; sh >= 0; sh -= 8)
        out.push_back(static_cast<char>((A.size >> sh) & 0xff));
    out.push_back(A.equality == EqualityMode::Axiomatic ? 1 : 0);
    unsigned char acc = 0;
    int nbits = 0;
    auto put_bit = [&](bool b) {
        acc = static_cast<unsigned char>((acc << 1) | (b ? 1 : 0));
        if (++nbits == 8) {
            out.push_back(static_cast<char>(acc));
            acc = 0;
            nbits = 0;
        }
    };
    auto put_onehot = [&](int v) {
        for (int i = 0; i < A.size; ++i) put_bit(i == v);
    };
    for (const auto& table : A.relation_tables)
        for (char b : table) put_bit(b != 0);
    for (const auto& table : A.function_tables)
        for (int v : table) put_onehot(v);
    for (int v : A.constant_values) put_onehot(v);
    if (A.equality == EqualityMode::Axiomatic)
        for (char b : A.equality_table) put_bit(b != 0);
    if (nbits > 0) out.push_back(static_cast<char>(acc << (8 - nbits)));
    return out;
}

namespace detail {

enum class Tri : unsigned char { False, True, Unknown };

// ---- cell layout ----------------------------------------------------------

struct CellInfo {
    enum Kind { Constant, Function, Relation, Equality } kind;
    int sym = 0;
    long long rank = 0;
};

struct CellSpace {
    const Vocabulary* vocab = nullptr;
    int n = 1;
    bool axiomatic = false;
    long long total = 0;
    long long const_base = 0;
    std::vector<long long> fun_base;
    std::vector<long long> rel_base;
    long long eq_base = -1;
    std::vector<CellInfo> info;
    std::vector<std::vector<int>> addr;  // address elements per cell
    std::vector<long long> order;        // search order over cell ids

    void build(const Vocabulary& v, int size, bool axiomatic_eq,
               const std::vector<char>& early_const = {},
               const std::vector<char>& addr_former = {}) {
        vocab = &v;
        n = size;
        axiomatic = axiomatic_eq;
        info.clear();
        addr.clear();
        fun_base.clear();
        rel_base.clear();
        const_base = 0;
        for (int i = 0; i < static_cast<int>(v.constants().size()); ++i) {
            info.push_back({CellInfo::Constant, i, 0});
            addr.push_back({});
        }
        for (int f = 0; f < static_cast<int>(v.functions().size()); ++f) {
            fun_base.push_back(static_cast<long long>(info.size()));
            int arity = v.functions()[f].arity;
            long long entries = pow_ll(n, arity);
            for (long long rk = 0; rk < entries; ++rk) {
                info.push_back({CellInfo::Function, f, rk});
                addr.push_back(tuple_of_rank(rk, arity, n));
            }
        }
        for (int r = 0; r < static_cast<int>(v.relations().size()); ++r) {
            rel_base.push_back(static_cast<long long>(info.size()));
            int arity = v.relations()[r].arity;
            long long entries = pow_ll(n, arity);
            for (long long rk = 0; rk < entries; ++rk) {
                info.push_back({CellInfo::Relation, r, rk});
                addr.push_back(tuple_of_rank(rk, arity, n));
            }
        }
        eq_base = -1;
        if (axiomatic) {
            eq_base = static_cast<long long>(info.size());
            for (long long rk = 0; rk < static_cast<long long>(n) * n; ++rk) {
                info.push_back({CellInfo::Equality, 0, rk});
                addr.push_back(tuple_of_rank(rk, 2, n));
            }
        }
        total = static_cast<long long>(info.size());

        // Search order: constants pinned by some ground sentence first (in
        // declaration order), then every cell of the "address formers" —
        // functions whose results index other symbols, recognised by their
        // applications appearing nested inside other applications.  Knowing
        // those tables up front lets propagation chase chains like
        // successor-indexed tables in discovery order instead of numeric
        // order.  The remaining function cells follow by (first argument,
        // function, remaining rank) so that e.g. all cells describing
        // "time 0" precede those for "time 1", then the constants that only
        // ever appear under quantifiers — by the time those are reached,
        // propagation has usually fixed them, and when it has not they are
        // cheap leaf-level choices — then relation cells, then equality
        // cells.  An empty early_const means every constant goes first.
        order.clear();
        order.reserve(total);
        auto early = [&](int i) {
            return early_const.empty() || early_const[i] != 0;
        };
        auto former = [&](int f) {
            return !addr_former.empty() && addr_former[f] != 0;
        };
        for (int i = 0; i < static_cast<int>(v.constants().size()); ++i)
            if (early(i)) order.push_back(i);
        std::vector<std::tuple<int, int, long long, long long>> fun_cells;
        for (long long c = 0; c < total; ++c) {
            if (info[c].kind != CellInfo::Function) continue;
            int first = addr[c].empty() ? 0 : addr[c][0];
            if (former(info[c].sym))
                fun_cells.push_back({0, info[c].sym, info[c].rank, c});
            else
                fun_cells.push_back({1 + first, info[c].sym, info[c].rank, c});
        }
        std::sort(fun_cells.begin(), fun_cells.end());
        for (auto& fc : fun_cells) order.push_back(std::get<3>(fc));
        for (int i = 0; i < static_cast<int>(v.constants().size()); ++i)
            if (!early(i)) order.push_back(i);
        for (long long c = 0; c < total; ++c)
            if (info[c].kind == CellInfo::Relation) order.push_back(c);
        for (long long c = 0; c < total; ++c)
            if (info[c].kind == CellInfo::Equality) order.push_back(c);
    }

    bool is_value_cell(long long c) const {
        return info[c].kind == CellInfo::Constant || info[c].kind == CellInfo::Function;
    }
};

// ---- grounding ------------------------------------------------------------

struct GTerm {
    enum Kind { Elem, Const, App } kind = Elem;
    int value = 0;             // Elem
    long long cell = 0;        // Const
    int fn = 0;                // App
    std::vector<GTerm> args;   // App
};

struct GNode {
    enum Kind { Rel, Eq, Not, And, Or, Implies, Iff } kind = Rel;
    int rel = 0;
    std::vector<GTerm> terms;
    std::vector<GNode> sub;
};

struct Constraint {
    GNode node;
    std::vector<long long> deps;
};

struct Grounder {
    const CellSpace& space;

    GTerm term(const Term& t, std::vector<std::pair<std::string, int>>& env) const {
        switch (t.kind) {
            case Term::Kind::Variable: {
                for (auto it = env.rbegin(); it != env.rend(); ++it)
                    if (it->first == t.name) {
                        GTerm g;
                        g.kind = GTerm::Elem;
                        g.value = it->second;
                        return g;
                    }
                throw EvalError("unbound variable " + t.name + " during grounding");
            }
            case Term::Kind::Constant: {
                GTerm g;
                g.kind = GTerm::Const;
                g.cell = space.const_base + space.vocab->constant_index(t.name);
                return g;
            }
            case Term::Kind::Apply: {
                GTerm g;
                g.kind = GTerm::App;
                g.fn = space.vocab->function_index(t.name);
                for (const Term& a : t.args) g.args.push_back(term(a, env));
                return g;
            }
        }
        throw EvalError("malformed term");
    }

    GNode formula(const Formula& f, std::vector<std::pair<std::string, int>>& env) const {
        GNode g;
        switch (f.kind) {
            case Formula::Kind::Atom:
                g.kind = GNode::Rel;
                g.rel = space.vocab->relation_index(f.name);
                for (const Term& t : f.terms) g.terms.push_back(term(t, env));
                return g;
            case Formula::Kind::Equal:
                g.kind = GNode::Eq;
                g.terms.push_back(term(f.terms[0], env));
                g.terms.push_back(term(f.terms[1], env));
                return g;
            case Formula::Kind::Not:
                g.kind = GNode::Not;
                g.sub.push_back(formula(f.sub[0], env));
                return g;
            case Formula::Kind::And:
            case Formula::Kind::Or:
            case Formula::Kind::Implies:
            case Formula::Kind::Iff:
                g.kind = f.kind == Formula::Kind::And       ? GNode::And
                         : f.kind == Formula::Kind::Or      ? GNode::Or
                         : f.kind == Formula::Kind::Implies ? GNode::Implies
                                                            : GNode::Iff;
                g.sub.push_back(formula(f.sub[0], env));
                g.sub.push_back(formula(f.sub[1], env));
                return g;
            case Formula::Kind::Forall:
            case Formula::Kind::Exists:
                // inner quantifiers expand to conjunctions/disjunctions
                g.kind = f.kind == Formula::Kind::Forall ? GNode::And : GNode::Or;
                {
                    std::vector<GNode> insts;
                    for (int e = 0; e < space.n; ++e) {
                        env.push_back({f.name, e});
                        insts.push_back(formula(f.sub[0], env));
                        env.pop_back();
                    }
                    if (space.n == 1) return insts[0];
                    GNode acc = std::move(insts[0]);
                    for (int e = 1; e < space.n; ++e) {
                        GNode pair;
                        pair.kind = g.kind;
                        pair.sub.push_back(std::move(acc));
                        pair.sub.push_back(std::move(insts[e]));
                        acc = std::move(pair);
                    }
                    return acc;
                }
        }
        throw EvalError("malformed formula");
    }
};

// static over-approximation of the cells a ground term/formula can read
inline void term_deps(const CellSpace& sp, const GTerm& t, std::vector<long long>& out);

inline void tuple_cells(const CellSpace& sp, const std::vector<GTerm>& args,
                        long long base, std::vector<long long>& out) {
    // every rank consistent with the literal argument positions
    std::vector<long long> ranks = {0};
    for (const GTerm& a : args) {
        std::vector<long long> next;
        if (a.kind == GTerm::Elem) {
            for (long long r : ranks) next.push_back(r * sp.n + a.value);
        } else {
            for (long long r : ranks)
                for (int e = 0; e < sp.n; ++e) next.push_back(r * sp.n + e);
        }
        ranks = std::move(next);
    }
    for (long long r : ranks) out.push_back(base + r);
}

inline void term_deps(const CellSpace& sp, const GTerm& t, std::vector<long long>& out) {
    switch (t.kind) {
        case GTerm::Elem:
            return;
        case GTerm::Const:
            out.push_back(t.cell);
            return;
        case GTerm::App:
            for (const GTerm& a : t.args) term_deps(sp, a, out);
            tuple_cells(sp, t.args, sp.fun_base[t.fn], out);
            return;
    }
}

inline void node_deps(const CellSpace& sp, const GNode& g, std::vector<long long>& out) {
    switch (g.kind) {
        case GNode::Rel:
            for (const GTerm& t : g.terms) term_deps(sp, t, out);
            tuple_cells(sp, g.terms, sp.rel_base[g.rel], out);
            return;
        case GNode::Eq:
            for (const GTerm& t : g.terms) term_deps(sp, t, out);
            if (sp.axiomatic) tuple_cells(sp, g.terms, sp.eq_base, out);
            return;
        default:
            for (const GNode& s : g.sub) node_deps(sp, s, out);
            return;
    }
}

// ---- three-valued evaluation over a partial assignment --------------------

inline int eval_gterm(const GTerm& t, const std::vector<int>& a, const CellSpace& sp) {
    switch (t.kind) {
        case GTerm::Elem:
            return t.value;
        case GTerm::Const:
            return a[t.cell];
        case GTerm::App: {
            long long rank = 0;
            for (const GTerm& arg : t.args) {
                int v = eval_gterm(arg, a, sp);
                if (v < 0) return -1;
                rank = rank * sp.n + v;
            }
            return a[sp.fun_base[t.fn] + rank];
        }
    }
    return -1;
}

inline Tri eval_gnode(const GNode& g, const std::vector<int>& a, const CellSpace& sp) {
    switch (g.kind) {
        case GNode::Rel: {
            long long rank = 0;
            for (const GTerm& t : g.terms) {
                int v = eval_gterm(t, a, sp);
                if (v < 0) return Tri::Unknown;
                rank = rank * sp.n + v;
            }
            int bit = a[sp.rel_base[g.rel] + rank];
            return bit < 0 ? Tri::Unknown : (bit ? Tri::True : Tri::False);
        }
        case GNode::Eq: {
            int l = eval_gterm(g.terms[0], a, sp);
            if (l < 0) return Tri::Unknown;
            int r = eval_gterm(g.terms[1], a, sp);
            if (r < 0) return Tri::Unknown;
            if (!sp.axiomatic) return l == r ? Tri::True : Tri::False;
            int bit = a[sp.eq_base + static_cast<long long>(l) * sp.n + r];
            return bit < 0 ? Tri::Unknown : (bit ? Tri::True : Tri::False);
        }
        case GNode::Not: {
            Tri s = eval_gnode(g.sub[0], a, sp);
            if (s == Tri::Unknown) return s;
            return s == Tri::True ? Tri::False : Tri::True;
        }
        case GNode::And: {
            Tri l = eval_gnode(g.sub[0], a, sp);
            if (l == Tri::False) return Tri::False;
            Tri r = eval_gnode(g.sub[1], a, sp);
            if (r == Tri::False) return Tri::False;
            if (l == Tri::True && r == Tri::True) return Tri::True;
            return Tri::Unknown;
        }
        case GNode::Or: {
            Tri l = eval_gnode(g.sub[0], a, sp);
            if (l == Tri::True) return Tri::True;
            Tri r = eval_gnode(g.sub[1], a, sp);
            if (r == Tri::True) return Tri::True;
            if (l == Tri::False && r == Tri::False) return Tri::False;
            return Tri::Unknown;
        }
        case GNode::Implies: {
            Tri l = eval_gnode(g.sub[0], a, sp);
            if (l == Tri::False) return Tri::True;
            Tri r = eval_gnode(g.sub[1], a, sp);
            if (r == Tri::True) return Tri::True;
            if (l == Tri::True && r == Tri::False) return Tri::False;
            return Tri::Unknown;
        }
        case GNode::Iff: {
            Tri l = eval_gnode(g.sub[0], a, sp);
            if (l == Tri::Unknown) return Tri::Unknown;
            Tri r = eval_gnode(g.sub[1], a, sp);
            if (r == Tri::Unknown) return Tri::Unknown;
            return l == r ? Tri::True : Tri::False;
        }
    }
    return Tri::Unknown;
}

// ---- the search proper ----------------------------------------------------

struct SearchShared {
    CellSpace space;
    std::vector<Constraint> constraints;
    std::vector<std::vector<int>> subs;  // cell -> constraint ids
    const Vocabulary* vocab = nullptr;
    const std::vector<Formula>* sentences = nullptr;
    SearchConfig cfg;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    bool trivially_unsat = false;  // some ground instance is false outright

    void build(const Vocabulary& v, const std::vector<Formula>& sents, int n,
               const SearchConfig& config) {
        vocab = &v;
        sentences = &sents;
        cfg = config;
        // Constants a quantifier-free sentence mentions get decided early;
        // the rest wait until after the function tables.  A negated ground
        // sentence only rules combinations out and never pins a value, so it
        // does not promote its constants.
        std::vector<char> early(v.constants().size(), 0);
        for (const Formula& s : sents)
            if (!has_quantifier(s) && s.kind != Formula::Kind::Not)
                for (const std::string& name : sentence_constants(s))
                    early[v.constant_index(name)] = 1;
        std::vector<char> former(v.functions().size(), 0);
        for (const Formula& s : sents)
            for (const std::string& name : nested_function_symbols(s))
                former[v.function_index(name)] = 1;
        space.build(v, n, config.equality == EqualityMode::Axiomatic, early,
                    former);
        constraints.clear();
        trivially_unsat = false;
        // Instances that are already true before any cell is filled (variable
        // tautologies, congruence instances with unequal argument tuples, ...)
        // would be dead weight in the subscription lists, so they are dropped
        // here; an instance that is already false settles the whole size.
        std::vector<int> blank(space.total, -1);
        Grounder gr{space};
        for (const Formula& s : sents) {
            validate_formula(s, v);
            // split the leading universal prefix into separate instances
            std::vector<std::string> prefix;
            const Formula* matrix = &s;
            while (matrix->kind == Formula::Kind::Forall) {
                prefix.push_back(matrix->name);
                matrix = &matrix->sub[0];
            }
            std::vector<int> assign(prefix.size(), 0);
            while (true) {
                std::vector<std::pair<std::string, int>> env;
                for (size_t i = 0; i < prefix.size(); ++i)
                    env.push_back({prefix[i], assign[i]});
                Constraint c;
                c.node = gr.formula(*matrix, env);
                Tri at_start = eval_gnode(c.node, blank, space);
                if (at_start == Tri::False) trivially_unsat = true;
                if (at_start == Tri::Unknown) {
                    node_deps(space, c.node, c.deps);
                    std::sort(c.deps.begin(), c.deps.end());
                    c.deps.erase(std::unique(c.deps.begin(), c.deps.end()),
                                 c.deps.end());
                    constraints.push_back(std::move(c));
                }
                int i = static_cast<int>(prefix.size()) - 1;
                while (i >= 0 && assign[i] == n - 1) assign[i--] = 0;
                if (i < 0) break;
                ++assign[i];
            }
        }
        subs.assign(space.total, {});
        for (int id = 0; id < static_cast<int>(constraints.size()); ++id)
            for (long long cell : constraints[id].deps)
                subs[cell].push_back(id);
    }
};

struct Worker {
    const SearchShared& sh;
    std::atomic<bool>* stop;
    std::vector<int> assign;
    std::vector<Tri> status;
    std::vector<long long> trail;  // cells in assignment order, for rollback
    int max_designated = -1;
    std::vector<FiniteStructure> found;
    long long leaves = 0;
    long long limit_left;  // <0 = unlimited
    bool budget_hit = false;
    bool limit_hit = false;
    unsigned tick = 0;

    Worker(const SearchShared& shared, std::atomic<bool>* stop_flag)
        : sh(shared), stop(stop_flag) {
        assign.assign(sh.space.total, -1);
        status.assign(sh.constraints.size(), Tri::Unknown);
        limit_left = sh.cfg.model_limit > 0 ? sh.cfg.model_limit : -1;
    }

    bool out_of_time() {
        if (!sh.deadline) return false;
        if ((tick++ & 0xff) != 0) return false;
        if (std::chrono::steady_clock::now() >= *sh.deadline) {
            budget_hit = true;
            stop->store(true);
            return true;
        }
        return false;
    }

    // cell id a term reads from, or -1 while its arguments are still open
    long long resolve_cell(const GTerm& t) const {
        if (t.kind == GTerm::Const) return t.cell;
        if (t.kind != GTerm::App) return -1;
        long long rank = 0;
        for (const GTerm& a : t.args) {
            int v = eval_gterm(a, assign, sh.space);
            if (v < 0) return -1;
            rank = rank * sh.space.n + v;
        }
        return sh.space.fun_base[t.fn] + rank;
    }

    // The constraint holding g must take truth value `want` in every
    // completion of the current assignment.  Push whatever single-cell
    // consequences that has; false means a contradiction surfaced.
    bool require(const GNode& g, bool want, std::vector<int>& flipped) {
        switch (g.kind) {
            case GNode::Rel: {
                long long rank = 0;
                for (const GTerm& t : g.terms) {
                    int v = eval_gterm(t, assign, sh.space);
                    if (v < 0) return true;
                    rank = rank * sh.space.n + v;
                }
                return place(sh.space.rel_base[g.rel] + rank, want ? 1 : 0, flipped);
            }
            case GNode::Eq: {
                int l = eval_gterm(g.terms[0], assign, sh.space);
                int r = eval_gterm(g.terms[1], assign, sh.space);
                if (sh.space.axiomatic) {
                    if (l < 0 || r < 0) return true;
                    long long bit = sh.space.eq_base +
                                    static_cast<long long>(l) * sh.space.n + r;
                    return place(bit, want ? 1 : 0, flipped);
                }
                if (!want) return true;  // a disequality pins no single value
                if (l >= 0 && r < 0) {
                    long long c = resolve_cell(g.terms[1]);
                    return c < 0 || place(c, l, flipped);
                }
                if (r >= 0 && l < 0) {
                    long long c = resolve_cell(g.terms[0]);
                    return c < 0 || place(c, r, flipped);
                }
                return true;
            }
            case GNode::Not:
                return require(g.sub[0], !want, flipped);
            case GNode::And: {
                if (want)
                    return require(g.sub[0], true, flipped) &&
                           require(g.sub[1], true, flipped);
                Tri l = eval_gnode(g.sub[0], assign, sh.space);
                if (l == Tri::True) return require(g.sub[1], false, flipped);
                if (l == Tri::Unknown &&
                    eval_gnode(g.sub[1], assign, sh.space) == Tri::True)
                    return require(g.sub[0], false, flipped);
                return true;
            }
            case GNode::Or: {
                if (!want)
                    return require(g.sub[0], false, flipped) &&
                           require(g.sub[1], false, flipped);
                Tri l = eval_gnode(g.sub[0], assign, sh.space);
                if (l == Tri::False) return require(g.sub[1], true, flipped);
                if (l == Tri::Unknown &&
                    eval_gnode(g.sub[1], assign, sh.space) == Tri::False)
                    return require(g.sub[0], true, flipped);
                return true;
            }
            case GNode::Implies: {
                if (!want)
                    return require(g.sub[0], true, flipped) &&
                           require(g.sub[1], false, flipped);
                Tri l = eval_gnode(g.sub[0], assign, sh.space);
                if (l == Tri::True) return require(g.sub[1], true, flipped);
                if (l == Tri::Unknown &&
                    eval_gnode(g.sub[1], assign, sh.space) == Tri::False)
                    return require(g.sub[0], false, flipped);
                return true;
            }
            case GNode::Iff: {
                Tri l = eval_gnode(g.sub[0], assign, sh.space);
                if (l != Tri::Unknown)
                    return require(g.sub[1], want == (l == Tri::True), flipped);
                Tri r = eval_gnode(g.sub[1], assign, sh.space);
                if (r != Tri::Unknown)
                    return require(g.sub[0], want == (r == Tri::True), flipped);
                return true;
            }
        }
        return true;
    }

    // assign cell := v and chase consequences; false leaves partial effects
    // on the trail for the caller to roll back
    bool place(long long cell, int v, std::vector<int>& flipped) {
        if (assign[cell] >= 0) return assign[cell] == v;
        assign[cell] = v;
        trail.push_back(cell);
        for (int id : sh.subs[cell]) {
            if (status[id] == Tri::True) continue;
            Tri t = eval_gnode(sh.constraints[id].node, assign, sh.space);
            if (t == Tri::False) return false;
            if (t == Tri::True) {
                status[id] = Tri::True;
                flipped.push_back(id);
            } else if (!require(sh.constraints[id].node, true, flipped)) {
                return false;
            }
        }
        return true;
    }

    void rollback(size_t mark) {
        while (trail.size() > mark) {
            assign[trail.back()] = -1;
            trail.pop_back();
        }
    }

    // assign cell := v, checking subscribed constraints and propagating
    // forced values; on failure rolls everything back and returns false
    bool try_assign(long long cell, int v, std::vector<int>& flipped) {
        if (!sh.cfg.pruning) {
            if (assign[cell] >= 0) return assign[cell] == v;
            assign[cell] = v;
            trail.push_back(cell);
            return true;
        }
        size_t mark = trail.size();
        if (place(cell, v, flipped)) return true;
        rollback(mark);
        for (int f : flipped) status[f] = Tri::Unknown;
        flipped.clear();
        return false;
    }

    void unassign(size_t mark, std::vector<int>& flipped) {
        rollback(mark);
        for (int f : flipped) status[f] = Tri::Unknown;
        flipped.clear();
    }

    int value_limit(long long cell) const {
        if (!sh.space.is_value_cell(cell)) return 1;
        if (!sh.cfg.symmetry_breaking) return sh.space.n - 1;
        int m = max_designated;
        for (int e : sh.space.addr[cell]) m = std::max(m, e);
        return std::min(sh.space.n - 1, m + 1);
    }

    FiniteStructure materialize() const {
        const CellSpace& sp = sh.space;
        FiniteStructure a = FiniteStructure::empty_of(
            *sh.vocab, sp.n,
            sp.axiomatic ? EqualityMode::Axiomatic : EqualityMode::Interpreted);
        for (size_t i = 0; i < sh.vocab->constants().size(); ++i)
            a.constant_values[i] = assign[sp.const_base + i];
        for (size_t f = 0; f < sh.vocab->functions().size(); ++f)
            for (long long rk = 0; rk < static_cast<long long>(a.function_tables[f].size());
                 ++rk)
                a.function_tables[f][rk] = assign[sp.fun_base[f] + rk];
        for (size_t r = 0; r < sh.vocab->relations().size(); ++r)
            for (long long rk = 0; rk < static_cast<long long>(a.relation_tables[r].size());
                 ++rk)
                a.relation_tables[r][rk] = static_cast<char>(assign[sp.rel_base[r] + rk]);
        if (sp.axiomatic) {
            a.equality_table.assign(static_cast<size_t>(sp.n) * sp.n, 0);
            for (long long rk = 0; rk < static_cast<long long>(sp.n) * sp.n; ++rk)
                a.equality_table[rk] = static_cast<char>(assign[sp.eq_base + rk]);
        }
        return a;
    }

    void dfs(size_t depth) {
        if (stop->load(std::memory_order_relaxed) || out_of_time()) return;
        if (depth == sh.space.order.size()) {
            ++leaves;
            // every leaf is verified against the original sentences; with
            // pruning disabled this is the whole filter
            FiniteStructure a = materialize();
            if (check_model(a, *sh.sentences).all_hold) {
                found.push_back(std::move(a));
                if (limit_left > 0 && --limit_left == 0) {
                    limit_hit = true;
                    stop->store(true);
                }
            }
            return;
        }
        long long cell = sh.space.order[depth];
        int saved_m = max_designated;
        if (assign[cell] >= 0) {
            // already pinned by propagation higher up; no branching here, but
            // the designated-value bookkeeping must advance as usual
            for (int e : sh.space.addr[cell])
                max_designated = std::max(max_designated, e);
            if (sh.space.is_value_cell(cell))
                max_designated = std::max(max_designated, assign[cell]);
            dfs(depth + 1);
            max_designated = saved_m;
            return;
        }
        int hi = value_limit(cell);
        for (int e : sh.space.addr[cell]) max_designated = std::max(max_designated, e);
        std::vector<int> flipped;
        for (int v = 0; v <= hi; ++v) {
            if (stop->load(std::memory_order_relaxed)) break;
            size_t mark = trail.size();
            if (try_assign(cell, v, flipped)) {
                int saved_inner = max_designated;
                if (sh.space.is_value_cell(cell))
                    max_designated = std::max(max_designated, v);
                dfs(depth + 1);
                max_designated = saved_inner;
                unassign(mark, flipped);
            }
        }
        max_designated = saved_m;
    }

    // replay a task prefix; returns false if prefix no longer applies
    bool replay(const std::vector<std::pair<long long, int>>& prefix,
                std::vector<std::vector<int>>& flip_stack) {
        for (const auto& [cell, v] : prefix) {
            for (int e : sh.space.addr[cell])
                max_designated = std::max(max_designated, e);
            flip_stack.emplace_back();
            if (!try_assign(cell, v, flip_stack.back())) return false;
            if (sh.space.is_value_cell(cell))
                max_designated = std::max(max_designated, v);
        }
        return true;
    }
};

// expand the search tree breadth-first until there are enough disjoint tasks
inline std::vector<std::vector<std::pair<long long, int>>> make_tasks(
    const SearchShared& sh, int want, std::atomic<bool>* stop) {
    std::vector<std::vector<std::pair<long long, int>>> frontier = {{}};
    size_t depth = 0;
    while (static_cast<int>(frontier.size()) < want &&
           depth < sh.space.order.size() && depth < 14) {
        std::vector<std::vector<std::pair<long long, int>>> next;
        long long cell = sh.space.order[depth];
        for (const auto& prefix : frontier) {
            Worker probe(sh, stop);
            std::vector<std::vector<int>> flips;
            if (!probe.replay(prefix, flips)) continue;
            if (probe.assign[cell] >= 0) {
                // propagation already fixed this cell for the whole prefix
                auto task = prefix;
                task.push_back({cell, probe.assign[cell]});
                next.push_back(std::move(task));
                continue;
            }
            int hi = probe.value_limit(cell);
            std::vector<int> flipped;
            for (int v = 0; v <= hi; ++v) {
                size_t mark = probe.trail.size();
                if (probe.try_assign(cell, v, flipped)) {
                    auto task = prefix;
                    task.push_back({cell, v});
                    next.push_back(std::move(task));
                    probe.unassign(mark, flipped);
                }
            }
        }
        frontier = std::move(next);
        ++depth;
        if (frontier.empty()) break;
    }
    return frontier;
}

inline void search_one_size(const Vocabulary& vocab, const std::vector<Formula>& sentences,
                            int n, const SearchConfig& cfg, SearchOutcome& out) {
    SearchShared sh;
    sh.build(vocab, sentences, n, cfg);
    if (sh.trivially_unsat && cfg.pruning) {
        out.sizes_checked.push_back(n);
        return;
    }
    if (cfg.time_budget)
        sh.deadline = std::chrono::steady_clock::now() + *cfg.time_budget;
    std::atomic<bool> stop{false};

    std::vector<FiniteStructure> models;
    bool parallel = cfg.jobs > 1 && cfg.model_limit == 0;
    if (!parallel) {
        Worker w(sh, &stop);
        w.dfs(0);
        models = std::move(w.found);
        out.leaves_examined += w.leaves;
        out.budget_exhausted = out.budget_exhausted || w.budget_hit;
        out.limit_reached = out.limit_reached || w.limit_hit;
    } else {
        auto tasks = make_tasks(sh, cfg.jobs * 4, &stop);
        std::vector<std::vector<FiniteStructure>> results(tasks.size());
        std::vector<long long> leaves(tasks.size(), 0);
        std::atomic<size_t> next_task{0};
        std::atomic<bool> budget{false};
        auto runner = [&]() {
            while (true) {
                size_t i = next_task.fetch_add(1);
                if (i >= tasks.size()) return;
                if (stop.load()) return;
                Worker w(sh, &stop);
                std::vector<std::vector<int>> flips;
                if (w.replay(tasks[i], flips)) w.dfs(tasks[i].size());
                results[i] = std::move(w.found);
                leaves[i] = w.leaves;
                if (w.budget_hit) budget.store(true);
            }
        };
        std::vector<std::thread> pool;
        for (int j = 0; j < cfg.jobs; ++j) pool.emplace_back(runner);
        for (auto& t : pool) t.join();
        for (size_t i = 0; i < tasks.size(); ++i) {
            for (auto& m : results[i]) models.push_back(std::move(m));
            out.leaves_examined += leaves[i];
        }
        out.budget_exhausted = out.budget_exhausted || budget.load();
    }
    std::sort(models.begin(), models.end(),
              [](const FiniteStructure& a, const FiniteStructure& b) {
                  return canonical_form(a) < canonical_form(b);
              });
    for (auto& m : models) out.models.push_back(std::move(m));
    out.sizes_checked.push_back(n);
}

}  // namespace detail

inline SearchOutcome find_models(const Vocabulary& vocab,
                                 const std::vector<Formula>& sentences,
                                 const SearchConfig& cfg) {
    if (cfg.min_size < 1 || cfg.max_size < cfg.min_size)
        throw Error("search size range must satisfy 1 <= min <= max");
    SearchOutcome out;
    for (int n = cfg.min_size; n <= cfg.max_size; ++n) {
        SearchConfig per = cfg;
        if (cfg.model_limit > 0) {
            long long used = static_cast<long long>(out.models.size());
            if (used >= cfg.model_limit) break;
            per.model_limit = cfg.model_limit - used;
        }
        detail::search_one_size(vocab, sentences, n, per, out);
        if (out.budget_exhausted) break;
    }
    return out;
}

inline std::pair<bool, std::optional<FiniteStructure>> satisfiable_at(
    const Vocabulary& vocab, const std::vector<Formula>& sentences, int size,
    SearchConfig cfg = {}) {
    cfg.min_size = cfg.max_size = size;
    cfg.model_limit = 1;
    SearchOutcome out = find_models(vocab, sentences, cfg);
    if (out.models.empty()) return {false, std::nullopt};
    return {true, out.models.front()};
}

enum class VerdictStatus { EntailedAtBound, Refuted, NoModelsAtBound, BudgetExhausted };

struct BoundedVerdict {
    VerdictStatus status = VerdictStatus::NoModelsAtBound;
    std::optional<FiniteStructure> witness;   // refuting counter-model
    std::optional<Formula> falsified;         // the conclusion it falsifies
    std::vector<int> sizes_checked;
    long long models_examined = 0;
};

// Bounded entailment: do all models of T ∪ Phi within the size range satisfy
// every sentence of Theta?  Never a claim about unbounded entailment.
inline BoundedVerdict entails_at(const Vocabulary& vocab,
                                 const std::vector<Formula>& theory,
                                 const std::vector<Formula>& phi,
                                 const std::vector<Formula>& theta,
                                 const SearchConfig& cfg) {
    std::vector<Formula> premises = theory;
    premises.insert(premises.end(), phi.begin(), phi.end());
    BoundedVerdict v;
    bool any_model = false;
    for (int n = cfg.min_size; n <= cfg.max_size; ++n) {
        SearchConfig per = cfg;
        per.min_size = per.max_size = n;
        per.model_limit = 0;
        SearchOutcome out = find_models(vocab, premises, per);
        v.sizes_checked.push_back(n);
        v.models_examined += static_cast<long long>(out.models.size());
        if (out.budget_exhausted) {
            v.status = VerdictStatus::BudgetExhausted;
            return v;
        }
        for (const FiniteStructure& a : out.models) {
            any_model = true;
            for (const Formula& th : theta) {
                if (!eval_formula(a, th)) {
                    v.status = VerdictStatus::Refuted;
                    v.witness = a;
                    v.falsified = th;
                    return v;
                }
            }
        }
    }
    v.status = any_model ? VerdictStatus::EntailedAtBound : VerdictStatus::NoModelsAtBound;
    return v;
}

struct MinSizeResult {
    std::optional<int> size;
    bool budget_exhausted = false;
};

inline MinSizeResult find_min_model_size(const Vocabulary& vocab,
                                         const std::vector<Formula>& sentences,
                                         int max_size, SearchConfig cfg = {}) {
    MinSizeResult r;
    for (int n = 1; n <= max_size; ++n) {
        SearchConfig per = cfg;
        per.min_size = per.max_size = n;
        per.model_limit = 1;
        SearchOutcome out = find_models(vocab, sentences, per);
        if (out.budget_exhausted) {
            r.budget_exhausted = true;
            return r;
        }
        if (!out.models.empty()) {
            r.size = n;
            return r;
        }
    }
    return r;
}

}  // namespace ffot
