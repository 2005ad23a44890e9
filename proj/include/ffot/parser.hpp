#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffot/syntax.hpp"
#include "ffot/vocabulary.hpp"

namespace ffot {
namespace detail {

enum class TokKind {
    Ident,
    KwForall,
    KwExists,
    LParen,
    RParen,
    Comma,
    Dot,
    Equals,
    Tilde,
    Amp,
    Bar,
    Arrow,     // ->
    DArrow,    // <->
    End,
};

struct Token {
    TokKind kind;
    std::string text;
    int line;
    int col;
};

inline const char* tok_name(TokKind k) {
    switch (k) {
        case TokKind::Ident: return "identifier";
        case TokKind::KwForall: return "'forall'";
        case TokKind::KwExists: return "'exists'";
        case TokKind::LParen: return "'('";
        case TokKind::RParen: return "')'";
        case TokKind::Comma: return "','";
        case TokKind::Dot: return "'.'";
        case TokKind::Equals: return "'='";
        case TokKind::Tilde: return "'~'";
        case TokKind::Amp: return "'&'";
        case TokKind::Bar: return "'|'";
        case TokKind::Arrow: return "'->'";
        case TokKind::DArrow: return "'<->'";
        case TokKind::End: return "end of input";
    }
    return "?";
}

inline std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto bump = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            bump(1);
            continue;
        }
        if (c == '#') {  // comment to end of line
            while (i < text.size() && text[i] != '\n') bump(1);
            continue;
        }
        int tl = line, tc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            std::string word = text.substr(i, j - i);
            bump(j - i);
            TokKind k = TokKind::Ident;
            if (word == "forall") k = TokKind::KwForall;
            else if (word == "exists") k = TokKind::KwExists;
            out.push_back({k, word, tl, tc});
            continue;
        }
        switch (c) {
            case '(': out.push_back({TokKind::LParen, "(", tl, tc}); bump(1); continue;
            case ')': out.push_back({TokKind::RParen, ")", tl, tc}); bump(1); continue;
            case ',': out.push_back({TokKind::Comma, ",", tl, tc}); bump(1); continue;
            case '.': out.push_back({TokKind::Dot, ".", tl, tc}); bump(1); continue;
            case '=': out.push_back({TokKind::Equals, "=", tl, tc}); bump(1); continue;
            case '~': out.push_back({TokKind::Tilde, "~", tl, tc}); bump(1); continue;
            case '&': out.push_back({TokKind::Amp, "&", tl, tc}); bump(1); continue;
            case '|': out.push_back({TokKind::Bar, "|", tl, tc}); bump(1); continue;
            case '-':
                if (i + 1 < text.size() && text[i + 1] == '>') {
                    out.push_back({TokKind::Arrow, "->", tl, tc});
                    bump(2);
                    continue;
                }
                throw ParseError("stray '-' (did you mean '->'?)", tl, tc);
            case '<':
                if (i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == '>') {
                    out.push_back({TokKind::DArrow, "<->", tl, tc});
                    bump(3);
                    continue;
                }
                throw ParseError("stray '<' (did you mean '<->'?)", tl, tc);
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
        }
    }
    out.push_back({TokKind::End, "", line, col});
    return out;
}

// Recursive descent over the token stream.  Precedence, loosest first:
// <-> (non-associative), -> (right), |, &, ~, with quantifier bodies
// extending as far right as possible.
class Parser {
  public:
    Parser(std::vector<Token> toks, const Vocabulary& vocab,
           std::vector<std::string> scope = {})
        : toks_(std::move(toks)), vocab_(vocab), scope_(std::move(scope)) {}

    Formula parse_formula_all() {
        Formula f = parse_formula();
        expect(TokKind::End);
        return f;
    }

    Term parse_term_all() {
        Term t = parse_term();
        expect(TokKind::End);
        return t;
    }

  private:
    std::vector<Token> toks_;
    const Vocabulary& vocab_;
    size_t pos_ = 0;
    std::vector<std::string> scope_;

    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }

    [[noreturn]] void fail_expect(const std::string& wanted) {
        const Token& t = peek();
        std::string found =
            t.kind == TokKind::End ? "end of input" : "'" + t.text + "'";
        throw ParseError("expected " + wanted + " but found " + found, t.line, t.col);
    }

    Token expect(TokKind k) {
        if (peek().kind != k) fail_expect(tok_name(k));
        return take();
    }

    bool in_scope(const std::string& name) const {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (*it == name) return true;
        return false;
    }

    // Quantifiers live at the formula level: their bodies extend as far right
    // as possible, and under '~' or a binary connective they need parentheses.
    Formula parse_formula() {
        if (peek().kind == TokKind::KwForall || peek().kind == TokKind::KwExists) {
            bool universal = take().kind == TokKind::KwForall;
            if (peek().kind != TokKind::Ident) fail_expect("a variable name");
            Token v = take();
            expect(TokKind::Dot);
            scope_.push_back(v.text);
            Formula body = parse_formula();
            scope_.pop_back();
            return universal ? forall(v.text, std::move(body))
                             : exists(v.text, std::move(body));
        }
        return parse_iff();
    }

    Formula parse_iff() {
        Formula left = parse_implies();
        if (peek().kind == TokKind::DArrow) {
            take();
            Formula right = parse_implies();
            if (peek().kind == TokKind::DArrow) {
                const Token& t = peek();
                throw ParseError("'<->' is non-associative; parenthesise the chain",
                                 t.line, t.col);
            }
            return iff(std::move(left), std::move(right));
        }
        return left;
    }

    Formula parse_implies() {
        Formula left = parse_or();
        if (peek().kind == TokKind::Arrow) {
            take();
            // right-associative: a -> b -> c reads a -> (b -> c)
            Formula right = parse_implies();
            return implies(std::move(left), std::move(right));
        }
        return left;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (peek().kind == TokKind::Bar) {
            take();
            f = disj(std::move(f), parse_and());
        }
        return f;
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (peek().kind == TokKind::Amp) {
            take();
            f = conj(std::move(f), parse_unary());
        }
        return f;
    }

    Formula parse_unary() {
        if (peek().kind == TokKind::Tilde) {
            take();
            return negation(parse_unary());
        }
        if (peek().kind == TokKind::LParen) {
            take();
            Formula f = parse_formula();
            expect(TokKind::RParen);
            return f;
        }
        if (peek().kind != TokKind::Ident)
            fail_expect("a formula (identifier, '(' or '~')");
        // A leading identifier is a relation atom iff it names a declared
        // relation; anything else must start an equality between terms.
        if (vocab_.relation_index(peek().text) >= 0) {
            Token r = take();
            int arity = *vocab_.relation_arity(r.text);
            std::vector<Term> args;
            if (peek().kind == TokKind::LParen) {
                take();
                args.push_back(parse_term());
                while (peek().kind == TokKind::Comma) {
                    take();
                    args.push_back(parse_term());
                }
                expect(TokKind::RParen);
            }
            if (static_cast<int>(args.size()) != arity)
                throw ParseError("relation " + r.text + " expects " +
                                     std::to_string(arity) + " argument(s), got " +
                                     std::to_string(args.size()),
                                 r.line, r.col);
            return atom(r.text, std::move(args));
        }
        Term left = parse_term();
        expect(TokKind::Equals);
        Term right = parse_term();
        return equal(std::move(left), std::move(right));
    }

    Term parse_term() {
        if (peek().kind != TokKind::Ident) fail_expect("a term");
        Token t = take();
        if (peek().kind == TokKind::LParen) {
            auto arity = vocab_.function_arity(t.text);
            if (!arity) {
                std::string note = vocab_.relation_index(t.text) >= 0
                                       ? " (it is a relation, not a function)"
                                       : "";
                throw ParseError("unknown function " + t.text + note, t.line, t.col);
            }
            take();
            std::vector<Term> args;
            args.push_back(parse_term());
            while (peek().kind == TokKind::Comma) {
                take();
                args.push_back(parse_term());
            }
            expect(TokKind::RParen);
            if (static_cast<int>(args.size()) != *arity)
                throw ParseError("function " + t.text + " expects " +
                                     std::to_string(*arity) + " argument(s), got " +
                                     std::to_string(args.size()),
                                 t.line, t.col);
            return Term::apply(t.text, std::move(args));
        }
        // Bound variables shadow vocabulary symbols.
        if (in_scope(t.text)) return Term::var(t.text);
        if (vocab_.constant_index(t.text) >= 0) return Term::constant(t.text);
        if (vocab_.function_index(t.text) >= 0)
            throw ParseError("function " + t.text + " needs arguments", t.line, t.col);
        throw ParseError("unknown identifier " + t.text +
                             " (not a bound variable or declared constant)",
                         t.line, t.col);
    }
};

}  // namespace detail

// Parse a single formula; the whole string must be consumed.  In the concrete
// syntax variables are exactly the quantifier-bound names, so parsed trees
// can only have free variables if a quantifier body escapes its binder —
// which the grammar prevents; the explicit check in parse_sentence is a
// belt-and-braces guard.
inline Formula parse_formula(const std::string& text, const Vocabulary& vocab) {
    detail::Parser p(detail::tokenize(text), vocab);
    return p.parse_formula_all();
}

inline Formula parse_sentence(const std::string& text, const Vocabulary& vocab) {
    Formula f = parse_formula(text, vocab);
    auto free = free_variables(f);
    if (!free.empty())
        throw ParseError("sentence has free variable(s): " + *free.begin(), 1, 1);
    return f;
}

// Parse a ground term (no quantifiers in scope, so every identifier must be
// declared).
inline Term parse_term(const std::string& text, const Vocabulary& vocab) {
    detail::Parser p(detail::tokenize(text), vocab);
    return p.parse_term_all();
}

// Parse a term in which the listed names are variables (used for term
// templates such as word-encoding sequences).
inline Term parse_term(const std::string& text, const Vocabulary& vocab,
                       std::vector<std::string> variables) {
    detail::Parser p(detail::tokenize(text), vocab, std::move(variables));
    return p.parse_term_all();
}

}  // namespace ffot
