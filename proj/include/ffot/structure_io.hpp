#pragma once

// Line-oriented structure files:
//
//   domain 3
//   constant c = 0
//   function f : 0->1 1->2 2->2
//   relation R = { 0 ; 2 }
//   equality = interpreted            (or: axiomatic { 0,0 ; 1,1 ; ... })
//
// "#" starts a comment; blank lines are ignored; tuples are comma-separated
// element lists and "()" is the empty tuple of a nullary relation.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ffot/structure.hpp"
#include "ffot/vocabulary.hpp"

namespace ffot {
namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline int parse_element(const std::string& word, int domain, int line) {
    size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(word, &used);
    } catch (const std::exception&) {
        throw ParseError("expected a domain element, got '" + word + "'", line, 1);
    }
    if (used != word.size())
        throw ParseError("expected a domain element, got '" + word + "'", line, 1);
    if (v < 0 || v >= domain)
        throw ParseError("element " + word + " outside domain 0.." +
                             std::to_string(domain - 1),
                         line, 1);
    return v;
}

inline std::vector<int> parse_tuple(const std::string& text, int arity, int domain,
                                    int line) {
    std::string t = trim(text);
    std::vector<int> tuple;
    if (t == "()") {
        if (arity != 0)
            throw ParseError("empty tuple for a relation of arity " +
                                 std::to_string(arity),
                             line, 1);
        return tuple;
    }
    for (const std::string& part : split_on(t, ','))
        tuple.push_back(parse_element(trim(part), domain, line));
    if (static_cast<int>(tuple.size()) != arity)
        throw ParseError("tuple '" + t + "' has " + std::to_string(tuple.size()) +
                             " element(s), expected " + std::to_string(arity),
                         line, 1);
    return tuple;
}

// contents of "{ ... }" split on ';', empties dropped
inline std::vector<std::string> brace_items(const std::string& text, int line) {
    std::string t = trim(text);
    if (t.size() < 2 || t.front() != '{' || t.back() != '}')
        throw ParseError("expected '{ ... }', got '" + t + "'", line, 1);
    std::vector<std::string> items;
    for (const std::string& piece : split_on(t.substr(1, t.size() - 2), ';')) {
        std::string p = trim(piece);
        if (!p.empty()) items.push_back(p);
    }
    return items;
}

}  // namespace detail

inline FiniteStructure read_structure(const std::string& text, const Vocabulary& vocab) {
    FiniteStructure A;
    A.vocab = vocab;
    A.size = 0;
    bool saw_domain = false, saw_equality = false;
    std::vector<char> got_const(vocab.constants().size(), 0);
    std::vector<char> got_fun(vocab.functions().size(), 0);
    std::vector<char> got_rel(vocab.relations().size(), 0);

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        std::istringstream ls(line);
        std::string keyword;
        ls >> keyword;
        std::string rest;
        std::getline(ls, rest);
        rest = detail::trim(rest);

        if (keyword == "domain") {
            if (saw_domain) throw ParseError("duplicate domain line", lineno, 1);
            try {
                A.size = std::stoi(rest);
            } catch (const std::exception&) {
                throw ParseError("bad domain size '" + rest + "'", lineno, 1);
            }
            if (A.size < 1) throw ParseError("domain size must be >= 1", lineno, 1);
            saw_domain = true;
            A.constant_values.assign(vocab.constants().size(), 0);
            for (const auto& f : vocab.functions())
                A.function_tables.emplace_back(detail::pow_ll(A.size, f.arity), -1);
            for (const auto& r : vocab.relations())
                A.relation_tables.emplace_back(detail::pow_ll(A.size, r.arity), 0);
            continue;
        }
        if (!saw_domain)
            throw ParseError("the domain line must come first", lineno, 1);

        if (keyword == "constant") {
            auto eq = rest.find('=');
            if (eq == std::string::npos)
                throw ParseError("expected 'constant <name> = <element>'", lineno, 1);
            std::string name = detail::trim(rest.substr(0, eq));
            int ci = vocab.constant_index(name);
            if (ci < 0) throw ParseError("unknown constant " + name, lineno, 1);
            if (got_const[ci]) throw ParseError("duplicate constant " + name, lineno, 1);
            got_const[ci] = 1;
            A.constant_values[ci] =
                detail::parse_element(detail::trim(rest.substr(eq + 1)), A.size, lineno);
        } else if (keyword == "function") {
            auto colon = rest.find(':');
            if (colon == std::string::npos)
                throw ParseError("expected 'function <name> : <entries>'", lineno, 1);
            std::string name = detail::trim(rest.substr(0, colon));
            int fi = vocab.function_index(name);
            if (fi < 0) throw ParseError("unknown function " + name, lineno, 1);
            if (got_fun[fi]) throw ParseError("duplicate function " + name, lineno, 1);
            got_fun[fi] = 1;
            int arity = vocab.functions()[fi].arity;
            for (const std::string& entry : detail::split_ws(rest.substr(colon + 1))) {
                auto arrow = entry.find("->");
                if (arrow == std::string::npos)
                    throw ParseError("bad table entry '" + entry + "'", lineno, 1);
                std::vector<int> args = detail::parse_tuple(entry.substr(0, arrow),
                                                            arity, A.size, lineno);
                int value =
                    detail::parse_element(entry.substr(arrow + 2), A.size, lineno);
                long long rank = tuple_rank(args, A.size);
                if (A.function_tables[fi][rank] != -1)
                    throw ParseError("duplicate entry for " + name + "(" +
                                         entry.substr(0, arrow) + ")",
                                     lineno, 1);
                A.function_tables[fi][rank] = value;
            }
            for (long long rank = 0;
                 rank < static_cast<long long>(A.function_tables[fi].size()); ++rank)
                if (A.function_tables[fi][rank] == -1)
                    throw ParseError("function " + name + " is missing an entry",
                                     lineno, 1);
        } else if (keyword == "relation") {
            auto eq = rest.find('=');
            if (eq == std::string::npos)
                throw ParseError("expected 'relation <name> = { ... }'", lineno, 1);
            std::string name = detail::trim(rest.substr(0, eq));
            int ri = vocab.relation_index(name);
            if (ri < 0) throw ParseError("unknown relation " + name, lineno, 1);
            if (got_rel[ri]) throw ParseError("duplicate relation " + name, lineno, 1);
            got_rel[ri] = 1;
            int arity = vocab.relations()[ri].arity;
            for (const std::string& item :
                 detail::brace_items(rest.substr(eq + 1), lineno)) {
                std::vector<int> tuple =
                    detail::parse_tuple(item, arity, A.size, lineno);
                long long rank = tuple_rank(tuple, A.size);
                if (A.relation_tables[ri][rank])
                    throw ParseError("duplicate tuple in relation " + name, lineno, 1);
                A.relation_tables[ri][rank] = 1;
            }
        } else if (keyword == "equality") {
            if (saw_equality) throw ParseError("duplicate equality line", lineno, 1);
            saw_equality = true;
            if (!rest.empty() && rest[0] == '=') rest = detail::trim(rest.substr(1));
            if (rest == "interpreted") {
                A.equality = EqualityMode::Interpreted;
            } else if (rest.rfind("axiomatic", 0) == 0) {
                A.equality = EqualityMode::Axiomatic;
                A.equality_table.assign(static_cast<size_t>(A.size) * A.size, 0);
                for (const std::string& item : detail::brace_items(
                         detail::trim(rest.substr(9)), lineno)) {
                    std::vector<int> pair = detail::parse_tuple(item, 2, A.size, lineno);
                    A.equality_table[static_cast<size_t>(pair[0]) * A.size + pair[1]] = 1;
                }
            } else {
                throw ParseError("equality must be 'interpreted' or 'axiomatic {...}'",
                                 lineno, 1);
            }
        } else {
            throw ParseError("unknown directive '" + keyword + "'", lineno, 1);
        }
    }

    if (!saw_domain) throw ParseError("missing domain line", 1, 1);
    for (size_t i = 0; i < got_const.size(); ++i)
        if (!got_const[i])
            throw ParseError("constant " + vocab.constants()[i] + " not interpreted",
                             lineno, 1);
    for (size_t i = 0; i < got_fun.size(); ++i)
        if (!got_fun[i])
            throw ParseError("function " + vocab.functions()[i].name + " not interpreted",
                             lineno, 1);
    for (size_t i = 0; i < got_rel.size(); ++i)
        if (!got_rel[i])
            throw ParseError("relation " + vocab.relations()[i].name + " not interpreted",
                             lineno, 1);
    A.validate();
    return A;
}

inline std::string write_structure(const FiniteStructure& A) {
    std::ostringstream out;
    out << "domain " << A.size << "\n";
    for (size_t i = 0; i < A.vocab.constants().size(); ++i)
        out << "constant " << A.vocab.constants()[i] << " = " << A.constant_values[i]
            << "\n";
    for (size_t fi = 0; fi < A.vocab.functions().size(); ++fi) {
        const auto& decl = A.vocab.functions()[fi];
        out << "function " << decl.name << " :";
        for (long long rank = 0;
             rank < static_cast<long long>(A.function_tables[fi].size()); ++rank) {
            std::vector<int> args = tuple_of_rank(rank, decl.arity, A.size);
            out << " ";
            for (size_t k = 0; k < args.size(); ++k) {
                if (k) out << ",";
                out << args[k];
            }
            out << "->" << A.function_tables[fi][rank];
        }
        out << "\n";
    }
    for (size_t ri = 0; ri < A.vocab.relations().size(); ++ri) {
        const auto& decl = A.vocab.relations()[ri];
        out << "relation " << decl.name << " = {";
        bool first = true;
        for (long long rank = 0;
             rank < static_cast<long long>(A.relation_tables[ri].size()); ++rank) {
            if (!A.relation_tables[ri][rank]) continue;
            out << (first ? " " : " ; ");
            first = false;
            if (decl.arity == 0) {
                out << "()";
            } else {
                std::vector<int> args = tuple_of_rank(rank, decl.arity, A.size);
                for (size_t k = 0; k < args.size(); ++k) {
                    if (k) out << ",";
                    out << args[k];
                }
            }
        }
        out << (first ? "}" : " }") << "\n";
    }
    if (A.equality == EqualityMode::Interpreted) {
        out << "equality = interpreted\n";
    } else {
        out << "equality = axiomatic {";
        bool first = true;
        for (int a = 0; a < A.size; ++a)
            for (int b = 0; b < A.size; ++b) {
                if (!A.equality_table[static_cast<size_t>(a) * A.size + b]) continue;
                out << (first ? " " : " ; ") << a << "," << b;
                first = false;
            }
        out << (first ? "}" : " }") << "\n";
    }
    return out.str();
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

}  // namespace ffot
