#pragma once

// Section-structured text format for machines:
//
//   [vocabulary]          relation/function/constant declarations, one per line
//   [theory]              sentences, one per line
//   [include]             named axiom sets: eq, psa, psa_f, dof, dof_f,
//                         distinct [names...]
//   [input LABEL]         sentences
//   [output LABEL]        sentences
//   [word-encoding]       key = value lines (gamma, sigma, delta, variable,
//                         alphabet, letters, blank, distinctness)
//
// The vocabulary section must come before any section that parses sentences.
// '#' starts a comment anywhere.

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ffot/axioms.hpp"
#include "ffot/machine.hpp"
#include "ffot/parser.hpp"
#include "ffot/printer.hpp"
#include "ffot/structure_io.hpp"

namespace ffot {

namespace detail {

[[noreturn]] inline void machine_fail(int line, const std::string& msg) {
    throw ParseError("machine file: " + msg, line, 1);
}

}  // namespace detail

inline Machine read_machine(const std::string& text) {
    Machine m;
    bool have_vocab = false;
    std::string section;          // current section kind
    std::string section_label;    // for input/output
    std::map<std::string, std::pair<std::string, int>> enc_kv;  // key -> (value, line)
    bool have_encoding = false;

    auto finish_encoding = [&]() {
        if (!have_encoding) return;
        auto need = [&](const char* key) -> const std::string& {
            auto it = enc_kv.find(key);
            if (it == enc_kv.end())
                detail::machine_fail(1, std::string("word-encoding is missing '") + key + "'");
            return it->second.first;
        };
        WordEncodingConfig cfg;
        cfg.sequence.variable =
            enc_kv.count("variable") ? enc_kv["variable"].first : "y";
        int line = enc_kv.count("gamma") ? enc_kv["gamma"].second : 1;
        try {
            cfg.sequence.gamma =
                parse_term(need("gamma"), m.vocab, {cfg.sequence.variable});
            cfg.sequence.sigma =
                parse_term(need("sigma"), m.vocab, {cfg.sequence.variable});
            cfg.sequence.delta = parse_term(need("delta"), m.vocab);
        } catch (const ParseError& e) {
            detail::machine_fail(line, std::string("word-encoding term: ") + e.what());
        }
        cfg.alphabet = detail::split_ws(need("alphabet"));
        cfg.letters = enc_kv.count("letters") ? detail::split_ws(enc_kv["letters"].first)
                                              : cfg.alphabet;
        cfg.blank = need("blank");
        if (enc_kv.count("distinctness")) {
            const std::string& v = enc_kv["distinctness"].first;
            if (v == "on" || v == "true") cfg.add_distinctness = true;
            else if (v == "off" || v == "false") cfg.add_distinctness = false;
            else detail::machine_fail(enc_kv["distinctness"].second,
                                      "distinctness must be on or off, got '" + v + "'");
        }
        try {
            detail::validate_encoding(cfg, m.vocab);
        } catch (const Error& e) {
            detail::machine_fail(line, e.what());
        }
        m.encoding = cfg;
    };

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string line = detail::trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                detail::machine_fail(lineno, "unterminated section header " + line);
            std::string header = detail::trim(line.substr(1, line.size() - 2));
            auto parts = detail::split_ws(header);
            if (parts.empty()) detail::machine_fail(lineno, "empty section header");
            section = parts[0];
            section_label.clear();
            if (section == "vocabulary" || section == "theory" || section == "include" ||
                section == "word-encoding") {
                if (parts.size() != 1)
                    detail::machine_fail(lineno, "section [" + section + "] takes no label");
            } else if (section == "input" || section == "output") {
                if (parts.size() != 2)
                    detail::machine_fail(lineno,
                                         "section [" + section + "] needs exactly one label");
                section_label = parts[1];
                if (section == "input") m.inputs.push_back({section_label, {}});
                else m.outputs.push_back({section_label, {}});
            } else {
                detail::machine_fail(lineno, "unknown section [" + section + "]");
            }
            if (section == "vocabulary") have_vocab = true;
            if (section == "word-encoding") have_encoding = true;
            if (section != "vocabulary" && !have_vocab)
                detail::machine_fail(lineno,
                                     "[vocabulary] must come before [" + section + "]");
            continue;
        }

        if (section.empty())
            detail::machine_fail(lineno, "content before any section header");

        if (section == "vocabulary") {
            auto parts = detail::split_ws(line);
            try {
                if (parts[0] == "constant" && parts.size() == 2) {
                    m.vocab.constant(parts[1]);
                } else if ((parts[0] == "relation" || parts[0] == "function") &&
                           parts.size() == 3) {
                    int arity = 0;
                    size_t used = 0;
                    arity = std::stoi(parts[2], &used);
                    if (used != parts[2].size() || arity < 0)
                        detail::machine_fail(lineno, "bad arity '" + parts[2] + "'");
                    if (parts[0] == "relation") m.vocab.relation(parts[1], arity);
                    else m.vocab.function(parts[1], arity);
                } else {
                    detail::machine_fail(
                        lineno, "expected 'relation NAME ARITY', 'function NAME ARITY' "
                                "or 'constant NAME', got '" + line + "'");
                }
            } catch (const std::invalid_argument&) {
                detail::machine_fail(lineno, "bad arity '" + parts[2] + "'");
            } catch (const VocabularyError& e) {
                detail::machine_fail(lineno, e.what());
            }
        } else if (section == "theory" || section == "input" || section == "output") {
            Formula f;
            try {
                f = parse_sentence(line, m.vocab);
            } catch (const ParseError& e) {
                detail::machine_fail(lineno, e.what());
            }
            if (section == "theory") m.theory.push_back(std::move(f));
            else if (section == "input") m.inputs.back().sentences.push_back(std::move(f));
            else m.outputs.back().sentences.push_back(std::move(f));
        } else if (section == "include") {
            auto parts = detail::split_ws(line);
            const std::string& id = parts[0];
            std::vector<Formula> added;
            if (id == "eq" && parts.size() == 1) {
                added = equality_axioms(m.vocab);
            } else if (id == "psa" && parts.size() == 1) {
                added = peano_successor_axioms();
            } else if (id == "psa_f" && parts.size() == 1) {
                added = finite_peano_axioms();
            } else if (id == "dof" && parts.size() == 1) {
                added = dense_ordered_field_axioms();
            } else if (id == "dof_f" && parts.size() == 1) {
                added = finite_dof_axioms();
            } else if (id == "distinct") {
                std::vector<std::string> names(parts.begin() + 1, parts.end());
                if (names.empty()) names = m.vocab.constants();
                try {
                    added = distinct_constants_axioms(names);
                } catch (const Error& e) {
                    detail::machine_fail(lineno, e.what());
                }
            } else {
                detail::machine_fail(lineno, "unknown include '" + line + "'");
            }
            for (Formula& f : added) {
                try {
                    validate_formula(f, m.vocab);
                } catch (const Error& e) {
                    detail::machine_fail(lineno, "include " + id + " does not fit the "
                                         "declared vocabulary: " + e.what());
                }
                m.theory.push_back(std::move(f));
            }
        } else if (section == "word-encoding") {
            size_t eq = line.find('=');
            if (eq == std::string::npos)
                detail::machine_fail(lineno, "expected 'key = value', got '" + line + "'");
            std::string key = detail::trim(line.substr(0, eq));
            std::string value = detail::trim(line.substr(eq + 1));
            static const char* keys[] = {"gamma", "sigma", "delta",  "variable",
                                         "alphabet", "letters", "blank", "distinctness"};
            bool known = false;
            for (const char* k : keys) known = known || key == k;
            if (!known) detail::machine_fail(lineno, "unknown word-encoding key '" + key + "'");
            if (enc_kv.count(key))
                detail::machine_fail(lineno, "duplicate word-encoding key '" + key + "'");
            enc_kv[key] = {value, lineno};
        }
    }
    finish_encoding();
    return m;
}

inline std::string write_machine(const Machine& m) {
    std::ostringstream out;
    out << "[vocabulary]\n";
    for (const auto& r : m.vocab.relations())
        out << "relation " << r.name << " " << r.arity << "\n";
    for (const auto& f : m.vocab.functions())
        out << "function " << f.name << " " << f.arity << "\n";
    for (const auto& c : m.vocab.constants()) out << "constant " << c << "\n";
    if (!m.theory.empty()) {
        out << "[theory]\n";
        for (const Formula& f : m.theory) out << print_sentence(f) << "\n";
    }
    for (const auto& in : m.inputs) {
        out << "[input " << in.label << "]\n";
        for (const Formula& f : in.sentences) out << print_sentence(f) << "\n";
    }
    for (const auto& o : m.outputs) {
        out << "[output " << o.label << "]\n";
        for (const Formula& f : o.sentences) out << print_sentence(f) << "\n";
    }
    if (m.encoding) {
        const WordEncodingConfig& cfg = *m.encoding;
        out << "[word-encoding]\n";
        out << "gamma = " << print_term(cfg.sequence.gamma) << "\n";
        out << "sigma = " << print_term(cfg.sequence.sigma) << "\n";
        out << "delta = " << print_term(cfg.sequence.delta) << "\n";
        out << "variable = " << cfg.sequence.variable << "\n";
        out << "alphabet =";
        for (const auto& a : cfg.alphabet) out << " " << a;
        out << "\n";
        out << "letters =";
        for (const auto& l : cfg.letters) out << " " << l;
        out << "\n";
        out << "blank = " << cfg.blank << "\n";
        out << "distinctness = " << (cfg.add_distinctness ? "on" : "off") << "\n";
    }
    return out.str();
}

inline Machine read_machine_file(const std::string& path) {
    return read_machine(read_text_file(path));
}

}  // namespace ffot
