#pragma once

// Text format for machine specs, one section per concern:
//
//   # comments start with '#'
//   [tm]
//   name = parity
//   states = s0 s1 sa sr
//   input = 0 1
//   tape = 0 1 L b
//   marker = L
//   blank = b
//   initial = s0
//   accept = sa
//   reject = sr          # may be omitted
//
//   [rules]
//   s0 0 -> s0 0 RIGHT
//
// Symbols are whitespace-separated tokens, so multi-character states and
// tape symbols are fine.  `marker` and `blank` default to L and b.

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ffot/structure_io.hpp"
#include "ffot/tm.hpp"

namespace ffot {

namespace detail {

[[noreturn]] inline void tm_file_fail(int line, const std::string& msg) {
    throw ParseError("tm file: " + msg, line, 1);
}

}  // namespace detail

inline TmSpec read_tm(const std::string& text) {
    TmSpec spec;
    spec.marker.clear();
    spec.blank.clear();

    enum class Section { None, Tm, Rules };
    Section section = Section::None;
    std::set<std::string> keys_seen;
    bool have_initial = false, have_accept = false;

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
            if (line == "[tm]") section = Section::Tm;
            else if (line == "[rules]") section = Section::Rules;
            else detail::tm_file_fail(lineno, "unknown section " + line);
            continue;
        }
        if (section == Section::None)
            detail::tm_file_fail(lineno, "content before the [tm] section");

        if (section == Section::Tm) {
            size_t eq = line.find('=');
            if (eq == std::string::npos)
                detail::tm_file_fail(lineno, "expected 'key = value', got '" + line + "'");
            std::string key = detail::trim(line.substr(0, eq));
            std::string value = detail::trim(line.substr(eq + 1));
            if (!keys_seen.insert(key).second)
                detail::tm_file_fail(lineno, "duplicate key " + key);
            std::vector<std::string> words = detail::split_ws(value);
            auto one_word = [&]() -> std::string {
                if (words.size() != 1)
                    detail::tm_file_fail(lineno, key + " takes exactly one symbol");
                return words[0];
            };
            if (key == "name") spec.name = value;
            else if (key == "states") spec.states = words;
            else if (key == "input") spec.input_alphabet = words;
            else if (key == "tape") spec.tape_alphabet = words;
            else if (key == "marker") spec.marker = one_word();
            else if (key == "blank") spec.blank = one_word();
            else if (key == "initial") { spec.initial = one_word(); have_initial = true; }
            else if (key == "accept") { spec.accept = one_word(); have_accept = true; }
            else if (key == "reject") spec.reject = one_word();
            else detail::tm_file_fail(lineno, "unknown key " + key);
        } else {
            std::vector<std::string> words = detail::split_ws(line);
            if (words.size() != 6 || words[2] != "->")
                detail::tm_file_fail(lineno,
                                     "expected 'state read -> next write MOVE', got '" + line + "'");
            auto mv = move_from_name(words[5]);
            if (!mv)
                detail::tm_file_fail(lineno, "unknown move " + words[5] +
                                                 " (use LEFT, PAUSE or RIGHT)");
            spec.rules.push_back({words[0], words[1], words[3], words[4], *mv});
        }
    }

    if (spec.states.empty()) detail::tm_file_fail(lineno, "missing 'states' line");
    if (spec.tape_alphabet.empty()) detail::tm_file_fail(lineno, "missing 'tape' line");
    if (!have_initial) detail::tm_file_fail(lineno, "missing 'initial' line");
    if (!have_accept) detail::tm_file_fail(lineno, "missing 'accept' line");
    if (spec.marker.empty()) spec.marker = "L";
    if (spec.blank.empty()) spec.blank = "b";
    return spec;
}

inline TmSpec read_tm_file(const std::string& path) { return read_tm(read_text_file(path)); }

inline std::string write_tm(const TmSpec& spec) {
    std::ostringstream out;
    auto join = [](const std::vector<std::string>& xs) {
        std::string s;
        for (size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + xs[i];
        return s;
    };
    out << "[tm]\n";
    if (!spec.name.empty()) out << "name = " << spec.name << "\n";
    out << "states = " << join(spec.states) << "\n";
    out << "input = " << join(spec.input_alphabet) << "\n";
    out << "tape = " << join(spec.tape_alphabet) << "\n";
    out << "marker = " << spec.marker << "\n";
    out << "blank = " << spec.blank << "\n";
    out << "initial = " << spec.initial << "\n";
    out << "accept = " << spec.accept << "\n";
    if (spec.reject) out << "reject = " << *spec.reject << "\n";
    out << "\n[rules]\n";
    for (const TmRule& r : spec.rules)
        out << r.state << " " << r.read << " -> " << r.next << " " << r.write << " "
            << move_name(r.move) << "\n";
    return out.str();
}

}  // namespace ffot
