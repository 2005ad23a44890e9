#pragma once

// Turing machines with a one-way infinite tape: cell 0 carries a left-end
// marker, the input word sits in cells 1..n, the head starts on cell 1.
// This module is the reference semantics against which the logical
// compilations are checked: a compiled theory must accept exactly the words
// the simulator accepts, so the simulator stays deliberately dumb.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ffot/vocabulary.hpp"

namespace ffot {

enum class Move { Left, Pause, Right };

inline std::string move_name(Move m) {
    switch (m) {
        case Move::Left: return "LEFT";
        case Move::Pause: return "PAUSE";
        case Move::Right: return "RIGHT";
    }
    return "?";
}

inline std::optional<Move> move_from_name(const std::string& s) {
    if (s == "LEFT") return Move::Left;
    if (s == "PAUSE") return Move::Pause;
    if (s == "RIGHT") return Move::Right;
    return std::nullopt;
}

// In state `state` reading `read`: switch to `next`, write `write`, move.
struct TmRule {
    std::string state;
    std::string read;
    std::string next;
    std::string write;
    Move move = Move::Pause;
};

inline bool operator==(const TmRule& a, const TmRule& b) {
    return a.state == b.state && a.read == b.read && a.next == b.next &&
           a.write == b.write && a.move == b.move;
}

// A machine description.  `tape_alphabet` is the full tape alphabet: it must
// contain every input letter plus the end marker and the blank.  `reject` is
// optional: machines used as one half of a complementary pair accept or run
// forever, they never halt in rejection.
struct TmSpec {
    std::string name;
    std::vector<std::string> states;
    std::vector<std::string> input_alphabet;
    std::vector<std::string> tape_alphabet;
    std::string marker = "L";
    std::string blank = "b";
    std::string initial;
    std::string accept;
    std::optional<std::string> reject;

    std::vector<TmRule> rules;

    bool is_halting_state(const std::string& s) const {
        return s == accept || (reject && s == *reject);
    }
};

// ---- validation -----------------------------------------------------------

struct TmReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool deterministic = true;
    bool ok() const { return errors.empty(); }
};

inline TmReport validate_tm(const TmSpec& spec) {
    TmReport rep;
    auto err = [&](const std::string& m) { rep.errors.push_back(m); };
    auto warn = [&](const std::string& m) { rep.warnings.push_back(m); };

    auto dup_check = [&](const std::vector<std::string>& xs, const char* what) {
        std::set<std::string> seen;
        for (const auto& x : xs)
            if (!seen.insert(x).second) err(std::string("duplicate ") + what + " " + x);
    };
    dup_check(spec.states, "state");
    dup_check(spec.input_alphabet, "input letter");
    dup_check(spec.tape_alphabet, "tape symbol");

    if (spec.states.empty()) err("no states declared");
    if (spec.tape_alphabet.empty()) err("no tape alphabet declared");

    std::set<std::string> states(spec.states.begin(), spec.states.end());
    std::set<std::string> tape(spec.tape_alphabet.begin(), spec.tape_alphabet.end());
    std::set<std::string> input(spec.input_alphabet.begin(), spec.input_alphabet.end());

    for (const auto& c : spec.input_alphabet)
        if (!tape.count(c)) err("input letter " + c + " is not in the tape alphabet");
    if (!tape.count(spec.marker)) err("marker " + spec.marker + " is not in the tape alphabet");
    if (!tape.count(spec.blank)) err("blank " + spec.blank + " is not in the tape alphabet");
    if (input.count(spec.marker)) err("marker " + spec.marker + " must not be an input letter");
    if (input.count(spec.blank)) err("blank " + spec.blank + " must not be an input letter");
    if (spec.marker == spec.blank) err("marker and blank must differ");

    if (!states.count(spec.initial)) err("initial state " + spec.initial + " is not declared");
    if (!states.count(spec.accept)) err("accept state " + spec.accept + " is not declared");
    if (spec.reject && !states.count(*spec.reject))
        err("reject state " + *spec.reject + " is not declared");
    if (spec.reject && spec.accept == *spec.reject) err("accept and reject states must differ");
    if (spec.initial == spec.accept || (spec.reject && spec.initial == *spec.reject))
        err("initial state must not be a halting state");

    // rule table: membership, halting-state sources, duplicates
    std::map<std::pair<std::string, std::string>, int> fanout;
    std::set<std::tuple<std::string, std::string, std::string, std::string, Move>> exact;
    for (const TmRule& r : spec.rules) {
        if (!states.count(r.state)) err("rule from undeclared state " + r.state);
        if (!states.count(r.next)) err("rule into undeclared state " + r.next);
        if (!tape.count(r.read)) err("rule reads undeclared symbol " + r.read);
        if (!tape.count(r.write)) err("rule writes undeclared symbol " + r.write);
        if (states.count(r.state) && spec.is_halting_state(r.state))
            err("rule fires from halting state " + r.state);
        fanout[{r.state, r.read}]++;
        if (!exact.insert({r.state, r.read, r.next, r.write, r.move}).second)
            warn("rule (" + r.state + ", " + r.read + ") -> (" + r.next + ", " + r.write +
                 ", " + move_name(r.move) + ") appears twice");
        if (r.read == spec.marker && r.move == Move::Left)
            warn("rule (" + r.state + ", " + r.read +
                 ") moves LEFT while reading the end marker; it falls off the tape at cell 0");
        if (r.read == spec.marker && r.write != spec.marker)
            warn("rule (" + r.state + ", " + r.read + ") overwrites the end marker");
        if (r.read != spec.marker && r.write == spec.marker)
            warn("rule (" + r.state + ", " + r.read + ") writes the end marker mid-tape");
    }

    // totality: every non-halting state must react to every tape symbol
    for (const auto& t : spec.states) {
        if (spec.is_halting_state(t)) continue;
        for (const auto& a : spec.tape_alphabet) {
            auto it = fanout.find({t, a});
            if (it == fanout.end())
                err("no rule for (" + t + ", " + a + ")");
            else if (it->second > 1)
                rep.deterministic = false;
        }
    }
    return rep;
}

inline bool is_deterministic(const TmSpec& spec) {
    std::map<std::pair<std::string, std::string>, int> fanout;
    for (const TmRule& r : spec.rules)
        if (++fanout[{r.state, r.read}] > 1) return false;
    return true;
}

// ---- words ----------------------------------------------------------------

namespace detail {

// Same convention as word encodings: a comma anywhere makes the word a
// comma-separated letter list, otherwise every character is one letter.
inline std::vector<std::string> split_word(const std::string& text) {
    std::vector<std::string> out;
    if (text.find(',') != std::string::npos) {
        size_t start = 0;
        while (start <= text.size()) {
            size_t comma = text.find(',', start);
            if (comma == std::string::npos) comma = text.size();
            out.push_back(text.substr(start, comma - start));
            start = comma + 1;
        }
    } else {
        for (char c : text) out.push_back(std::string(1, c));
    }
    return out;
}

}  // namespace detail

inline std::vector<std::string> tm_input_letters(const TmSpec& spec, const std::string& word) {
    std::set<std::string> input(spec.input_alphabet.begin(), spec.input_alphabet.end());
    std::vector<std::string> letters = word.empty() ? std::vector<std::string>{}
                                                    : detail::split_word(word);
    for (const auto& c : letters)
        if (!input.count(c)) throw Error("letter '" + c + "' is not in the input alphabet");
    return letters;
}

// ---- simulation -----------------------------------------------------------

struct TmConfigState {
    std::string state;
    long long head = 1;
    std::vector<std::string> tape;  // cell 0 is the end marker
};

namespace detail {

inline TmConfigState tm_start(const TmSpec& spec, const std::string& word) {
    TmConfigState c;
    c.state = spec.initial;
    c.head = 1;
    c.tape.push_back(spec.marker);
    for (const auto& letter : tm_input_letters(spec, word)) c.tape.push_back(letter);
    c.tape.push_back(spec.blank);
    return c;
}

inline const std::string& tm_read(const TmConfigState& c, const TmSpec& spec) {
    return c.head < (long long)c.tape.size() ? c.tape[c.head] : spec.blank;
}

inline void tm_apply(TmConfigState& c, const TmRule& r, const TmSpec& spec) {
    while (c.head >= (long long)c.tape.size()) c.tape.push_back(spec.blank);
    c.tape[c.head] = r.write;
    switch (r.move) {
        case Move::Left:
            if (c.head == 0) throw Error("head moved off the left end of the tape");
            --c.head;
            break;
        case Move::Pause: break;
        case Move::Right: ++c.head; break;
    }
}

// canonical form for cycle detection: trim trailing blanks
inline std::tuple<std::string, long long, std::vector<std::string>> tm_key(
    const TmConfigState& c, const TmSpec& spec) {
    std::vector<std::string> tape = c.tape;
    while (tape.size() > (size_t)(c.head + 1) && tape.back() == spec.blank) tape.pop_back();
    return {c.state, c.head, tape};
}

}  // namespace detail

struct SimResult {
    enum class Status { Accepted, Rejected, OutOfSteps };
    Status status = Status::OutOfSteps;
    long long steps = 0;  // rule applications before entering the halting state
};

// Deterministic run.  Counts one step per rule application; throws if the
// spec offers two rules for the same configuration or has none for a
// non-halting one.
inline SimResult simulate_tm(const TmSpec& spec, const std::string& word,
                             long long max_steps = 10000) {
    TmConfigState c = detail::tm_start(spec, word);
    SimResult res;
    for (long long step = 0; step <= max_steps; ++step) {
        if (c.state == spec.accept) return {SimResult::Status::Accepted, res.steps};
        if (spec.reject && c.state == *spec.reject)
            return {SimResult::Status::Rejected, res.steps};
        if (step == max_steps) break;
        const std::string& sym = detail::tm_read(c, spec);
        const TmRule* hit = nullptr;
        for (const TmRule& r : spec.rules) {
            if (r.state != c.state || r.read != sym) continue;
            if (hit) throw Error("nondeterministic choice at (" + c.state + ", " + sym + ")");
            hit = &r;
        }
        if (!hit) throw Error("no rule for (" + c.state + ", " + sym + ")");
        detail::tm_apply(c, *hit, spec);
        c.state = hit->next;
        ++res.steps;
    }
    res.status = SimResult::Status::OutOfSteps;
    return res;
}

struct NtmResult {
    enum class Status { Accepted, NoAcceptingPath, OutOfSteps };
    Status status = Status::NoAcceptingPath;
    long long steps = 0;  // length of a shortest accepting path when accepted
};

// Breadth-first search over configurations, deduplicated, so looping branches
// do not hang the search.  A configuration in a non-halting state with no
// applicable rule is simply a dead branch here (the validator reports such
// gaps as totality errors separately).
inline NtmResult simulate_ntm(const TmSpec& spec, const std::string& word,
                              long long max_steps = 10000) {
    std::deque<TmConfigState> frontier{detail::tm_start(spec, word)};
    std::set<std::tuple<std::string, long long, std::vector<std::string>>> seen{
        detail::tm_key(frontier.front(), spec)};
    for (long long depth = 0; depth <= max_steps; ++depth) {
        std::deque<TmConfigState> next;
        for (const TmConfigState& c : frontier) {
            if (c.state == spec.accept) return {NtmResult::Status::Accepted, depth};
            if (spec.reject && c.state == *spec.reject) continue;
            const std::string& sym = detail::tm_read(c, spec);
            for (const TmRule& r : spec.rules) {
                if (r.state != c.state || r.read != sym) continue;
                TmConfigState succ = c;
                detail::tm_apply(succ, r, spec);
                succ.state = r.next;
                if (seen.insert(detail::tm_key(succ, spec)).second) next.push_back(succ);
            }
        }
        // every config in this frontier was checked above, so an empty
        // successor set means no accepting path exists at any depth
        if (next.empty()) return {NtmResult::Status::NoAcceptingPath, 0};
        frontier = std::move(next);
    }
    return {NtmResult::Status::OutOfSteps, 0};
}

}  // namespace ffot
