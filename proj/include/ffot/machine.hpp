#pragma once

// Finite-theory machines: a finite theory T, labeled input sentence sets,
// labeled output sentence sets, and bounded computation by exhaustive model
// search.  A machine maps an input Phi to the unique output set that every
// model of T ∪ Phi satisfies; if models disagree the result is undefined.
// All verdicts here are relative to a size range and say so.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ffot/axioms.hpp"
#include "ffot/model_finder.hpp"
#include "ffot/printer.hpp"
#include "ffot/structure.hpp"
#include "ffot/syntax.hpp"
#include "ffot/vocabulary.hpp"

namespace ffot {

// ---- word encodings -------------------------------------------------------

// chi_i = gamma(sigma^i(delta)): a family of ground terms used to address
// the letters of a word.
struct SimpleSequence {
    Term gamma;  // template over one variable
    Term sigma;  // template over the same variable
    Term delta;  // ground seed
    std::string variable = "y";
};

inline Term sequence_term(const SimpleSequence& seq, int i) {
    if (i < 0) throw Error("sequence index must be nonnegative");
    Term t = seq.delta;
    for (int k = 0; k < i; ++k) t = substitute_term(seq.sigma, seq.variable, t);
    return substitute_term(seq.gamma, seq.variable, t);
}

struct WordEncodingConfig {
    SimpleSequence sequence;
    std::vector<std::string> alphabet;  // constant names, aligned with letters
    std::vector<std::string> letters;   // spellings used in words ("0", "1", ...)
    std::string blank;                  // constant name, not in alphabet
    bool add_distinctness = true;
};

namespace detail {

inline void validate_encoding(const WordEncodingConfig& cfg, const Vocabulary& vocab) {
    std::set<std::string> tvars;
    term_vars(cfg.sequence.gamma, tvars);
    tvars.erase(cfg.sequence.variable);
    std::set<std::string> svars;
    term_vars(cfg.sequence.sigma, svars);
    svars.erase(cfg.sequence.variable);
    if (!tvars.empty() || !svars.empty())
        throw Error("sequence templates may only use the variable '" +
                    cfg.sequence.variable + "'");
    if (!cfg.sequence.delta.is_ground())
        throw Error("sequence seed term must be ground");
    if (cfg.alphabet.size() != cfg.letters.size())
        throw Error("alphabet and letter lists must have the same length");
    for (const std::string& c : cfg.alphabet)
        if (c == cfg.blank) throw Error("blank symbol must not appear in the alphabet");
    for (const std::string& c : cfg.alphabet)
        if (vocab.constant_index(c) < 0)
            throw VocabularyError("alphabet symbol " + c + " is not a declared constant");
    if (vocab.constant_index(cfg.blank) < 0)
        throw VocabularyError("blank symbol " + cfg.blank + " is not a declared constant");
    std::set<std::string> letter_set(cfg.letters.begin(), cfg.letters.end());
    if (letter_set.size() != cfg.letters.size())
        throw Error("letter spellings must be distinct");
}

}  // namespace detail

// Split a word into letters: comma-separated if a comma occurs, otherwise one
// letter per character.  Each letter must match an entry of cfg.letters.
inline std::vector<int> parse_word(const WordEncodingConfig& cfg, const std::string& w) {
    std::vector<std::string> parts;
    if (w.find(',') != std::string::npos) {
        std::string cur;
        for (char ch : w) {
            if (ch == ',') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        parts.push_back(cur);
    } else {
        for (char ch : w) parts.push_back(std::string(1, ch));
    }
    std::vector<int> out;
    for (const std::string& p : parts) {
        auto it = std::find(cfg.letters.begin(), cfg.letters.end(), p);
        if (it == cfg.letters.end())
            throw Error("letter '" + p + "' is not in the alphabet");
        out.push_back(static_cast<int>(it - cfg.letters.begin()));
    }
    return out;
}

// The word sentence set: chi_i = w_i for each letter, then chi_n = blank,
// with pairwise distinctness of the symbol constants unless disabled.
inline std::vector<Formula> encode_word(const WordEncodingConfig& cfg,
                                        const Vocabulary& vocab,
                                        const std::string& word) {
    detail::validate_encoding(cfg, vocab);
    std::vector<int> letters = parse_word(cfg, word);
    int n = static_cast<int>(letters.size());
    std::vector<Term> chi;
    for (int i = 0; i <= n; ++i) chi.push_back(sequence_term(cfg.sequence, i));
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (chi[i] == chi[j])
                throw Error("sequence terms collapse: chi_" + std::to_string(i) +
                            " equals chi_" + std::to_string(j));
    std::vector<Formula> out;
    for (int i = 0; i < n; ++i)
        out.push_back(equal(chi[i], Term::constant(cfg.alphabet[letters[i]])));
    out.push_back(equal(chi[n], Term::constant(cfg.blank)));
    if (cfg.add_distinctness) {
        std::vector<std::string> names = cfg.alphabet;
        names.push_back(cfg.blank);
        if (names.size() >= 2)
            for (Formula& f : distinct_constants_axioms(names)) out.push_back(std::move(f));
    }
    for (const Formula& f : out) validate_formula(f, vocab);
    return out;
}

// Read the word back off an encoded sentence set (letters until the blank).
inline std::string decode_word(const WordEncodingConfig& cfg,
                               const std::vector<Formula>& sentences) {
    std::vector<std::string> letters;
    bool multi = false;
    for (int i = 0;; ++i) {
        Term chi = sequence_term(cfg.sequence, i);
        std::optional<std::string> symbol;
        for (const Formula& f : sentences) {
            if (f.kind != Formula::Kind::Equal) continue;
            if (f.terms[0] == chi && f.terms[1].kind == Term::Kind::Constant) {
                symbol = f.terms[1].name;
                break;
            }
        }
        if (!symbol) throw Error("no assignment for sequence index " + std::to_string(i));
        if (*symbol == cfg.blank) break;
        auto it = std::find(cfg.alphabet.begin(), cfg.alphabet.end(), *symbol);
        if (it == cfg.alphabet.end())
            throw Error("assigned symbol " + *symbol + " is not in the alphabet");
        const std::string& spelling = cfg.letters[it - cfg.alphabet.begin()];
        if (spelling.size() > 1) multi = true;
        letters.push_back(spelling);
    }
    std::string out;
    for (size_t i = 0; i < letters.size(); ++i) {
        if (multi && i > 0) out.push_back(',');
        out += letters[i];
    }
    return out;
}

// ---- the machine ----------------------------------------------------------

struct LabeledSentences {
    std::string label;
    std::vector<Formula> sentences;
};

struct Machine {
    Vocabulary vocab;
    std::vector<Formula> theory;
    std::vector<LabeledSentences> inputs;
    std::vector<LabeledSentences> outputs;
    std::optional<WordEncodingConfig> encoding;
};

namespace detail {

inline std::set<std::string> sentence_set(const std::vector<Formula>& fs) {
    std::set<std::string> out;
    for (const Formula& f : fs) out.insert(print_sentence(f));
    return out;
}

}  // namespace detail

// Static well-formedness: distinct labels, pairwise distinct output sets,
// every sentence within the vocabulary, encoding invariants.
inline std::vector<std::string> machine_definition_errors(const Machine& m) {
    std::vector<std::string> errors;
    auto check_sentences = [&](const std::vector<Formula>& fs, const std::string& where) {
        for (const Formula& f : fs) {
            try {
                // free variables surface as unbound-variable errors here
                validate_formula(f, m.vocab);
            } catch (const Error& e) {
                errors.push_back(where + ": " + e.what());
            }
        }
    };
    check_sentences(m.theory, "theory");
    std::set<std::string> labels;
    for (const auto& in : m.inputs) {
        if (!labels.insert("I:" + in.label).second)
            errors.push_back("duplicate input label " + in.label);
        check_sentences(in.sentences, "input " + in.label);
    }
    for (const auto& out : m.outputs) {
        if (!labels.insert("O:" + out.label).second)
            errors.push_back("duplicate output label " + out.label);
        check_sentences(out.sentences, "output " + out.label);
        if (out.sentences.empty())
            errors.push_back("output " + out.label + " is empty");
    }
    for (size_t i = 0; i < m.outputs.size(); ++i)
        for (size_t j = i + 1; j < m.outputs.size(); ++j)
            if (detail::sentence_set(m.outputs[i].sentences) ==
                detail::sentence_set(m.outputs[j].sentences))
                errors.push_back("outputs " + m.outputs[i].label + " and " +
                                 m.outputs[j].label + " are the same sentence set");
    if (m.encoding) {
        try {
            detail::validate_encoding(*m.encoding, m.vocab);
        } catch (const Error& e) {
            errors.push_back(std::string("word encoding: ") + e.what());
        }
    }
    return errors;
}

inline const LabeledSentences* find_label(const std::vector<LabeledSentences>& sets,
                                          const std::string& label) {
    for (const auto& s : sets)
        if (s.label == label) return &s;
    return nullptr;
}

// ---- computation ----------------------------------------------------------

struct ComputeResult {
    enum class Status { Output, Undefined, NoOutputAtBound, Unknown };
    Status status = Status::NoOutputAtBound;
    std::string label;       // Output: the selected label; Undefined: first label
    std::string label2;      // Undefined: conflicting label
    std::optional<FiniteStructure> witness1;  // Undefined / NoOutput diagnostics
    std::optional<FiniteStructure> witness2;
    std::vector<int> sizes_checked;
    long long models_examined = 0;
};

// Classify the models of T ∪ Phi within the size range.  output(L) requires
// at least one model and unanimous agreement; two models selecting different
// outputs (or one model satisfying two) is the undefined case; a model
// satisfying no output set blocks any claim.
inline ComputeResult compute(const Machine& m, const std::vector<Formula>& phi,
                             const SearchConfig& cfg) {
    auto errors = machine_definition_errors(m);
    if (!errors.empty()) throw Error("ill-formed machine: " + errors.front());
    std::vector<Formula> premises = m.theory;
    premises.insert(premises.end(), phi.begin(), phi.end());

    ComputeResult r;
    std::string claim;
    std::optional<FiniteStructure> claim_witness;
    for (int n = cfg.min_size; n <= cfg.max_size; ++n) {
        SearchConfig per = cfg;
        per.min_size = per.max_size = n;
        per.model_limit = 0;
        SearchOutcome out = find_models(m.vocab, premises, per);
        r.sizes_checked.push_back(n);
        r.models_examined += static_cast<long long>(out.models.size());
        if (out.budget_exhausted) {
            r.status = ComputeResult::Status::Unknown;
            return r;
        }
        for (const FiniteStructure& model : out.models) {
            std::vector<std::string> satisfied;
            for (const auto& o : m.outputs) {
                bool all = true;
                for (const Formula& f : o.sentences)
                    if (!eval_formula(model, f)) {
                        all = false;
                        break;
                    }
                if (all) satisfied.push_back(o.label);
            }
            if (satisfied.empty()) {
                r.status = ComputeResult::Status::NoOutputAtBound;
                r.witness1 = model;
                return r;
            }
            if (satisfied.size() >= 2) {
                r.status = ComputeResult::Status::Undefined;
                r.label = satisfied[0];
                r.label2 = satisfied[1];
                r.witness1 = model;
                r.witness2 = model;
                return r;
            }
            if (claim.empty()) {
                claim = satisfied[0];
                claim_witness = model;
            } else if (claim != satisfied[0]) {
                r.status = ComputeResult::Status::Undefined;
                r.label = claim;
                r.label2 = satisfied[0];
                r.witness1 = claim_witness;
                r.witness2 = model;
                return r;
            }
        }
    }
    if (claim.empty()) {
        // no model at any explored size: the bounded search proves nothing
        r.status = ComputeResult::Status::Unknown;
        return r;
    }
    r.status = ComputeResult::Status::Output;
    r.label = claim;
    r.witness1 = claim_witness;
    return r;
}

inline ComputeResult compute(const Machine& m, const std::string& input_label,
                             const SearchConfig& cfg) {
    const LabeledSentences* in = find_label(m.inputs, input_label);
    if (!in) throw Error("machine has no input labeled " + input_label);
    return compute(m, in->sentences, cfg);
}

// ---- machine validation (the two semantic conditions) ---------------------

struct ValidationReport {
    std::vector<std::string> definition_errors;
    struct InputCheck {
        std::string label;
        enum class Status { Satisfiable, NoModelsAtBound, Unknown } status;
    };
    std::vector<InputCheck> input_checks;         // condition: T ∪ Phi satisfiable
    struct PairViolation {
        std::string input_label;
        std::string label1, label2;
        FiniteStructure witness;                  // model of T ∪ Phi ∪ Theta ∪ Psi
    };
    std::vector<PairViolation> violations;        // condition: outputs exclusive
    bool budget_exhausted = false;

    bool ok() const {
        if (!definition_errors.empty() || !violations.empty() || budget_exhausted)
            return false;
        for (const auto& c : input_checks)
            if (c.status != InputCheck::Status::Satisfiable) return false;
        return true;
    }
};

// Check the declared inputs (plus any extra encoded words) against the two
// semantic conditions: each T ∪ Phi must have a model in range, and no two
// distinct output sets may hold together in any such model.
inline ValidationReport validate_machine(const Machine& m, const SearchConfig& cfg,
                                         const std::vector<std::string>& words = {}) {
    ValidationReport rep;
    rep.definition_errors = machine_definition_errors(m);
    if (!rep.definition_errors.empty()) return rep;

    std::vector<LabeledSentences> inputs = m.inputs;
    for (const std::string& w : words) {
        if (!m.encoding)
            throw Error("cannot validate words: machine has no word encoding");
        inputs.push_back({"word:" + w, encode_word(*m.encoding, m.vocab, w)});
    }
    for (const auto& in : inputs) {
        std::vector<Formula> premises = m.theory;
        premises.insert(premises.end(), in.sentences.begin(), in.sentences.end());
        SearchConfig probe = cfg;
        probe.model_limit = 1;
        SearchOutcome sat = find_models(m.vocab, premises, probe);
        ValidationReport::InputCheck check;
        check.label = in.label;
        if (sat.budget_exhausted) {
            check.status = ValidationReport::InputCheck::Status::Unknown;
            rep.budget_exhausted = true;
        } else if (sat.models.empty()) {
            check.status = ValidationReport::InputCheck::Status::NoModelsAtBound;
        } else {
            check.status = ValidationReport::InputCheck::Status::Satisfiable;
        }
        rep.input_checks.push_back(check);

        for (size_t i = 0; i < m.outputs.size(); ++i) {
            for (size_t j = i + 1; j < m.outputs.size(); ++j) {
                std::vector<Formula> both = premises;
                both.insert(both.end(), m.outputs[i].sentences.begin(),
                            m.outputs[i].sentences.end());
                both.insert(both.end(), m.outputs[j].sentences.begin(),
                            m.outputs[j].sentences.end());
                SearchOutcome hit = find_models(m.vocab, both, probe);
                if (hit.budget_exhausted) rep.budget_exhausted = true;
                if (!hit.models.empty())
                    rep.violations.push_back({in.label, m.outputs[i].label,
                                              m.outputs[j].label, hit.models.front()});
            }
        }
    }
    return rep;
}

// ---- word-level wrappers --------------------------------------------------

struct Decision {
    enum class Verdict { Accept, Reject, Unknown };
    Verdict verdict = Verdict::Unknown;
    ComputeResult detail;
};

inline Decision decide_word(const Machine& m, const std::string& word,
                            const std::string& accept_label,
                            const std::string& reject_label, const SearchConfig& cfg) {
    if (!m.encoding) throw Error("machine has no word encoding");
    if (!find_label(m.outputs, accept_label))
        throw Error("machine has no output labeled " + accept_label);
    if (!find_label(m.outputs, reject_label))
        throw Error("machine has no output labeled " + reject_label);
    Decision d;
    d.detail = compute(m, encode_word(*m.encoding, m.vocab, word), cfg);
    if (d.detail.status == ComputeResult::Status::Output) {
        if (d.detail.label == accept_label) d.verdict = Decision::Verdict::Accept;
        else if (d.detail.label == reject_label) d.verdict = Decision::Verdict::Reject;
    }
    return d;
}

// Smallest domain size admitting a model of T ∪ Phi_word: the machine's
// space usage on that word, measured in structure elements.
inline MinSizeResult measure_resources(const Machine& m, const std::string& word,
                                       int max_size, SearchConfig cfg = {}) {
    if (!m.encoding) throw Error("machine has no word encoding");
    std::vector<Formula> premises = m.theory;
    for (Formula& f : encode_word(*m.encoding, m.vocab, word))
        premises.push_back(std::move(f));
    return find_min_model_size(m.vocab, premises, max_size, cfg);
}

}  // namespace ffot
