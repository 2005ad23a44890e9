// Command-line surface over the library: model checking, bounded model
// finding, machine execution, compilation from tape-machine specs, axiom-set
// and structure generators, and a simulator for spot checks.
//
// Exit codes, uniform across subcommands:
//   0  success (all sentences true / output selected / models found / ...)
//   1  a definite negative (falsified sentence, validation violation,
//      rejected or accept-less word)
//   2  usage, parse or I/O error
//   3  the machine is undefined on the input (two models, two outputs)
//   4  no result at the explored bound (no models, unknown, out of budget)
//
// With --report PATH every subcommand also writes a line-delimited record of
// what it did: one JSON object per line, ending with a wall-clock line.  The
// payload lines are deterministic for fixed inputs and flags — search results
// do not depend on --jobs — so reports can be compared byte-for-byte after
// dropping the trailing timing line.  FFOT_TIME_BUDGET_MS, when set, caps
// every single model search.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ffot/axioms.hpp"
#include "ffot/encoders.hpp"
#include "ffot/machine.hpp"
#include "ffot/machine_io.hpp"
#include "ffot/model_finder.hpp"
#include "ffot/parser.hpp"
#include "ffot/printer.hpp"
#include "ffot/structure_io.hpp"
#include "ffot/tm.hpp"
#include "ffot/tm_io.hpp"

using nlohmann::json;
using namespace ffot;

namespace {

constexpr const char* kVersion = "ffot 0.1.0";

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kBadInput = 2;
constexpr int kUndefined = 3;
constexpr int kNoResult = 4;

// ---- report plumbing ------------------------------------------------------

// FNV-1a over the raw bytes; enough to tie a report line to its input files.
std::string digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Report {
    std::string path;  // empty = disabled
    std::vector<json> lines;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void add(json j) {
        if (!path.empty()) lines.push_back(std::move(j));
    }
    void note_input(const std::string& file, const std::string& bytes) {
        if (path.empty()) return;
        json j;
        j["input"] = file;
        j["digest"] = digest(bytes);
        lines.push_back(std::move(j));
    }
    // the wall-clock line goes last so consumers can strip timing and
    // compare the rest byte-for-byte
    void flush() {
        if (path.empty()) return;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write report file " + path);
        for (const json& j : lines) out << j.dump() << "\n";
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - started)
                      .count();
        out << json{{"wall_ms", ms}}.dump() << "\n";
    }
};

Report g_report;

std::string slurp(const std::string& path) {
    std::string text = read_text_file(path);
    g_report.note_input(path, text);
    return text;
}

// ---- shared option bundles ------------------------------------------------

struct SearchFlags {
    int min_size = 1;
    int max_size = 4;
    long long limit = 0;
    int jobs = 1;
    std::string equality = "interpreted";
    bool no_symmetry = false;
    bool no_pruning = false;

    void attach(CLI::App* cmd, bool with_range = true) {
        if (with_range) {
            cmd->add_option("--min-size", min_size, "smallest domain size to try")
                ->check(CLI::PositiveNumber);
            cmd->add_option("--max-size", max_size, "largest domain size to try")
                ->check(CLI::PositiveNumber);
        }
        cmd->add_option("--limit", limit, "stop after this many models (0 = all)");
        cmd->add_option("--jobs", jobs, "worker threads for the search")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--equality", equality, "equality handling")
            ->check(CLI::IsMember({"interpreted", "axiomatic"}));
        cmd->add_flag("--no-symmetry-breaking", no_symmetry,
                      "enumerate all models, not one per isomorphism class");
        cmd->add_flag("--no-pruning", no_pruning,
                      "disable partial-assignment pruning (debugging aid)");
    }

    SearchConfig to_config() const {
        SearchConfig cfg;
        cfg.min_size = min_size;
        cfg.max_size = max_size;
        cfg.model_limit = limit;
        cfg.jobs = jobs;
        cfg.equality = equality == "axiomatic" ? EqualityMode::Axiomatic
                                               : EqualityMode::Interpreted;
        cfg.symmetry_breaking = !no_symmetry;
        cfg.pruning = !no_pruning;
        if (const char* ms = std::getenv("FFOT_TIME_BUDGET_MS")) {
            char* end = nullptr;
            long v = std::strtol(ms, &end, 10);
            // zero is legal: every search is exhausted before it starts
            if (end && *end == '\0' && v >= 0)
                cfg.time_budget = std::chrono::milliseconds(v);
        }
        return cfg;
    }
};

// Sentence sources shared by check-model / find-models / min-size: plain
// sentence files (one per line, '#' comments), named axiom sets, and
// optionally a machine file contributing its vocabulary and theory.
struct TheoryFlags {
    std::vector<std::string> sentence_files;
    std::vector<std::string> axiom_ids;
    std::string machine_file;
    std::string vocab_file;

    void attach(CLI::App* cmd, bool with_machine = true) {
        cmd->add_option("sentences", sentence_files,
                        "sentence files, one sentence per line");
        cmd->add_option("--axioms", axiom_ids,
                        "named axiom set: eq, psa, psa_f, dof, dof_f")
            ->check(CLI::IsMember({"eq", "psa", "psa_f", "dof", "dof_f"}));
        if (with_machine)
            cmd->add_option("--machine", machine_file,
                            "machine file supplying vocabulary and theory");
        cmd->add_option("--vocab", vocab_file,
                        "vocabulary file (relation/function/constant lines)");
    }

    // The vocabulary comes from the machine file if given, else the vocab
    // file, else the union of the named axiom sets' standard vocabularies.
    // The eq set is special: it is instantiated over whatever vocabulary the
    // other sources establish, since its congruence sentences depend on it.
    Vocabulary resolve_vocab(const std::optional<Machine>& m) const {
        if (m) return m->vocab;
        if (!vocab_file.empty()) {
            std::string text = slurp(vocab_file);
            if (text.find("[vocabulary]") == std::string::npos)
                text = "[vocabulary]\n" + text;
            return read_machine(text).vocab;
        }
        Vocabulary v;
        bool any = false;
        for (const std::string& id : axiom_ids) {
            Vocabulary add;
            if (id == "psa") add = psa_vocab();
            else if (id == "psa_f") add = psa_f_vocab();
            else if (id == "dof") add = dof_vocab();
            else if (id == "dof_f") add = dof_f_vocab();
            else continue;  // eq: no vocabulary of its own
            v = v.merged_with(add);
            any = true;
        }
        if (!any)
            throw Error("no vocabulary source: give --machine, --vocab, or a "
                        "non-eq --axioms id");
        return v;
    }

    std::vector<Formula> sentences(const Vocabulary& vocab,
                                   const std::optional<Machine>& m) const {
        std::vector<Formula> out;
        if (m) out = m->theory;
        for (const std::string& id : axiom_ids) {
            std::vector<Formula> add;
            if (id == "eq") add = equality_axioms(vocab);
            else if (id == "psa") add = peano_successor_axioms();
            else if (id == "psa_f") add = finite_peano_axioms();
            else if (id == "dof") add = dense_ordered_field_axioms();
            else add = finite_dof_axioms();
            for (Formula& f : add) {
                validate_formula(f, vocab);
                out.push_back(std::move(f));
            }
        }
        for (const std::string& file : sentence_files) {
            std::istringstream in(slurp(file));
            std::string line;
            int lineno = 0;
            while (std::getline(in, line)) {
                ++lineno;
                if (auto hash = line.find('#'); hash != std::string::npos)
                    line.resize(hash);
                auto b = line.find_first_not_of(" \t\r\n");
                if (b == std::string::npos) continue;
                auto e = line.find_last_not_of(" \t\r\n");
                try {
                    out.push_back(parse_sentence(line.substr(b, e - b + 1), vocab));
                } catch (const ParseError& err) {
                    throw ParseError(file + ": " + err.what(), lineno, 1);
                }
            }
        }
        return out;
    }
};

void write_out(const std::string& out_file, const std::string& text) {
    if (out_file.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
    } else {
        write_text_file(out_file, text);
        g_report.add({{"wrote", out_file}, {"digest", digest(text)}});
    }
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_check_model(const std::string& structure_file, const TheoryFlags& theory) {
    std::optional<Machine> m;
    if (!theory.machine_file.empty()) m = read_machine(slurp(theory.machine_file));
    Vocabulary vocab = theory.resolve_vocab(m);
    FiniteStructure A = read_structure(slurp(structure_file), vocab);
    std::vector<Formula> sentences = theory.sentences(vocab, m);
    if (sentences.empty()) throw Error("no sentences to check");

    ModelReport rep = check_model(A, sentences);
    json lines = json::array();
    for (const SentenceVerdict& v : rep.verdicts) {
        std::string shown = print_sentence(v.sentence);
        std::cout << (v.holds ? "true   " : "FALSE  ") << shown;
        json rec{{"sentence", shown}, {"holds", v.holds}};
        if (!v.witness.empty()) {
            std::cout << "   [fails at";
            json w;
            for (const Assignment& a : v.witness) {
                std::cout << " " << a.var << "=" << a.value;
                w[a.var] = a.value;
            }
            std::cout << "]";
            rec["witness"] = w;
        }
        std::cout << "\n";
        lines.push_back(std::move(rec));
    }
    std::cout << (rep.all_hold ? "all sentences hold" : "some sentences fail")
              << " (" << rep.verdicts.size() << " checked, domain size " << A.size
              << ")\n";
    g_report.add({{"command", "check-model"},
                  {"verdicts", lines},
                  {"all_hold", rep.all_hold}});
    return rep.all_hold ? kOk : kNegative;
}

int finish_compute(const ComputeResult& r, const std::string& what) {
    json rec{{"command", "compute"},
             {"input", what},
             {"sizes_checked", r.sizes_checked},
             {"models_examined", r.models_examined}};
    int code = kNoResult;
    switch (r.status) {
        case ComputeResult::Status::Output:
            std::cout << "output " << r.label << "\n";
            rec["status"] = "output";
            rec["label"] = r.label;
            code = kOk;
            break;
        case ComputeResult::Status::Undefined:
            std::cout << "undefined: models select both " << r.label << " and "
                      << r.label2 << "\n";
            rec["status"] = "undefined";
            rec["labels"] = {r.label, r.label2};
            code = kUndefined;
            break;
        case ComputeResult::Status::NoOutputAtBound:
            std::cout << "no output: a model satisfies none of the output sets\n";
            rec["status"] = "no_output";
            break;
        case ComputeResult::Status::Unknown:
            std::cout << "unknown: no models in the explored size range\n";
            rec["status"] = "unknown";
            break;
    }
    std::cout << "sizes checked:";
    for (int n : r.sizes_checked) std::cout << " " << n;
    std::cout << "\nmodels examined: " << r.models_examined << "\n";
    g_report.add(std::move(rec));
    return code;
}

int cmd_compute(const std::string& machine_file, const std::string& input_label,
                const std::string& word, bool have_word, const SearchFlags& flags) {
    Machine m = read_machine(slurp(machine_file));
    SearchConfig cfg = flags.to_config();
    if (have_word) {
        if (!m.encoding) throw Error("machine file has no [word-encoding] section");
        ComputeResult r = compute(m, encode_word(*m.encoding, m.vocab, word), cfg);
        return finish_compute(r, "word:" + word);
    }
    if (input_label.empty())
        throw Error("compute needs --input LABEL or --word W");
    ComputeResult r = compute(m, input_label, cfg);
    return finish_compute(r, "input:" + input_label);
}

int cmd_find_models(const TheoryFlags& theory, const SearchFlags& flags,
                    bool print_models) {
    std::optional<Machine> m;
    if (!theory.machine_file.empty()) m = read_machine(slurp(theory.machine_file));
    Vocabulary vocab = theory.resolve_vocab(m);
    std::vector<Formula> sentences = theory.sentences(vocab, m);

    SearchOutcome out = find_models(vocab, sentences, flags.to_config());
    json sizes = json::array();
    size_t i = 0;
    for (int n : out.sizes_checked) {
        size_t count = 0;
        while (i + count < out.models.size() && out.models[i + count].size == n)
            ++count;
        std::cout << "size " << n << ": " << count << " model"
                  << (count == 1 ? "" : "s") << "\n";
        sizes.push_back({{"size", n}, {"models", count}});
        i += count;
    }
    std::string all;
    for (const FiniteStructure& A : out.models) {
        std::string text = write_structure(A);
        all += canonical_form(A);
        if (print_models) std::cout << "\n" << text;
    }
    std::cout << "total: " << out.models.size() << " model"
              << (out.models.size() == 1 ? "" : "s") << ", "
              << out.leaves_examined << " leaves examined\n";
    if (out.limit_reached) std::cout << "stopped at --limit\n";
    if (out.budget_exhausted) std::cout << "time budget exhausted\n";
    g_report.add({{"command", "find-models"},
                  {"per_size", sizes},
                  {"total_models", out.models.size()},
                  {"models_digest", digest(all)},
                  {"limit_reached", out.limit_reached},
                  {"budget_exhausted", out.budget_exhausted}});
    if (out.budget_exhausted && out.models.empty()) return kNoResult;
    return out.models.empty() ? kNoResult : kOk;
}

int cmd_min_size(const TheoryFlags& theory, const std::string& word, bool have_word,
                 int max, const SearchFlags& flags) {
    std::optional<Machine> m;
    if (!theory.machine_file.empty()) m = read_machine(slurp(theory.machine_file));
    Vocabulary vocab = theory.resolve_vocab(m);
    std::vector<Formula> sentences = theory.sentences(vocab, m);
    if (have_word) {
        if (!m || !m->encoding)
            throw Error("--word needs --machine with a [word-encoding] section");
        for (Formula& f : encode_word(*m->encoding, m->vocab, word))
            sentences.push_back(std::move(f));
    }

    MinSizeResult r = find_min_model_size(vocab, sentences, max, flags.to_config());
    json rec{{"command", "min-size"}, {"max", max}};
    if (r.size) {
        std::cout << "size " << *r.size << "\n";
        rec["size"] = *r.size;
        g_report.add(std::move(rec));
        return kOk;
    }
    std::cout << (r.budget_exhausted ? "unknown (time budget exhausted)"
                                     : "none")
              << "\n";
    rec["size"] = nullptr;
    rec["budget_exhausted"] = r.budget_exhausted;
    g_report.add(std::move(rec));
    return kNoResult;
}

int cmd_validate(const std::string& machine_file, const std::vector<std::string>& words,
                 const SearchFlags& flags) {
    Machine m = read_machine(slurp(machine_file));
    ValidationReport rep = validate_machine(m, flags.to_config(), words);

    json rec{{"command", "validate"}};
    for (const std::string& e : rep.definition_errors)
        std::cout << "definition error: " << e << "\n";
    rec["definition_errors"] = rep.definition_errors;

    bool unknown = false;
    json checks = json::array();
    for (const auto& c : rep.input_checks) {
        const char* s = "satisfiable";
        if (c.status == ValidationReport::InputCheck::Status::NoModelsAtBound)
            s = "no models at bound";
        else if (c.status == ValidationReport::InputCheck::Status::Unknown) {
            s = "unknown";
            unknown = true;
        }
        std::cout << "input " << c.label << ": " << s << "\n";
        checks.push_back({{"label", c.label}, {"status", s}});
    }
    rec["input_checks"] = checks;

    json viols = json::array();
    for (const auto& v : rep.violations) {
        std::cout << "violation: on " << v.input_label << ", outputs " << v.label1
                  << " and " << v.label2 << " hold together (witness size "
                  << v.witness.size << ")\n";
        viols.push_back({{"input", v.input_label},
                         {"outputs", {v.label1, v.label2}},
                         {"witness_size", v.witness.size}});
    }
    rec["violations"] = viols;
    rec["ok"] = rep.ok();
    g_report.add(std::move(rec));

    if (!rep.definition_errors.empty() || !rep.violations.empty()) {
        std::cout << "machine is NOT well-defined\n";
        return kNegative;
    }
    for (const auto& c : rep.input_checks)
        if (c.status == ValidationReport::InputCheck::Status::NoModelsAtBound) {
            std::cout << "machine is NOT well-defined (unsatisfiable input)\n";
            return kNegative;
        }
    if (unknown || rep.budget_exhausted) {
        std::cout << "verdict unknown at this bound\n";
        return kNoResult;
    }
    std::cout << "machine is well-defined at the explored sizes\n";
    return kOk;
}

int cmd_axioms(const std::string& id, const std::string& out_file) {
    std::vector<Formula> fs;
    if (id == "eq") {
        // congruence sentences need a vocabulary; the one-relation,
        // one-function demo vocabulary is the conventional display form
        Vocabulary v;
        v.relation("R", 1);
        v.function("f", 1);
        v.constant("c");
        fs = equality_axioms(v);
    } else if (id == "psa") {
        fs = peano_successor_axioms();
    } else if (id == "psa_f") {
        fs = finite_peano_axioms();
    } else if (id == "dof") {
        fs = dense_ordered_field_axioms();
    } else {
        fs = finite_dof_axioms();
    }
    std::string text;
    for (const Formula& f : fs) text += print_sentence(f) + "\n";
    write_out(out_file, text);
    g_report.add({{"command", "axioms"}, {"id", id}, {"sentences", fs.size()}});
    return kOk;
}

int cmd_build(const std::string& kind, int n, const std::string& out_file) {
    FiniteStructure A = kind == "psa_f" ? build_psa_f_structure(n)
                                        : build_dof_f_structure(n);
    std::string text = write_structure(A);
    write_out(out_file, text);
    g_report.add({{"command", "build"},
                  {"kind", kind},
                  {"n", n},
                  {"digest", digest(text)}});
    return kOk;
}

int cmd_compile_tm(const std::string& spec_file, bool infinite,
                   const std::string& out_file) {
    TmSpec spec = read_tm(slurp(spec_file));
    CompiledTm compiled = infinite ? tm_to_ffot_infinite(spec) : tm_to_ffot_finite(spec);
    std::string text = write_machine(compiled.machine);
    write_out(out_file, text);
    g_report.add({{"command", "compile-tm"},
                  {"variant", infinite ? "infinite" : "finite"},
                  {"theory_sentences", compiled.machine.theory.size()},
                  {"digest", digest(text)}});
    return kOk;
}

int cmd_compile_pair(const std::string& spec1, const std::string& spec2,
                     const std::string& out_file) {
    TmSpec a = read_tm(slurp(spec1));
    TmSpec b = read_tm(slurp(spec2));
    CompiledTm compiled = ntm_pair_to_ffot(a, b);
    std::string text = write_machine(compiled.machine);
    write_out(out_file, text);
    g_report.add({{"command", "compile-ntm-pair"},
                  {"theory_sentences", compiled.machine.theory.size()},
                  {"digest", digest(text)}});
    return kOk;
}

int cmd_simulate(const std::string& spec_file, const std::string& word,
                 long long max_steps) {
    TmSpec spec = read_tm(slurp(spec_file));
    TmReport rep = validate_tm(spec);
    if (!rep.ok()) throw Error("invalid machine spec: " + rep.errors.front());

    json rec{{"command", "simulate"}, {"word", word}};
    int code;
    if (is_deterministic(spec) && spec.reject) {
        SimResult r = simulate_tm(spec, word, max_steps);
        const char* s = r.status == SimResult::Status::Accepted    ? "accepted"
                        : r.status == SimResult::Status::Rejected ? "rejected"
                                                                   : "out of steps";
        std::cout << s << " after " << r.steps << " steps\n";
        rec["status"] = s;
        rec["steps"] = r.steps;
        code = r.status == SimResult::Status::Accepted   ? kOk
               : r.status == SimResult::Status::Rejected ? kNegative
                                                         : kNoResult;
    } else {
        // nondeterministic (or reject-less): breadth-first path search
        NtmResult r = simulate_ntm(spec, word, max_steps);
        const char* s = r.status == NtmResult::Status::Accepted ? "accepted"
                        : r.status == NtmResult::Status::NoAcceptingPath
                            ? "no accepting path"
                            : "out of steps";
        std::cout << s;
        if (r.status == NtmResult::Status::Accepted)
            std::cout << ", shortest path " << r.steps << " steps";
        std::cout << "\n";
        rec["status"] = s;
        rec["steps"] = r.steps;
        code = r.status == NtmResult::Status::Accepted ? kOk
               : r.status == NtmResult::Status::NoAcceptingPath ? kNegative
                                                                : kNoResult;
    }
    g_report.add(std::move(rec));
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite first-order theory machines: model finding, machine "
                 "execution, and tape-machine compilation"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    std::string report_path;

    // check-model
    auto* chk = app.add_subcommand("check-model",
                                   "evaluate sentences against a structure file");
    std::string structure_file;
    chk->add_option("structure", structure_file, "structure file")->required();
    TheoryFlags chk_theory;
    chk_theory.attach(chk);

    // compute
    auto* cmp = app.add_subcommand("compute", "run a machine on an input set or word");
    std::string cmp_machine, cmp_input, cmp_word;
    cmp->add_option("machine", cmp_machine, "machine file")->required();
    auto* cmp_in = cmp->add_option("--input", cmp_input, "declared input label");
    auto* cmp_w = cmp->add_option("--word", cmp_word, "word for the machine's encoding");
    cmp_in->excludes(cmp_w);
    SearchFlags cmp_flags;
    cmp_flags.attach(cmp);

    // find-models
    auto* fnd = app.add_subcommand("find-models", "enumerate models of a sentence set");
    TheoryFlags fnd_theory;
    fnd_theory.attach(fnd);
    SearchFlags fnd_flags;
    fnd_flags.attach(fnd);
    bool fnd_print = false;
    fnd->add_flag("--print", fnd_print, "print every model as a structure file");

    // min-size
    auto* mins = app.add_subcommand("min-size",
                                    "smallest domain size admitting a model");
    TheoryFlags min_theory;
    min_theory.attach(mins);
    std::string min_word;
    auto* min_w = mins->add_option("--word", min_word,
                                   "append the word's encoding to the sentences");
    int min_max = 4;
    mins->add_option("--max", min_max, "largest size to try")
        ->check(CLI::PositiveNumber);
    SearchFlags min_flags;
    min_flags.attach(mins, /*with_range=*/false);

    // validate
    auto* val = app.add_subcommand("validate",
                                   "check the two machine well-definedness conditions");
    std::string val_machine;
    val->add_option("machine", val_machine, "machine file")->required();
    std::vector<std::string> val_words;
    val->add_option("--word", val_words, "also validate these encoded words");
    SearchFlags val_flags;
    val_flags.attach(val);

    // axioms
    auto* axs = app.add_subcommand("axioms", "print a named axiom set");
    std::string axs_id, axs_out;
    axs->add_option("id", axs_id, "eq, psa, psa_f, dof or dof_f")
        ->required()
        ->check(CLI::IsMember({"eq", "psa", "psa_f", "dof", "dof_f"}));
    axs->add_option("--out", axs_out, "write to a file instead of stdout");

    // build
    auto* bld = app.add_subcommand("build", "emit a generated structure file");
    std::string bld_kind, bld_out;
    int bld_n = 0;
    bld->add_option("kind", bld_kind, "psa_f or dof_f")
        ->required()
        ->check(CLI::IsMember({"psa_f", "dof_f"}));
    bld->add_option("n", bld_n, "domain parameter")->required();
    bld->add_option("--out", bld_out, "write to a file instead of stdout");

    // compile-tm
    auto* ctm = app.add_subcommand("compile-tm",
                                   "compile a deterministic tape machine spec");
    std::string ctm_spec, ctm_out;
    ctm->add_option("spec", ctm_spec, "machine spec file")->required();
    bool ctm_fin = false, ctm_inf = false;
    auto* fin_flag = ctm->add_flag("--finite", ctm_fin,
                                   "bounded-number-line compilation (default)");
    ctm->add_flag("--infinite", ctm_inf, "unbounded-number-line compilation")
        ->excludes(fin_flag);
    ctm->add_option("--out", ctm_out, "write to a file instead of stdout");

    // compile-ntm-pair
    auto* cnp = app.add_subcommand(
        "compile-ntm-pair", "compile two complementary nondeterministic halves");
    std::string cnp_a, cnp_b, cnp_out;
    cnp->add_option("spec1", cnp_a, "half accepting the language")->required();
    cnp->add_option("spec2", cnp_b, "half accepting the complement")->required();
    cnp->add_option("--out", cnp_out, "write to a file instead of stdout");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a tape machine spec directly");
    std::string sim_spec, sim_word;
    long long sim_max = 10000;
    sim->add_option("spec", sim_spec, "machine spec file")->required();
    sim->add_option("word", sim_word, "input word");
    sim->add_option("--max-steps", sim_max, "step bound")->check(CLI::PositiveNumber);

    for (CLI::App* sub : {chk, cmp, fnd, mins, val, axs, bld, ctm, cnp, sim})
        sub->add_option("--report", report_path,
                        "write a line-delimited JSON record of the run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kBadInput;
    }

    if (!report_path.empty()) g_report.path = report_path;
    std::vector<std::string> echo(argv + 1, argv + argc);
    g_report.add({{"version", kVersion}, {"argv", echo}});

    int code = kBadInput;
    try {
        if (chk->parsed()) {
            code = cmd_check_model(structure_file, chk_theory);
        } else if (cmp->parsed()) {
            code = cmd_compute(cmp_machine, cmp_input, cmp_word,
                               cmp_w->count() > 0, cmp_flags);
        } else if (fnd->parsed()) {
            code = cmd_find_models(fnd_theory, fnd_flags, fnd_print);
        } else if (mins->parsed()) {
            code = cmd_min_size(min_theory, min_word, min_w->count() > 0, min_max,
                                min_flags);
        } else if (val->parsed()) {
            code = cmd_validate(val_machine, val_words, val_flags);
        } else if (axs->parsed()) {
            code = cmd_axioms(axs_id, axs_out);
        } else if (bld->parsed()) {
            code = cmd_build(bld_kind, bld_n, bld_out);
        } else if (ctm->parsed()) {
            code = cmd_compile_tm(ctm_spec, ctm_inf, ctm_out);
        } else if (cnp->parsed()) {
            code = cmd_compile_pair(cnp_a, cnp_b, cnp_out);
        } else if (sim->parsed()) {
            code = cmd_simulate(sim_spec, sim_word, sim_max);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        g_report.add({{"error", e.what()}});
        code = kBadInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        g_report.add({{"error", e.what()}});
        code = kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        g_report.add({{"error", e.what()}});
        code = kBadInput;
    }

    try {
        g_report.add({{"exit", code}});
        g_report.flush();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return code;
}
