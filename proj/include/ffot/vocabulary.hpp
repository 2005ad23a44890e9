#pragma once

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ffot {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Raised by the text parsers (sentences, structure/machine/tm files).
class ParseError : public Error {
  public:
    ParseError(const std::string& message, int line, int column)
        : Error(message + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line(line),
          column(column) {}

    int line;
    int column;
};

class VocabularyError : public Error {
  public:
    using Error::Error;
};

class EvalError : public Error {
  public:
    using Error::Error;
};

inline bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return s != "forall" && s != "exists";
}

struct RelationDecl {
    std::string name;
    int arity;  // >= 0
};

struct FunctionDecl {
    std::string name;
    int arity;  // >= 1
};

// Symbol table of a first-order language. Equality is built in ("=" is a
// reserved token, never declared); everything else must be declared before a
// sentence can mention it.
class Vocabulary {
  public:
    Vocabulary() = default;

    Vocabulary& relation(const std::string& name, int arity) {
        check_fresh(name);
        if (arity < 0) throw VocabularyError("relation arity must be >= 0: " + name);
        relations_.push_back({name, arity});
        return *this;
    }

    Vocabulary& function(const std::string& name, int arity) {
        check_fresh(name);
        if (arity < 1) throw VocabularyError("function arity must be >= 1: " + name);
        functions_.push_back({name, arity});
        return *this;
    }

    Vocabulary& constant(const std::string& name) {
        check_fresh(name);
        constants_.push_back(name);
        return *this;
    }

    const std::vector<RelationDecl>& relations() const { return relations_; }
    const std::vector<FunctionDecl>& functions() const { return functions_; }
    const std::vector<std::string>& constants() const { return constants_; }

    int relation_index(const std::string& name) const {
        for (size_t i = 0; i < relations_.size(); ++i)
            if (relations_[i].name == name) return static_cast<int>(i);
        return -1;
    }

    int function_index(const std::string& name) const {
        for (size_t i = 0; i < functions_.size(); ++i)
            if (functions_[i].name == name) return static_cast<int>(i);
        return -1;
    }

    int constant_index(const std::string& name) const {
        for (size_t i = 0; i < constants_.size(); ++i)
            if (constants_[i] == name) return static_cast<int>(i);
        return -1;
    }

    bool declares(const std::string& name) const {
        return relation_index(name) >= 0 || function_index(name) >= 0 ||
               constant_index(name) >= 0;
    }

    std::optional<int> relation_arity(const std::string& name) const {
        int i = relation_index(name);
        if (i < 0) return std::nullopt;
        return relations_[i].arity;
    }

    std::optional<int> function_arity(const std::string& name) const {
        int i = function_index(name);
        if (i < 0) return std::nullopt;
        return functions_[i].arity;
    }

    // Union of two vocabularies; identical re-declarations are merged,
    // conflicting ones rejected.
    Vocabulary merged_with(const Vocabulary& other) const {
        Vocabulary out = *this;
        for (const auto& r : other.relations_) {
            int i = out.relation_index(r.name);
            if (i >= 0) {
                if (out.relations_[i].arity != r.arity)
                    throw VocabularyError("conflicting arity for relation " + r.name);
                continue;
            }
            out.relation(r.name, r.arity);
        }
        for (const auto& f : other.functions_) {
            int i = out.function_index(f.name);
            if (i >= 0) {
                if (out.functions_[i].arity != f.arity)
                    throw VocabularyError("conflicting arity for function " + f.name);
                continue;
            }
            out.function(f.name, f.arity);
        }
        for (const auto& c : other.constants_) {
            if (out.constant_index(c) < 0) out.constant(c);
        }
        return out;
    }

    bool operator==(const Vocabulary& other) const {
        if (constants_ != other.constants_) return false;
        if (relations_.size() != other.relations_.size()) return false;
        if (functions_.size() != other.functions_.size()) return false;
        for (size_t i = 0; i < relations_.size(); ++i)
            if (relations_[i].name != other.relations_[i].name ||
                relations_[i].arity != other.relations_[i].arity)
                return false;
        for (size_t i = 0; i < functions_.size(); ++i)
            if (functions_[i].name != other.functions_[i].name ||
                functions_[i].arity != other.functions_[i].arity)
                return false;
        return true;
    }

  private:
    void check_fresh(const std::string& name) const {
        if (name == "=") throw VocabularyError("\"=\" is reserved for equality");
        if (!is_identifier(name)) throw VocabularyError("not an identifier: \"" + name + "\"");
        if (declares(name)) throw VocabularyError("symbol declared twice: " + name);
    }

    std::vector<RelationDecl> relations_;
    std::vector<FunctionDecl> functions_;
    std::vector<std::string> constants_;
};

}  // namespace ffot
