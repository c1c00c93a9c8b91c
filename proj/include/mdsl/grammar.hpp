#ifndef MDSL_GRAMMAR_HPP
#define MDSL_GRAMMAR_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdsl/diagnostics.hpp"
#include "mdsl/metamodel.hpp"
#include "mdsl/model.hpp"

/// Xtext-style grammars over an AST metamodel, interpreted in both directions.
///
///     CreateClassAS:
///         "create" (abstract?"abstract") "class" name=ID
///         ("extends" superclasses+=QualifiedName ("," superclasses+=QualifiedName)*)? "{"
///         (structuralFeatures+=StructuralFeatureAS ";")*
///         "}";
///     Abstract StructuralFeatureAS: AttributeAS | ReferenceAS;
namespace mdsl::grammar {

enum class Terminal { id, string, integer };

std::string_view to_string(Terminal t);

enum class AssignOp { set, add, flag };

struct Element {
    enum class Kind { keyword, assignment, sequence, alternatives, optional, star, plus };

    Kind kind = Kind::sequence;
    std::string keyword;  // keyword; for flags, the flag keyword
    std::string feature;
    AssignOp op = AssignOp::set;
    std::optional<Terminal> terminal;  // assignment to a terminal...
    std::string rule;                  // ...or to a rule
    std::vector<Element> children;     // sequence/alternatives: items; optional/star/plus: one body
    SourceLocation loc;

    const Element& body() const { return children.front(); }
};

struct Rule {
    std::string name;
    bool is_abstract = false;
    Element body;                           // concrete rules
    std::vector<std::string> alternatives;  // abstract rules
    SourceLocation loc;
};

struct Grammar {
    std::shared_ptr<const Metamodel> ast;
    std::vector<Rule> rules;
    std::size_t entry = 0;

    const Rule* find(std::string_view name) const;
    const Rule& entry_rule() const { return rules.at(entry); }
};

/// Parses `.gr` text and checks every rule and assignment against `ast`.
Result<Grammar> parse_grammar(std::string_view text, std::shared_ptr<const Metamodel> ast,
                              const std::string& file = "");

/// Canonical grammar text; parse_grammar(print_grammar(g)) reproduces g.
std::string print_grammar(const Grammar& g);

/// Single-token-lookahead checks: left recursion reachable from the entry rule, overlapping
/// FIRST sets among alternatives, optional/repeated parts whose FIRST set meets what may
/// follow them, and repetitions that can match nothing.
Diagnostics check_grammar(const Grammar& g);

/// A starting grammar for an AST metamodel: `C : "C" "{" <feature parts> "}" ;` per concrete
/// class, an abstract rule listing the concrete descendants of each abstract class.
Result<std::string> generate_grammar_skeleton(const Metamodel& ast);

/// Text to AST. Objects carry the source location of their first token.
Result<Model> parse_text(std::string_view text, const Grammar& g, const std::string& file = "");

/// AST to text, the inverse of parse_text up to whitespace.
Result<std::string> render_ast(const Model& m, const Grammar& g);

/// How parse_text tokenizes for `g`: keywords that look like identifiers are reserved.
struct Vocabulary {
    std::vector<std::string> word_keywords;
    std::vector<std::string> punct_keywords;
    bool hyphenated_identifiers = true;
    bool negative_integers = true;

    bool is_reserved(std::string_view word) const;
    /// True when `s` lexes as a single non-reserved ID token.
    bool is_id(std::string_view s) const;
};

Vocabulary vocabulary(const Grammar& g);

}  // namespace mdsl::grammar

#endif
