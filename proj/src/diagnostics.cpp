#include "mdsl/diagnostics.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace mdsl {

std::string_view to_string(Severity s)
{
    return s == Severity::error ? "error" : "warning";
}

std::string_view to_string(Phase p)
{
    switch (p) {
    case Phase::metamodel: return "metamodel";
    case Phase::transformation: return "transformation";
    case Phase::grammar: return "grammar";
    case Phase::parse: return "parse";
    case Phase::resolve: return "resolve";
    case Phase::validate: return "validate";
    }
    return "?";
}

const std::vector<DiagnosticCode>& diagnostic_codes()
{
    static const std::vector<DiagnosticCode> codes = {
        {"io", "an input file could not be read or an output written"},
        {"config", "malformed or inconsistent configuration"},
        {"lex", "invalid character or unterminated literal"},
        {"syntax", "unexpected token"},
        {"bad-identifier", "name is not a valid identifier"},
        {"duplicate-classifier", "two classifiers share a name"},
        {"duplicate-feature", "feature name clashes with another own or inherited feature"},
        {"unresolved-type", "type or supertype name does not resolve"},
        {"type-kind", "type has the wrong kind for its use (class vs. datatype)"},
        {"bad-bounds", "multiplicity bounds are inconsistent"},
        {"bad-default", "default value does not match the attribute type"},
        {"inheritance-cycle", "a class is its own transitive supertype"},
        {"unknown-class", "class name not found in the metamodel"},
        {"unknown-feature", "feature not declared on the class"},
        {"abstract-instance", "object of an abstract class"},
        {"slot-kind", "slot value kind does not match the feature kind"},
        {"slot-type", "slot value type does not conform to the feature type"},
        {"multiplicity", "number of values violates feature bounds"},
        {"containment", "object is not contained exactly once in the tree"},
        {"dangling-reference", "cross-reference target is outside the model"},
        {"no-root", "model has no root object"},
        {"name-collision", "derived class name collides with an existing class"},
        {"unresolved-name", "qualified name does not resolve"},
        {"ambiguous-name", "qualified name resolves to more than one candidate"},
        {"translation-conflict", "a reference is translated to two different types"},
        {"inheritance-conflict", "two inheritance changes disagree for one class"},
        {"removed-type", "a surviving class still uses a removed image as a feature type"},
        {"removed-supertype", "a removed image is still a supertype of a surviving class"},
        {"left-recursion", "grammar rule is left recursive"},
        {"ambiguity", "alternatives are not distinguishable by one token of lookahead"},
        {"unknown-rule", "grammar references an undefined rule"},
        {"duplicate-rule", "two grammar rules share a name"},
        {"grammar-operator", "assignment operator does not fit the feature multiplicity or kind"},
        {"grammar-type", "assigned value type does not conform to the feature type"},
        {"cross-reference", "AST metamodel still contains cross-references"},
        {"no-concrete-subtype", "abstract class has no concrete subtype"},
        {"no-rule", "no grammar rule for the object's class"},
        {"unset-mandatory", "mandatory assignment has no value"},
        {"unrendered-value", "a set value is not covered by the grammar rule"},
        {"stale-trace", "trace does not match the metamodels"},
        {"multiple-roots", "consume-only root holds more than one mapped subtree"},
        {"unmapped-object", "object cannot be placed in the target model"},
        {"no-resolver", "no resolver serves a translated reference"},
        {"duplicate-definition", "a name is defined twice in one scope"},
        {"merge-conflict", "merged definitions disagree on an attribute"},
        {"unnamable", "object cannot be referenced by a unique textual name"},
    };
    return codes;
}

bool is_registered_code(std::string_view code)
{
    const auto& codes = diagnostic_codes();
    return std::any_of(codes.begin(), codes.end(), [&](const DiagnosticCode& c) { return c.code == code; });
}

Diagnostic make_error(Phase phase, std::string code, std::string message, SourceLocation loc)
{
    return Diagnostic{Severity::error, phase, std::move(code), std::move(message), std::move(loc)};
}

Diagnostic make_error(Phase phase, std::string code, std::string message, ModelPath path)
{
    return Diagnostic{Severity::error, phase, std::move(code), std::move(message), std::move(path)};
}

bool has_errors(const Diagnostics& diags)
{
    return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.is_error(); });
}

void sort_diagnostics(Diagnostics& diags)
{
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        const SourceLocation* sa = a.source();
        const SourceLocation* sb = b.source();
        if ((sa != nullptr) != (sb != nullptr))
            return sa != nullptr;
        if (sa) {
            if (sa->file != sb->file) return sa->file < sb->file;
            if (sa->line != sb->line) return sa->line < sb->line;
            if (sa->column != sb->column) return sa->column < sb->column;
            return a.code < b.code;
        }
        const auto& pa = a.model_path()->path;
        const auto& pb = b.model_path()->path;
        if (pa != pb) return pa < pb;
        return a.code < b.code;
    });
}

std::string format_diagnostic(const Diagnostic& d)
{
    std::ostringstream out;
    if (const auto* loc = d.source())
        out << (loc->file.empty() ? "<input>" : loc->file) << ':' << loc->line << ':' << loc->column;
    else
        out << "model:" << d.model_path()->path;
    out << ": " << to_string(d.severity) << '[' << d.code << "]: " << d.message;
    return out.str();
}

std::string format_diagnostic_json(const Diagnostic& d)
{
    nlohmann::ordered_json j;
    j["severity"] = to_string(d.severity);
    j["phase"] = to_string(d.phase);
    j["code"] = d.code;
    j["message"] = d.message;
    if (const auto* loc = d.source()) {
        j["file"] = loc->file;
        j["line"] = loc->line;
        j["column"] = loc->column;
    } else {
        j["path"] = d.model_path()->path;
    }
    return j.dump();
}

void append(Diagnostics& into, Diagnostics from)
{
    into.insert(into.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
}

}  // namespace mdsl
