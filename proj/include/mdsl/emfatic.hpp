#ifndef MDSL_EMFATIC_HPP
#define MDSL_EMFATIC_HPP

#include <string>
#include <string_view>

#include "mdsl/diagnostics.hpp"
#include "mdsl/metamodel.hpp"
#include "mdsl/lexer.hpp"

namespace mdsl {

/// Parses the Emfatic subset used for `.mm` files:
///
///     [abstract] class Name [extends A, ecore::B] {
///         attr String name;
///         attr int upperBound = 1;
///         val Child[*] children;
///         ref Target[0..1] target;
///     }
///
/// Unqualified type names resolve against the file's classes first, then ecore. The result
/// is fully validated; any error diagnostic means no metamodel is returned.
Result<Metamodel> parse_metamodel(std::string_view text, const std::string& name, const std::string& file = "");

/// Inverse of parse_metamodel. Datatypes are builtin and not printed.
std::string print_metamodel(const Metamodel& mm);

namespace emfatic {

/// Pieces shared with the transformation-language parser.
struct FeatureSyntax {
    FeatureKind kind = FeatureKind::attribute;
    bool containment = false;
    std::string type;  // as written, possibly `a::b`
    SourceLocation type_loc;
    Bounds bounds;
    std::string name;
    std::optional<Literal> default_value;
    SourceLocation loc;
};

LexOptions lex_options(Phase phase);

/// `QN := ID ("::" ID)*`; fails with a diagnostic pushed to `diags`.
std::optional<std::string> parse_qualified_name(TokenCursor& cur, Diagnostics& diags, Phase phase);

/// Parses one `attr|val|ref Type[mult] name [= literal]` (without the trailing `;`).
std::optional<FeatureSyntax> parse_feature(TokenCursor& cur, Diagnostics& diags, Phase phase);

/// Formats a feature line body (without indentation and `;`).
std::string format_feature(const MetaFeature& f, const std::string& type_text);

void syntax_error(Diagnostics& diags, Phase phase, const Token& at, const std::string& expected);

}  // namespace emfatic

}  // namespace mdsl

#endif
