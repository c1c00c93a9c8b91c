#ifndef MDSL_PIPELINE_HPP
#define MDSL_PIPELINE_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdsl/ast2model.hpp"
#include "mdsl/grammar.hpp"
#include "mdsl/namespace_resolver.hpp"
#include "mdsl/xf.hpp"

// File-level plumbing shared by the command line driver and the test suites.
namespace mdsl {

/// Whole file, or an `io` diagnostic in `phase`.
Result<std::string> read_text_file(const std::string& path, Phase phase);
Diagnostics write_text_file(const std::string& path, std::string_view text);

/// A `.mm` file; the metamodel is named after the file stem.
Result<std::shared_ptr<const Metamodel>> load_metamodel_file(const std::string& path);

struct ResolverSetup {
    ResolverConfig config;
    std::shared_ptr<const Metamodel> universe_metamodel;  // loaded from universe.metamodel, if set
};

/// Reads and checks a resolver config; relative paths inside are taken from its directory.
Result<ResolverSetup> load_resolver_setup(const std::string& path, const Metamodel& target);

/// A target model in `.model` form. With a universe configured, the universe import is
/// rebuilt from the created-class names the model itself carries.
Result<Model> load_target_model(std::string_view text, std::shared_ptr<const Metamodel> target,
                                const ResolverSetup& setup, const std::string& file = "");

struct LanguageFiles {
    std::string target;
    std::string transformation;   // optional: default mapping only
    std::string grammar;          // optional: text commands need it
    std::string resolver_config;  // optional: defaults
};

/// Everything derived from one language definition.
struct Language {
    std::shared_ptr<const Metamodel> target;
    xf::Transformation transformation;
    std::shared_ptr<const Metamodel> ast;
    xf::Trace trace;
    std::optional<grammar::Grammar> grammar;
    ResolverSetup resolver;
    TransformPlan plan;
};

Result<Language> load_language(const LanguageFiles& files);

/// parse_text followed by transform_ast_to_model with the builtin resolver.
TransformOutput text_to_model(const Language& lang, std::string_view text, const std::string& file = "");
TransformOutput ast_to_model(const Language& lang, const Model& ast);

/// transform_model_to_ast with the builtin namer followed by render_ast.
Result<std::string> model_to_text(const Language& lang, const Model& m);

}  // namespace mdsl

#endif
