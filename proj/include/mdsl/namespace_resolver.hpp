#ifndef MDSL_NAMESPACE_RESOLVER_HPP
#define MDSL_NAMESPACE_RESOLVER_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdsl/ast2model.hpp"
#include "mdsl/namespace.hpp"

// The builtin qualified-name resolver: objects are bound by their name attribute inside the
// scopes opened by their named containers. Driven by a small `key = value` file:
//
//     name.attribute = name
//     scope.classes = Package, Class
//     root.scope = Model
//     define.classes = Class               # only these are bound; empty binds nothing
//     merge.classes = ClassSelector        # same class and name in one scope: one object
//     universe.metamodel = xf.mm           # classifier references go to the universe import
//     universe.created = CreateClass.name
namespace mdsl {

struct ResolverConfig {
    std::string name_attribute = "name";
    std::vector<std::string> scope_classes;
    std::string root_scope;
    std::optional<std::vector<std::string>> define_classes;  // unset: every named object
    std::vector<std::string> merge_classes;
    std::string universe_metamodel;           // path as written, relative to the config file
    std::string universe_created_class;
    std::string universe_created_attribute;
};

Result<ResolverConfig> parse_resolver_config(std::string_view text, const std::string& file = "");
std::string print_resolver_config(const ResolverConfig& cfg);

/// Every class and attribute the config names must exist in `target`.
Diagnostics check_resolver_config(const ResolverConfig& cfg, const Metamodel& target);

/// Scope segments that hold `obj`'s binding: names of its named scope-class containers,
/// outermost first.
std::vector<std::string> scope_of(const ModelObject& obj, const ResolverConfig& cfg);

/// Names of the universe.created objects of `m` in containment pre-order.
std::vector<std::string> universe_created_names(const Model& m, const ResolverConfig& cfg);

/// Binds every named object of `m`. Duplicates become `duplicate-definition` diagnostics.
Namespace build_namespace(const Model& m, const ResolverConfig& cfg, Diagnostics& diags);

/// Resolvers (default + prepare hook) for transform_ast_to_model. `universe_metamodel` is the
/// metamodel whose classes populate the universe import; null unless the config names one.
ResolverRegistry namespace_resolvers(const ResolverConfig& cfg,
                                     std::shared_ptr<const Metamodel> universe_metamodel = nullptr);

/// The inverse: the shortest name that resolves back to the referent from the owner's scope.
NamerRegistry namespace_namers(const ResolverConfig& cfg);

}  // namespace mdsl

#endif
