#ifndef MDSL_UNIVERSE_HPP
#define MDSL_UNIVERSE_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mdsl/model.hpp"

namespace mdsl {

/// Import name under which models reference classifier objects.
inline constexpr std::string_view universe_import = "universe";

/// `class Package { attr String name; val Package[*] subpackages; val ecore::EClassifier[*] classifiers; }`
const std::shared_ptr<const Metamodel>& reflect_metamodel();

/// A read-only model holding one ecore::EClass/EDataType object per classifier, so that
/// models whose features are typed by ecore classes (metamodels about metamodels) have
/// something to point at. The root package (named "") holds the classes of `target` in
/// declaration order followed by `created`; its subpackage `ecore` holds the builtin
/// classifiers.
std::shared_ptr<const Model> build_universe(const Metamodel* target, const std::vector<std::string>& created);

/// Walks packages along `segments`; a single unmatched segment falls back to `ecore`.
const ModelObject* universe_lookup(const Model& universe, const std::vector<std::string>& segments);
const ModelObject* universe_lookup(const Model& universe, const TypeRef& ref);

/// Segments from the root package to `obj` (empty root name omitted), e.g. {"ecore", "EClass"}.
std::vector<std::string> universe_path(const ModelObject& obj);

}  // namespace mdsl

#endif
