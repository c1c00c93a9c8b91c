#ifndef MDSL_METAMODEL_HPP
#define MDSL_METAMODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mdsl/diagnostics.hpp"

namespace mdsl {

inline constexpr int unbounded = -1;
inline constexpr std::string_view ecore_package = "ecore";

/// Feature multiplicity. `upper == unbounded` means `*`.
struct Bounds {
    int lower = 0;
    int upper = 1;

    bool many() const { return upper == unbounded || upper > 1; }
    bool admits(std::size_t count) const;

    friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// `[*]`, `[1]`, `[1..*]`, ... ; empty for the default 0..1.
std::string format_bounds(const Bounds& b);

enum class DataKind { string, boolean, integer };

using Literal = std::variant<std::string, bool, std::int64_t>;

std::string format_literal(const Literal& v);
DataKind literal_kind(const Literal& v);

/// Name of a classifier as written in a metamodel: `package` is empty for classifiers of the
/// referring metamodel itself, or `ecore` for the builtin package.
struct TypeRef {
    std::string package;
    std::string name;

    std::string qualified() const { return package.empty() ? name : package + "::" + name; }
    static TypeRef parse(std::string_view qualified);

    friend bool operator==(const TypeRef&, const TypeRef&) = default;
    friend auto operator<=>(const TypeRef&, const TypeRef&) = default;
};

enum class FeatureKind { attribute, reference };

struct MetaFeature {
    std::string name;
    FeatureKind kind = FeatureKind::attribute;
    TypeRef type;
    Bounds bounds;
    bool containment = false;  // references only
    std::optional<Literal> default_value;  // attributes only
    SourceLocation loc;

    bool is_attribute() const { return kind == FeatureKind::attribute; }
    bool is_reference() const { return kind == FeatureKind::reference; }
    bool is_containment() const { return is_reference() && containment; }
    bool is_cross() const { return is_reference() && !containment; }

    friend bool operator==(const MetaFeature& a, const MetaFeature& b)
    {
        return a.name == b.name && a.kind == b.kind && a.type == b.type && a.bounds == b.bounds &&
               a.containment == b.containment && a.default_value == b.default_value;
    }
};

struct MetaClass {
    std::string name;
    bool is_abstract = false;
    std::vector<TypeRef> supertypes;
    std::vector<MetaFeature> features;
    SourceLocation loc;

    const MetaFeature* find_feature(std::string_view feature) const;
    MetaFeature* find_feature(std::string_view feature);

    friend bool operator==(const MetaClass& a, const MetaClass& b)
    {
        return a.name == b.name && a.is_abstract == b.is_abstract && a.supertypes == b.supertypes &&
               a.features == b.features;
    }
};

struct MetaDataType {
    std::string name;
    DataKind kind = DataKind::string;

    friend bool operator==(const MetaDataType&, const MetaDataType&) = default;
};

using Classifier = std::variant<MetaClass, MetaDataType>;

const std::string& classifier_name(const Classifier& c);

/// An EMF-like metamodel. Treated as immutable once shared with models.
struct Metamodel {
    std::string name;
    std::vector<Classifier> classifiers;

    const Classifier* find(std::string_view classifier) const;
    Classifier* find(std::string_view classifier);
    const MetaClass* find_class(std::string_view cls) const;
    MetaClass* find_class(std::string_view cls);
    const MetaDataType* find_datatype(std::string_view dt) const;

    /// Structural equality, classifier order significant.
    friend bool operator==(const Metamodel& a, const Metamodel& b)
    {
        return a.name == b.name && a.classifiers == b.classifiers;
    }
};

/// Structural equality ignoring classifier order (feature and supertype order still matter).
bool equivalent(const Metamodel& a, const Metamodel& b);

/// The builtin reflective package: EClassifier, EClass, EDataType, EStructuralFeature,
/// EAttribute, EReference and the datatypes String, boolean, int.
const Metamodel& builtin_ecore();

/// A class together with the metamodel that declares it.
struct ClassHandle {
    const Metamodel* mm = nullptr;
    const MetaClass* cls = nullptr;

    explicit operator bool() const { return cls != nullptr; }
    const std::string& name() const { return cls->name; }
    bool is_ecore() const { return mm == &builtin_ecore(); }
    /// How `context` refers to this class.
    TypeRef ref_from(const Metamodel& context) const;

    friend bool operator==(const ClassHandle& a, const ClassHandle& b) { return a.cls == b.cls; }
};

struct DataTypeHandle {
    const Metamodel* mm = nullptr;
    const MetaDataType* type = nullptr;

    explicit operator bool() const { return type != nullptr; }
};

/// Resolves `ref` as used inside `context`: empty package means `context` itself; `ecore`
/// means the builtin package. Unqualified names missing from `context` fall back to ecore.
const Classifier* resolve(const Metamodel& context, const TypeRef& ref, const Metamodel** owner = nullptr);
ClassHandle resolve_class(const Metamodel& context, const TypeRef& ref);
DataTypeHandle resolve_datatype(const Metamodel& context, const TypeRef& ref);

/// Direct supertypes; unresolved ones are skipped.
std::vector<ClassHandle> direct_supertypes(ClassHandle c);

/// Reflexive, transitive subtype test. Tolerates cycles.
bool is_subtype(ClassHandle sub, ClassHandle super);

/// Name-based form. Fails when either name does not resolve in `mm` or ecore.
Result<bool> is_subtype(const Metamodel& mm, const TypeRef& sub, const TypeRef& super);

struct FeatureHandle {
    ClassHandle owner;
    const MetaFeature* feature = nullptr;
};

/// Inherited features first (depth-first over supertypes in order, each class once), then own.
std::vector<FeatureHandle> all_features(ClassHandle c);
std::optional<FeatureHandle> find_feature(ClassHandle c, std::string_view name);

/// Classes of `mm` (and, when `include_ecore`, ecore) that are subtypes of `super`, in
/// declaration order, `super` included.
std::vector<ClassHandle> subtypes_of(const Metamodel& mm, ClassHandle super, bool include_ecore = true);

/// One diagnostic per violated invariant: identifiers, unique names, resolvable and acyclic
/// inheritance, unique features across inheritance, bounds, feature types, default values.
Diagnostics validate_metamodel(const Metamodel& mm);

}  // namespace mdsl

#endif
