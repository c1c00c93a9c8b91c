#ifndef MDSL_XF_HPP
#define MDSL_XF_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mdsl/diagnostics.hpp"
#include "mdsl/metamodel.hpp"

/// The metamodel transformation language: derives an AST metamodel and a trace from a
/// target metamodel.
namespace mdsl::xf {

/// A classifier named at AST level.
struct AstRef {
    enum class Kind { image, created, datatype };

    Kind kind = Kind::image;
    /// image: the prototype class as referenced from the target metamodel;
    /// created: the created class name; datatype: `ecore::<name>`.
    TypeRef name;
    SourceLocation loc;

    static AstRef image(TypeRef prototype) { return AstRef{Kind::image, std::move(prototype), {}}; }
    static AstRef created(std::string name) { return AstRef{Kind::created, TypeRef{"", std::move(name)}, {}}; }
    static AstRef datatype(std::string name)
    {
        return AstRef{Kind::datatype, TypeRef{std::string(ecore_package), std::move(name)}, {}};
    }

    friend bool operator==(const AstRef& a, const AstRef& b) { return a.kind == b.kind && a.name == b.name; }
};

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::attribute;
    AstRef type;
    Bounds bounds;
    bool containment = false;
    std::optional<Literal> default_value;
    SourceLocation loc;

    friend bool operator==(const FeatureSpec& a, const FeatureSpec& b)
    {
        return a.name == b.name && a.kind == b.kind && a.type == b.type && a.bounds == b.bounds &&
               a.containment == b.containment && a.default_value == b.default_value;
    }
};

struct TranslateReferences {
    TypeRef model_reference_type;
    AstRef textual_reference_type;
    bool include_descendants = false;
    SourceLocation loc;

    friend bool operator==(const TranslateReferences& a, const TranslateReferences& b)
    {
        return a.model_reference_type == b.model_reference_type &&
               a.textual_reference_type == b.textual_reference_type && a.include_descendants == b.include_descendants;
    }
};

struct CreateClass {
    std::string name;
    bool is_abstract = false;
    std::vector<AstRef> superclasses;
    std::vector<FeatureSpec> features;
    SourceLocation loc;

    friend bool operator==(const CreateClass& a, const CreateClass& b)
    {
        return a.name == b.name && a.is_abstract == b.is_abstract && a.superclasses == b.superclasses &&
               a.features == b.features;
    }
};

struct ChangeInheritance {
    AstRef target;
    std::vector<AstRef> superclasses;
    SourceLocation loc;

    friend bool operator==(const ChangeInheritance& a, const ChangeInheritance& b)
    {
        return a.target == b.target && a.superclasses == b.superclasses;
    }
};

struct SkipClass {
    TypeRef target;
    bool include_descendants = false;
    SourceLocation loc;

    friend bool operator==(const SkipClass& a, const SkipClass& b)
    {
        return a.target == b.target && a.include_descendants == b.include_descendants;
    }
};

using Action = std::variant<TranslateReferences, CreateClass, ChangeInheritance, SkipClass>;

struct Transformation {
    std::vector<Action> actions;

    friend bool operator==(const Transformation&, const Transformation&) = default;
};

/// Links a prototype class with its AST image. Synthesized by default_mapping only.
struct ClassMapping {
    TypeRef prototype;
    std::string image;
};

struct ClassRecord {
    TypeRef prototype;  // canonical: own classes unqualified, builtin ones `ecore::`
    std::string image;
    bool skipped = false;

    friend bool operator==(const ClassRecord&, const ClassRecord&) = default;
};

struct FeatureRecord {
    TypeRef prototype_class;
    std::string feature;
    std::string image_class;
    std::string image_feature;
    bool translated = false;
    std::string textual_type;  // AST classifier name when translated

    friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

struct Trace {
    std::vector<ClassRecord> classes;
    std::vector<FeatureRecord> features;
    std::vector<std::string> created;

    const ClassRecord* find_by_image(std::string_view image) const;
    const ClassRecord* find_by_prototype(const TypeRef& prototype) const;
    const FeatureRecord* find_feature(std::string_view image_class, std::string_view image_feature) const;
    std::vector<ClassMapping> mappings() const;

    friend bool operator==(const Trace&, const Trace&) = default;
};

/// Line-oriented `.trace` text.
std::string write_trace(const Trace& trace);
Result<Trace> read_trace(std::string_view text, const std::string& file = "");

struct Derivation {
    Metamodel ast;
    Trace trace;
};

/// Target classes in declaration order followed by the builtin ecore classes they reach
/// through supertypes and reference types. These are the classes that receive images.
std::vector<ClassHandle> mapping_domain(const Metamodel& target);

std::string image_name(const std::string& prototype_name);

/// One image class per domain class: name suffixed with `AS`, same abstractness, images of
/// supertypes, features copied with reference types replaced by images.
Result<Derivation> default_mapping(const Metamodel& target, const std::string& ast_name = "");

/// default_mapping followed by all actions in fixed phases (create, change inheritance,
/// translate, skip), so the result does not depend on action order.
Result<Derivation> derive_ast_metamodel(const Metamodel& target, const Transformation& t,
                                        const std::string& ast_name = "");

/// True iff every checked permutation of the actions derives an equivalent AST metamodel.
/// All permutations are checked up to `exhaustive_limit` actions, otherwise `samples`
/// seeded random ones.
Result<bool> action_permutation_check(const Metamodel& target, const Transformation& t, std::size_t samples = 24,
                                      std::size_t exhaustive_limit = 7, std::uint32_t seed = 1);

/// Parses a `.xf` script against its target metamodel.
Result<Transformation> parse_transformation(std::string_view text, const Metamodel& target,
                                            const std::string& file = "");

/// Canonical script text for a transformation (parse_transformation's inverse).
std::string print_transformation(const Transformation& t, const Metamodel& target);

/// The language's own target metamodel, as `.mm` source.
std::string_view language_metamodel_source();

}  // namespace mdsl::xf

#endif
