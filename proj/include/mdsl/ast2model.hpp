#ifndef MDSL_AST2MODEL_HPP
#define MDSL_AST2MODEL_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mdsl/diagnostics.hpp"
#include "mdsl/metamodel.hpp"
#include "mdsl/model.hpp"
#include "mdsl/xf.hpp"

/// Trace-driven transformation between AST models and target models.
///
/// Text-to-model direction: every object of an image class becomes an object of its
/// prototype class. Attributes are copied, containment is mapped recursively and textual
/// references are handed to resolvers once every object exists:
///
///     auto plan = build_plan(trace, target_mm, ast_mm);
///     ResolverRegistry resolvers;
///     resolvers.set_default(my_lookup);
///     auto [model, diags] = transform_ast_to_model(ast, *plan, resolvers);
namespace mdsl {

struct FeatureInstruction {
    enum class Kind {
        copy_attribute,
        map_containment,
        resolve_cross,  // textual form in the AST, object reference in the target
        map_reference,  // cross-reference kept as is; follows the object correspondence
        payload,        // inherited from a created class; no target counterpart
    };

    Kind kind = Kind::copy_attribute;
    std::string image_class;  // class declaring the AST feature
    std::string image_feature;
    std::string target_feature;
    std::string textual_type;  // resolve_cross: AST classifier of the textual form
    ClassHandle target_class;  // resolve_cross / map_reference: the target feature's type
};

struct ClassPlan {
    std::string image;
    ClassHandle prototype;
    std::vector<FeatureInstruction> features;  // every feature of the image, inherited first
};

struct TransformPlan {
    std::shared_ptr<const Metamodel> target;
    std::shared_ptr<const Metamodel> ast;
    std::vector<ClassPlan> classes;
    /// Created AST classes: their objects become nothing in the target model.
    std::vector<std::string> consume_only;
    /// Skipped target classes: their objects have to be constructed by hand.
    std::vector<TypeRef> construct_manually;

    const ClassPlan* find_image(std::string_view image) const;
    const ClassPlan* find_prototype(const ClassHandle& prototype) const;
    bool is_consume_only(std::string_view ast_class) const;
};

/// Fails with `stale-trace` when the trace mentions classes or features the metamodels lack.
Result<TransformPlan> build_plan(const xf::Trace& trace, std::shared_ptr<const Metamodel> target,
                                 std::shared_ptr<const Metamodel> ast);

/// Head-first segments of a qualified-name payload: the first String attribute of each
/// object, following the first single-valued containment (`a::b::c` is a -> b -> c).
std::vector<std::string> payload_segments(const ModelObject& payload);

/// Builds the payload chain for `segments` (inverse of payload_segments). Null when the
/// class lacks a String attribute, or lacks a nesting containment for more than one segment.
ModelObject* build_payload(Model& ast, ClassHandle payload_class, const std::vector<std::string>& segments);

class Resolution {
public:
    enum class Kind { found, deferred, unresolved };

    static Resolution found(const ModelObject& obj) { return Resolution(Kind::found, &obj, {}, {}); }
    static Resolution deferred() { return Resolution(Kind::deferred, nullptr, {}, {}); }
    static Resolution unresolved(std::string message, std::string code = "unresolved-name")
    {
        return Resolution(Kind::unresolved, nullptr, std::move(message), std::move(code));
    }

    Kind kind() const { return kind_; }
    const ModelObject* object() const { return object_; }
    const std::string& message() const { return message_; }
    const std::string& code() const { return code_; }

private:
    Resolution(Kind k, const ModelObject* o, std::string m, std::string c)
        : kind_(k), object_(o), message_(std::move(m)), code_(std::move(c))
    {
    }

    Kind kind_;
    const ModelObject* object_;
    std::string message_;
    std::string code_;
};

class ResolverRegistry;

struct ResolutionContext {
    const ModelObject& owner;                     // AST object holding the textual reference
    std::vector<const ModelObject*> containers;   // owner's containers, innermost first
    const FeatureInstruction& instruction;
    ModelObject& target_owner;                    // the owner's counterpart in the target model
    Model& target;                                // partially built target model
    std::optional<std::string> text;              // datatype textual form
    const ModelObject* payload = nullptr;         // created-class textual form
    std::vector<std::string> segments;            // either form split into name segments
    const ResolverRegistry& registry;

    /// Target counterpart of an AST object, or null.
    std::function<ModelObject*(const ModelObject&)> counterpart;
    /// Runs the registered constructor for a skipped class, see ResolverRegistry.
    ModelObject* construct(const TypeRef& cls, const std::vector<std::string>& path) const;
};

using Resolver = std::function<Resolution(const ResolutionContext&)>;

/// Builds (or finds) an object of a skipped target class, e.g. a package for the directory
/// part of a qualified name.
using Constructor = std::function<ModelObject*(Model& target, const std::vector<std::string>& path)>;

/// Runs after every target object exists and before any reference is resolved.
struct PrepareContext {
    Model& target;
    /// Moves the slots of `duplicate` into `survivor` and deletes `duplicate`; pending
    /// references of either end up on `survivor`.
    std::function<Diagnostics(ModelObject& survivor, ModelObject& duplicate)> merge;
    std::function<const ModelObject*(const ModelObject&)> source;  // AST origin of a target object
};

using Preparer = std::function<Diagnostics(PrepareContext&)>;

class ResolverRegistry {
public:
    /// Resolver for `feature` of AST class `image_class` (or of its subclasses).
    void add(std::string image_class, std::string feature, Resolver r);
    void set_default(Resolver r) { default_ = std::move(r); }
    void add_constructor(TypeRef cls, Constructor c);
    void set_prepare(Preparer p) { prepare_ = std::move(p); }

    /// The resolver serving `instruction` for an object of class `ast_class`, or null.
    const Resolver* find(const ClassHandle& ast_class, const FeatureInstruction& instruction) const;
    const Constructor* constructor(const TypeRef& cls) const;
    const Preparer* prepare() const { return prepare_ ? &prepare_ : nullptr; }

    /// One `no-resolver` diagnostic per resolve_cross instruction nobody serves.
    Diagnostics coverage(const TransformPlan& plan) const;

private:
    std::map<std::pair<std::string, std::string>, Resolver> specific_;
    Resolver default_;
    std::map<TypeRef, Constructor> constructors_;
    Preparer prepare_;
};

struct NamingContext {
    const Model& model;           // the target model being turned into an AST
    const ModelObject& owner;     // target object holding the reference
    const ModelObject& referent;  // referenced target object
    const FeatureInstruction& instruction;
    Model& ast;                   // AST model under construction
    ClassHandle textual_class;    // payload class, or empty for a datatype textual form
};

/// A textual form: a string for datatype forms, a payload object (owned by the AST model)
/// for created-class forms, or an error message.
struct Naming {
    std::optional<std::string> text;
    ModelObject* payload = nullptr;
    std::string error;
};

using Namer = std::function<Naming(const NamingContext&)>;

class NamerRegistry {
public:
    void add(std::string image_class, std::string feature, Namer n);
    void set_default(Namer n) { default_ = std::move(n); }
    const Namer* find(const ClassHandle& ast_class, const FeatureInstruction& instruction) const;

private:
    std::map<std::pair<std::string, std::string>, Namer> specific_;
    Namer default_;
};

struct TransformOutput {
    Model model;
    Diagnostics diagnostics;
};

/// Pass 1 creates target objects along the containment tree, pass 2 resolves textual
/// references; deferred resolutions get one more attempt. Target objects keep the source
/// location of their AST origin.
TransformOutput transform_ast_to_model(const Model& ast, const TransformPlan& plan, const ResolverRegistry& resolvers);

/// The reverse direction: image objects for prototype objects, textual forms from namers.
/// Objects of skipped classes produce nothing.
TransformOutput transform_model_to_ast(const Model& m, const TransformPlan& plan, const NamerRegistry& namers);

}  // namespace mdsl

#endif
