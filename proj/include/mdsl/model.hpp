#ifndef MDSL_MODEL_HPP
#define MDSL_MODEL_HPP

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "mdsl/diagnostics.hpp"
#include "mdsl/metamodel.hpp"

namespace mdsl {

/// Misuse of the model API (unknown feature, wrong slot kind, double containment).
class ModelError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ModelObject {
public:
    using Attributes = std::vector<Literal>;
    using Children = std::vector<ModelObject*>;
    using References = std::vector<const ModelObject*>;
    using SlotValue = std::variant<Attributes, Children, References>;

    explicit ModelObject(ClassHandle cls) : cls_(cls) {}
    ModelObject(const ModelObject&) = delete;
    ModelObject& operator=(const ModelObject&) = delete;

    ClassHandle cls() const { return cls_; }
    const std::string& class_name() const { return cls_.cls->name; }

    ModelObject* container() const { return container_; }
    const std::string& container_feature() const { return container_feature_; }

    /// Explicitly set slots keyed by feature name.
    const std::map<std::string, SlotValue, std::less<>>& slots() const { return slots_; }
    const SlotValue* slot(std::string_view feature) const;
    bool is_set(std::string_view feature) const;

    void set_attribute(std::string_view feature, Literal value);
    void add_attribute(std::string_view feature, Literal value);
    /// Explicit values only.
    const Attributes& attributes(std::string_view feature) const;
    /// Single-valued view: the explicit value, else the declared default, else `false`/`0`
    /// for boolean/int attributes.
    std::optional<Literal> attribute(std::string_view feature) const;
    std::optional<std::string> string_attribute(std::string_view feature) const;
    bool bool_attribute(std::string_view feature) const;
    std::int64_t int_attribute(std::string_view feature) const;

    void add_child(std::string_view feature, ModelObject& child);
    void set_child(std::string_view feature, ModelObject& child);
    const Children& children(std::string_view feature) const;
    ModelObject* child(std::string_view feature) const;

    void add_reference(std::string_view feature, const ModelObject& target);
    void set_reference(std::string_view feature, const ModelObject& target);
    const References& references(std::string_view feature) const;
    const ModelObject* reference(std::string_view feature) const;

    /// Unsets a slot; contained children become orphans.
    void clear(std::string_view feature);
    /// Removes `child` from this object's containment slot.
    void remove_child(ModelObject& child);

    std::optional<SourceLocation> location;

private:
    const MetaFeature& require(std::string_view feature, FeatureKind kind, bool containment) const;

    ClassHandle cls_;
    std::map<std::string, SlotValue, std::less<>> slots_;
    ModelObject* container_ = nullptr;
    std::string container_feature_;
};

class Model;

struct Import {
    std::string name;
    std::shared_ptr<const Model> model;
};

/// Instance layer: an object arena with one root; cross-references may also point into
/// imported read-only models.
class Model {
public:
    explicit Model(std::shared_ptr<const Metamodel> mm);
    Model(Model&&) noexcept = default;
    Model& operator=(Model&&) noexcept = default;

    const Metamodel& metamodel() const { return *mm_; }
    const std::shared_ptr<const Metamodel>& metamodel_ptr() const { return mm_; }

    ModelObject& create(ClassHandle cls);
    /// Resolves `class_name` in the metamodel (or `ecore::` qualified). Throws ModelError.
    ModelObject& create(std::string_view class_name);

    ModelObject* root() const { return root_; }
    void set_root(ModelObject& root);

    const std::vector<std::unique_ptr<ModelObject>>& objects() const { return objects_; }
    bool owns(const ModelObject* obj) const { return index_.count(obj) != 0; }

    /// Detaches `obj` and deletes it together with its containment subtree.
    void erase(ModelObject& obj);

    const std::vector<Import>& imports() const { return imports_; }
    void add_import(std::string name, std::shared_ptr<const Model> model);
    /// The import owning `obj`, or null.
    const Import* import_of(const ModelObject* obj) const;

    /// Deep copy; references into imports are shared.
    Model clone() const;

private:
    std::shared_ptr<const Metamodel> mm_;
    std::vector<std::unique_ptr<ModelObject>> objects_;
    std::unordered_set<const ModelObject*> index_;
    ModelObject* root_ = nullptr;
    std::vector<Import> imports_;
};

/// `/` for the root, otherwise `/feature[i]/feature...` (index only for many-valued features).
std::string object_path(const ModelObject& obj);

/// Objects of the containment tree in depth-first pre-order.
std::vector<const ModelObject*> preorder(const ModelObject& root);

/// Containment tree, multiplicities, type conformance of every slot, dangling references.
Diagnostics validate_model(const Model& m);

/// Isomorphism: equal classes, equal effective attribute values, children pairwise equal in
/// order, cross-references consistent with the induced object correspondence. References into
/// imports compare by import name and path.
bool model_equals(const Model& a, const Model& b);

}  // namespace mdsl

#endif
