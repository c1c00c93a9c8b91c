#include "mdsl/model.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace mdsl {
namespace {

const ModelObject::Attributes empty_attributes;
const ModelObject::Children empty_children;
const ModelObject::References empty_references;

std::string kind_name(FeatureKind kind, bool containment)
{
    if (kind == FeatureKind::attribute)
        return "attribute";
    return containment ? "containment reference" : "cross reference";
}

}  // namespace

const MetaFeature& ModelObject::require(std::string_view feature, FeatureKind kind, bool containment) const
{
    auto f = find_feature(cls_, feature);
    if (!f)
        throw ModelError("class '" + cls_.name() + "' has no feature '" + std::string(feature) + "'");
    const MetaFeature& mf = *f->feature;
    if (mf.kind != kind || (kind == FeatureKind::reference && mf.containment != containment))
        throw ModelError("feature '" + cls_.name() + "." + mf.name + "' is not a " + kind_name(kind, containment));
    return mf;
}

const ModelObject::SlotValue* ModelObject::slot(std::string_view feature) const
{
    auto it = slots_.find(feature);
    return it == slots_.end() ? nullptr : &it->second;
}

bool ModelObject::is_set(std::string_view feature) const
{
    const SlotValue* s = slot(feature);
    return s && std::visit([](const auto& v) { return !v.empty(); }, *s);
}

void ModelObject::set_attribute(std::string_view feature, Literal value)
{
    const MetaFeature& f = require(feature, FeatureKind::attribute, false);
    slots_[f.name] = Attributes{std::move(value)};
}

void ModelObject::add_attribute(std::string_view feature, Literal value)
{
    const MetaFeature& f = require(feature, FeatureKind::attribute, false);
    auto& s = slots_[f.name];
    if (!std::holds_alternative<Attributes>(s))
        s = Attributes{};
    std::get<Attributes>(s).push_back(std::move(value));
}

const ModelObject::Attributes& ModelObject::attributes(std::string_view feature) const
{
    const SlotValue* s = slot(feature);
    const auto* v = s ? std::get_if<Attributes>(s) : nullptr;
    return v ? *v : empty_attributes;
}

std::optional<Literal> ModelObject::attribute(std::string_view feature) const
{
    const Attributes& explicit_values = attributes(feature);
    if (!explicit_values.empty())
        return explicit_values.front();
    auto f = find_feature(cls_, feature);
    if (!f || !f->feature->is_attribute())
        return std::nullopt;
    if (f->feature->default_value)
        return f->feature->default_value;
    if (f->feature->bounds.many())
        return std::nullopt;
    DataTypeHandle dt = resolve_datatype(*f->owner.mm, f->feature->type);
    if (!dt)
        return std::nullopt;
    if (dt.type->kind == DataKind::boolean)
        return Literal{false};
    if (dt.type->kind == DataKind::integer)
        return Literal{std::int64_t{0}};
    return std::nullopt;
}

std::optional<std::string> ModelObject::string_attribute(std::string_view feature) const
{
    auto v = attribute(feature);
    if (!v)
        return std::nullopt;
    if (const auto* s = std::get_if<std::string>(&*v))
        return *s;
    return std::nullopt;
}

bool ModelObject::bool_attribute(std::string_view feature) const
{
    auto v = attribute(feature);
    const bool* b = v ? std::get_if<bool>(&*v) : nullptr;
    return b && *b;
}

std::int64_t ModelObject::int_attribute(std::string_view feature) const
{
    auto v = attribute(feature);
    const auto* i = v ? std::get_if<std::int64_t>(&*v) : nullptr;
    return i ? *i : 0;
}

void ModelObject::add_child(std::string_view feature, ModelObject& child)
{
    const MetaFeature& f = require(feature, FeatureKind::reference, true);
    if (child.container_)
        throw ModelError("object of class '" + child.class_name() + "' is already contained");
    if (&child == this)
        throw ModelError("object cannot contain itself");
    auto& s = slots_[f.name];
    if (!std::holds_alternative<Children>(s))
        s = Children{};
    std::get<Children>(s).push_back(&child);
    child.container_ = this;
    child.container_feature_ = f.name;
}

void ModelObject::set_child(std::string_view feature, ModelObject& child)
{
    clear(feature);
    add_child(feature, child);
}

const ModelObject::Children& ModelObject::children(std::string_view feature) const
{
    const SlotValue* s = slot(feature);
    const auto* v = s ? std::get_if<Children>(s) : nullptr;
    return v ? *v : empty_children;
}

ModelObject* ModelObject::child(std::string_view feature) const
{
    const Children& c = children(feature);
    return c.empty() ? nullptr : c.front();
}

void ModelObject::add_reference(std::string_view feature, const ModelObject& target)
{
    const MetaFeature& f = require(feature, FeatureKind::reference, false);
    auto& s = slots_[f.name];
    if (!std::holds_alternative<References>(s))
        s = References{};
    std::get<References>(s).push_back(&target);
}

void ModelObject::set_reference(std::string_view feature, const ModelObject& target)
{
    clear(feature);
    add_reference(feature, target);
}

const ModelObject::References& ModelObject::references(std::string_view feature) const
{
    const SlotValue* s = slot(feature);
    const auto* v = s ? std::get_if<References>(s) : nullptr;
    return v ? *v : empty_references;
}

const ModelObject* ModelObject::reference(std::string_view feature) const
{
    const References& r = references(feature);
    return r.empty() ? nullptr : r.front();
}

void ModelObject::clear(std::string_view feature)
{
    auto it = slots_.find(feature);
    if (it == slots_.end())
        return;
    if (auto* kids = std::get_if<Children>(&it->second))
        for (ModelObject* k : *kids) {
            k->container_ = nullptr;
            k->container_feature_.clear();
        }
    slots_.erase(it);
}

void ModelObject::remove_child(ModelObject& child)
{
    if (child.container_ != this)
        throw ModelError("object is not a child of this object");
    auto it = slots_.find(child.container_feature_);
    auto& kids = std::get<Children>(it->second);
    kids.erase(std::remove(kids.begin(), kids.end(), &child), kids.end());
    if (kids.empty())
        slots_.erase(it);
    child.container_ = nullptr;
    child.container_feature_.clear();
}

Model::Model(std::shared_ptr<const Metamodel> mm) : mm_(std::move(mm))
{
    if (!mm_)
        throw ModelError("model requires a metamodel");
}

ModelObject& Model::create(ClassHandle cls)
{
    if (!cls)
        throw ModelError("cannot instantiate an unresolved class");
    objects_.push_back(std::make_unique<ModelObject>(cls));
    index_.insert(objects_.back().get());
    return *objects_.back();
}

ModelObject& Model::create(std::string_view class_name)
{
    ClassHandle h = resolve_class(*mm_, TypeRef::parse(class_name));
    if (!h)
        throw ModelError("unknown class '" + std::string(class_name) + "'");
    return create(h);
}

void Model::set_root(ModelObject& root)
{
    if (!owns(&root))
        throw ModelError("root must belong to the model");
    root_ = &root;
}

void Model::erase(ModelObject& obj)
{
    if (!owns(&obj))
        throw ModelError("object does not belong to the model");
    if (obj.container())
        obj.container()->remove_child(obj);
    std::vector<const ModelObject*> doomed = preorder(obj);
    std::unordered_set<const ModelObject*> gone(doomed.begin(), doomed.end());
    if (gone.count(root_))
        root_ = nullptr;
    for (const ModelObject* d : doomed)
        index_.erase(d);
    objects_.erase(std::remove_if(objects_.begin(), objects_.end(),
                                  [&](const std::unique_ptr<ModelObject>& o) { return gone.count(o.get()) != 0; }),
                   objects_.end());
}

void Model::add_import(std::string name, std::shared_ptr<const Model> model)
{
    imports_.push_back(Import{std::move(name), std::move(model)});
}

const Import* Model::import_of(const ModelObject* obj) const
{
    for (const Import& imp : imports_)
        if (imp.model->owns(obj))
            return &imp;
    return nullptr;
}

Model Model::clone() const
{
    Model copy(mm_);
    copy.imports_ = imports_;
    std::unordered_map<const ModelObject*, ModelObject*> mapping;
    for (const auto& o : objects_) {
        ModelObject& n = copy.create(o->cls());
        n.location = o->location;
        mapping[o.get()] = &n;
    }
    for (const auto& o : objects_) {
        ModelObject& n = *mapping[o.get()];
        for (const auto& [name, value] : o->slots()) {
            if (const auto* attrs = std::get_if<ModelObject::Attributes>(&value)) {
                for (const Literal& l : *attrs)
                    n.add_attribute(name, l);
            } else if (const auto* kids = std::get_if<ModelObject::Children>(&value)) {
                for (const ModelObject* k : *kids)
                    n.add_child(name, *mapping[k]);
            } else {
                for (const ModelObject* r : std::get<ModelObject::References>(value)) {
                    auto it = mapping.find(r);
                    n.add_reference(name, it == mapping.end() ? *r : *it->second);
                }
            }
        }
    }
    if (root_)
        copy.root_ = mapping[root_];
    return copy;
}

std::string object_path(const ModelObject& obj)
{
    std::vector<std::string> parts;
    const ModelObject* cur = &obj;
    while (const ModelObject* parent = cur->container()) {
        const std::string& feature = cur->container_feature();
        std::string part = feature;
        auto f = find_feature(parent->cls(), feature);
        if (f && f->feature->bounds.many()) {
            const auto& kids = parent->children(feature);
            auto idx = std::find(kids.begin(), kids.end(), cur) - kids.begin();
            part += "[" + std::to_string(idx) + "]";
        }
        parts.push_back(std::move(part));
        cur = parent;
    }
    if (parts.empty())
        return "/";
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it)
        out += "/" + *it;
    return out;
}

std::vector<const ModelObject*> preorder(const ModelObject& root)
{
    std::vector<const ModelObject*> out;
    std::function<void(const ModelObject&)> walk = [&](const ModelObject& o) {
        out.push_back(&o);
        for (const FeatureHandle& f : all_features(o.cls()))
            if (f.feature->is_containment())
                for (const ModelObject* k : o.children(f.feature->name))
                    walk(*k);
    };
    walk(root);
    return out;
}

namespace {

class ModelValidator {
public:
    explicit ModelValidator(const Model& m) : m_(m) {}

    Diagnostics run()
    {
        if (!m_.root()) {
            report("no-root", "model has no root object", "/");
            return std::move(diags_);
        }
        if (m_.root()->container())
            report("containment", "root object has a container", "/");
        visit(*m_.root());
        for (const auto& o : m_.objects())
            if (!reached_.count(o.get()))
                report("containment", "object of class '" + o->class_name() + "' is not contained in the tree",
                       "/<orphan " + o->class_name() + ">");
        return std::move(diags_);
    }

private:
    void report(std::string code, std::string msg, std::string path)
    {
        diags_.push_back(make_error(Phase::validate, std::move(code), std::move(msg), ModelPath{std::move(path)}));
    }

    void visit(const ModelObject& o)
    {
        std::string path = object_path(o);
        if (!reached_.insert(&o).second) {
            report("containment", "object reached twice in the containment tree", path);
            return;
        }
        if (o.cls().cls->is_abstract)
            report("abstract-instance", "object of abstract class '" + o.class_name() + "'", path);

        auto features = all_features(o.cls());
        for (const auto& [name, value] : o.slots()) {
            auto it = std::find_if(features.begin(), features.end(),
                                   [&](const FeatureHandle& f) { return f.feature->name == name; });
            if (it == features.end())
                report("unknown-feature", "class '" + o.class_name() + "' has no feature '" + name + "'", path);
        }
        for (const FeatureHandle& fh : features)
            check_slot(o, fh, path);
        for (const FeatureHandle& fh : features)
            if (fh.feature->is_containment())
                for (const ModelObject* k : o.children(fh.feature->name))
                    visit(*k);
    }

    void check_slot(const ModelObject& o, const FeatureHandle& fh, const std::string& path)
    {
        const MetaFeature& f = *fh.feature;
        const std::string where = "'" + o.class_name() + "." + f.name + "'";
        const ModelObject::SlotValue* s = o.slot(f.name);
        std::size_t count = 0;
        if (s) {
            bool kind_ok = (f.is_attribute() && std::holds_alternative<ModelObject::Attributes>(*s)) ||
                           (f.is_containment() && std::holds_alternative<ModelObject::Children>(*s)) ||
                           (f.is_cross() && std::holds_alternative<ModelObject::References>(*s));
            if (!kind_ok) {
                report("slot-kind", "slot " + where + " holds values of the wrong kind", path);
                return;
            }
            count = std::visit([](const auto& v) { return v.size(); }, *s);
        }
        if (f.is_attribute() && count == 0 && !f.bounds.many() && o.attribute(f.name))
            count = 1;
        if (!f.bounds.admits(count))
            report("multiplicity",
                   "feature " + where + " has " + std::to_string(count) + " value(s), expected " +
                       std::to_string(f.bounds.lower) + ".." +
                       (f.bounds.upper == unbounded ? std::string("*") : std::to_string(f.bounds.upper)),
                   path);
        if (!s)
            return;

        if (f.is_attribute()) {
            DataTypeHandle dt = resolve_datatype(*fh.owner.mm, f.type);
            for (const Literal& l : std::get<ModelObject::Attributes>(*s))
                if (dt && literal_kind(l) != dt.type->kind)
                    report("slot-type", "value " + format_literal(l) + " does not fit " + where, path);
            return;
        }
        ClassHandle type = resolve_class(*fh.owner.mm, f.type);
        if (f.is_containment()) {
            for (const ModelObject* k : std::get<ModelObject::Children>(*s)) {
                if (type && !is_subtype(k->cls(), type))
                    report("slot-type", "child of class '" + k->class_name() + "' does not conform to " + where, path);
                if (k->container() != &o)
                    report("containment", "child in " + where + " has an inconsistent container", path);
            }
            return;
        }
        for (const ModelObject* r : std::get<ModelObject::References>(*s)) {
            if (!m_.owns(r) && !m_.import_of(r)) {
                report("dangling-reference", "reference " + where + " points outside the model", path);
                continue;
            }
            if (type && !is_subtype(r->cls(), type))
                report("slot-type", "target of class '" + r->class_name() + "' does not conform to " + where, path);
        }
    }

    const Model& m_;
    Diagnostics diags_;
    std::unordered_set<const ModelObject*> reached_;
};

bool same_class(const ModelObject& a, const ModelObject& b)
{
    return a.cls().cls == b.cls().cls ||
           (a.class_name() == b.class_name() && a.cls().mm->name == b.cls().mm->name);
}

class ModelComparer {
public:
    ModelComparer(const Model& a, const Model& b) : a_(a), b_(b) {}

    bool run()
    {
        if (!a_.root() || !b_.root())
            return !a_.root() && !b_.root();
        if (!match(*a_.root(), *b_.root()))
            return false;
        for (const auto& [oa, ob] : pairs_)
            if (!match_references(*oa, *ob))
                return false;
        return true;
    }

private:
    bool match(const ModelObject& a, const ModelObject& b)
    {
        if (!same_class(a, b))
            return false;
        pairs_.emplace_back(&a, &b);
        mapping_[&a] = &b;
        for (const FeatureHandle& fh : all_features(a.cls())) {
            const MetaFeature& f = *fh.feature;
            if (f.is_attribute()) {
                if (f.bounds.many()) {
                    if (a.attributes(f.name) != b.attributes(f.name))
                        return false;
                } else if (a.attribute(f.name) != b.attribute(f.name)) {
                    return false;
                }
            } else if (f.is_containment()) {
                const auto& ka = a.children(f.name);
                const auto& kb = b.children(f.name);
                if (ka.size() != kb.size())
                    return false;
                for (std::size_t i = 0; i < ka.size(); ++i)
                    if (!match(*ka[i], *kb[i]))
                        return false;
            }
        }
        return true;
    }

    bool match_references(const ModelObject& a, const ModelObject& b)
    {
        for (const FeatureHandle& fh : all_features(a.cls())) {
            if (!fh.feature->is_cross())
                continue;
            const auto& ra = a.references(fh.feature->name);
            const auto& rb = b.references(fh.feature->name);
            if (ra.size() != rb.size())
                return false;
            for (std::size_t i = 0; i < ra.size(); ++i)
                if (!same_target(ra[i], rb[i]))
                    return false;
        }
        return true;
    }

    bool same_target(const ModelObject* ta, const ModelObject* tb)
    {
        auto it = mapping_.find(ta);
        if (it != mapping_.end())
            return it->second == tb;
        if (ta == tb)
            return true;
        const Import* ia = a_.import_of(ta);
        const Import* ib = b_.import_of(tb);
        return ia && ib && ia->name == ib->name && same_class(*ta, *tb) && object_path(*ta) == object_path(*tb);
    }

    const Model& a_;
    const Model& b_;
    std::vector<std::pair<const ModelObject*, const ModelObject*>> pairs_;
    std::unordered_map<const ModelObject*, const ModelObject*> mapping_;
};

}  // namespace

Diagnostics validate_model(const Model& m)
{
    return ModelValidator(m).run();
}

bool model_equals(const Model& a, const Model& b)
{
    return ModelComparer(a, b).run();
}

}  // namespace mdsl
