#include "mdsl/ast2model.hpp"

#include <algorithm>
#include <set>

#include "mdsl/namespace.hpp"

namespace mdsl {

const ClassPlan* TransformPlan::find_image(std::string_view image) const
{
    for (const ClassPlan& c : classes)
        if (c.image == image)
            return &c;
    return nullptr;
}

const ClassPlan* TransformPlan::find_prototype(const ClassHandle& prototype) const
{
    // By name: models may be built against another instance of the same metamodel.
    for (const ClassPlan& c : classes)
        if (c.prototype.name() == prototype.name() && c.prototype.is_ecore() == prototype.is_ecore())
            return &c;
    return nullptr;
}

bool TransformPlan::is_consume_only(std::string_view ast_class) const
{
    return std::find(consume_only.begin(), consume_only.end(), ast_class) != consume_only.end();
}

namespace {

Diagnostic stale(const std::string& msg)
{
    return make_error(Phase::transformation, "stale-trace", msg, ModelPath{"/trace"});
}

}  // namespace

Result<TransformPlan> build_plan(const xf::Trace& trace, std::shared_ptr<const Metamodel> target,
                                 std::shared_ptr<const Metamodel> ast)
{
    TransformPlan plan;
    plan.target = target;
    plan.ast = ast;
    plan.consume_only = trace.created;
    Diagnostics diags;

    for (const std::string& c : trace.created)
        if (!ast->find_class(c))
            diags.push_back(stale("created class '" + c + "' is missing from the AST metamodel"));

    std::set<std::string> covered(trace.created.begin(), trace.created.end());
    for (const xf::ClassRecord& rec : trace.classes) {
        ClassHandle proto = resolve_class(*target, rec.prototype);
        if (!proto || proto.is_ecore() != (rec.prototype.package == ecore_package)) {
            diags.push_back(stale("prototype '" + rec.prototype.qualified() + "' is missing from the target metamodel"));
            continue;
        }
        if (rec.skipped) {
            plan.construct_manually.push_back(rec.prototype);
            continue;
        }
        const MetaClass* img = ast->find_class(rec.image);
        if (!img) {
            diags.push_back(stale("image '" + rec.image + "' is missing from the AST metamodel"));
            continue;
        }
        covered.insert(rec.image);
        ClassPlan cp{rec.image, proto, {}};
        for (const FeatureHandle& fh : all_features(ClassHandle{ast.get(), img})) {
            const MetaFeature& f = *fh.feature;
            FeatureInstruction fi;
            fi.image_class = fh.owner.name();
            fi.image_feature = f.name;
            if (plan.is_consume_only(fi.image_class)) {
                fi.kind = FeatureInstruction::Kind::payload;
                cp.features.push_back(std::move(fi));
                continue;
            }
            const xf::FeatureRecord* fr = trace.find_feature(fi.image_class, f.name);
            if (!fr) {
                diags.push_back(stale("no trace record for '" + fi.image_class + "." + f.name + "'"));
                continue;
            }
            fi.target_feature = fr->feature;
            auto tf = find_feature(proto, fr->feature);
            if (!tf) {
                ClassHandle origin = resolve_class(*target, fr->prototype_class);
                if (!origin || !find_feature(origin, fr->feature)) {
                    diags.push_back(stale("feature '" + fr->prototype_class.qualified() + "." + fr->feature +
                                          "' is missing from the target metamodel"));
                    continue;
                }
                // Inherited through a changed supertype: the prototype has no such feature.
                fi.kind = FeatureInstruction::Kind::payload;
                cp.features.push_back(std::move(fi));
                continue;
            }
            const MetaFeature& t = *tf->feature;
            if (t.is_reference())
                fi.target_class = resolve_class(*tf->owner.mm, t.type);
            if (fr->translated) {
                if (!t.is_reference()) {
                    diags.push_back(stale("translated feature '" + fr->feature + "' is not a reference"));
                    continue;
                }
                fi.kind = FeatureInstruction::Kind::resolve_cross;
                fi.textual_type = fr->textual_type;
            } else if (t.is_attribute()) {
                fi.kind = FeatureInstruction::Kind::copy_attribute;
            } else if (t.is_containment()) {
                fi.kind = FeatureInstruction::Kind::map_containment;
            } else {
                fi.kind = FeatureInstruction::Kind::map_reference;
            }
            if (fi.kind != FeatureInstruction::Kind::resolve_cross &&
                f.is_attribute() != (fi.kind == FeatureInstruction::Kind::copy_attribute)) {
                diags.push_back(stale("feature kinds of '" + fi.image_class + "." + f.name + "' and '" +
                                      proto.name() + "." + t.name + "' disagree"));
                continue;
            }
            cp.features.push_back(std::move(fi));
        }
        plan.classes.push_back(std::move(cp));
    }
    for (const xf::FeatureRecord& fr : trace.features) {
        const MetaClass* img = ast->find_class(fr.image_class);
        ClassHandle proto = resolve_class(*target, fr.prototype_class);
        if (!img || !img->find_feature(fr.image_feature))
            diags.push_back(stale("feature '" + fr.image_class + "." + fr.image_feature +
                                  "' is missing from the AST metamodel"));
        else if (!proto || !proto.cls->find_feature(fr.feature))
            diags.push_back(stale("feature '" + fr.prototype_class.qualified() + "." + fr.feature +
                                  "' is missing from the target metamodel"));
    }
    for (const Classifier& c : ast->classifiers)
        if (const auto* cls = std::get_if<MetaClass>(&c); cls && !covered.count(cls->name))
            diags.push_back(stale("AST class '" + cls->name + "' has no trace record"));
    if (has_errors(diags))
        return diags;
    return plan;
}

std::vector<std::string> payload_segments(const ModelObject& payload)
{
    std::vector<std::string> out;
    std::set<const ModelObject*> seen;
    for (const ModelObject* cur = &payload; cur && seen.insert(cur).second;) {
        std::string seg;
        const ModelObject* next = nullptr;
        bool have_seg = false;
        for (const FeatureHandle& fh : all_features(cur->cls())) {
            const MetaFeature& f = *fh.feature;
            if (!have_seg && f.is_attribute()) {
                DataTypeHandle dt = resolve_datatype(*fh.owner.mm, f.type);
                if (dt && dt.type->kind == DataKind::string) {
                    seg = cur->string_attribute(f.name).value_or("");
                    have_seg = true;
                }
            } else if (!next && f.is_containment() && !f.bounds.many()) {
                next = cur->child(f.name);
            }
        }
        out.push_back(std::move(seg));
        cur = next;
    }
    return out;
}

ModelObject* build_payload(Model& ast, ClassHandle payload_class, const std::vector<std::string>& segments)
{
    std::string attr;
    std::string nest;
    for (const FeatureHandle& fh : all_features(payload_class)) {
        const MetaFeature& f = *fh.feature;
        if (attr.empty() && f.is_attribute()) {
            DataTypeHandle dt = resolve_datatype(*fh.owner.mm, f.type);
            if (dt && dt.type->kind == DataKind::string)
                attr = f.name;
        } else if (nest.empty() && f.is_containment() && !f.bounds.many()) {
            ClassHandle t = resolve_class(*fh.owner.mm, f.type);
            if (t && is_subtype(payload_class, t))
                nest = f.name;
        }
    }
    if (attr.empty() || segments.empty() || (segments.size() > 1 && nest.empty()))
        return nullptr;
    ModelObject* head = nullptr;
    ModelObject* prev = nullptr;
    for (const std::string& seg : segments) {
        ModelObject& o = ast.create(payload_class);
        o.set_attribute(attr, Literal{seg});
        if (prev)
            prev->set_child(nest, o);
        else
            head = &o;
        prev = &o;
    }
    return head;
}

ModelObject* ResolutionContext::construct(const TypeRef& cls, const std::vector<std::string>& path) const
{
    const Constructor* c = registry.constructor(cls);
    return c ? (*c)(target, path) : nullptr;
}

void ResolverRegistry::add(std::string image_class, std::string feature, Resolver r)
{
    specific_[{std::move(image_class), std::move(feature)}] = std::move(r);
}

void ResolverRegistry::add_constructor(TypeRef cls, Constructor c)
{
    constructors_[std::move(cls)] = std::move(c);
}

namespace {

// Lookup order: the object's class and its supertypes (breadth first), then the declaring class.
template <class Fn>
const Fn* find_callback(const std::map<std::pair<std::string, std::string>, Fn>& specific, const Fn& fallback,
                        const ClassHandle& ast_class, const FeatureInstruction& instruction)
{
    std::vector<ClassHandle> queue{ast_class};
    std::set<const MetaClass*> seen;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        if (!queue[i] || !seen.insert(queue[i].cls).second)
            continue;
        auto it = specific.find({queue[i].name(), instruction.image_feature});
        if (it != specific.end())
            return &it->second;
        for (ClassHandle s : direct_supertypes(queue[i]))
            queue.push_back(s);
    }
    auto it = specific.find({instruction.image_class, instruction.image_feature});
    if (it != specific.end())
        return &it->second;
    return fallback ? &fallback : nullptr;
}

}  // namespace

const Resolver* ResolverRegistry::find(const ClassHandle& ast_class, const FeatureInstruction& instruction) const
{
    return find_callback(specific_, default_, ast_class, instruction);
}

const Constructor* ResolverRegistry::constructor(const TypeRef& cls) const
{
    auto it = constructors_.find(cls);
    return it == constructors_.end() ? nullptr : &it->second;
}

Diagnostics ResolverRegistry::coverage(const TransformPlan& plan) const
{
    Diagnostics out;
    for (const ClassPlan& cp : plan.classes) {
        ClassHandle img = resolve_class(*plan.ast, TypeRef{"", cp.image});
        for (const FeatureInstruction& fi : cp.features)
            if (fi.kind == FeatureInstruction::Kind::resolve_cross && !find(img, fi))
                out.push_back(make_error(Phase::resolve, "no-resolver",
                                         "no resolver for '" + cp.image + "." + fi.image_feature + "'",
                                         ModelPath{"/" + plan.ast->name + "/" + cp.image + "." + fi.image_feature}));
    }
    return out;
}

void NamerRegistry::add(std::string image_class, std::string feature, Namer n)
{
    specific_[{std::move(image_class), std::move(feature)}] = std::move(n);
}

const Namer* NamerRegistry::find(const ClassHandle& ast_class, const FeatureInstruction& instruction) const
{
    return find_callback(specific_, default_, ast_class, instruction);
}

namespace {

bool many(const ModelObject& obj, std::string_view feature)
{
    auto fh = find_feature(obj.cls(), feature);
    return fh && fh->feature->bounds.many();
}

void put_attribute(ModelObject& obj, const std::string& feature, const Literal& v)
{
    if (many(obj, feature))
        obj.add_attribute(feature, v);
    else
        obj.set_attribute(feature, v);
}

void put_reference(ModelObject& obj, const std::string& feature, const ModelObject& target)
{
    if (many(obj, feature))
        obj.add_reference(feature, target);
    else
        obj.set_reference(feature, target);
}

Diagnostic located(Phase phase, std::string code, std::string msg, const ModelObject& at)
{
    if (at.location && !at.location->file.empty())
        return make_error(phase, std::move(code), std::move(msg), *at.location);
    return make_error(phase, std::move(code), std::move(msg), ModelPath{object_path(at)});
}

class Forward {
public:
    Forward(const Model& ast, const TransformPlan& plan, const ResolverRegistry& registry)
        : ast_(ast), plan_(plan), registry_(registry), target_(plan.target)
    {
    }

    TransformOutput run()
    {
        if (!ast_.root()) {
            diags_.push_back(make_error(Phase::transformation, "no-root", "AST model has no root", ModelPath{"/"}));
            return finish();
        }
        append(diags_, registry_.coverage(plan_));
        if (has_errors(diags_))
            return finish();

        if (ModelObject* root = make_root(*ast_.root()))
            target_.set_root(*root);
        if (has_errors(diags_))
            return finish();

        if (const Preparer* prep = registry_.prepare()) {
            PrepareContext pc{target_,
                              [this](ModelObject& s, ModelObject& d) { return merge(s, d); },
                              [this](const ModelObject& t) -> const ModelObject* {
                                  auto it = source_.find(&t);
                                  return it == source_.end() ? nullptr : it->second;
                              }};
            append(diags_, (*prep)(pc));
            if (has_errors(diags_))
                return finish();
        }

        std::vector<Job> deferred;
        for (const Pending& p : pending_)
            resolve(p, &deferred);
        for (const Job& job : deferred)
            run_job(job, nullptr);

        if (!has_errors(diags_))
            append(diags_, validate_model(target_));
        return finish();
    }

private:
    struct Pending {
        const ModelObject* ast_owner;
        ModelObject* target_owner;
        const FeatureInstruction* instruction;
    };

    struct Job {
        Pending pending;
        std::optional<std::string> text;
        const ModelObject* payload;
    };

    TransformOutput finish() { return TransformOutput{std::move(target_), std::move(diags_)}; }

    // The single mapped object reachable from a consume-only root through consume-only objects.
    ModelObject* make_root(const ModelObject& root)
    {
        if (plan_.find_image(root.class_name()))
            return create(root);
        if (!plan_.is_consume_only(root.class_name())) {
            diags_.push_back(located(Phase::transformation, "unmapped-object",
                                     "class '" + root.class_name() + "' has no target counterpart", root));
            return nullptr;
        }
        std::vector<const ModelObject*> found;
        collect_mapped(root, found);
        if (found.size() != 1) {
            diags_.push_back(located(Phase::transformation, found.empty() ? "unmapped-object" : "multiple-roots",
                                     "consume-only root '" + root.class_name() + "' holds " +
                                         std::to_string(found.size()) + " mapped subtrees, expected one",
                                     root));
            return nullptr;
        }
        return create(*found.front());
    }

    void collect_mapped(const ModelObject& obj, std::vector<const ModelObject*>& out) const
    {
        for (const FeatureHandle& fh : all_features(obj.cls())) {
            if (!fh.feature->is_containment())
                continue;
            for (const ModelObject* c : obj.children(fh.feature->name)) {
                if (plan_.find_image(c->class_name()))
                    out.push_back(c);
                else if (plan_.is_consume_only(c->class_name()))
                    collect_mapped(*c, out);
            }
        }
    }

    ModelObject* create(const ModelObject& a)
    {
        const ClassPlan* cp = plan_.find_image(a.class_name());
        ModelObject& t = target_.create(cp->prototype);
        t.location = a.location;
        counterpart_[&a] = &t;
        source_[&t] = &a;
        for (const FeatureInstruction& fi : cp->features) {
            switch (fi.kind) {
            case FeatureInstruction::Kind::copy_attribute:
                for (const Literal& v : a.attributes(fi.image_feature))
                    put_attribute(t, fi.target_feature, v);
                break;
            case FeatureInstruction::Kind::map_containment:
                for (const ModelObject* c : a.children(fi.image_feature))
                    place(t, fi, *c);
                break;
            case FeatureInstruction::Kind::resolve_cross:
            case FeatureInstruction::Kind::map_reference:
                if (a.is_set(fi.image_feature))
                    pending_.push_back(Pending{&a, &t, &fi});
                break;
            case FeatureInstruction::Kind::payload:
                break;
            }
        }
        return &t;
    }

    // Mapped children land in the slot; consume-only children are spliced through.
    void place(ModelObject& t, const FeatureInstruction& fi, const ModelObject& child)
    {
        if (plan_.find_image(child.class_name())) {
            const ClassPlan* cp = plan_.find_image(child.class_name());
            if (fi.target_class && !is_subtype(cp->prototype, fi.target_class)) {
                diags_.push_back(located(Phase::transformation, "unmapped-object",
                                         "a " + cp->prototype.name() + " cannot be placed in '" + fi.target_feature +
                                             "' of type " + fi.target_class.name(),
                                         child));
                return;
            }
            t.add_child(fi.target_feature, *create(child));
            return;
        }
        if (plan_.is_consume_only(child.class_name())) {
            for (const FeatureHandle& fh : all_features(child.cls()))
                if (fh.feature->is_containment())
                    for (const ModelObject* g : child.children(fh.feature->name))
                        place(t, fi, *g);
            return;
        }
        diags_.push_back(located(Phase::transformation, "unmapped-object",
                                 "class '" + child.class_name() + "' has no target counterpart", child));
    }

    Diagnostics merge(ModelObject& survivor, ModelObject& dup)
    {
        Diagnostics out;
        auto slots = dup.slots();
        for (const auto& [name, value] : slots) {
            bool multi = many(survivor, name);
            if (const auto* attrs = std::get_if<ModelObject::Attributes>(&value)) {
                if (!survivor.is_set(name)) {
                    for (const Literal& v : *attrs)
                        survivor.add_attribute(name, v);
                } else if (multi) {
                    for (const Literal& v : *attrs)
                        survivor.add_attribute(name, v);
                } else if (survivor.attributes(name) != *attrs) {
                    out.push_back(located(Phase::resolve, "merge-conflict",
                                          "merged '" + survivor.class_name() + "' objects disagree on '" + name + "'",
                                          dup));
                }
            } else if (const auto* kids = std::get_if<ModelObject::Children>(&value)) {
                if (!multi && survivor.is_set(name)) {
                    out.push_back(located(Phase::resolve, "merge-conflict",
                                          "merged '" + survivor.class_name() + "' objects both contain '" + name + "'",
                                          dup));
                    continue;
                }
                for (ModelObject* k : ModelObject::Children(*kids)) {
                    dup.remove_child(*k);
                    survivor.add_child(name, *k);
                }
            } else {
                for (const ModelObject* r : std::get<ModelObject::References>(value))
                    put_reference(survivor, name, *r);
            }
        }
        for (Pending& p : pending_)
            if (p.target_owner == &dup)
                p.target_owner = &survivor;
        for (auto& [a, t] : counterpart_)
            if (t == &dup)
                t = &survivor;
        source_.erase(&dup);
        target_.erase(dup);
        return out;
    }

    void resolve(const Pending& p, std::vector<Job>* deferred)
    {
        const FeatureInstruction& fi = *p.instruction;
        const ModelObject& a = *p.ast_owner;
        if (fi.kind == FeatureInstruction::Kind::map_reference) {
            for (const ModelObject* r : a.references(fi.image_feature)) {
                auto it = counterpart_.find(r);
                if (it == counterpart_.end()) {
                    diags_.push_back(located(Phase::resolve, "unmapped-object",
                                             "referenced '" + r->class_name() + "' has no target counterpart", a));
                    continue;
                }
                put_reference(*p.target_owner, fi.target_feature, *it->second);
            }
            return;
        }
        const ModelObject::SlotValue* slot = a.slot(fi.image_feature);
        if (const auto* attrs = std::get_if<ModelObject::Attributes>(slot)) {
            for (const Literal& v : *attrs) {
                const auto* s = std::get_if<std::string>(&v);
                run_job(Job{p, s ? *s : format_literal(v), nullptr}, deferred);
            }
        } else if (const auto* kids = std::get_if<ModelObject::Children>(slot)) {
            for (const ModelObject* k : *kids)
                run_job(Job{p, std::nullopt, k}, deferred);
        }
    }

    void run_job(const Job& job, std::vector<Job>* deferred)
    {
        const Pending& p = job.pending;
        const FeatureInstruction& fi = *p.instruction;
        std::vector<const ModelObject*> containers;
        for (const ModelObject* c = p.ast_owner->container(); c; c = c->container())
            containers.push_back(c);
        ResolutionContext ctx{*p.ast_owner,
                              std::move(containers),
                              fi,
                              *p.target_owner,
                              target_,
                              job.text,
                              job.payload,
                              job.payload ? payload_segments(*job.payload) : split_name(*job.text),
                              registry_,
                              [this](const ModelObject& o) -> ModelObject* {
                                  auto it = counterpart_.find(&o);
                                  return it == counterpart_.end() ? nullptr : it->second;
                              }};
        const ModelObject& at = job.payload ? *job.payload : *p.ast_owner;
        const std::string name = join_name(ctx.segments);
        Resolution r = (*registry_.find(p.ast_owner->cls(), fi))(ctx);
        switch (r.kind()) {
        case Resolution::Kind::found:
            if (fi.target_class && !is_subtype(r.object()->cls(), fi.target_class)) {
                diags_.push_back(located(Phase::resolve, "type-kind",
                                         "'" + name + "' is a " + r.object()->class_name() + ", expected " +
                                             fi.target_class.name(),
                                         at));
                return;
            }
            put_reference(*p.target_owner, fi.target_feature, *r.object());
            return;
        case Resolution::Kind::deferred:
            if (deferred) {
                deferred->push_back(job);
                return;
            }
            diags_.push_back(located(Phase::resolve, "unresolved-name", "unresolved reference '" + name + "'", at));
            return;
        case Resolution::Kind::unresolved:
            diags_.push_back(located(Phase::resolve, r.code(),
                                     r.message().empty() ? "unresolved reference '" + name + "'" : r.message(), at));
            return;
        }
    }

    const Model& ast_;
    const TransformPlan& plan_;
    const ResolverRegistry& registry_;
    Model target_;
    Diagnostics diags_;
    std::map<const ModelObject*, ModelObject*> counterpart_;
    std::map<const ModelObject*, const ModelObject*> source_;
    std::vector<Pending> pending_;
};

class Backward {
public:
    Backward(const Model& m, const TransformPlan& plan, const NamerRegistry& namers)
        : m_(m), plan_(plan), namers_(namers), ast_(plan.ast)
    {
    }

    TransformOutput run()
    {
        if (!m_.root()) {
            diags_.push_back(make_error(Phase::transformation, "no-root", "model has no root", ModelPath{"/"}));
            return finish();
        }
        ModelObject* root = create(*m_.root());
        if (!root) {
            if (diags_.empty())
                diags_.push_back(make_error(Phase::transformation, "unmapped-object",
                                            "root class '" + m_.root()->class_name() + "' has no image",
                                            ModelPath{"/"}));
            return finish();
        }
        ast_.set_root(*root);
        for (const Pending& p : pending_)
            name(p);
        return finish();
    }

private:
    struct Pending {
        const ModelObject* owner;
        ModelObject* image;
        const FeatureInstruction* instruction;
    };

    TransformOutput finish() { return TransformOutput{std::move(ast_), std::move(diags_)}; }

    bool skipped(const ClassHandle& cls) const
    {
        return std::any_of(plan_.construct_manually.begin(), plan_.construct_manually.end(),
                           [&](const TypeRef& r) { return r == cls.ref_from(*plan_.target); });
    }

    ModelObject* create(const ModelObject& t)
    {
        const ClassPlan* cp = plan_.find_prototype(t.cls());
        if (!cp) {
            if (!skipped(t.cls()))
                diags_.push_back(make_error(Phase::transformation, "unmapped-object",
                                            "class '" + t.class_name() + "' has no image", ModelPath{object_path(t)}));
            return nullptr;
        }
        ModelObject& a = ast_.create(resolve_class(*plan_.ast, TypeRef{"", cp->image}));
        counterpart_[&t] = &a;
        for (const FeatureInstruction& fi : cp->features) {
            switch (fi.kind) {
            case FeatureInstruction::Kind::copy_attribute:
                for (const Literal& v : t.attributes(fi.target_feature))
                    put_attribute(a, fi.image_feature, v);
                break;
            case FeatureInstruction::Kind::map_containment:
                for (const ModelObject* c : t.children(fi.target_feature))
                    if (ModelObject* ac = create(*c))
                        a.add_child(fi.image_feature, *ac);
                break;
            case FeatureInstruction::Kind::resolve_cross:
            case FeatureInstruction::Kind::map_reference:
                if (t.is_set(fi.target_feature))
                    pending_.push_back(Pending{&t, &a, &fi});
                break;
            case FeatureInstruction::Kind::payload:
                break;
            }
        }
        return &a;
    }

    void name(const Pending& p)
    {
        const FeatureInstruction& fi = *p.instruction;
        for (const ModelObject* r : p.owner->references(fi.target_feature)) {
            if (fi.kind == FeatureInstruction::Kind::map_reference) {
                auto it = counterpart_.find(r);
                if (it == counterpart_.end())
                    diags_.push_back(make_error(Phase::transformation, "unmapped-object",
                                                "referenced '" + r->class_name() + "' has no image",
                                                ModelPath{object_path(*p.owner)}));
                else
                    put_reference(*p.image, fi.image_feature, *it->second);
                continue;
            }
            const Namer* namer = namers_.find(p.image->cls(), fi);
            if (!namer) {
                diags_.push_back(make_error(Phase::transformation, "unnamable",
                                            "no namer for '" + fi.image_class + "." + fi.image_feature + "'",
                                            ModelPath{object_path(*p.owner)}));
                return;
            }
            ClassHandle textual = resolve_class(*plan_.ast, TypeRef::parse(fi.textual_type));
            if (textual && textual.mm != plan_.ast.get())
                textual = ClassHandle{};
            NamingContext ctx{m_, *p.owner, *r, fi, ast_, textual};
            Naming n = (*namer)(ctx);
            if (!n.error.empty() || (!n.text && !n.payload)) {
                diags_.push_back(make_error(Phase::transformation, "unnamable",
                                            n.error.empty() ? "no textual form for a '" + r->class_name() + "'"
                                                            : n.error,
                                            ModelPath{object_path(*p.owner)}));
                continue;
            }
            if (n.payload)
                p.image->add_child(fi.image_feature, *n.payload);
            else
                put_attribute(*p.image, fi.image_feature, Literal{*n.text});
        }
    }

    const Model& m_;
    const TransformPlan& plan_;
    const NamerRegistry& namers_;
    Model ast_;
    Diagnostics diags_;
    std::map<const ModelObject*, ModelObject*> counterpart_;
    std::vector<Pending> pending_;
};

}  // namespace

TransformOutput transform_ast_to_model(const Model& ast, const TransformPlan& plan, const ResolverRegistry& resolvers)
{
    return Forward(ast, plan, resolvers).run();
}

TransformOutput transform_model_to_ast(const Model& m, const TransformPlan& plan, const NamerRegistry& namers)
{
    return Backward(m, plan, namers).run();
}

}  // namespace mdsl
