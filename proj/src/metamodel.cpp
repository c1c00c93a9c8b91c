#include "mdsl/metamodel.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "mdsl/lexer.hpp"

namespace mdsl {

bool Bounds::admits(std::size_t count) const
{
    if (count < static_cast<std::size_t>(lower))
        return false;
    return upper == unbounded || count <= static_cast<std::size_t>(upper);
}

std::string format_bounds(const Bounds& b)
{
    if (b.lower == 0 && b.upper == 1)
        return "";
    if (b.lower == 0 && b.upper == unbounded)
        return "[*]";
    if (b.lower == b.upper)
        return "[" + std::to_string(b.lower) + "]";
    return "[" + std::to_string(b.lower) + ".." + (b.upper == unbounded ? "*" : std::to_string(b.upper)) + "]";
}

std::string format_literal(const Literal& v)
{
    if (const auto* s = std::get_if<std::string>(&v))
        return quote_string(*s);
    if (const auto* b = std::get_if<bool>(&v))
        return *b ? "true" : "false";
    return std::to_string(std::get<std::int64_t>(v));
}

DataKind literal_kind(const Literal& v)
{
    if (std::holds_alternative<std::string>(v))
        return DataKind::string;
    if (std::holds_alternative<bool>(v))
        return DataKind::boolean;
    return DataKind::integer;
}

TypeRef TypeRef::parse(std::string_view qualified)
{
    auto pos = qualified.rfind("::");
    if (pos == std::string_view::npos)
        return TypeRef{"", std::string(qualified)};
    return TypeRef{std::string(qualified.substr(0, pos)), std::string(qualified.substr(pos + 2))};
}

const MetaFeature* MetaClass::find_feature(std::string_view feature) const
{
    auto it = std::find_if(features.begin(), features.end(), [&](const MetaFeature& f) { return f.name == feature; });
    return it == features.end() ? nullptr : &*it;
}

MetaFeature* MetaClass::find_feature(std::string_view feature)
{
    return const_cast<MetaFeature*>(std::as_const(*this).find_feature(feature));
}

const std::string& classifier_name(const Classifier& c)
{
    return std::visit([](const auto& x) -> const std::string& { return x.name; }, c);
}

const Classifier* Metamodel::find(std::string_view classifier) const
{
    auto it = std::find_if(classifiers.begin(), classifiers.end(),
                           [&](const Classifier& c) { return classifier_name(c) == classifier; });
    return it == classifiers.end() ? nullptr : &*it;
}

Classifier* Metamodel::find(std::string_view classifier)
{
    return const_cast<Classifier*>(std::as_const(*this).find(classifier));
}

const MetaClass* Metamodel::find_class(std::string_view cls) const
{
    const Classifier* c = find(cls);
    return c ? std::get_if<MetaClass>(c) : nullptr;
}

MetaClass* Metamodel::find_class(std::string_view cls)
{
    Classifier* c = find(cls);
    return c ? std::get_if<MetaClass>(c) : nullptr;
}

const MetaDataType* Metamodel::find_datatype(std::string_view dt) const
{
    const Classifier* c = find(dt);
    return c ? std::get_if<MetaDataType>(c) : nullptr;
}

bool equivalent(const Metamodel& a, const Metamodel& b)
{
    if (a.classifiers.size() != b.classifiers.size())
        return false;
    for (const Classifier& c : a.classifiers) {
        const Classifier* other = b.find(classifier_name(c));
        if (!other || !(*other == c))
            return false;
    }
    return true;
}

const Metamodel& builtin_ecore()
{
    static const Metamodel ecore = [] {
        auto string_attr = [](std::string name) {
            MetaFeature f;
            f.name = std::move(name);
            f.kind = FeatureKind::attribute;
            f.type = TypeRef{"", "String"};
            return f;
        };
        Metamodel mm;
        mm.name = std::string(ecore_package);
        mm.classifiers.push_back(MetaClass{"EClassifier", true, {}, {string_attr("name")}, {}});
        mm.classifiers.push_back(MetaClass{"EClass", false, {TypeRef{"", "EClassifier"}}, {}, {}});
        mm.classifiers.push_back(MetaClass{"EDataType", false, {TypeRef{"", "EClassifier"}}, {}, {}});
        mm.classifiers.push_back(MetaClass{"EStructuralFeature", true, {}, {string_attr("name")}, {}});
        mm.classifiers.push_back(MetaClass{"EAttribute", false, {TypeRef{"", "EStructuralFeature"}}, {}, {}});
        mm.classifiers.push_back(MetaClass{"EReference", false, {TypeRef{"", "EStructuralFeature"}}, {}, {}});
        mm.classifiers.push_back(MetaDataType{"String", DataKind::string});
        mm.classifiers.push_back(MetaDataType{"boolean", DataKind::boolean});
        mm.classifiers.push_back(MetaDataType{"int", DataKind::integer});
        return mm;
    }();
    return ecore;
}

TypeRef ClassHandle::ref_from(const Metamodel& context) const
{
    if (mm == &context)
        return TypeRef{"", cls->name};
    return TypeRef{mm->name, cls->name};
}

const Classifier* resolve(const Metamodel& context, const TypeRef& ref, const Metamodel** owner)
{
    const Metamodel& ecore = builtin_ecore();
    const Metamodel* target = nullptr;
    if (ref.package.empty() || ref.package == context.name)
        target = &context;
    else if (ref.package == ecore_package)
        target = &ecore;
    else
        return nullptr;

    const Classifier* found = target->find(ref.name);
    if (!found && ref.package.empty() && target != &ecore) {
        target = &ecore;
        found = ecore.find(ref.name);
    }
    if (found && owner)
        *owner = target;
    return found;
}

ClassHandle resolve_class(const Metamodel& context, const TypeRef& ref)
{
    const Metamodel* owner = nullptr;
    const Classifier* c = resolve(context, ref, &owner);
    if (!c)
        return {};
    const auto* cls = std::get_if<MetaClass>(c);
    return cls ? ClassHandle{owner, cls} : ClassHandle{};
}

DataTypeHandle resolve_datatype(const Metamodel& context, const TypeRef& ref)
{
    const Metamodel* owner = nullptr;
    const Classifier* c = resolve(context, ref, &owner);
    if (!c)
        return {};
    const auto* dt = std::get_if<MetaDataType>(c);
    return dt ? DataTypeHandle{owner, dt} : DataTypeHandle{};
}

std::vector<ClassHandle> direct_supertypes(ClassHandle c)
{
    std::vector<ClassHandle> out;
    for (const TypeRef& s : c.cls->supertypes)
        if (ClassHandle h = resolve_class(*c.mm, s))
            out.push_back(h);
    return out;
}

bool is_subtype(ClassHandle sub, ClassHandle super)
{
    std::vector<ClassHandle> stack{sub};
    std::set<const MetaClass*> seen;
    while (!stack.empty()) {
        ClassHandle c = stack.back();
        stack.pop_back();
        if (c == super)
            return true;
        if (!seen.insert(c.cls).second)
            continue;
        for (ClassHandle s : direct_supertypes(c))
            stack.push_back(s);
    }
    return false;
}

Result<bool> is_subtype(const Metamodel& mm, const TypeRef& sub, const TypeRef& super)
{
    ClassHandle a = resolve_class(mm, sub);
    ClassHandle b = resolve_class(mm, super);
    Diagnostics diags;
    for (auto [h, r] : {std::pair{a, &sub}, std::pair{b, &super}})
        if (!h)
            diags.push_back(make_error(Phase::metamodel, "unresolved-type", "unresolved class '" + r->qualified() + "'",
                                       ModelPath{"/" + mm.name}));
    if (!diags.empty())
        return diags;
    return is_subtype(a, b);
}

std::vector<FeatureHandle> all_features(ClassHandle c)
{
    std::vector<FeatureHandle> out;
    std::set<const MetaClass*> visited;
    std::function<void(ClassHandle)> walk = [&](ClassHandle h) {
        if (!visited.insert(h.cls).second)
            return;
        for (ClassHandle s : direct_supertypes(h))
            walk(s);
        for (const MetaFeature& f : h.cls->features)
            out.push_back(FeatureHandle{h, &f});
    };
    walk(c);
    return out;
}

std::optional<FeatureHandle> find_feature(ClassHandle c, std::string_view name)
{
    for (const FeatureHandle& f : all_features(c))
        if (f.feature->name == name)
            return f;
    return std::nullopt;
}

std::vector<ClassHandle> subtypes_of(const Metamodel& mm, ClassHandle super, bool include_ecore)
{
    std::vector<ClassHandle> out;
    auto scan = [&](const Metamodel& m) {
        for (const Classifier& c : m.classifiers)
            if (const auto* cls = std::get_if<MetaClass>(&c)) {
                ClassHandle h{&m, cls};
                if (is_subtype(h, super))
                    out.push_back(h);
            }
    };
    scan(mm);
    if (include_ecore && &mm != &builtin_ecore())
        scan(builtin_ecore());
    return out;
}

namespace {

class MetamodelValidator {
public:
    explicit MetamodelValidator(const Metamodel& mm) : mm_(mm) {}

    Diagnostics run()
    {
        std::set<std::string> names;
        for (const Classifier& c : mm_.classifiers) {
            const std::string& name = classifier_name(c);
            const SourceLocation* loc = nullptr;
            if (const auto* cls = std::get_if<MetaClass>(&c))
                loc = &cls->loc;
            if (!is_identifier(name))
                report("bad-identifier", "classifier name '" + name + "' is not a valid identifier", name, "", loc);
            if (!names.insert(name).second)
                report("duplicate-classifier", "duplicate classifier '" + name + "'", name, "", loc);
        }
        for (const Classifier& c : mm_.classifiers)
            if (const auto* cls = std::get_if<MetaClass>(&c))
                check_class(*cls);
        return std::move(diags_);
    }

private:
    void report(std::string code, std::string message, const std::string& cls, const std::string& feature,
                const SourceLocation* loc)
    {
        if (loc && !loc->file.empty()) {
            diags_.push_back(make_error(Phase::metamodel, std::move(code), std::move(message), *loc));
            return;
        }
        std::string path = "/" + mm_.name + "/" + cls;
        if (!feature.empty())
            path += "." + feature;
        diags_.push_back(make_error(Phase::metamodel, std::move(code), std::move(message), ModelPath{path}));
    }

    void check_class(const MetaClass& cls)
    {
        ClassHandle self{&mm_, &cls};
        bool supers_ok = true;
        for (const TypeRef& s : cls.supertypes) {
            const Classifier* target = resolve(mm_, s);
            if (!target) {
                report("unresolved-type", "class '" + cls.name + "' extends unresolved '" + s.qualified() + "'", cls.name, "",
                       &cls.loc);
                supers_ok = false;
            } else if (!std::holds_alternative<MetaClass>(*target)) {
                report("type-kind", "class '" + cls.name + "' extends datatype '" + s.qualified() + "'", cls.name, "",
                       &cls.loc);
                supers_ok = false;
            }
        }
        bool cyclic = false;
        for (ClassHandle s : direct_supertypes(self))
            if (is_subtype(s, self))
                cyclic = true;
        if (cyclic)
            report("inheritance-cycle", "inheritance cycle through class '" + cls.name + "'", cls.name, "", &cls.loc);

        std::set<std::string> seen;
        if (supers_ok && !cyclic)
            for (const FeatureHandle& f : all_features(self))
                if (f.owner.cls != &cls)
                    seen.insert(f.feature->name);
        for (const MetaFeature& f : cls.features) {
            const SourceLocation* loc = f.loc.file.empty() ? &cls.loc : &f.loc;
            if (!is_identifier(f.name))
                report("bad-identifier", "feature name '" + f.name + "' is not a valid identifier", cls.name, f.name, loc);
            if (!seen.insert(f.name).second)
                report("duplicate-feature", "duplicate feature '" + f.name + "' in class '" + cls.name + "'", cls.name,
                       f.name, loc);
            check_feature(cls, f, loc);
        }
    }

    void check_feature(const MetaClass& cls, const MetaFeature& f, const SourceLocation* loc)
    {
        if (f.bounds.lower < 0 || f.bounds.upper == 0 || f.bounds.upper < unbounded ||
            (f.bounds.upper != unbounded && f.bounds.lower > f.bounds.upper))
            report("bad-bounds", "feature '" + cls.name + "." + f.name + "' has invalid bounds", cls.name, f.name, loc);

        const Classifier* type = resolve(mm_, f.type);
        if (!type) {
            report("unresolved-type", "feature '" + cls.name + "." + f.name + "' has unresolved type '" +
                                          f.type.qualified() + "'",
                   cls.name, f.name, loc);
            return;
        }
        if (f.is_attribute()) {
            const auto* dt = std::get_if<MetaDataType>(type);
            if (!dt) {
                report("type-kind", "attribute '" + cls.name + "." + f.name + "' must have a datatype type", cls.name,
                       f.name, loc);
                return;
            }
            if (f.default_value && literal_kind(*f.default_value) != dt->kind)
                report("bad-default", "default value of '" + cls.name + "." + f.name + "' does not match its type",
                       cls.name, f.name, loc);
        } else {
            if (!std::holds_alternative<MetaClass>(*type))
                report("type-kind", "reference '" + cls.name + "." + f.name + "' must have a class type", cls.name,
                       f.name, loc);
            if (f.default_value)
                report("bad-default", "reference '" + cls.name + "." + f.name + "' cannot have a default value",
                       cls.name, f.name, loc);
        }
    }

    const Metamodel& mm_;
    Diagnostics diags_;
};

}  // namespace

Diagnostics validate_metamodel(const Metamodel& mm)
{
    return MetamodelValidator(mm).run();
}

}  // namespace mdsl
