#include "mdsl/xf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace mdsl::xf {

const ClassRecord* Trace::find_by_image(std::string_view image) const
{
    for (const ClassRecord& r : classes)
        if (r.image == image)
            return &r;
    return nullptr;
}

const ClassRecord* Trace::find_by_prototype(const TypeRef& prototype) const
{
    for (const ClassRecord& r : classes)
        if (r.prototype == prototype)
            return &r;
    return nullptr;
}

const FeatureRecord* Trace::find_feature(std::string_view image_class, std::string_view image_feature) const
{
    for (const FeatureRecord& r : features)
        if (r.image_class == image_class && r.image_feature == image_feature)
            return &r;
    return nullptr;
}

std::vector<ClassMapping> Trace::mappings() const
{
    std::vector<ClassMapping> out;
    for (const ClassRecord& r : classes)
        if (!r.skipped)
            out.push_back(ClassMapping{r.prototype, r.image});
    return out;
}

std::string image_name(const std::string& prototype_name)
{
    return prototype_name + "AS";
}

namespace {

TypeRef canonical_ref(ClassHandle h)
{
    return h.is_ecore() ? TypeRef{std::string(ecore_package), h.name()} : TypeRef{"", h.name()};
}

std::variant<SourceLocation, ModelPath> where(const SourceLocation& loc, std::size_t action)
{
    if (!loc.file.empty())
        return loc;
    return ModelPath{"/actions[" + std::to_string(action) + "]"};
}

Diagnostic error(std::string code, std::string message, std::variant<SourceLocation, ModelPath> at)
{
    Diagnostic d;
    d.phase = Phase::transformation;
    d.code = std::move(code);
    d.message = std::move(message);
    d.location = std::move(at);
    return d;
}

/// Executes the canonical phases over a working copy of the AST metamodel.
class Deriver {
public:
    Deriver(const Metamodel& target, std::string ast_name) : target_(target)
    {
        out_.ast.name = ast_name.empty() ? target.name + "_ast" : std::move(ast_name);
    }

    Result<Derivation> run(const Transformation& t)
    {
        map_defaults();
        if (has_errors(diags_))
            return std::move(diags_);

        std::vector<std::pair<std::size_t, const CreateClass*>> creates;
        std::vector<std::pair<std::size_t, const ChangeInheritance*>> changes;
        std::vector<std::pair<std::size_t, const TranslateReferences*>> translations;
        std::vector<std::pair<std::size_t, const SkipClass*>> skips;
        for (std::size_t i = 0; i < t.actions.size(); ++i) {
            const Action& a = t.actions[i];
            if (auto* x = std::get_if<CreateClass>(&a))
                creates.emplace_back(i, x);
            else if (auto* x = std::get_if<ChangeInheritance>(&a))
                changes.emplace_back(i, x);
            else if (auto* x = std::get_if<TranslateReferences>(&a))
                translations.emplace_back(i, x);
            else
                skips.emplace_back(i, &std::get<SkipClass>(a));
        }
        create_classes(creates);
        change_inheritance(changes);
        translate(translations);
        skip(skips);
        if (has_errors(diags_))
            return std::move(diags_);
        check_removed();
        if (has_errors(diags_))
            return std::move(diags_);
        append(diags_, validate_metamodel(out_.ast));
        if (has_errors(diags_))
            return std::move(diags_);
        return Result<Derivation>(std::move(out_), std::move(diags_));
    }

private:
    MetaClass* ast_class(const std::string& name) { return out_.ast.find_class(name); }

    void map_defaults()
    {
        domain_ = mapping_domain(target_);
        std::set<std::string> proto_names;
        for (ClassHandle h : domain_)
            proto_names.insert(h.name());
        std::map<std::string, TypeRef> taken;
        for (ClassHandle h : domain_) {
            std::string img = image_name(h.name());
            TypeRef proto = canonical_ref(h);
            ModelPath at{"/" + target_.name + "/" + h.name()};
            if (proto_names.count(img)) {
                diags_.push_back(error("name-collision",
                                       "image name '" + img + "' of '" + proto.qualified() +
                                           "' collides with a class of the same name",
                                       at));
                continue;
            }
            auto [it, fresh] = taken.emplace(img, proto);
            if (!fresh) {
                diags_.push_back(error("name-collision",
                                       "'" + proto.qualified() + "' and '" + it->second.qualified() +
                                           "' both map to image '" + img + "'",
                                       at));
                continue;
            }
            images_[h.cls] = img;
        }
        if (has_errors(diags_))
            return;

        for (ClassHandle h : domain_) {
            MetaClass img;
            img.name = images_.at(h.cls);
            img.is_abstract = h.cls->is_abstract;
            for (ClassHandle s : direct_supertypes(h))
                img.supertypes.push_back(TypeRef{"", images_.at(s.cls)});
            TypeRef proto = canonical_ref(h);
            out_.trace.classes.push_back(ClassRecord{proto, img.name, false});
            for (const MetaFeature& f : h.cls->features) {
                MetaFeature copy = f;
                copy.loc = {};
                if (f.is_reference()) {
                    ClassHandle type = resolve_class(*h.mm, f.type);
                    copy.type = TypeRef{"", images_.at(type.cls)};
                } else {
                    DataTypeHandle dt = resolve_datatype(*h.mm, f.type);
                    copy.type = TypeRef{std::string(ecore_package), dt.type->name};
                }
                img.features.push_back(std::move(copy));
                out_.trace.features.push_back(FeatureRecord{proto, f.name, img.name, f.name, false, ""});
            }
            out_.ast.classifiers.push_back(std::move(img));
        }
    }

    /// Name of the AST classifier an AstRef designates, or nullopt after reporting.
    std::optional<TypeRef> ast_type(const AstRef& ref, std::size_t action, const SourceLocation& loc)
    {
        switch (ref.kind) {
        case AstRef::Kind::image: {
            ClassHandle proto = resolve_class(target_, ref.name);
            if (proto) {
                auto it = images_.find(proto.cls);
                if (it != images_.end())
                    return TypeRef{"", it->second};
            }
            diags_.push_back(error("unresolved-name", "'" + ref.name.qualified() + "' has no image", where(loc, action)));
            return std::nullopt;
        }
        case AstRef::Kind::created:
            if (!created_.count(ref.name.name)) {
                diags_.push_back(error("unresolved-name", "no created class '" + ref.name.name + "'", where(loc, action)));
                return std::nullopt;
            }
            return TypeRef{"", ref.name.name};
        case AstRef::Kind::datatype:
            if (!builtin_ecore().find_datatype(ref.name.name)) {
                diags_.push_back(error("unresolved-name", "no datatype '" + ref.name.name + "'", where(loc, action)));
                return std::nullopt;
            }
            return TypeRef{std::string(ecore_package), ref.name.name};
        }
        return std::nullopt;
    }

    std::optional<TypeRef> class_type(const AstRef& ref, std::size_t action, const SourceLocation& loc)
    {
        if (ref.kind == AstRef::Kind::datatype) {
            diags_.push_back(error("type-kind", "'" + ref.name.name + "' is a datatype, not a class", where(loc, action)));
            return std::nullopt;
        }
        return ast_type(ref, action, loc);
    }

    void create_classes(const std::vector<std::pair<std::size_t, const CreateClass*>>& creates)
    {
        std::vector<std::pair<std::size_t, const CreateClass*>> accepted;
        for (auto [i, cc] : creates) {
            if (out_.ast.find(cc->name) || builtin_ecore().find_datatype(cc->name)) {
                diags_.push_back(error("name-collision", "created class '" + cc->name + "' collides with an existing name",
                                       where(cc->loc, i)));
                continue;
            }
            MetaClass cls;
            cls.name = cc->name;
            cls.is_abstract = cc->is_abstract;
            cls.loc = cc->loc;
            out_.ast.classifiers.push_back(std::move(cls));
            created_.insert(cc->name);
            out_.trace.created.push_back(cc->name);
            accepted.emplace_back(i, cc);
        }
        // Bodies are resolved once every created name is known, so creates may refer to each other.
        for (auto [i, cc] : accepted) {
            std::vector<TypeRef> supers;
            for (const AstRef& s : cc->superclasses)
                if (auto ty = class_type(s, i, s.loc.file.empty() ? cc->loc : s.loc))
                    supers.push_back(*ty);
            std::vector<MetaFeature> features;
            for (const FeatureSpec& spec : cc->features) {
                const SourceLocation& loc = spec.loc.file.empty() ? cc->loc : spec.loc;
                auto ty = ast_type(spec.type, i, loc);
                if (!ty)
                    continue;
                MetaFeature f;
                f.name = spec.name;
                f.kind = spec.kind;
                f.type = *ty;
                f.bounds = spec.bounds;
                f.containment = spec.kind == FeatureKind::reference && spec.containment;
                f.default_value = spec.default_value;
                f.loc = spec.loc;
                features.push_back(std::move(f));
            }
            MetaClass* cls = ast_class(cc->name);
            cls->supertypes = std::move(supers);
            cls->features = std::move(features);
        }
    }

    void change_inheritance(const std::vector<std::pair<std::size_t, const ChangeInheritance*>>& changes)
    {
        std::map<std::string, std::pair<std::vector<TypeRef>, std::size_t>> planned;
        for (auto [i, ci] : changes) {
            auto target = class_type(ci->target, i, ci->loc);
            std::vector<TypeRef> supers;
            bool ok = target.has_value();
            for (const AstRef& s : ci->superclasses) {
                auto ty = class_type(s, i, ci->loc);
                ok = ok && ty.has_value();
                if (ty)
                    supers.push_back(*ty);
            }
            if (!ok)
                continue;
            auto [it, fresh] = planned.emplace(target->name, std::pair{supers, i});
            if (!fresh && it->second.first != supers)
                diags_.push_back(error("inheritance-conflict",
                                       "conflicting superclass lists for '" + target->name + "' (see action " +
                                           std::to_string(it->second.second) + ")",
                                       where(ci->loc, i)));
        }
        for (auto& [name, plan] : planned)
            ast_class(name)->supertypes = plan.first;
    }

    struct Translation {
        TypeRef type;
        bool datatype = false;
        std::size_t action = 0;
    };

    void translate(const std::vector<std::pair<std::size_t, const TranslateReferences*>>& translations)
    {
        std::map<std::pair<std::string, std::string>, Translation> assigned;
        for (auto [i, tr] : translations) {
            ClassHandle proto = resolve_class(target_, tr->model_reference_type);
            if (!proto) {
                diags_.push_back(error("unresolved-name", "unknown class '" + tr->model_reference_type.qualified() + "'",
                                       where(tr->loc, i)));
                continue;
            }
            auto textual = ast_type(tr->textual_reference_type, i, tr->loc);
            if (!textual)
                continue;
            std::set<std::string> matched;
            for (ClassHandle h : domain_)
                if (h == proto || (tr->include_descendants && is_subtype(h, proto)))
                    matched.insert(images_.at(h.cls));
            Translation tl{*textual, tr->textual_reference_type.kind == AstRef::Kind::datatype, i};
            for (const Classifier& c : out_.ast.classifiers) {
                const auto* cls = std::get_if<MetaClass>(&c);
                if (!cls)
                    continue;
                for (const MetaFeature& f : cls->features) {
                    if (!f.is_cross() || !f.type.package.empty() || !matched.count(f.type.name))
                        continue;
                    auto [it, fresh] = assigned.emplace(std::pair{cls->name, f.name}, tl);
                    if (!fresh && it->second.type != tl.type)
                        diags_.push_back(error("translation-conflict",
                                               "'" + cls->name + "." + f.name + "' is translated to both '" +
                                                   it->second.type.name + "' and '" + tl.type.name + "'",
                                               where(tr->loc, i)));
                }
            }
        }
        for (const auto& [key, tl] : assigned) {
            MetaFeature* f = ast_class(key.first)->find_feature(key.second);
            f->type = tl.type;
            if (tl.datatype) {
                f->kind = FeatureKind::attribute;
                f->containment = false;
            } else {
                f->containment = true;
            }
            for (FeatureRecord& r : out_.trace.features)
                if (r.image_class == key.first && r.image_feature == key.second) {
                    r.translated = true;
                    r.textual_type = tl.type.name;
                }
        }
    }

    void skip(const std::vector<std::pair<std::size_t, const SkipClass*>>& skips)
    {
        for (auto [i, sc] : skips) {
            ClassHandle proto = resolve_class(target_, sc->target);
            if (!proto) {
                diags_.push_back(
                    error("unresolved-name", "unknown class '" + sc->target.qualified() + "'", where(sc->loc, i)));
                continue;
            }
            for (ClassHandle h : domain_)
                if (h == proto || (sc->include_descendants && is_subtype(h, proto)))
                    removed_.insert(images_.at(h.cls));
        }
        auto& cs = out_.ast.classifiers;
        cs.erase(std::remove_if(cs.begin(), cs.end(),
                                [&](const Classifier& c) { return removed_.count(classifier_name(c)) != 0; }),
                 cs.end());
        for (ClassRecord& r : out_.trace.classes)
            if (removed_.count(r.image))
                r.skipped = true;
        auto& fs = out_.trace.features;
        fs.erase(std::remove_if(fs.begin(), fs.end(),
                                [&](const FeatureRecord& r) { return removed_.count(r.image_class) != 0; }),
                 fs.end());
    }

    void check_removed()
    {
        const std::string base = "/" + out_.ast.name + "/";
        for (const Classifier& c : out_.ast.classifiers) {
            const auto* cls = std::get_if<MetaClass>(&c);
            if (!cls)
                continue;
            for (const TypeRef& s : cls->supertypes)
                if (s.package.empty() && removed_.count(s.name))
                    diags_.push_back(error("removed-supertype",
                                           "class '" + cls->name + "' extends removed image '" + s.name + "'",
                                           ModelPath{base + cls->name}));
            for (const MetaFeature& f : cls->features)
                if (f.is_reference() && f.type.package.empty() && removed_.count(f.type.name))
                    diags_.push_back(error("removed-type",
                                           "feature '" + cls->name + "." + f.name + "' still refers to removed image '" +
                                               f.type.name + "'",
                                           ModelPath{base + cls->name + "." + f.name}));
        }
    }

    const Metamodel& target_;
    std::vector<ClassHandle> domain_;
    std::map<const MetaClass*, std::string> images_;
    std::set<std::string> created_;
    std::set<std::string> removed_;
    Derivation out_;
    Diagnostics diags_;
};

}  // namespace

std::vector<ClassHandle> mapping_domain(const Metamodel& target)
{
    std::vector<ClassHandle> out;
    std::set<const MetaClass*> reached_ecore;
    std::vector<ClassHandle> work;
    for (const Classifier& c : target.classifiers)
        if (const auto* cls = std::get_if<MetaClass>(&c)) {
            out.push_back(ClassHandle{&target, cls});
            work.push_back(out.back());
        }
    while (!work.empty()) {
        ClassHandle h = work.back();
        work.pop_back();
        std::vector<ClassHandle> next = direct_supertypes(h);
        for (const MetaFeature& f : h.cls->features)
            if (f.is_reference())
                if (ClassHandle t = resolve_class(*h.mm, f.type))
                    next.push_back(t);
        for (ClassHandle n : next)
            if (n.is_ecore() && &target != &builtin_ecore() && reached_ecore.insert(n.cls).second)
                work.push_back(n);
    }
    for (const Classifier& c : builtin_ecore().classifiers)
        if (const auto* cls = std::get_if<MetaClass>(&c))
            if (reached_ecore.count(cls))
                out.push_back(ClassHandle{&builtin_ecore(), cls});
    return out;
}

Result<Derivation> default_mapping(const Metamodel& target, const std::string& ast_name)
{
    return Deriver(target, ast_name).run(Transformation{});
}

Result<Derivation> derive_ast_metamodel(const Metamodel& target, const Transformation& t, const std::string& ast_name)
{
    return Deriver(target, ast_name).run(t);
}

Result<bool> action_permutation_check(const Metamodel& target, const Transformation& t, std::size_t samples,
                                      std::size_t exhaustive_limit, std::uint32_t seed)
{
    auto base = derive_ast_metamodel(target, t);
    if (!base)
        return base.take_diagnostics();

    std::vector<std::size_t> order(t.actions.size());
    std::iota(order.begin(), order.end(), 0);
    auto same = [&](const std::vector<std::size_t>& perm) {
        Transformation p;
        for (std::size_t i : perm)
            p.actions.push_back(t.actions[i]);
        auto d = derive_ast_metamodel(target, p);
        return d.ok() && equivalent(d->ast, base->ast);
    };

    if (order.size() <= exhaustive_limit) {
        do {
            if (!same(order))
                return false;
        } while (std::next_permutation(order.begin(), order.end()));
        return true;
    }
    std::mt19937 rng(seed);
    for (std::size_t n = 0; n < samples; ++n) {
        std::shuffle(order.begin(), order.end(), rng);
        if (!same(order))
            return false;
    }
    return true;
}

std::string write_trace(const Trace& trace)
{
    std::ostringstream out;
    for (const ClassRecord& c : trace.classes) {
        out << "class " << c.prototype.qualified() << " -> " << c.image << (c.skipped ? " skipped" : "") << '\n';
        for (const FeatureRecord& f : trace.features) {
            if (f.prototype_class != c.prototype)
                continue;
            out << "feature " << f.prototype_class.qualified() << '.' << f.feature << " -> " << f.image_class << '.'
                << f.image_feature << ' ' << (f.translated ? "translated:" + f.textual_type : "copied") << '\n';
        }
    }
    for (const std::string& c : trace.created)
        out << "created " << c << '\n';
    return out.str();
}

Result<Trace> read_trace(std::string_view text, const std::string& file)
{
    Trace trace;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& msg) {
        return Diagnostics{make_error(Phase::transformation, "syntax", msg, SourceLocation{file, line_no, 1})};
    };
    auto split_dot = [](const std::string& s) -> std::optional<std::pair<std::string, std::string>> {
        auto dot = s.rfind('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == s.size())
            return std::nullopt;
        return std::pair{s.substr(0, dot), s.substr(dot + 1)};
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream words(line);
        std::vector<std::string> w;
        for (std::string x; words >> x;)
            w.push_back(x);
        if (w.empty())
            continue;
        if (w[0] == "class" && (w.size() == 4 || (w.size() == 5 && w[4] == "skipped")) && w[2] == "->") {
            trace.classes.push_back(ClassRecord{TypeRef::parse(w[1]), w[3], w.size() == 5});
        } else if (w[0] == "feature" && w.size() == 5 && w[2] == "->") {
            auto proto = split_dot(w[1]);
            auto image = split_dot(w[3]);
            if (!proto || !image)
                return fail("malformed feature record");
            FeatureRecord r{TypeRef::parse(proto->first), proto->second, image->first, image->second, false, ""};
            if (w[4].rfind("translated:", 0) == 0) {
                r.translated = true;
                r.textual_type = w[4].substr(11);
            } else if (w[4] != "copied") {
                return fail("expected 'copied' or 'translated:<type>'");
            }
            trace.features.push_back(std::move(r));
        } else if (w[0] == "created" && w.size() == 2) {
            trace.created.push_back(w[1]);
        } else {
            return fail("unrecognized trace record");
        }
    }
    return trace;
}

std::string_view language_metamodel_source()
{
    static constexpr std::string_view source = R"(class Transformation {
    val Action[*] actions;
}

abstract class Action {
}

class ClassMapping extends Action {
    ref EClass prototype;
    ref EClass image;
}

class TranslateReferences extends Action {
    ref EClass modelReferenceType;
    ref EClassifier textualReferenceType;
    attr boolean includeDescendants;
}

class CreateClass extends Action {
    attr String name;
    attr boolean abstract;
    ref EClass[*] superclasses;
    val StructuralFeature[*] structuralFeatures;
}

abstract class StructuralFeature {
    attr String name;
    attr int lowerBound;
    attr int upperBound = 1;
}

class Attribute extends StructuralFeature {
    ref EDataType type;
}

class Reference extends StructuralFeature {
    ref EClass type;
    attr boolean containment;
}

class ChangeInheritance extends Action {
    ref EClass target;
    ref EClass[*] superclasses;
}

class SkipClass extends Action {
    ref EClass target;
    attr boolean includeDescendants;
}
)";
    return source;
}

}  // namespace mdsl::xf
