#include "mdsl/namespace_resolver.hpp"

#include <algorithm>
#include <map>

#include "mdsl/settings.hpp"
#include "mdsl/universe.hpp"

namespace mdsl {

namespace {

bool conforms(ClassHandle c, std::string_view name)
{
    if (!c)
        return false;
    if (c.name() == name)
        return true;
    for (ClassHandle s : direct_supertypes(c))
        if (s.cls != c.cls && conforms(s, name))
            return true;
    return false;
}

bool conforms_to_any(ClassHandle c, const std::vector<std::string>& names)
{
    return std::any_of(names.begin(), names.end(), [&](const std::string& n) { return conforms(c, n); });
}

std::optional<std::string> name_of(const ModelObject& obj, const std::string& attribute)
{
    auto fh = find_feature(obj.cls(), attribute);
    if (!fh || !fh->feature->is_attribute() || fh->feature->bounds.many())
        return std::nullopt;
    auto v = obj.attribute(attribute);
    if (!v || !std::holds_alternative<std::string>(*v) || std::get<std::string>(*v).empty())
        return std::nullopt;
    return std::get<std::string>(*v);
}

Diagnostic at_object(std::string code, std::string msg, const ModelObject& obj)
{
    if (obj.location && !obj.location->file.empty())
        return make_error(Phase::resolve, std::move(code), std::move(msg), *obj.location);
    return make_error(Phase::resolve, std::move(code), std::move(msg), ModelPath{object_path(obj)});
}

struct RunState {
    Namespace ns;
    std::shared_ptr<const Model> universe;
};

void collect(ModelObject& obj, std::vector<ModelObject*>& out)
{
    out.push_back(&obj);
    for (const auto& [name, value] : obj.slots())
        if (const auto* kids = std::get_if<ModelObject::Children>(&value))
            for (ModelObject* k : *kids)
                collect(*k, out);
}

Diagnostics merge_duplicates(PrepareContext& pc, const ResolverConfig& cfg)
{
    Diagnostics out;
    if (cfg.merge_classes.empty() || !pc.target.root())
        return out;
    std::map<std::tuple<std::string, std::vector<std::string>, std::string>, ModelObject*> first;
    std::vector<ModelObject*> order;
    collect(*pc.target.root(), order);
    for (ModelObject* o : order) {
        if (std::find(cfg.merge_classes.begin(), cfg.merge_classes.end(), o->class_name()) == cfg.merge_classes.end())
            continue;
        auto name = name_of(*o, cfg.name_attribute);
        if (!name)
            continue;
        auto [it, fresh] = first.emplace(std::make_tuple(o->class_name(), scope_of(*o, cfg), *name), o);
        if (!fresh)
            append(out, pc.merge(*it->second, *o));
    }
    return out;
}

}  // namespace

Result<ResolverConfig> parse_resolver_config(std::string_view text, const std::string& file)
{
    auto settings = parse_settings(text, file, Phase::resolve);
    ResolverConfig cfg;
    Diagnostics diags = settings.take_diagnostics();
    for (const Setting& s : *settings) {
        const bool list = s.key == "define.classes" || s.key == "merge.classes" || s.key == "scope.classes";
        if (s.value.empty() && !list) {
            diags.push_back(make_error(Phase::resolve, "config", "empty value for '" + s.key + "'", s.loc));
            continue;
        }
        if (s.key == "name.attribute") {
            cfg.name_attribute = s.value;
        } else if (s.key == "scope.classes") {
            cfg.scope_classes = split_list(s.value);
        } else if (s.key == "root.scope") {
            cfg.root_scope = s.value;
        } else if (s.key == "define.classes") {
            cfg.define_classes = split_list(s.value);
        } else if (s.key == "merge.classes") {
            cfg.merge_classes = split_list(s.value);
        } else if (s.key == "universe.metamodel") {
            cfg.universe_metamodel = s.value;
        } else if (s.key == "universe.created") {
            std::size_t dot = s.value.find('.');
            if (dot == std::string::npos || dot == 0 || dot + 1 == s.value.size()) {
                diags.push_back(
                    make_error(Phase::resolve, "config", "expected 'Class.attribute' for universe.created", s.loc));
                continue;
            }
            cfg.universe_created_class = s.value.substr(0, dot);
            cfg.universe_created_attribute = s.value.substr(dot + 1);
        } else {
            diags.push_back(make_error(Phase::resolve, "config", "unknown key '" + s.key + "'", s.loc));
        }
    }
    if (has_errors(diags)) {
        sort_diagnostics(diags);
        return diags;
    }
    return cfg;
}

std::string print_resolver_config(const ResolverConfig& cfg)
{
    std::string out = "name.attribute = " + cfg.name_attribute + "\n";
    if (!cfg.scope_classes.empty())
        out += "scope.classes = " + join_list(cfg.scope_classes) + "\n";
    if (!cfg.root_scope.empty())
        out += "root.scope = " + cfg.root_scope + "\n";
    if (cfg.define_classes)
        out += "define.classes =" + (cfg.define_classes->empty() ? "" : " " + join_list(*cfg.define_classes)) + "\n";
    if (!cfg.merge_classes.empty())
        out += "merge.classes = " + join_list(cfg.merge_classes) + "\n";
    if (!cfg.universe_metamodel.empty())
        out += "universe.metamodel = " + cfg.universe_metamodel + "\n";
    if (!cfg.universe_created_class.empty())
        out += "universe.created = " + cfg.universe_created_class + "." + cfg.universe_created_attribute + "\n";
    return out;
}

Diagnostics check_resolver_config(const ResolverConfig& cfg, const Metamodel& target)
{
    Diagnostics out;
    auto bad = [&](const std::string& msg) {
        out.push_back(make_error(Phase::resolve, "config", msg, ModelPath{"/" + target.name}));
    };
    auto check_class = [&](const std::string& key, const std::string& name) {
        if (!resolve_class(target, TypeRef::parse(name)))
            bad(key + " names unknown class '" + name + "'");
    };
    for (const std::string& n : cfg.scope_classes)
        check_class("scope.classes", n);
    for (const std::string& n : cfg.define_classes.value_or(std::vector<std::string>{}))
        check_class("define.classes", n);
    for (const std::string& n : cfg.merge_classes)
        check_class("merge.classes", n);
    if (!cfg.root_scope.empty())
        check_class("root.scope", cfg.root_scope);
    bool named = false;
    for (const Classifier& c : target.classifiers)
        if (const auto* cls = std::get_if<MetaClass>(&c))
            if (auto fh = find_feature(ClassHandle{&target, cls}, cfg.name_attribute); fh && fh->feature->is_attribute())
                named = true;
    if (!named)
        bad("no class has a '" + cfg.name_attribute + "' attribute");
    if (!cfg.universe_created_class.empty()) {
        ClassHandle c = resolve_class(target, TypeRef::parse(cfg.universe_created_class));
        if (!c)
            bad("universe.created names unknown class '" + cfg.universe_created_class + "'");
        else if (auto fh = find_feature(c, cfg.universe_created_attribute); !fh || !fh->feature->is_attribute())
            bad("universe.created names unknown attribute '" + cfg.universe_created_class + "." +
                cfg.universe_created_attribute + "'");
    }
    return out;
}

std::vector<std::string> scope_of(const ModelObject& obj, const ResolverConfig& cfg)
{
    std::vector<std::string> out;
    for (const ModelObject* c = obj.container(); c; c = c->container()) {
        if (!cfg.root_scope.empty() && conforms(c->cls(), cfg.root_scope))
            continue;
        if (!conforms_to_any(c->cls(), cfg.scope_classes))
            continue;
        if (auto n = name_of(*c, cfg.name_attribute))
            out.push_back(*n);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<std::string> universe_created_names(const Model& m, const ResolverConfig& cfg)
{
    std::vector<std::string> out;
    if (m.root() && !cfg.universe_created_class.empty())
        for (const ModelObject* o : preorder(*m.root()))
            if (conforms(o->cls(), cfg.universe_created_class))
                if (auto n = name_of(*o, cfg.universe_created_attribute))
                    out.push_back(*n);
    return out;
}

Namespace build_namespace(const Model& m, const ResolverConfig& cfg, Diagnostics& diags)
{
    Namespace ns;
    if (!m.root())
        return ns;
    for (const ModelObject* o : preorder(*m.root())) {
        if (cfg.define_classes && !conforms_to_any(o->cls(), *cfg.define_classes))
            continue;
        auto name = name_of(*o, cfg.name_attribute);
        if (!name)
            continue;
        std::vector<std::string> scope = scope_of(*o, cfg);
        if (!ns.define(scope, *name, *o)) {
            scope.push_back(*name);
            diags.push_back(at_object("duplicate-definition", "'" + join_name(scope) + "' is already defined", *o));
        }
    }
    return ns;
}

ResolverRegistry namespace_resolvers(const ResolverConfig& cfg, std::shared_ptr<const Metamodel> universe_metamodel)
{
    auto state = std::make_shared<RunState>();
    ResolverRegistry reg;
    reg.set_prepare([cfg, state, universe_metamodel](PrepareContext& pc) {
        Diagnostics out = merge_duplicates(pc, cfg);
        state->universe.reset();
        if (universe_metamodel) {
            state->universe = build_universe(universe_metamodel.get(), universe_created_names(pc.target, cfg));
            pc.target.add_import(std::string(universe_import), state->universe);
        }
        state->ns = build_namespace(pc.target, cfg, out);
        return out;
    });
    reg.set_default([cfg, state](const ResolutionContext& ctx) {
        if (state->universe && ctx.instruction.target_class && ctx.instruction.target_class.is_ecore()) {
            if (const ModelObject* o = universe_lookup(*state->universe, ctx.segments))
                return Resolution::found(*o);
            return Resolution::unresolved("");
        }
        if (const ModelObject* o = state->ns.lookup(scope_of(ctx.target_owner, cfg), ctx.segments))
            return Resolution::found(*o);
        return Resolution::unresolved("");
    });
    return reg;
}

NamerRegistry namespace_namers(const ResolverConfig& cfg)
{
    NamerRegistry reg;
    reg.set_default([cfg](const NamingContext& ctx) {
        Naming out;
        std::vector<std::string> segments;
        if (const Import* imp = ctx.model.import_of(&ctx.referent)) {
            std::vector<std::string> full = universe_path(ctx.referent);
            for (std::size_t k = 1; k <= full.size() && segments.empty(); ++k) {
                std::vector<std::string> tail(full.end() - static_cast<std::ptrdiff_t>(k), full.end());
                if (universe_lookup(*imp->model, tail) == &ctx.referent)
                    segments = std::move(tail);
            }
            if (segments.empty()) {
                out.error = "'" + join_name(full) + "' does not name a unique classifier";
                return out;
            }
        } else {
            auto name = name_of(ctx.referent, cfg.name_attribute);
            if (!name) {
                out.error = "referenced " + ctx.referent.class_name() + " at " + object_path(ctx.referent) +
                            " has no name";
                return out;
            }
            Diagnostics ignored;
            Namespace ns = build_namespace(ctx.model, cfg, ignored);
            std::vector<std::string> full = scope_of(ctx.referent, cfg);
            if (ns.lookup_local(full, *name) != &ctx.referent) {
                out.error = "name '" + *name + "' of " + object_path(ctx.referent) + " is ambiguous";
                return out;
            }
            full.push_back(*name);
            std::vector<std::string> context = scope_of(ctx.owner, cfg);
            for (std::size_t k = 1; k <= full.size() && segments.empty(); ++k) {
                std::vector<std::string> tail(full.end() - static_cast<std::ptrdiff_t>(k), full.end());
                if (ns.lookup(context, tail) == &ctx.referent)
                    segments = std::move(tail);
            }
            if (segments.empty()) {
                out.error = "'" + join_name(full) + "' is shadowed where it is referenced";
                return out;
            }
        }
        if (ctx.textual_class) {
            out.payload = build_payload(ctx.ast, ctx.textual_class, segments);
            if (!out.payload)
                out.error = "class '" + ctx.textual_class.name() + "' cannot hold the name '" + join_name(segments) + "'";
        } else {
            out.text = join_name(segments);
        }
        return out;
    });
    return reg;
}

}  // namespace mdsl
