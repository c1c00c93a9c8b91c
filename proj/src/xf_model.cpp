#include "mdsl/xf_model.hpp"

#include "mdsl/emfatic.hpp"
#include "mdsl/universe.hpp"

namespace mdsl::xf {

const std::shared_ptr<const Metamodel>& language_metamodel()
{
    static const std::shared_ptr<const Metamodel> mm = [] {
        auto parsed = parse_metamodel(language_metamodel_source(), "xf");
        return std::make_shared<const Metamodel>(std::move(parsed).value());
    }();
    return mm;
}

std::vector<std::string> created_names(const Transformation& t)
{
    std::vector<std::string> out;
    for (const Action& a : t.actions)
        if (const auto* cc = std::get_if<CreateClass>(&a))
            out.push_back(cc->name);
    return out;
}

namespace {

class ToModel {
public:
    explicit ToModel(std::shared_ptr<const Model> universe)
        : universe_(std::move(universe)), model_(language_metamodel())
    {
        model_.add_import(std::string(universe_import), universe_);
    }

    Result<Model> run(const Transformation& t)
    {
        ModelObject& root = model_.create("Transformation");
        model_.set_root(root);
        for (const Action& a : t.actions)
            root.add_child("actions", std::visit([&](const auto& x) -> ModelObject& { return action(x); }, a));
        if (!diags_.empty())
            return std::move(diags_);
        return std::move(model_);
    }

private:
    void link(ModelObject& owner, std::string_view feature, const TypeRef& ref, const SourceLocation& loc)
    {
        if (const ModelObject* target = universe_lookup(*universe_, ref)) {
            owner.add_reference(feature, *target);
            return;
        }
        diags_.push_back(make_error(Phase::resolve, "unresolved-name",
                                    "'" + ref.qualified() + "' is not in the classifier universe", loc));
    }

    void link(ModelObject& owner, std::string_view feature, const AstRef& ref, const SourceLocation& loc)
    {
        link(owner, feature, ref.name, ref.loc.file.empty() ? loc : ref.loc);
    }

    ModelObject& action(const TranslateReferences& a)
    {
        ModelObject& o = model_.create("TranslateReferences");
        link(o, "modelReferenceType", a.model_reference_type, a.loc);
        link(o, "textualReferenceType", a.textual_reference_type, a.loc);
        o.set_attribute("includeDescendants", Literal{a.include_descendants});
        return o;
    }

    ModelObject& action(const CreateClass& a)
    {
        ModelObject& o = model_.create("CreateClass");
        o.set_attribute("name", Literal{a.name});
        o.set_attribute("abstract", Literal{a.is_abstract});
        for (const AstRef& s : a.superclasses)
            link(o, "superclasses", s, a.loc);
        for (const FeatureSpec& f : a.features) {
            bool attr = f.kind == FeatureKind::attribute;
            ModelObject& fo = model_.create(attr ? "Attribute" : "Reference");
            fo.set_attribute("name", Literal{f.name});
            fo.set_attribute("lowerBound", Literal{std::int64_t{f.bounds.lower}});
            fo.set_attribute("upperBound", Literal{std::int64_t{f.bounds.upper}});
            link(fo, "type", f.type, f.loc);
            if (!attr)
                fo.set_attribute("containment", Literal{f.containment});
            o.add_child("structuralFeatures", fo);
        }
        return o;
    }

    ModelObject& action(const ChangeInheritance& a)
    {
        ModelObject& o = model_.create("ChangeInheritance");
        link(o, "target", a.target, a.loc);
        for (const AstRef& s : a.superclasses)
            link(o, "superclasses", s, a.loc);
        return o;
    }

    ModelObject& action(const SkipClass& a)
    {
        ModelObject& o = model_.create("SkipClass");
        link(o, "target", a.target, a.loc);
        o.set_attribute("includeDescendants", Literal{a.include_descendants});
        return o;
    }

    std::shared_ptr<const Model> universe_;
    Model model_;
    Diagnostics diags_;
};

}  // namespace

Result<Model> to_model(const Transformation& t, std::shared_ptr<const Model> universe)
{
    return ToModel(std::move(universe)).run(t);
}

}  // namespace mdsl::xf
