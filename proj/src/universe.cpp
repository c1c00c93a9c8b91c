#include "mdsl/universe.hpp"

#include "mdsl/emfatic.hpp"

namespace mdsl {

const std::shared_ptr<const Metamodel>& reflect_metamodel()
{
    static const std::shared_ptr<const Metamodel> mm = [] {
        auto parsed = parse_metamodel(
            "class Package {\n"
            "    attr String name;\n"
            "    val Package[*] subpackages;\n"
            "    val ecore::EClassifier[*] classifiers;\n"
            "}\n",
            "reflect");
        return std::make_shared<const Metamodel>(std::move(parsed).value());
    }();
    return mm;
}

std::shared_ptr<const Model> build_universe(const Metamodel* target, const std::vector<std::string>& created)
{
    const Metamodel& ecore = builtin_ecore();
    auto model = std::make_shared<Model>(reflect_metamodel());
    ModelObject& root = model->create("Package");
    root.set_attribute("name", Literal{std::string()});
    model->set_root(root);

    auto add = [&](ModelObject& pkg, const Classifier& c) {
        const char* kind = std::holds_alternative<MetaClass>(c) ? "EClass" : "EDataType";
        ModelObject& obj = model->create(resolve_class(ecore, TypeRef{"", kind}));
        obj.set_attribute("name", Literal{classifier_name(c)});
        pkg.add_child("classifiers", obj);
    };
    if (target)
        for (const Classifier& c : target->classifiers)
            if (std::holds_alternative<MetaClass>(c))
                add(root, c);
    for (const std::string& name : created)
        add(root, Classifier{MetaClass{name, false, {}, {}, {}}});

    ModelObject& ecore_pkg = model->create("Package");
    ecore_pkg.set_attribute("name", Literal{std::string(ecore_package)});
    root.add_child("subpackages", ecore_pkg);
    for (const Classifier& c : ecore.classifiers)
        add(ecore_pkg, c);
    return model;
}

namespace {

const ModelObject* member(const ModelObject& pkg, std::string_view feature, std::string_view name)
{
    for (const ModelObject* o : pkg.children(feature))
        if (o->string_attribute("name") == name)
            return o;
    return nullptr;
}

}  // namespace

const ModelObject* universe_lookup(const Model& universe, const std::vector<std::string>& segments)
{
    const ModelObject* root = universe.root();
    if (!root || segments.empty())
        return nullptr;
    const ModelObject* pkg = root;
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        pkg = member(*pkg, "subpackages", segments[i]);
        if (!pkg)
            return nullptr;
    }
    if (const ModelObject* found = member(*pkg, "classifiers", segments.back()))
        return found;
    if (segments.size() == 1)
        if (const ModelObject* e = member(*root, "subpackages", ecore_package))
            return member(*e, "classifiers", segments.back());
    return nullptr;
}

const ModelObject* universe_lookup(const Model& universe, const TypeRef& ref)
{
    if (ref.package.empty())
        return universe_lookup(universe, std::vector<std::string>{ref.name});
    return universe_lookup(universe, std::vector<std::string>{ref.package, ref.name});
}

std::vector<std::string> universe_path(const ModelObject& obj)
{
    std::vector<std::string> out;
    for (const ModelObject* o = &obj; o; o = o->container()) {
        auto name = o->string_attribute("name");
        if (name && !name->empty())
            out.insert(out.begin(), *name);
    }
    return out;
}

}  // namespace mdsl
