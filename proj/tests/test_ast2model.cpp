#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "mdsl/ast2model.hpp"
#include "mdsl/model_io.hpp"
#include "mdsl/namespace.hpp"
#include "mdsl/namespace_resolver.hpp"
#include "mdsl/pipeline.hpp"
#include "mdsl/universe.hpp"
#include "mdsl/xf_model.hpp"
#include "support.hpp"

using namespace mdsl;
using testing_support::mm;
using testing_support::read_file;
using testing_support::sample;
using testing_support::show;

namespace {

Language load(const LanguageFiles& files)
{
    auto lang = load_language(files);
    if (!lang)
        throw std::runtime_error(show(lang.diagnostics()));
    return std::move(lang).value();
}

const Language& selfhost()
{
    static const Language lang = load({sample("selfhost/xf.mm"), sample("selfhost/xf.xf"), sample("selfhost/xf.gr"),
                                       sample("selfhost/ns.cfg")});
    return lang;
}

const Language& css()
{
    static const Language lang =
        load({sample("css/css.mm"), "", sample("css/css.gr"), sample("css/ns.cfg")});
    return lang;
}

// A language from inline sources; grammar and resolver config are optional.
Language inline_language(const std::string& target, const std::string& script, const std::string& gr,
                         const std::string& cfg = "")
{
    Language lang;
    lang.target = mm(target, "t");
    auto t = xf::parse_transformation(script, *lang.target, "t.xf");
    if (!t)
        throw std::runtime_error(show(t.diagnostics()));
    lang.transformation = *t;
    auto d = xf::derive_ast_metamodel(*lang.target, *t);
    if (!d)
        throw std::runtime_error(show(d.diagnostics()));
    lang.ast = std::make_shared<const Metamodel>(d->ast);
    lang.trace = d->trace;
    if (!gr.empty()) {
        auto g = grammar::parse_grammar(gr, lang.ast, "t.gr");
        if (!g)
            throw std::runtime_error(show(g.diagnostics()));
        lang.grammar = std::move(g).value();
    }
    auto c = parse_resolver_config(cfg, "ns.cfg");
    if (!c)
        throw std::runtime_error(show(c.diagnostics()));
    lang.resolver.config = *c;
    auto plan = build_plan(lang.trace, lang.target, lang.ast);
    if (!plan)
        throw std::runtime_error(show(plan.diagnostics()));
    lang.plan = std::move(plan).value();
    return lang;
}

const FeatureInstruction* instruction(const TransformPlan& p, const std::string& image, const std::string& feature)
{
    const ClassPlan* cp = p.find_image(image);
    if (!cp)
        return nullptr;
    for (const FeatureInstruction& fi : cp->features)
        if (fi.image_feature == feature)
            return &fi;
    return nullptr;
}

Model direct_selfhost(const std::string& script)
{
    const Language& lang = selfhost();
    auto t = xf::parse_transformation(script, *lang.target);
    if (!t)
        throw std::runtime_error(show(t.diagnostics()));
    auto m = xf::to_model(*t, build_universe(lang.target.get(), xf::created_names(*t)));
    if (!m)
        throw std::runtime_error(show(m.diagnostics()));
    return std::move(m).value();
}

std::size_t count_class(const Model& m, const std::string& cls)
{
    std::size_t n = 0;
    for (const ModelObject* o : preorder(*m.root()))
        n += o->class_name() == cls;
    return n;
}

}  // namespace

TEST(Plan, SelfHostingInstructions)
{
    const TransformPlan& p = selfhost().plan;
    const auto* name = instruction(p, "CreateClassAS", "name");
    ASSERT_NE(name, nullptr);
    EXPECT_EQ(name->kind, FeatureInstruction::Kind::copy_attribute);
    const auto* feats = instruction(p, "CreateClassAS", "structuralFeatures");
    ASSERT_NE(feats, nullptr);
    EXPECT_EQ(feats->kind, FeatureInstruction::Kind::map_containment);
    const auto* mrt = instruction(p, "TranslateReferencesAS", "modelReferenceType");
    ASSERT_NE(mrt, nullptr);
    EXPECT_EQ(mrt->kind, FeatureInstruction::Kind::resolve_cross);
    EXPECT_EQ(mrt->textual_type, "QualifiedName");
    ASSERT_TRUE(mrt->target_class);
    EXPECT_EQ(mrt->target_class.name(), "EClass");
    EXPECT_TRUE(mrt->target_class.is_ecore());

    EXPECT_EQ(p.consume_only, std::vector<std::string>{"QualifiedName"});
    std::vector<std::string> manual;
    for (const TypeRef& r : p.construct_manually)
        manual.push_back(r.qualified());
    EXPECT_NE(std::find(manual.begin(), manual.end(), "ClassMapping"), manual.end());
    EXPECT_NE(std::find(manual.begin(), manual.end(), "ecore::EClass"), manual.end());
    EXPECT_EQ(p.find_image("ClassMappingAS"), nullptr);
}

TEST(Plan, OneInstructionPerImageFeature)
{
    for (const Language* lang : {&selfhost(), &css()}) {
        for (const ClassPlan& cp : lang->plan.classes) {
            ClassHandle img = resolve_class(*lang->ast, TypeRef{"", cp.image});
            ASSERT_TRUE(img);
            auto all = all_features(img);
            ASSERT_EQ(cp.features.size(), all.size()) << cp.image;
            for (std::size_t i = 0; i < all.size(); ++i)
                EXPECT_EQ(cp.features[i].image_feature, all[i].feature->name);
            for (const FeatureInstruction& fi : cp.features) {
                if (fi.kind != FeatureInstruction::Kind::payload) {
                    EXPECT_TRUE(find_feature(cp.prototype, fi.target_feature)) << cp.image << "." << fi.image_feature;
                }
            }
        }
    }
}

TEST(Plan, EmptyTraceEmptyPlan)
{
    auto target = mm("class A { }");
    auto ast = std::make_shared<const Metamodel>(Metamodel{"ast", {}});
    auto p = build_plan(xf::Trace{}, target, ast);
    ASSERT_TRUE(p) << show(p.diagnostics());
    EXPECT_TRUE(p->classes.empty());
    EXPECT_TRUE(p->consume_only.empty());
    EXPECT_TRUE(p->construct_manually.empty());
}

TEST(Plan, StaleTraceRejected)
{
    const Language& lang = css();
    xf::Trace trace = lang.trace;
    trace.features.push_back(xf::FeatureRecord{TypeRef{"", "Property"}, "name", "PropertyAS", "colour", false, ""});
    auto p = build_plan(trace, lang.target, lang.ast);
    ASSERT_FALSE(p);
    ASSERT_EQ(p.diagnostics().size(), 1u) << show(p.diagnostics());
    EXPECT_EQ(p.diagnostics()[0].code, "stale-trace");
    EXPECT_NE(p.diagnostics()[0].message.find("PropertyAS.colour"), std::string::npos);

    auto other = mm("class StyleSheet { }", "css");
    auto q = build_plan(lang.trace, other, lang.ast);
    ASSERT_FALSE(q);
    EXPECT_EQ(q.diagnostics()[0].code, "stale-trace");
}

TEST(NamespaceTest, DefineThenResolve)
{
    Model m(mm("class X { attr String name; }"));
    ModelObject& x = m.create("X");
    Namespace ns;
    ASSERT_TRUE(ns.define({"a", "b"}, "x", x));
    auto stub = ns.resolve({"a", "b"}, {"x"});
    EXPECT_EQ(stub->object, &x);
    EXPECT_EQ(ns.lookup({"a", "b", "c"}, {"x"}), &x);
    EXPECT_EQ(ns.lookup({}, {"a", "b", "x"}), &x);
    EXPECT_EQ(ns.lookup({"a"}, {"b", "x"}), &x);
    EXPECT_EQ(ns.lookup({}, {"x"}), nullptr);
    EXPECT_EQ(ns.pending(), 0u);
}

TEST(NamespaceTest, SeededWithEcore)
{
    auto universe = build_universe(nullptr, {});
    Namespace ns;
    for (const ModelObject* c : universe_lookup(*universe, TypeRef{"ecore", "EClass"})->container()->children("classifiers"))
        ns.define({"ecore"}, *c->string_attribute("name"), *c);
    auto stub = ns.resolve({}, {"ecore", "EClassifier"});
    ASSERT_NE(stub->object, nullptr);
    EXPECT_EQ(stub->object, universe_lookup(*universe, TypeRef{"ecore", "EClassifier"}));
    EXPECT_EQ(stub->object->class_name(), "EClass");
}

TEST(NamespaceTest, ForwardReferenceStub)
{
    Model m(mm("class X { }"));
    ModelObject& x = m.create("X");
    Namespace ns;
    auto stub = ns.resolve({"p"}, {"q", "x"}, SourceLocation{"f", 3, 7});
    EXPECT_EQ(stub->object, nullptr);
    EXPECT_EQ(ns.pending(), 1u);
    ns.define({"q"}, "x", x);
    EXPECT_EQ(stub->object, &x);
    EXPECT_TRUE(ns.finalize().empty());
}

TEST(NamespaceTest, UnresolvedAndDuplicate)
{
    Model m(mm("class X { }"));
    ModelObject& x = m.create("X");
    ModelObject& y = m.create("X");
    Namespace ns;
    EXPECT_TRUE(ns.define({}, "x", x));
    EXPECT_FALSE(ns.define({}, "x", y));
    EXPECT_EQ(ns.lookup({}, {"x"}), &x);
    ns.resolve({}, {"a", "b"}, SourceLocation{"f", 2, 4});
    Diagnostics d = ns.finalize();
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].phase, Phase::resolve);
    EXPECT_EQ(d[0].code, "unresolved-name");
    EXPECT_EQ(d[0].message, "unresolved reference 'a::b'");
    EXPECT_EQ(d[0].source()->line, 2);
}

TEST(NamespaceTest, InnerBindingShadows)
{
    Model m(mm("class X { }"));
    ModelObject& outer = m.create("X");
    ModelObject& inner = m.create("X");
    ModelObject& deep = m.create("X");
    Namespace ns;
    ns.define({}, "a", outer);
    ns.define({"p"}, "a", inner);
    ns.define({"a"}, "b", deep);
    EXPECT_EQ(ns.lookup({"p"}, {"a"}), &inner);
    EXPECT_EQ(ns.lookup({}, {"a"}), &outer);
    // The first segment binds innermost; the rest is not retried further out.
    EXPECT_EQ(ns.lookup({"p"}, {"a", "b"}), nullptr);
    EXPECT_EQ(ns.lookup({}, {"a", "b"}), &deep);
}

TEST(NamespaceTest, SplitAndJoin)
{
    EXPECT_EQ(split_name("a::b::c"), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(split_name("a"), std::vector<std::string>{"a"});
    EXPECT_EQ(join_name({"ecore", "EClass"}), "ecore::EClass");
    EXPECT_EQ(join_name({}), "");
}

TEST(ResolverConfigTest, ParseAndPrint)
{
    auto c = parse_resolver_config("# x\nname.attribute = id\nscope.classes = A, B\nroot.scope = R\n"
                                   "merge.classes = B\nuniverse.created = A.id\n");
    ASSERT_TRUE(c) << show(c.diagnostics());
    EXPECT_EQ(c->name_attribute, "id");
    EXPECT_EQ(c->scope_classes, (std::vector<std::string>{"A", "B"}));
    EXPECT_EQ(c->universe_created_class, "A");
    auto again = parse_resolver_config(print_resolver_config(*c));
    ASSERT_TRUE(again);
    EXPECT_EQ(print_resolver_config(*again), print_resolver_config(*c));

    auto bad = parse_resolver_config("colour = red\nnoequals\n", "ns.cfg");
    ASSERT_FALSE(bad);
    ASSERT_EQ(bad.diagnostics().size(), 2u);
    EXPECT_EQ(bad.diagnostics()[1].source()->line, 2);
}

TEST(ResolverConfigTest, NamesMustExist)
{
    auto target = mm("class A { attr String name; }");
    ResolverConfig cfg;
    cfg.scope_classes = {"A", "Nope"};
    Diagnostics d = check_resolver_config(cfg, *target);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].code, "config");
    cfg.scope_classes = {"A"};
    cfg.name_attribute = "title";
    EXPECT_EQ(check_resolver_config(cfg, *target).size(), 1u);
}

TEST(Transform, SelfHostingEquivalence)
{
    const Language& lang = selfhost();
    std::string script = read_file(sample("selfhost/xf.xf"));
    TransformOutput out = text_to_model(lang, script, "xf.xf");
    ASSERT_TRUE(out.diagnostics.empty()) << show(out.diagnostics);
    Model direct = direct_selfhost(script);
    EXPECT_TRUE(model_equals(out.model, direct)) << dump_model(out.model) << "\n---\n" << dump_model(direct);

    EXPECT_EQ(count_class(out.model, "CreateClass"), 1u);
    EXPECT_EQ(count_class(out.model, "TranslateReferences"), 1u);
    EXPECT_EQ(count_class(out.model, "SkipClass"), 2u);
    const ModelObject* tr = out.model.root()->children("actions")[1];
    ASSERT_EQ(tr->class_name(), "TranslateReferences");
    EXPECT_TRUE(tr->bool_attribute("includeDescendants"));
    const ModelObject* ref = tr->reference("modelReferenceType");
    ASSERT_NE(ref, nullptr);
    EXPECT_EQ(universe_path(*ref), (std::vector<std::string>{"ecore", "EClassifier"}));
    EXPECT_FALSE(out.model.root()->children("actions")[3]->bool_attribute("includeDescendants"));
    EXPECT_TRUE(validate_model(out.model).empty());
}

TEST(Transform, SelfHostingKeepsLocations)
{
    TransformOutput out = text_to_model(selfhost(), "skip ClassMapping;\n  skip Action;\n", "s.xf");
    ASSERT_TRUE(out.diagnostics.empty()) << show(out.diagnostics);
    const ModelObject* second = out.model.root()->children("actions")[1];
    ASSERT_TRUE(second->location);
    EXPECT_EQ(second->location->line, 2);
    EXPECT_EQ(second->location->column, 3);
}

TEST(Transform, DanglingNameReported)
{
    TransformOutput out = text_to_model(selfhost(), "skip Action;\nskip  Missing;\n", "bad.xf");
    ASSERT_EQ(out.diagnostics.size(), 1u) << show(out.diagnostics);
    const Diagnostic& d = out.diagnostics[0];
    EXPECT_EQ(d.phase, Phase::resolve);
    EXPECT_EQ(d.code, "unresolved-name");
    EXPECT_EQ(d.message, "unresolved reference 'Missing'");
    ASSERT_NE(d.source(), nullptr);
    EXPECT_EQ(d.source()->file, "bad.xf");
    EXPECT_EQ(d.source()->line, 2);
    EXPECT_EQ(d.source()->column, 7);

    TransformOutput q = text_to_model(selfhost(), "refer img(ecore::Nothing) as String;", "q.xf");
    ASSERT_EQ(q.diagnostics.size(), 1u) << show(q.diagnostics);
    EXPECT_EQ(q.diagnostics[0].message, "unresolved reference 'ecore::Nothing'");
    EXPECT_EQ(q.diagnostics[0].source()->column, 11);
}

TEST(Transform, WrongKindOfClassifier)
{
    // modelReferenceType wants an EClass; String is an EDataType.
    TransformOutput out = text_to_model(selfhost(), "refer img(String) as String;", "k.xf");
    ASSERT_EQ(out.diagnostics.size(), 1u) << show(out.diagnostics);
    EXPECT_EQ(out.diagnostics[0].code, "type-kind");
}

TEST(Transform, CssSelectorsMerge)
{
    const Language& lang = css();
    TransformOutput grouped = text_to_model(lang, read_file(sample("css/grouped.css")), "grouped.css");
    TransformOutput split = text_to_model(lang, read_file(sample("css/split.css")), "split.css");
    ASSERT_TRUE(grouped.diagnostics.empty()) << show(grouped.diagnostics);
    ASSERT_TRUE(split.diagnostics.empty()) << show(split.diagnostics);
    EXPECT_TRUE(model_equals(grouped.model, split.model)) << dump_model(split.model);
    const auto& selectors = split.model.root()->children("selectors");
    ASSERT_EQ(selectors.size(), 1u);
    EXPECT_EQ(selectors[0]->class_name(), "ClassSelector");
    ASSERT_EQ(selectors[0]->children("properties").size(), 2u);
    EXPECT_EQ(selectors[0]->children("properties")[1]->string_attribute("name"), "border-color");
    EXPECT_EQ(count_class(split.model, "ClassSelector"), 1u);
}

TEST(Transform, CssDistinctSelectorsStay)
{
    TransformOutput out = text_to_model(css(), ".a { x: 1px }\n#a { y: 2px }\n.b { }\n.a { z: red }\n", "m.css");
    ASSERT_TRUE(out.diagnostics.empty()) << show(out.diagnostics);
    const auto& selectors = out.model.root()->children("selectors");
    ASSERT_EQ(selectors.size(), 3u);
    EXPECT_EQ(selectors[0]->children("properties").size(), 2u);
}

TEST(Transform, MergeConflictReported)
{
    Language lang = inline_language("class Doc { val Entry[*] entries; }\nclass Entry { attr String name; attr int size; }",
                                    "", "DocAS: (entries+=EntryAS)*;\nEntryAS: name=ID (\"=\" size=INT)?;",
                                    "merge.classes = Entry");
    TransformOutput same = text_to_model(lang, "a = 1 b a = 1 a", "e");
    EXPECT_TRUE(same.diagnostics.empty()) << show(same.diagnostics);
    EXPECT_EQ(same.model.root()->children("entries").size(), 2u);
    TransformOutput clash = text_to_model(lang, "a = 1 a = 2", "e");
    ASSERT_EQ(clash.diagnostics.size(), 1u) << show(clash.diagnostics);
    EXPECT_EQ(clash.diagnostics[0].code, "merge-conflict");
}

TEST(Transform, ScopedNamesAndForwardReferences)
{
    Language lang = inline_language(
        "class Unit { val Pkg[*] pkgs; }\n"
        "class Pkg { attr String name; val Type[*] types; }\n"
        "class Type { attr String name; ref Type[*] uses; }\n",
        "refer img(Type) as String;",
        "UnitAS: (pkgs+=PkgAS)*;\n"
        "PkgAS: \"package\" name=ID \"{\" (types+=TypeAS)* \"}\";\n"
        "TypeAS: \"type\" name=ID (\"uses\" uses+=STRING (\",\" uses+=STRING)*)? \";\";\n",
        "scope.classes = Pkg\nroot.scope = Unit\n");
    TransformOutput out = text_to_model(lang,
                                        "package a { type T uses \"U\", \"b::T\"; type U; }\n"
                                        "package b { type T uses \"a::T\"; }\n",
                                        "s.txt");
    ASSERT_TRUE(out.diagnostics.empty()) << show(out.diagnostics);
    const ModelObject* a = out.model.root()->children("pkgs")[0];
    const ModelObject* b = out.model.root()->children("pkgs")[1];
    const auto& uses = a->children("types")[0]->references("uses");
    ASSERT_EQ(uses.size(), 2u);
    EXPECT_EQ(uses[0], a->children("types")[1]);
    EXPECT_EQ(uses[1], b->children("types")[0]);
    EXPECT_EQ(b->children("types")[0]->reference("uses"), a->children("types")[0]);

    auto text = model_to_text(lang, out.model);
    ASSERT_TRUE(text) << show(text.diagnostics());
    EXPECT_EQ(*text, "package a {\n    type T uses \"U\" , \"b::T\" ;\n    type U ;\n}\n"
                     "package b {\n    type T uses \"a::T\" ;\n}\n");

    TransformOutput dup = text_to_model(lang, "package a { type T; type T; }", "d.txt");
    ASSERT_EQ(dup.diagnostics.size(), 1u) << show(dup.diagnostics);
    EXPECT_EQ(dup.diagnostics[0].code, "duplicate-definition");
}

TEST(Transform, ConsumeOnlyRoot)
{
    const char* target = "class Doc { attr String title; }";
    const char* script = "create class Unit { val Doc[*] docs; }";
    const char* gr = "Unit: (docs+=DocAS)*;\nDocAS: \"doc\" title=STRING;";
    Language lang = inline_language(target, script, gr);
    TransformOutput one = text_to_model(lang, "doc \"x\"", "u");
    ASSERT_TRUE(one.diagnostics.empty()) << show(one.diagnostics);
    EXPECT_EQ(one.model.root()->class_name(), "Doc");
    EXPECT_EQ(one.model.root()->string_attribute("title"), "x");

    TransformOutput two = text_to_model(lang, "doc \"x\" doc \"y\"", "u");
    ASSERT_EQ(two.diagnostics.size(), 1u);
    EXPECT_EQ(two.diagnostics[0].code, "multiple-roots");
    TransformOutput none = text_to_model(lang, "", "u");
    ASSERT_EQ(none.diagnostics.size(), 1u);
    EXPECT_EQ(none.diagnostics[0].code, "unmapped-object");
}

TEST(Transform, ResolverCalledOncePerValue)
{
    const Language& lang = selfhost();
    ResolverRegistry reg = namespace_resolvers(lang.resolver.config, lang.resolver.universe_metamodel);
    const FeatureInstruction* fi = instruction(lang.plan, "SkipClassAS", "target");
    const Resolver inner = *reg.find(resolve_class(*lang.ast, TypeRef{"", "SkipClassAS"}), *fi);
    std::size_t calls = 0;
    reg.set_default([&](const ResolutionContext& ctx) {
        ++calls;
        return inner(ctx);
    });
    std::string script = "create class Q extends Action, ecore::EClass { attr String n; }\n"
                         "make img(Q) extend Action;\nskip SkipClass;\n";
    auto ast = grammar::parse_text(script, *lang.grammar);
    ASSERT_TRUE(ast) << show(ast.diagnostics());
    std::size_t values = 0;
    for (const ModelObject* o : preorder(*ast->root())) {
        const ClassPlan* cp = lang.plan.find_image(o->class_name());
        if (!cp)
            continue;
        for (const FeatureInstruction& f : cp->features)
            if (f.kind == FeatureInstruction::Kind::resolve_cross)
                values += o->children(f.image_feature).size();
    }
    TransformOutput out = transform_ast_to_model(*ast, lang.plan, reg);
    ASSERT_TRUE(out.diagnostics.empty()) << show(out.diagnostics);
    EXPECT_EQ(values, 6u);
    EXPECT_EQ(calls, values);
}

TEST(Transform, DeferredRetriedOnce)
{
    Language lang = inline_language("class Doc { val Item[*] items; }\nclass Item { attr String name; ref Item next; }",
                                    "refer img(Item) as String;",
                                    "DocAS: (items+=ItemAS)*;\nItemAS: name=ID (\"->\" next=STRING)?;");
    std::map<std::string, int> attempts;
    ResolverRegistry reg;
    reg.set_default([&](const ResolutionContext& ctx) {
        if (++attempts[*ctx.text] == 1)
            return Resolution::deferred();
        for (const ModelObject* o : ctx.target.root()->children("items"))
            if (o->string_attribute("name") == *ctx.text)
                return Resolution::found(*o);
        return Resolution::deferred();
    });
    auto ast = grammar::parse_text("a -> \"b\" b -> \"zz\"", *lang.grammar, "d");
    ASSERT_TRUE(ast);
    TransformOutput out = transform_ast_to_model(*ast, lang.plan, reg);
    ASSERT_EQ(out.diagnostics.size(), 1u) << show(out.diagnostics);
    EXPECT_EQ(out.diagnostics[0].message, "unresolved reference 'zz'");
    EXPECT_EQ(attempts["b"], 2);
    EXPECT_EQ(attempts["zz"], 2);
    EXPECT_EQ(out.model.root()->children("items")[0]->reference("next"), out.model.root()->children("items")[1]);
}

TEST(Transform, MissingResolverCaught)
{
    Language lang = inline_language("class Doc { ref Doc self; }", "refer img(Doc) as String;",
                                    "DocAS: \"doc\" (self=STRING)?;");
    auto ast = grammar::parse_text("doc", *lang.grammar);
    ASSERT_TRUE(ast);
    TransformOutput out = transform_ast_to_model(*ast, lang.plan, ResolverRegistry{});
    ASSERT_EQ(out.diagnostics.size(), 1u);
    EXPECT_EQ(out.diagnostics[0].code, "no-resolver");
}

TEST(Reverse, EmptyRootGivesSingleObject)
{
    const Language& lang = selfhost();
    Model m(lang.target);
    m.set_root(m.create("Transformation"));
    TransformOutput ast = transform_model_to_ast(m, lang.plan, namespace_namers(lang.resolver.config));
    ASSERT_TRUE(ast.diagnostics.empty()) << show(ast.diagnostics);
    ASSERT_NE(ast.model.root(), nullptr);
    EXPECT_EQ(ast.model.root()->class_name(), "TransformationAS");
    EXPECT_EQ(ast.model.objects().size(), 1u);
    EXPECT_TRUE(ast.model.root()->slots().empty());
}

TEST(Reverse, UnnamedReferentRejected)
{
    Language lang = inline_language("class Doc { val Item[*] items; }\nclass Item { attr String name; ref Item next; }",
                                    "refer img(Item) as String;", "");
    Model m(lang.target);
    ModelObject& doc = m.create("Doc");
    m.set_root(doc);
    ModelObject& a = m.create("Item");
    ModelObject& b = m.create("Item");
    a.set_attribute("name", Literal{std::string("a")});
    doc.add_child("items", a);
    doc.add_child("items", b);
    a.set_reference("next", b);
    TransformOutput out = transform_model_to_ast(m, lang.plan, namespace_namers(lang.resolver.config));
    ASSERT_EQ(out.diagnostics.size(), 1u) << show(out.diagnostics);
    EXPECT_EQ(out.diagnostics[0].code, "unnamable");
    EXPECT_EQ(out.diagnostics[0].model_path()->path, "/items[0]");

    b.set_attribute("name", Literal{std::string("a")});
    TransformOutput dup = transform_model_to_ast(m, lang.plan, namespace_namers(lang.resolver.config));
    ASSERT_EQ(dup.diagnostics.size(), 1u);
    EXPECT_EQ(dup.diagnostics[0].code, "unnamable");

    b.set_attribute("name", Literal{std::string("b")});
    TransformOutput ok = transform_model_to_ast(m, lang.plan, namespace_namers(lang.resolver.config));
    EXPECT_TRUE(ok.diagnostics.empty()) << show(ok.diagnostics);
    EXPECT_EQ(ok.model.root()->children("items")[0]->string_attribute("next"), "b");
}

TEST(Reverse, SkippedObjectsProduceNothing)
{
    const Language& lang = selfhost();
    Model m(lang.target);
    ModelObject& root = m.create("Transformation");
    m.set_root(root);
    root.add_child("actions", m.create("ClassMapping"));
    TransformOutput ast = transform_model_to_ast(m, lang.plan, namespace_namers(lang.resolver.config));
    EXPECT_TRUE(ast.diagnostics.empty()) << show(ast.diagnostics);
    EXPECT_EQ(ast.model.objects().size(), 1u);
}

TEST(RoundTrip, RandomSelfHostingModels)
{
    const Language& lang = selfhost();
    std::mt19937 rng(20261015);
    int checked = 0;
    for (int i = 0; i < 600 && checked < 60; ++i) {
        xf::Transformation t = testing_support::random_actions(*lang.target, rng);
        auto m = xf::to_model(t, build_universe(lang.target.get(), xf::created_names(t)));
        if (!m || !validate_model(*m).empty())
            continue;
        ++checked;
        TransformOutput ast = transform_model_to_ast(*m, lang.plan, namespace_namers(lang.resolver.config));
        ASSERT_TRUE(ast.diagnostics.empty()) << show(ast.diagnostics) << dump_model(*m);
        TransformOutput back = ast_to_model(lang, ast.model);
        ASSERT_TRUE(back.diagnostics.empty()) << show(back.diagnostics) << dump_model(ast.model);
        ASSERT_TRUE(model_equals(back.model, *m)) << dump_model(*m) << "\n---\n" << dump_model(back.model);

        auto text = model_to_text(lang, *m);
        ASSERT_TRUE(text) << show(text.diagnostics());
        TransformOutput again = text_to_model(lang, *text, "r.xf");
        ASSERT_TRUE(again.diagnostics.empty()) << show(again.diagnostics) << *text;
        ASSERT_TRUE(model_equals(again.model, *m)) << *text;
    }
    EXPECT_GE(checked, 50);
}

TEST(RoundTrip, TargetModelFileWithUniverse)
{
    const Language& lang = selfhost();
    std::string script = "create class Q { attr String n; }\ncreate class R extends Q { }\nmake img(Q) extend R;\n";
    Model m = direct_selfhost(script);
    auto loaded = load_target_model(dump_model(m), lang.target, lang.resolver, "m.model");
    ASSERT_TRUE(loaded) << show(loaded.diagnostics());
    EXPECT_TRUE(model_equals(*loaded, m));
    EXPECT_EQ(dump_model(*loaded), dump_model(m));
}
