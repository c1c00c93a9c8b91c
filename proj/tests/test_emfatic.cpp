#include <gtest/gtest.h>

#include <random>

#include "mdsl/emfatic.hpp"
#include "support.hpp"

using namespace mdsl;
using testing_support::read_file;

TEST(Emfatic, ParsesFeaturesAndCanonicalizesTypes)
{
    auto r = parse_metamodel(R"(
        // comment
        abstract class Classifier { attr String name; }
        class Class extends Classifier {
            ref Class[*] super;
            attr boolean abstract;
            attr int upperBound = 1;
            val Feature[1..-1] features; /* unbounded */
            ref ecore::EClass meta;
        }
        class Feature { attr String[2..3] names; }
    )",
                             "m", "m.mm");
    ASSERT_TRUE(r) << testing_support::show(r.diagnostics());
    const MetaClass* cls = r->find_class("Class");
    ASSERT_NE(cls, nullptr);
    EXPECT_EQ(cls->supertypes, (std::vector<TypeRef>{{"", "Classifier"}}));
    EXPECT_EQ(cls->find_feature("super")->bounds, (Bounds{0, unbounded}));
    EXPECT_EQ(cls->find_feature("abstract")->type, (TypeRef{"ecore", "boolean"}));
    EXPECT_EQ(cls->find_feature("upperBound")->default_value, Literal{std::int64_t{1}});
    EXPECT_TRUE(cls->find_feature("features")->is_containment());
    EXPECT_EQ(cls->find_feature("features")->bounds, (Bounds{1, unbounded}));
    EXPECT_EQ(cls->find_feature("meta")->type, (TypeRef{"ecore", "EClass"}));
    EXPECT_EQ(cls->loc.line, 4);
    EXPECT_EQ(cls->loc.file, "m.mm");
}

TEST(Emfatic, SyntaxErrorsCarryLocation)
{
    auto r = parse_metamodel("class A {\n  attr String\n}\n", "m", "a.mm");
    ASSERT_FALSE(r);
    ASSERT_EQ(r.diagnostics().size(), 1u);
    const Diagnostic& d = r.diagnostics()[0];
    EXPECT_EQ(d.code, "syntax");
    EXPECT_EQ(d.source()->line, 3);
}

TEST(Emfatic, SemanticErrorsCarryLocation)
{
    auto r = parse_metamodel("class A {\n  ref Missing m;\n}\n", "m", "a.mm");
    ASSERT_FALSE(r);
    EXPECT_EQ(r.diagnostics()[0].code, "unresolved-type");
    EXPECT_EQ(r.diagnostics()[0].source()->line, 2);
    auto bad_default = parse_metamodel("class A { attr int n = \"x\"; }", "m");
    ASSERT_FALSE(bad_default);
    EXPECT_EQ(bad_default.diagnostics()[0].code, "bad-default");
}

TEST(Emfatic, EmptyInputIsEmptyMetamodel)
{
    auto r = parse_metamodel("  // nothing\n", "m");
    ASSERT_TRUE(r);
    EXPECT_TRUE(r->classifiers.empty());
    EXPECT_EQ(print_metamodel(*r), "");
}

TEST(Emfatic, PrintsShippedSampleVerbatim)
{
    std::string text = read_file(testing_support::sample("selfhost/xf.mm"));
    auto r = parse_metamodel(text, "xf");
    ASSERT_TRUE(r) << testing_support::show(r.diagnostics());
    EXPECT_EQ(print_metamodel(*r), text);
}

TEST(Emfatic, ShadowedEcoreNamesStayQualified)
{
    auto r = parse_metamodel("class EClass { } class U { ref ecore::EClass a; ref EClass b; }", "m");
    ASSERT_TRUE(r);
    std::string printed = print_metamodel(*r);
    EXPECT_NE(printed.find("ref ecore::EClass a;"), std::string::npos);
    EXPECT_NE(printed.find("ref EClass b;"), std::string::npos);
}

namespace {

// Builds a random valid metamodel: classes only extend earlier ones, so no cycles.
Metamodel random_metamodel(std::mt19937& rng)
{
    Metamodel mm;
    mm.name = "r";
    int n = 1 + static_cast<int>(rng() % 6);
    const char* datatypes[] = {"String", "boolean", "int"};
    for (int i = 0; i < n; ++i) {
        MetaClass c;
        c.name = "C" + std::to_string(i);
        c.is_abstract = rng() % 3 == 0;
        if (i > 0 && rng() % 2)
            c.supertypes.push_back(TypeRef{"", "C" + std::to_string(rng() % i)});
        int nf = static_cast<int>(rng() % 4);
        for (int k = 0; k < nf; ++k) {
            MetaFeature f;
            f.name = "f" + std::to_string(i) + "_" + std::to_string(k);
            Bounds choices[] = {{0, 1}, {0, unbounded}, {1, 1}, {1, unbounded}, {2, 4}};
            f.bounds = choices[rng() % 5];
            switch (rng() % 3) {
            case 0: {
                f.kind = FeatureKind::attribute;
                int d = static_cast<int>(rng() % 3);
                f.type = TypeRef{"ecore", datatypes[d]};
                if (rng() % 3 == 0 && !f.bounds.many())
                    f.default_value = d == 0 ? Literal{std::string("q\"x")} : d == 1 ? Literal{true} : Literal{std::int64_t{-4}};
                break;
            }
            case 1:
                f.kind = FeatureKind::reference;
                f.containment = true;
                f.type = TypeRef{"", "C" + std::to_string(rng() % n)};
                break;
            default:
                f.kind = FeatureKind::reference;
                f.type = rng() % 4 == 0 ? TypeRef{"ecore", "EClass"} : TypeRef{"", "C" + std::to_string(rng() % n)};
            }
            c.features.push_back(std::move(f));
        }
        mm.classifiers.push_back(std::move(c));
    }
    return mm;
}

}  // namespace

TEST(Emfatic, RandomPrintParseRoundTrip)
{
    std::mt19937 rng(11);
    for (int i = 0; i < 100; ++i) {
        Metamodel mm = random_metamodel(rng);
        ASSERT_TRUE(validate_metamodel(mm).empty()) << testing_support::show(validate_metamodel(mm));
        std::string text = print_metamodel(mm);
        auto back = parse_metamodel(text, "r");
        ASSERT_TRUE(back) << text << testing_support::show(back.diagnostics());
        EXPECT_EQ(*back, mm) << text;
        EXPECT_EQ(print_metamodel(*back), text);
    }
}
