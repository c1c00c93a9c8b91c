#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "mdsl/emfatic.hpp"
#include "mdsl/grammar.hpp"
#include "mdsl/model_io.hpp"
#include "mdsl/pipeline.hpp"
#include "mdsl/universe.hpp"
#include "mdsl/xf_model.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace mdsl;
using testing_support::read_file;
using testing_support::sample;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

// Every diagnostic any CLI run printed, as parsed JSON lines.
std::vector<nlohmann::json>& seen_diagnostics()
{
    static std::vector<nlohmann::json> all;
    return all;
}

Outcome run_cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    args.insert(args.begin(), "--diagnostics-json");
    std::ostringstream out2, err2;
    // Exit 2 is a usage error from the argument parser, not a diagnostic.
    if (cli::run(args, out2, err2) == 2)
        return {code, out.str(), err.str()};
    std::istringstream lines(err2.str());
    for (std::string line; std::getline(lines, line);)
        seen_diagnostics().push_back(nlohmann::json::parse(line));
    return {code, out.str(), err.str()};
}

std::size_t lines_of(const std::string& s)
{
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() /
              ("mdsl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }

    void TearDown() override { fs::remove_all(dir); }

    std::string tmp(const std::string& name) const { return (dir / name).string(); }

    std::string put(const std::string& name, const std::string& text) const
    {
        EXPECT_TRUE(write_text_file(tmp(name), text).empty());
        return tmp(name);
    }

    // derive for the self-hosting sample into the temp directory.
    void derive_selfhost()
    {
        Outcome r = run_cli({"derive", "--target", sample("selfhost/xf.mm"), "--xf", sample("selfhost/xf.xf"), "--out",
                         tmp("xf.ast.mm"), "--trace", tmp("xf.trace")});
        ASSERT_EQ(r.code, 0) << r.err;
    }

    std::vector<std::string> language_args(const std::string& cmd)
    {
        return {cmd,   "--trace",           tmp("xf.trace"),           "--target", sample("selfhost/xf.mm"), "--ast",
                tmp("xf.ast.mm"), "--resolver-config", sample("selfhost/ns.cfg")};
    }

    fs::path dir;
};

}  // namespace

TEST_F(Cli, DeriveSelfHosting)
{
    derive_selfhost();
    std::string ast = read_file(tmp("xf.ast.mm"));
    EXPECT_NE(ast.find("class QualifiedName {"), std::string::npos);
    EXPECT_EQ(ast.find("ClassMappingAS"), std::string::npos);
    auto trace = xf::read_trace(read_file(tmp("xf.trace")));
    ASSERT_TRUE(trace);
    EXPECT_EQ(trace->created, std::vector<std::string>{"QualifiedName"});
}

TEST_F(Cli, DeriveWithoutScriptIsDefaultMapping)
{
    Outcome r = run_cli({"derive", "--target", sample("css/css.mm")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto target = parse_metamodel(read_file(sample("css/css.mm")), "css");
    auto d = xf::default_mapping(*target);
    ASSERT_TRUE(d);
    EXPECT_EQ(r.out, print_metamodel(d->ast));
}

TEST_F(Cli, MissingFileSingleDiagnostic)
{
    Outcome r = run_cli({"derive", "--target", tmp("absent.mm")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(lines_of(r.err), 1u) << r.err;
    EXPECT_NE(r.err.find("error[io]"), std::string::npos);
}

TEST_F(Cli, GrammarInit)
{
    put("one.mm", "class Point { attr int x; attr int y; attr String label; }");
    Outcome one = run_cli({"grammar-init", "--ast", tmp("one.mm"), "--out", tmp("one.gr")});
    ASSERT_EQ(one.code, 0) << one.err;
    auto ast = load_metamodel_file(tmp("one.mm"));
    auto g = grammar::parse_grammar(read_file(tmp("one.gr")), *ast);
    ASSERT_TRUE(g);
    EXPECT_TRUE(grammar::check_grammar(*g).empty());

    derive_selfhost();
    Outcome sh = run_cli({"grammar-init", "--ast", tmp("xf.ast.mm"), "--out", tmp("sh.gr")});
    ASSERT_EQ(sh.code, 0) << sh.err;
    auto sh_ast = load_metamodel_file(tmp("xf.ast.mm"));
    auto sg = grammar::parse_grammar(read_file(tmp("sh.gr")), *sh_ast);
    ASSERT_TRUE(sg);
    EXPECT_TRUE(grammar::check_grammar(*sg).empty());

    put("cross.mm", "class A { ref A other; }");
    Outcome cross = run_cli({"grammar-init", "--ast", tmp("cross.mm")});
    EXPECT_EQ(cross.code, 1);
    EXPECT_NE(cross.err.find("cross-reference"), std::string::npos);
}

TEST_F(Cli, ParseSelfHostingScript)
{
    derive_selfhost();
    Outcome r = run_cli({"parse", "--grammar", sample("selfhost/xf.gr"), "--ast", tmp("xf.ast.mm"),
                     sample("selfhost/xf.xf"), "--out", tmp("xf.astm")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto ast_mm = load_metamodel_file(tmp("xf.ast.mm"));
    auto m = load_model(read_file(tmp("xf.astm")), *ast_mm);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->root()->children("actions").size(), 4u);

    put("empty.xf", "");
    Outcome empty = run_cli({"parse", "--grammar", sample("selfhost/xf.gr"), "--ast", tmp("xf.ast.mm"), tmp("empty.xf")});
    EXPECT_EQ(empty.code, 1);

    put("tok.xf", "skip A;\nskip B\nskip C;\n");
    Outcome tok = run_cli({"parse", "--grammar", sample("selfhost/xf.gr"), "--ast", tmp("xf.ast.mm"), tmp("tok.xf")});
    EXPECT_EQ(tok.code, 1);
    EXPECT_EQ(tok.err, tmp("tok.xf") + ":3:1: error[syntax]: expected \";\", found identifier 'skip'\n");
}

TEST_F(Cli, ParseSeveralInputs)
{
    derive_selfhost();
    put("a.xf", "skip Action;");
    put("b.xf", "skip SkipClass;\n");
    Outcome r = run_cli({"parse", "--grammar", sample("selfhost/xf.gr"), "--ast", tmp("xf.ast.mm"), tmp("a.xf"),
                     tmp("b.xf"), "--out-dir", tmp("asts")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(tmp("asts/a.astm")));
    EXPECT_TRUE(fs::exists(tmp("asts/b.astm")));
    Outcome no_dir =
        run_cli({"parse", "--grammar", sample("selfhost/xf.gr"), "--ast", tmp("xf.ast.mm"), tmp("a.xf"), tmp("b.xf")});
    EXPECT_EQ(no_dir.code, 1);
}

TEST_F(Cli, TransformMatchesDirectRoute)
{
    derive_selfhost();
    ASSERT_EQ(run_cli({"parse", "--grammar", sample("selfhost/xf.gr"), "--ast", tmp("xf.ast.mm"),
                   sample("selfhost/xf.xf"), "--out", tmp("xf.astm")})
                  .code,
              0);
    auto args = language_args("transform");
    args.insert(args.end(), {"--resolver", "namespace", tmp("xf.astm"), "--out", tmp("xf.model")});
    Outcome r = run_cli(args);
    ASSERT_EQ(r.code, 0) << r.err;

    auto target = load_metamodel_file(sample("selfhost/xf.mm"));
    auto setup = load_resolver_setup(sample("selfhost/ns.cfg"), **target);
    ASSERT_TRUE(setup);
    auto m = load_target_model(read_file(tmp("xf.model")), *target, *setup, tmp("xf.model"));
    ASSERT_TRUE(m) << testing_support::show(m.diagnostics());
    auto t = xf::parse_transformation(read_file(sample("selfhost/xf.xf")), **target);
    auto direct = xf::to_model(*t, build_universe(target->get(), xf::created_names(*t)));
    EXPECT_TRUE(model_equals(*m, *direct));
}

TEST_F(Cli, TransformDanglingName)
{
    derive_selfhost();
    put("bad.xf", "skip Action;\nskip Missing;\n");
    ASSERT_EQ(run_cli({"parse", "--grammar", sample("selfhost/xf.gr"), "--ast", tmp("xf.ast.mm"), tmp("bad.xf"), "--out",
                   tmp("bad.astm")})
                  .code,
              0);
    auto args = language_args("transform");
    args.push_back(tmp("bad.astm"));
    Outcome r = run_cli(args);
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(lines_of(r.err), 1u) << r.err;
    EXPECT_NE(r.err.find("unresolved reference 'Missing'"), std::string::npos);
}

TEST_F(Cli, RenderAndToText)
{
    derive_selfhost();
    ASSERT_EQ(run_cli({"parse", "--grammar", sample("selfhost/xf.gr"), "--ast", tmp("xf.ast.mm"),
                   sample("selfhost/xf.xf"), "--out", tmp("xf.astm")})
                  .code,
              0);
    Outcome rendered = run_cli({"render", "--grammar", sample("selfhost/xf.gr"), "--ast", tmp("xf.ast.mm"), tmp("xf.astm")});
    ASSERT_EQ(rendered.code, 0) << rendered.err;
    put("again.xf", rendered.out);
    ASSERT_EQ(run_cli({"parse", "--grammar", sample("selfhost/xf.gr"), "--ast", tmp("xf.ast.mm"), tmp("again.xf"),
                   "--out", tmp("again.astm")})
                  .code,
              0);
    auto ast_mm = load_metamodel_file(tmp("xf.ast.mm"));
    EXPECT_TRUE(model_equals(*load_model(read_file(tmp("xf.astm")), *ast_mm),
                             *load_model(read_file(tmp("again.astm")), *ast_mm)));

    auto args = language_args("transform");
    args.insert(args.end(), {tmp("xf.astm"), "--out", tmp("xf.model")});
    ASSERT_EQ(run_cli(args).code, 0);
    auto text_args = language_args("to-text");
    text_args.insert(text_args.end(), {"--grammar", sample("selfhost/xf.gr"), tmp("xf.model")});
    Outcome text = run_cli(text_args);
    ASSERT_EQ(text.code, 0) << text.err;
    EXPECT_NE(text.out.find("attr String name ;"), std::string::npos) << text.out;

    // The text runs through the forward pipeline to the same model.
    put("round.xf", text.out);
    ASSERT_EQ(run_cli({"parse", "--grammar", sample("selfhost/xf.gr"), "--ast", tmp("xf.ast.mm"), tmp("round.xf"),
                   "--out", tmp("round.astm")})
                  .code,
              0);
    auto back_args = language_args("transform");
    back_args.insert(back_args.end(), {tmp("round.astm"), "--out", tmp("round.model")});
    ASSERT_EQ(run_cli(back_args).code, 0);
    EXPECT_EQ(read_file(tmp("round.model")), read_file(tmp("xf.model")));
}

TEST_F(Cli, RenderWithoutRuleFails)
{
    put("ast.mm", "class DocAS { val ItemAS[*] items; }\nclass ItemAS { attr String name; }\nclass OtherAS extends ItemAS { }");
    put("doc.gr", "DocAS: (items+=ItemAS)*;\nItemAS: \"item\" name=ID;");
    put("doc.astm", "DocAS #1 {\n  items = [\n    OtherAS #2 { }\n  ]\n}\n");
    Outcome r = run_cli({"render", "--grammar", tmp("doc.gr"), "--ast", tmp("ast.mm"), tmp("doc.astm")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("no-rule"), std::string::npos) << r.err;
}

TEST_F(Cli, PipelineCssAndSelfHosting)
{
    Outcome css = run_cli({"pipeline", sample("css/pipeline.cfg"), "--out-dir", tmp("css")});
    ASSERT_EQ(css.code, 0) << css.err;
    EXPECT_EQ(read_file(tmp("css/grouped.model")), read_file(tmp("css/split.model")));
    EXPECT_NE(read_file(tmp("css/split.model")).find("ClassSelector #2"), std::string::npos);

    Outcome sh = run_cli({"pipeline", sample("selfhost/pipeline.cfg"), "--out-dir", tmp("sh")});
    ASSERT_EQ(sh.code, 0) << sh.err;
    EXPECT_TRUE(fs::exists(tmp("sh/xf.model")));
    EXPECT_TRUE(fs::exists(tmp("sh/xf.ast.mm")));
}

TEST_F(Cli, PipelineGeneratesMissingGrammar)
{
    put("pt.mm", "class Points { val Point[*] points; }\nclass Point { attr int x; attr int y; }");
    put("in.txt", "Points { points = Point { x = 1 y = -2 } points = Point { } }");
    put("p.cfg", "target = pt.mm\ninputs = in.txt\n");
    Outcome r = run_cli({"pipeline", tmp("p.cfg")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(tmp("out/pt.gr")));
    EXPECT_NE(read_file(tmp("out/in.model")).find("y = -2"), std::string::npos);
}

TEST_F(Cli, PipelineBadConfig)
{
    EXPECT_EQ(run_cli({"pipeline", tmp("nowhere.cfg")}).code, 1);
    put("bad.cfg", "target = x.mm\ncolour = blue\nresolver = magic\n");
    Outcome r = run_cli({"pipeline", tmp("bad.cfg")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(lines_of(r.err), 3u) << r.err;  // unknown key, unknown resolver, missing inputs
}

TEST_F(Cli, PipelineIsDeterministic)
{
    for (const char* cfg : {"css/pipeline.cfg", "selfhost/pipeline.cfg"}) {
        ASSERT_EQ(run_cli({"pipeline", sample(cfg), "--out-dir", tmp("one")}).code, 0);
        ASSERT_EQ(run_cli({"pipeline", sample(cfg), "--out-dir", tmp("two")}).code, 0);
        for (const auto& entry : fs::directory_iterator(tmp("one")))
            EXPECT_EQ(read_file(entry.path().string()), read_file(tmp("two/" + entry.path().filename().string())));
        fs::remove_all(tmp("one"));
        fs::remove_all(tmp("two"));
    }
}

TEST_F(Cli, UsageErrors)
{
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"derive"}).code, 2);
    EXPECT_EQ(run_cli({"transform", "--resolver", "other", "x"}).code, 2);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(Cli, JsonDiagnostics)
{
    std::ostringstream out, err;
    int code = cli::run({"--diagnostics-json", "derive", "--target", tmp("absent.mm")}, out, err);
    EXPECT_EQ(code, 1);
    auto j = nlohmann::json::parse(err.str());
    EXPECT_EQ(j["severity"], "error");
    EXPECT_EQ(j["phase"], "metamodel");
    EXPECT_EQ(j["code"], "io");
    EXPECT_EQ(j["line"], 1);
}

// Every diagnostic a failing command prints is well-formed, across all phases.
TEST_F(Cli, EveryDiagnosticRegistered)
{
    seen_diagnostics().clear();
    derive_selfhost();
    const std::string gr = sample("selfhost/xf.gr");
    put("bad.mm", "class A { ref Nowhere x; }\nclass A { }");
    put("bad.xf", "skip Action;\nskip Missing;\nrefer img(String) as String;\n");
    put("tok.xf", "skip A\n");
    put("bad.gr", "TransformationAS: (actions+=Nothing)*;");
    put("bad.cfg", "colour = blue\ninputs =\n");
    put("bad.astm", "TransformationAS #1 { bogus = 1 }\n");
    run_cli({"derive", "--target", tmp("absent.mm")});
    run_cli({"derive", "--target", tmp("bad.mm")});
    run_cli({"derive", "--target", sample("selfhost/xf.mm"), "--xf", tmp("bad.xf")});
    run_cli({"grammar-init", "--ast", tmp("bad.mm")});
    run_cli({"parse", "--grammar", gr, "--ast", tmp("xf.ast.mm"), tmp("tok.xf")});
    run_cli({"parse", "--grammar", tmp("bad.gr"), "--ast", tmp("xf.ast.mm"), tmp("tok.xf")});
    run_cli({"parse", "--grammar", gr, "--ast", tmp("xf.ast.mm"), tmp("bad.xf"), "--out", tmp("bad_ref.astm")});
    auto args = language_args("transform");
    args.push_back(tmp("bad_ref.astm"));
    run_cli(args);
    args.back() = tmp("bad.astm");
    run_cli(args);
    run_cli({"pipeline", tmp("bad.cfg")});
    std::set<std::string> phases;
    for (const auto& j : seen_diagnostics()) {
        EXPECT_TRUE(is_registered_code(j["code"].get<std::string>())) << j.dump();
        EXPECT_FALSE(j["message"].get<std::string>().empty()) << j.dump();
        EXPECT_NE(j.contains("file"), j.contains("path")) << j.dump();
        phases.insert(j["phase"].get<std::string>());
    }
    EXPECT_GE(seen_diagnostics().size(), 10u);
    EXPECT_GE(phases.size(), 4u);
}

TEST(DiagnosticsOrder, SortIsIdempotentAndOrdered)
{
    std::mt19937 rng(11);
    const std::vector<std::string> codes{"syntax", "lex", "unresolved-name", "io"};
    for (int round = 0; round < 200; ++round) {
        Diagnostics d;
        for (unsigned n = rng() % 12; n > 0; --n) {
            std::string code = codes[rng() % codes.size()];
            if (rng() % 3 == 0)
                d.push_back(make_error(Phase::resolve, code, "m" + std::to_string(n), ModelPath{"/a[" + std::to_string(rng() % 3) + "]"}));
            else
                d.push_back(make_error(Phase::parse, code, "m" + std::to_string(n),
                                       SourceLocation{rng() % 2 ? "a" : "b", static_cast<int>(1 + rng() % 4),
                                                      static_cast<int>(1 + rng() % 4)}));
        }
        Diagnostics once = d;
        sort_diagnostics(once);
        Diagnostics twice = once;
        sort_diagnostics(twice);
        ASSERT_EQ(once.size(), twice.size());
        for (std::size_t i = 0; i < once.size(); ++i)
            EXPECT_EQ(format_diagnostic(once[i]), format_diagnostic(twice[i]));
        bool seen_path = false;
        for (std::size_t i = 0; i < once.size(); ++i) {
            seen_path |= once[i].model_path() != nullptr;
            EXPECT_FALSE(seen_path && once[i].source()) << "source-located after model-path";
            if (i && once[i].source() && once[i - 1].source()) {
                const auto& a = *once[i - 1].source();
                const auto& b = *once[i].source();
                EXPECT_LE(std::tie(a.file, a.line, a.column), std::tie(b.file, b.line, b.column));
            }
        }
    }
    Diagnostics empty;
    sort_diagnostics(empty);
    EXPECT_TRUE(empty.empty());
}
