#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <map>
#include <set>

#include "mdsl/emfatic.hpp"
#include "mdsl/grammar.hpp"
#include "mdsl/model_io.hpp"
#include "mdsl/pipeline.hpp"
#include "mdsl/settings.hpp"

namespace fs = std::filesystem;

namespace mdsl::cli {

namespace {

class Driver {
public:
    explicit Driver(std::ostream& out) : out_(out) {}

    Diagnostics& diagnostics() { return diags_; }

    void derive(const std::string& target, const std::string& script, const std::string& out_path,
                const std::string& trace_path)
    {
        auto lang = load_language({target, script, "", ""});
        if (!take(lang))
            return;
        emit(out_path, print_metamodel(*lang->ast));
        if (!trace_path.empty())
            emit(trace_path, xf::write_trace(lang->trace));
    }

    void grammar_init(const std::string& ast_path, const std::string& out_path)
    {
        auto ast = load_metamodel_file(ast_path);
        if (!take(ast))
            return;
        auto skeleton = grammar::generate_grammar_skeleton(**ast);
        if (!take(skeleton))
            return;
        // The skeleton is meant to pass the checker; report it if it does not.
        auto g = grammar::parse_grammar(*skeleton, *ast, out_path);
        if (!take(g) || !take_all(grammar::check_grammar(*g)))
            return;
        emit(out_path, *skeleton);
    }

    void parse(const std::string& grammar_path, const std::string& ast_path, const std::vector<std::string>& inputs,
               const std::string& out_path, const std::string& out_dir)
    {
        if (inputs.size() > 1 && out_dir.empty()) {
            usage("several inputs need --out-dir");
            return;
        }
        auto g = load_grammar(grammar_path, ast_path);
        if (!g)
            return;
        for (const std::string& input : inputs) {
            auto ast = parse_input(input, *g);
            if (!ast)
                continue;
            emit(out_dir.empty() ? out_path : (fs::path(out_dir) / (fs::path(input).stem().string() + ".astm")).string(),
                 dump_model(*ast));
        }
    }

    void transform(const std::string& trace_path, const std::string& target_path, const std::string& ast_path,
                   const std::string& resolver_config, const std::string& input, const std::string& out_path)
    {
        auto lang = load_parts(trace_path, target_path, ast_path, resolver_config);
        if (!lang)
            return;
        auto text = read_text_file(input, Phase::parse);
        if (!take(text))
            return;
        auto ast = load_model(*text, lang->ast, {}, input);
        if (!take(ast))
            return;
        TransformOutput result = ast_to_model(*lang, *ast);
        if (take_all(std::move(result.diagnostics)))
            emit(out_path, dump_model(result.model));
    }

    void render(const std::string& grammar_path, const std::string& ast_path, const std::string& input,
                const std::string& out_path)
    {
        auto g = load_grammar(grammar_path, ast_path);
        if (!g)
            return;
        auto text = read_text_file(input, Phase::parse);
        if (!take(text))
            return;
        auto ast = load_model(*text, g->ast, {}, input);
        if (!take(ast))
            return;
        auto rendered = grammar::render_ast(*ast, *g);
        if (take(rendered))
            emit(out_path, *rendered);
    }

    void to_text(const std::string& trace_path, const std::string& target_path, const std::string& ast_path,
                 const std::string& grammar_path, const std::string& resolver_config, const std::string& input,
                 const std::string& out_path)
    {
        auto lang = load_parts(trace_path, target_path, ast_path, resolver_config);
        if (!lang)
            return;
        auto g = load_grammar(grammar_path, lang->ast);
        if (!g)
            return;
        lang->grammar = std::move(*g);
        auto text = read_text_file(input, Phase::parse);
        if (!take(text))
            return;
        auto m = load_target_model(*text, lang->target, lang->resolver, input);
        if (!take(m))
            return;
        auto rendered = model_to_text(*lang, *m);
        if (take(rendered))
            emit(out_path, *rendered);
    }

    // derive, grammar (given or generated), parse and transform for every input.
    void pipeline(const std::string& config_path, const std::string& out_override)
    {
        auto text = read_text_file(config_path, Phase::parse);
        if (!take(text))
            return;
        auto settings = parse_settings(*text, config_path, Phase::parse);
        if (!take_all(settings.take_diagnostics()))
            return;
        const fs::path base = fs::path(config_path).parent_path();
        std::map<std::string, Setting> cfg;
        static const std::set<std::string> known{"target", "transformation", "grammar", "resolver",
                                                 "resolver.config", "inputs", "output"};
        for (const Setting& s : *settings) {
            if (!known.count(s.key))
                config_error("unknown key '" + s.key + "'", s.loc);
            else if (!cfg.emplace(s.key, s).second)
                config_error("duplicate key '" + s.key + "'", s.loc);
        }
        auto path_of = [&](const std::string& key) -> std::string {
            auto it = cfg.find(key);
            return it == cfg.end() || it->second.value.empty() ? "" : (base / it->second.value).string();
        };
        for (const char* required : {"target", "inputs"})
            if (!cfg.count(required))
                config_error(std::string("missing key '") + required + "'", SourceLocation{config_path, 1, 1});
        if (cfg.count("resolver") && cfg.at("resolver").value != "namespace")
            config_error("unknown resolver '" + cfg.at("resolver").value + "'", cfg.at("resolver").loc);
        if (has_errors(diags_))
            return;

        const fs::path out_dir = !out_override.empty() ? fs::path(out_override)
                                 : cfg.count("output")  ? base / cfg.at("output").value
                                                        : base / "out";
        const std::string stem = fs::path(path_of("target")).stem().string();
        auto lang = load_language({path_of("target"), path_of("transformation"), path_of("grammar"),
                                   path_of("resolver.config")});
        if (!take(lang))
            return;
        emit((out_dir / (stem + ".ast.mm")).string(), print_metamodel(*lang->ast));
        emit((out_dir / (stem + ".trace")).string(), xf::write_trace(lang->trace));
        if (!lang->grammar) {
            const std::string gr_path = (out_dir / (stem + ".gr")).string();
            auto skeleton = grammar::generate_grammar_skeleton(*lang->ast);
            if (!take(skeleton))
                return;
            auto g = grammar::parse_grammar(*skeleton, lang->ast, gr_path);
            if (!take(g) || !take_all(grammar::check_grammar(*g)))
                return;
            emit(gr_path, *skeleton);
            lang->grammar = std::move(g).value();
        }

        std::set<std::string> stems;
        for (const std::string& item : split_list(cfg.at("inputs").value)) {
            const std::string input = (base / item).string();
            const std::string input_stem = fs::path(item).stem().string();
            if (!stems.insert(input_stem).second) {
                config_error("two inputs named '" + input_stem + "'", cfg.at("inputs").loc);
                continue;
            }
            auto ast = parse_input(input, *lang->grammar);
            if (!ast)
                continue;
            emit((out_dir / (input_stem + ".astm")).string(), dump_model(*ast));
            TransformOutput result = ast_to_model(*lang, *ast);
            if (take_all(std::move(result.diagnostics)))
                emit((out_dir / (input_stem + ".model")).string(), dump_model(result.model));
        }
    }

private:
    template <class T>
    bool take(Result<T>& r)
    {
        bool ok = r.ok() && !has_errors(r.diagnostics());
        append(diags_, r.take_diagnostics());
        return ok;
    }

    bool take_all(Diagnostics d)
    {
        bool ok = !has_errors(d);
        append(diags_, std::move(d));
        return ok;
    }

    void config_error(const std::string& msg, SourceLocation loc)
    {
        diags_.push_back(make_error(Phase::parse, "config", msg, std::move(loc)));
    }

    void usage(const std::string& msg) { config_error(msg, SourceLocation{"<command line>", 1, 1}); }

    void emit(const std::string& path, const std::string& text)
    {
        if (path.empty())
            out_ << text;
        else
            take_all(write_text_file(path, text));
    }

    std::optional<grammar::Grammar> load_grammar(const std::string& grammar_path,
                                                 std::shared_ptr<const Metamodel> ast)
    {
        auto text = read_text_file(grammar_path, Phase::grammar);
        if (!take(text))
            return std::nullopt;
        auto g = grammar::parse_grammar(*text, std::move(ast), grammar_path);
        if (!take(g) || !take_all(grammar::check_grammar(*g)))
            return std::nullopt;
        return std::move(g).value();
    }

    std::optional<grammar::Grammar> load_grammar(const std::string& grammar_path, const std::string& ast_path)
    {
        auto ast = load_metamodel_file(ast_path);
        if (!take(ast))
            return std::nullopt;
        return load_grammar(grammar_path, *ast);
    }

    std::optional<Model> parse_input(const std::string& input, const grammar::Grammar& g)
    {
        auto text = read_text_file(input, Phase::parse);
        if (!take(text))
            return std::nullopt;
        if (text->find_first_not_of(" \t\r\n") == std::string::npos) {
            diags_.push_back(make_error(Phase::parse, "syntax", "input is empty", SourceLocation{input, 1, 1}));
            return std::nullopt;
        }
        auto ast = grammar::parse_text(*text, g, input);
        if (!take(ast))
            return std::nullopt;
        return std::move(ast).value();
    }

    // A language assembled from files written by `derive` rather than derived afresh.
    std::optional<Language> load_parts(const std::string& trace_path, const std::string& target_path,
                                       const std::string& ast_path, const std::string& resolver_config)
    {
        Language lang;
        auto target = load_metamodel_file(target_path);
        auto ast = load_metamodel_file(ast_path);
        auto trace_text = read_text_file(trace_path, Phase::transformation);
        if (!take(target) | !take(ast) | !take(trace_text))
            return std::nullopt;
        auto trace = xf::read_trace(*trace_text, trace_path);
        if (!take(trace))
            return std::nullopt;
        lang.target = *target;
        lang.ast = *ast;
        lang.trace = *trace;
        if (!resolver_config.empty()) {
            auto setup = load_resolver_setup(resolver_config, *lang.target);
            if (!take(setup))
                return std::nullopt;
            lang.resolver = *setup;
        }
        auto plan = build_plan(lang.trace, lang.target, lang.ast);
        if (!take(plan))
            return std::nullopt;
        lang.plan = std::move(plan).value();
        return lang;
    }

    std::ostream& out_;
    Diagnostics diags_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Metamodel-first language toolkit: derive AST metamodels, parse, transform and render.", "mdsl"};
    app.require_subcommand(1);
    app.fallthrough();
    bool json = false;
    app.add_flag("--diagnostics-json", json, "Write diagnostics as JSON lines");

    std::string target, script, ast, grammar_path, trace, resolver = "namespace", resolver_config, out_path, out_dir,
                                                       input, config;
    std::vector<std::string> inputs;

    auto* derive = app.add_subcommand("derive", "Derive the AST metamodel and trace from a target metamodel");
    derive->add_option("--target", target, "Target metamodel (.mm)")->required();
    derive->add_option("--xf", script, "Transformation script (.xf); default mapping when omitted");
    derive->add_option("--out", out_path, "AST metamodel output (.mm); stdout when omitted");
    derive->add_option("--trace", trace, "Trace output (.trace)");

    auto* init = app.add_subcommand("grammar-init", "Write a starting grammar for an AST metamodel");
    init->add_option("--ast", ast, "AST metamodel (.mm)")->required();
    init->add_option("--out", out_path, "Grammar output (.gr); stdout when omitted");

    auto* parse = app.add_subcommand("parse", "Parse text into AST models");
    parse->add_option("--grammar", grammar_path, "Grammar (.gr)")->required();
    parse->add_option("--ast", ast, "AST metamodel (.mm)")->required();
    parse->add_option("--out", out_path, "AST model output (.astm) for a single input");
    parse->add_option("--out-dir", out_dir, "Directory for <input stem>.astm outputs");
    parse->add_option("inputs", inputs, "Input text files")->required();

    auto add_language = [&](CLI::App* cmd) {
        cmd->add_option("--trace", trace, "Trace (.trace)")->required();
        cmd->add_option("--target", target, "Target metamodel (.mm)")->required();
        cmd->add_option("--ast", ast, "AST metamodel (.mm)")->required();
        cmd->add_option("--resolver", resolver, "Reference resolver")->check(CLI::IsMember({"namespace"}));
        cmd->add_option("--resolver-config", resolver_config, "Resolver settings (ns.cfg)");
        cmd->add_option("--out", out_path, "Output file; stdout when omitted");
        cmd->add_option("input", input, "Input file")->required();
    };
    auto* transform = app.add_subcommand("transform", "Transform an AST model into a target model");
    add_language(transform);
    auto* to_text = app.add_subcommand("to-text", "Render a target model as text");
    add_language(to_text);
    to_text->add_option("--grammar", grammar_path, "Grammar (.gr)")->required();

    auto* render = app.add_subcommand("render", "Render an AST model as text");
    render->add_option("--grammar", grammar_path, "Grammar (.gr)")->required();
    render->add_option("--ast", ast, "AST metamodel (.mm)")->required();
    render->add_option("--out", out_path, "Output file; stdout when omitted");
    render->add_option("input", input, "AST model (.astm)")->required();

    auto* pipeline = app.add_subcommand("pipeline", "Run derive, grammar, parse and transform from a config file");
    pipeline->add_option("config", config, "Pipeline config")->required();
    pipeline->add_option("--out-dir", out_dir, "Output directory, overriding the config's");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    Driver d(out);
    if (*derive)
        d.derive(target, script, out_path, trace);
    else if (*init)
        d.grammar_init(ast, out_path);
    else if (*parse)
        d.parse(grammar_path, ast, inputs, out_path, out_dir);
    else if (*transform)
        d.transform(trace, target, ast, resolver_config, input, out_path);
    else if (*to_text)
        d.to_text(trace, target, ast, grammar_path, resolver_config, input, out_path);
    else if (*render)
        d.render(grammar_path, ast, input, out_path);
    else if (*pipeline)
        d.pipeline(config, out_dir);

    Diagnostics& diags = d.diagnostics();
    sort_diagnostics(diags);
    for (const Diagnostic& diag : diags)
        err << (json ? format_diagnostic_json(diag) : format_diagnostic(diag)) << '\n';
    return has_errors(diags) ? 1 : 0;
}

}  // namespace mdsl::cli
