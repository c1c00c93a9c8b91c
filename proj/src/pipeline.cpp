#include "mdsl/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "mdsl/emfatic.hpp"
#include "mdsl/model_io.hpp"
#include "mdsl/universe.hpp"

namespace fs = std::filesystem;

namespace mdsl {

Result<std::string> read_text_file(const std::string& path, Phase phase)
{
    std::ifstream in(path, std::ios::binary);
    if (!in || fs::is_directory(path))
        return Diagnostics{make_error(phase, "io", "cannot read '" + path + "'", SourceLocation{path, 1, 1})};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Diagnostics write_text_file(const std::string& path, std::string_view text)
{
    fs::path p(path);
    std::error_code ec;
    if (p.has_parent_path())
        fs::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    if (out)
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        return {make_error(Phase::validate, "io", "cannot write '" + path + "'", SourceLocation{path, 1, 1})};
    return {};
}

Result<std::shared_ptr<const Metamodel>> load_metamodel_file(const std::string& path)
{
    auto text = read_text_file(path, Phase::metamodel);
    if (!text)
        return text.take_diagnostics();
    auto mm = parse_metamodel(*text, fs::path(path).stem().string(), path);
    if (!mm)
        return mm.take_diagnostics();
    return std::make_shared<const Metamodel>(std::move(mm).value());
}

Result<ResolverSetup> load_resolver_setup(const std::string& path, const Metamodel& target)
{
    auto text = read_text_file(path, Phase::resolve);
    if (!text)
        return text.take_diagnostics();
    auto cfg = parse_resolver_config(*text, path);
    if (!cfg)
        return cfg.take_diagnostics();
    Diagnostics diags = check_resolver_config(*cfg, target);
    if (has_errors(diags))
        return diags;
    ResolverSetup setup{std::move(cfg).value(), nullptr};
    if (!setup.config.universe_metamodel.empty()) {
        fs::path mm_path = fs::path(path).parent_path() / setup.config.universe_metamodel;
        auto mm = load_metamodel_file(mm_path.string());
        if (!mm)
            return mm.take_diagnostics();
        setup.universe_metamodel = std::move(mm).value();
    }
    return setup;
}

Result<Model> load_target_model(std::string_view text, std::shared_ptr<const Metamodel> target,
                                const ResolverSetup& setup, const std::string& file)
{
    if (!setup.universe_metamodel)
        return load_model(text, std::move(target), {}, file);

    // Created classes come last in the universe's numbering, so placeholders for them let a
    // first load recover their names.
    const std::size_t base = build_universe(setup.universe_metamodel.get(), {})->objects().size();
    std::size_t highest = 0;
    static const std::regex ref(std::string(universe_import) + "#([0-9]+)");
    std::string buffer(text);
    for (auto it = std::sregex_iterator(buffer.begin(), buffer.end(), ref); it != std::sregex_iterator(); ++it)
        highest = std::max<std::size_t>(highest, std::stoul((*it)[1].str()));
    std::vector<std::string> placeholders(highest > base ? highest - base : 0);
    auto draft = load_model(text, target, {Import{std::string(universe_import),
                                                   build_universe(setup.universe_metamodel.get(), placeholders)}},
                            file);
    if (!draft)
        return draft;
    auto universe = build_universe(setup.universe_metamodel.get(), universe_created_names(*draft, setup.config));
    return load_model(text, std::move(target), {Import{std::string(universe_import), universe}}, file);
}

Result<Language> load_language(const LanguageFiles& files)
{
    Language lang;
    auto target = load_metamodel_file(files.target);
    if (!target)
        return target.take_diagnostics();
    lang.target = std::move(target).value();

    if (!files.transformation.empty()) {
        auto text = read_text_file(files.transformation, Phase::transformation);
        if (!text)
            return text.take_diagnostics();
        auto t = xf::parse_transformation(*text, *lang.target, files.transformation);
        if (!t)
            return t.take_diagnostics();
        lang.transformation = std::move(t).value();
    }
    auto derived = xf::derive_ast_metamodel(*lang.target, lang.transformation);
    if (!derived)
        return derived.take_diagnostics();
    lang.ast = std::make_shared<const Metamodel>(std::move(derived->ast));
    lang.trace = std::move(derived->trace);

    if (!files.grammar.empty()) {
        auto text = read_text_file(files.grammar, Phase::grammar);
        if (!text)
            return text.take_diagnostics();
        auto g = grammar::parse_grammar(*text, lang.ast, files.grammar);
        if (!g)
            return g.take_diagnostics();
        Diagnostics check = grammar::check_grammar(*g);
        if (has_errors(check))
            return check;
        lang.grammar = std::move(g).value();
    }
    if (!files.resolver_config.empty()) {
        auto setup = load_resolver_setup(files.resolver_config, *lang.target);
        if (!setup)
            return setup.take_diagnostics();
        lang.resolver = std::move(setup).value();
    }
    auto plan = build_plan(lang.trace, lang.target, lang.ast);
    if (!plan)
        return plan.take_diagnostics();
    lang.plan = std::move(plan).value();
    return lang;
}

TransformOutput ast_to_model(const Language& lang, const Model& ast)
{
    return transform_ast_to_model(ast, lang.plan,
                                  namespace_resolvers(lang.resolver.config, lang.resolver.universe_metamodel));
}

TransformOutput text_to_model(const Language& lang, std::string_view text, const std::string& file)
{
    if (!lang.grammar)
        return {Model(lang.target),
                {make_error(Phase::grammar, "config", "the language has no grammar", SourceLocation{file, 1, 1})}};
    auto ast = grammar::parse_text(text, *lang.grammar, file);
    if (!ast)
        return {Model(lang.target), ast.take_diagnostics()};
    return ast_to_model(lang, *ast);
}

Result<std::string> model_to_text(const Language& lang, const Model& m)
{
    if (!lang.grammar)
        return Diagnostics{make_error(Phase::grammar, "config", "the language has no grammar", ModelPath{"/"})};
    TransformOutput ast = transform_model_to_ast(m, lang.plan, namespace_namers(lang.resolver.config));
    if (has_errors(ast.diagnostics))
        return ast.diagnostics;
    return grammar::render_ast(ast.model, *lang.grammar);
}

}  // namespace mdsl
