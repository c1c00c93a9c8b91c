#include <set>
#include <sstream>

#include "mdsl/emfatic.hpp"
#include "mdsl/lexer.hpp"
#include "mdsl/xf.hpp"

namespace mdsl::xf {
namespace {

struct Name {
    std::string text;
    SourceLocation loc;
};

// Statement shapes before name resolution.
struct CreateDraft {
    std::string name;
    bool is_abstract = false;
    std::vector<Name> supers;
    std::vector<emfatic::FeatureSyntax> features;
    SourceLocation loc;
};
struct ReferDraft {
    Name model;
    bool plus = false;
    Name textual;
    SourceLocation loc;
};
struct SkipDraft {
    Name target;
    bool plus = false;
    SourceLocation loc;
};
struct MakeDraft {
    Name target;
    std::vector<Name> supers;
    SourceLocation loc;
};
using Draft = std::variant<CreateDraft, ReferDraft, SkipDraft, MakeDraft>;

constexpr Phase syntax_phase = Phase::transformation;

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : cur_(std::move(tokens)) {}

    std::optional<std::vector<Draft>> run()
    {
        std::vector<Draft> out;
        while (!cur_.at_end()) {
            auto d = statement();
            if (!d)
                return std::nullopt;
            out.push_back(std::move(*d));
        }
        return out;
    }

    Diagnostics& diagnostics() { return diags_; }

private:
    bool expect_punct(std::string_view p)
    {
        if (cur_.accept_punct(p))
            return true;
        emfatic::syntax_error(diags_, syntax_phase, cur_.peek(), "'" + std::string(p) + "'");
        return false;
    }

    bool expect_word(std::string_view w)
    {
        if (cur_.accept_word(w))
            return true;
        emfatic::syntax_error(diags_, syntax_phase, cur_.peek(), "'" + std::string(w) + "'");
        return false;
    }

    std::optional<Name> qn()
    {
        SourceLocation loc = cur_.peek().loc;
        auto text = emfatic::parse_qualified_name(cur_, diags_, syntax_phase);
        if (!text)
            return std::nullopt;
        return Name{*text, loc};
    }

    bool qn_list(std::vector<Name>& into)
    {
        do {
            auto n = qn();
            if (!n)
                return false;
            into.push_back(std::move(*n));
        } while (cur_.accept_punct(","));
        return true;
    }

    std::optional<Draft> statement()
    {
        const Token& kw = cur_.peek();
        SourceLocation loc = kw.loc;
        if (cur_.accept_word("create")) {
            CreateDraft d;
            d.loc = loc;
            d.is_abstract = cur_.accept_word("abstract");
            if (!expect_word("class"))
                return std::nullopt;
            if (cur_.peek().kind != TokenKind::identifier) {
                emfatic::syntax_error(diags_, syntax_phase, cur_.peek(), "a class name");
                return std::nullopt;
            }
            d.name = cur_.next().text;
            if (cur_.accept_word("extends") && !qn_list(d.supers))
                return std::nullopt;
            if (!expect_punct("{"))
                return std::nullopt;
            while (!cur_.accept_punct("}")) {
                auto f = emfatic::parse_feature(cur_, diags_, syntax_phase);
                if (!f || !expect_punct(";"))
                    return std::nullopt;
                d.features.push_back(std::move(*f));
            }
            return d;
        }
        if (cur_.accept_word("refer")) {
            ReferDraft d;
            d.loc = loc;
            if (!expect_word("img") || !expect_punct("("))
                return std::nullopt;
            auto m = qn();
            if (!m || !expect_punct(")"))
                return std::nullopt;
            d.model = std::move(*m);
            d.plus = cur_.accept_punct("+");
            if (!expect_word("as"))
                return std::nullopt;
            auto t = qn();
            if (!t || !expect_punct(";"))
                return std::nullopt;
            d.textual = std::move(*t);
            return d;
        }
        if (cur_.accept_word("skip")) {
            SkipDraft d;
            d.loc = loc;
            auto t = qn();
            if (!t)
                return std::nullopt;
            d.target = std::move(*t);
            d.plus = cur_.accept_punct("+");
            if (!expect_punct(";"))
                return std::nullopt;
            return d;
        }
        if (cur_.accept_word("make")) {
            MakeDraft d;
            d.loc = loc;
            if (!expect_word("img") || !expect_punct("("))
                return std::nullopt;
            auto t = qn();
            if (!t || !expect_punct(")") || !expect_word("extend"))
                return std::nullopt;
            d.target = std::move(*t);
            if (!cur_.accept_word("nothing") && !cur_.peek().is_punct(";") && !qn_list(d.supers))
                return std::nullopt;
            if (!expect_punct(";"))
                return std::nullopt;
            return d;
        }
        emfatic::syntax_error(diags_, syntax_phase, kw, "'create', 'refer', 'skip' or 'make'");
        return std::nullopt;
    }

    TokenCursor cur_;
    Diagnostics diags_;
};

enum class Want { any_type, class_type, datatype };

class Resolver {
public:
    Resolver(const Metamodel& target, std::set<std::string> created) : target_(target), created_(std::move(created))
    {
        for (ClassHandle h : mapping_domain(target))
            domain_.insert(h.cls);
    }

    Diagnostics& diagnostics() { return diags_; }

    std::optional<TypeRef> target_class(const Name& n)
    {
        ClassHandle h = resolve_class(target_, TypeRef::parse(n.text));
        if (!h) {
            unresolved(n, resolve(target_, TypeRef::parse(n.text)) ? "'" + n.text + "' is not a class"
                                                                   : "unresolved name '" + n.text + "'");
            return std::nullopt;
        }
        return h.is_ecore() ? TypeRef{std::string(ecore_package), h.name()} : TypeRef{"", h.name()};
    }

    std::optional<AstRef> ast_ref(const Name& n, Want want)
    {
        TypeRef ref = TypeRef::parse(n.text);
        std::optional<AstRef> image, created, datatype;
        bool no_image = false;
        if (ClassHandle h = resolve_class(target_, ref)) {
            if (domain_.count(h.cls))
                image = AstRef::image(h.is_ecore() ? TypeRef{std::string(ecore_package), h.name()} : TypeRef{"", h.name()});
            else
                no_image = true;
        } else if (DataTypeHandle dt = resolve_datatype(target_, ref)) {
            datatype = AstRef::datatype(dt.type->name);
        }
        if (ref.package.empty() && created_.count(ref.name))
            created = AstRef::created(ref.name);

        if (image && created) {
            diags_.push_back(make_error(Phase::resolve, "ambiguous-name",
                                        "'" + n.text + "' names both an image and a created class", n.loc));
            return std::nullopt;
        }
        std::optional<AstRef> found = image ? image : created ? created : datatype;
        if (!found) {
            unresolved(n, no_image ? "'" + n.text + "' has no image in the AST metamodel"
                                   : "unresolved name '" + n.text + "'");
            return std::nullopt;
        }
        bool is_dt = found->kind == AstRef::Kind::datatype;
        if ((want == Want::class_type && is_dt) || (want == Want::datatype && !is_dt)) {
            diags_.push_back(make_error(Phase::resolve, "type-kind",
                                        "'" + n.text + "' is " + (is_dt ? "a datatype" : "a class") + ", expected " +
                                            (is_dt ? "a class" : "a datatype"),
                                        n.loc));
            return std::nullopt;
        }
        found->loc = n.loc;
        return found;
    }

private:
    void unresolved(const Name& n, std::string msg)
    {
        diags_.push_back(make_error(Phase::resolve, "unresolved-name", std::move(msg), n.loc));
    }

    const Metamodel& target_;
    std::set<std::string> created_;
    std::set<const MetaClass*> domain_;
    Diagnostics diags_;
};

}  // namespace

Result<Transformation> parse_transformation(std::string_view text, const Metamodel& target, const std::string& file)
{
    auto tokens = tokenize(text, file, emfatic::lex_options(syntax_phase));
    if (!tokens)
        return tokens.take_diagnostics();
    Parser parser(std::move(tokens).value());
    auto drafts = parser.run();
    if (!drafts)
        return std::move(parser.diagnostics());

    std::set<std::string> created;
    for (const Draft& d : *drafts)
        if (const auto* c = std::get_if<CreateDraft>(&d))
            created.insert(c->name);

    Resolver r(target, created);
    Transformation t;
    for (const Draft& d : *drafts) {
        if (const auto* c = std::get_if<CreateDraft>(&d)) {
            CreateClass cc;
            cc.name = c->name;
            cc.is_abstract = c->is_abstract;
            cc.loc = c->loc;
            for (const Name& s : c->supers)
                if (auto a = r.ast_ref(s, Want::class_type))
                    cc.superclasses.push_back(std::move(*a));
            for (const emfatic::FeatureSyntax& f : c->features) {
                Want want = f.kind == FeatureKind::attribute ? Want::datatype : Want::class_type;
                auto type = r.ast_ref(Name{f.type, f.type_loc}, want);
                if (!type)
                    continue;
                cc.features.push_back(FeatureSpec{f.name, f.kind, std::move(*type), f.bounds, f.containment,
                                                  f.default_value, f.loc});
            }
            t.actions.push_back(std::move(cc));
        } else if (const auto* rd = std::get_if<ReferDraft>(&d)) {
            auto model = r.target_class(rd->model);
            auto textual = r.ast_ref(rd->textual, Want::any_type);
            if (model && textual)
                t.actions.push_back(TranslateReferences{*model, std::move(*textual), rd->plus, rd->loc});
        } else if (const auto* s = std::get_if<SkipDraft>(&d)) {
            if (auto target_ref = r.target_class(s->target))
                t.actions.push_back(SkipClass{*target_ref, s->plus, s->loc});
        } else {
            const auto& m = std::get<MakeDraft>(d);
            ChangeInheritance ci;
            ci.loc = m.loc;
            auto tgt = r.ast_ref(m.target, Want::class_type);
            for (const Name& s : m.supers)
                if (auto a = r.ast_ref(s, Want::class_type))
                    ci.superclasses.push_back(std::move(*a));
            if (tgt) {
                ci.target = std::move(*tgt);
                t.actions.push_back(std::move(ci));
            }
        }
    }
    if (!r.diagnostics().empty())
        return std::move(r.diagnostics());
    return t;
}

std::string print_transformation(const Transformation& t, const Metamodel& target)
{
    auto ast_text = [&](const AstRef& a) {
        switch (a.kind) {
        case AstRef::Kind::image:
        case AstRef::Kind::created:
            return a.name.qualified();
        case AstRef::Kind::datatype:
            return target.find(a.name.name) ? a.name.qualified() : a.name.name;
        }
        return a.name.qualified();
    };
    auto list = [&](const std::vector<AstRef>& refs) {
        std::string s;
        for (std::size_t i = 0; i < refs.size(); ++i)
            s += (i ? ", " : "") + ast_text(refs[i]);
        return s;
    };

    std::ostringstream out;
    for (const Action& a : t.actions) {
        if (const auto* cc = std::get_if<CreateClass>(&a)) {
            out << "create " << (cc->is_abstract ? "abstract " : "") << "class " << cc->name;
            if (!cc->superclasses.empty())
                out << " extends " << list(cc->superclasses);
            out << " {\n";
            for (const FeatureSpec& f : cc->features) {
                MetaFeature mf;
                mf.name = f.name;
                mf.kind = f.kind;
                mf.bounds = f.bounds;
                mf.containment = f.containment;
                mf.default_value = f.default_value;
                out << "    " << emfatic::format_feature(mf, ast_text(f.type)) << ";\n";
            }
            out << "}\n";
        } else if (const auto* tr = std::get_if<TranslateReferences>(&a)) {
            out << "refer img(" << tr->model_reference_type.qualified() << ")" << (tr->include_descendants ? "+" : "")
                << " as " << ast_text(tr->textual_reference_type) << ";\n";
        } else if (const auto* sc = std::get_if<SkipClass>(&a)) {
            out << "skip " << sc->target.qualified() << (sc->include_descendants ? "+" : "") << ";\n";
        } else {
            const auto& ci = std::get<ChangeInheritance>(a);
            out << "make img(" << ast_text(ci.target) << ") extend "
                << (ci.superclasses.empty() ? "nothing" : list(ci.superclasses)) << ";\n";
        }
    }
    return out.str();
}

}  // namespace mdsl::xf
