#include "mdsl/emfatic.hpp"

#include <sstream>

namespace mdsl {
namespace emfatic {

LexOptions lex_options(Phase phase)
{
    LexOptions opts;
    opts.punctuators = {"::", ".."};
    opts.negative_integers = true;
    opts.phase = phase;
    return opts;
}

void syntax_error(Diagnostics& diags, Phase phase, const Token& at, const std::string& expected)
{
    diags.push_back(make_error(phase, "syntax", "expected " + expected + ", found " + describe(at), at.loc));
}

std::optional<std::string> parse_qualified_name(TokenCursor& cur, Diagnostics& diags, Phase phase)
{
    if (cur.peek().kind != TokenKind::identifier) {
        syntax_error(diags, phase, cur.peek(), "a name");
        return std::nullopt;
    }
    std::string qn = cur.next().text;
    while (cur.peek().is_punct("::")) {
        cur.next();
        if (cur.peek().kind != TokenKind::identifier) {
            syntax_error(diags, phase, cur.peek(), "a name after '::'");
            return std::nullopt;
        }
        qn += "::" + cur.next().text;
    }
    return qn;
}

namespace {

std::optional<Bounds> parse_multiplicity(TokenCursor& cur, Diagnostics& diags, Phase phase)
{
    // after '['
    Bounds b;
    if (cur.accept_punct("*")) {
        b = Bounds{0, unbounded};
    } else if (cur.peek().kind == TokenKind::integer) {
        int lower = static_cast<int>(cur.next().int_value);
        b = Bounds{lower, lower};
        if (cur.accept_punct("..")) {
            if (cur.accept_punct("*")) {
                b.upper = unbounded;
            } else if (cur.peek().kind == TokenKind::integer) {
                b.upper = static_cast<int>(cur.next().int_value);
                if (b.upper < 0)
                    b.upper = unbounded;
            } else {
                syntax_error(diags, phase, cur.peek(), "an upper bound");
                return std::nullopt;
            }
        }
    } else {
        syntax_error(diags, phase, cur.peek(), "a multiplicity");
        return std::nullopt;
    }
    if (!cur.accept_punct("]")) {
        syntax_error(diags, phase, cur.peek(), "']'");
        return std::nullopt;
    }
    return b;
}

}  // namespace

std::optional<FeatureSyntax> parse_feature(TokenCursor& cur, Diagnostics& diags, Phase phase)
{
    FeatureSyntax f;
    const Token& kw = cur.peek();
    f.loc = kw.loc;
    if (kw.is_word("attr")) {
        f.kind = FeatureKind::attribute;
    } else if (kw.is_word("val")) {
        f.kind = FeatureKind::reference;
        f.containment = true;
    } else if (kw.is_word("ref")) {
        f.kind = FeatureKind::reference;
    } else {
        syntax_error(diags, phase, kw, "'attr', 'val' or 'ref'");
        return std::nullopt;
    }
    cur.next();
    f.type_loc = cur.peek().loc;
    auto type = parse_qualified_name(cur, diags, phase);
    if (!type)
        return std::nullopt;
    f.type = *type;
    if (cur.accept_punct("[")) {
        auto b = parse_multiplicity(cur, diags, phase);
        if (!b)
            return std::nullopt;
        f.bounds = *b;
    }
    if (cur.peek().kind != TokenKind::identifier) {
        syntax_error(diags, phase, cur.peek(), "a feature name");
        return std::nullopt;
    }
    f.name = cur.next().text;
    if (cur.accept_punct("=")) {
        const Token& v = cur.peek();
        if (f.kind != FeatureKind::attribute) {
            syntax_error(diags, phase, v, "';' (references have no default value)");
            return std::nullopt;
        }
        if (v.kind == TokenKind::integer)
            f.default_value = Literal{v.int_value};
        else if (v.kind == TokenKind::string)
            f.default_value = Literal{v.text};
        else if (v.is_word("true") || v.is_word("false"))
            f.default_value = Literal{v.text == "true"};
        else {
            syntax_error(diags, phase, v, "a literal");
            return std::nullopt;
        }
        cur.next();
    }
    return f;
}

std::string format_feature(const MetaFeature& f, const std::string& type_text)
{
    std::string kw = f.is_attribute() ? "attr" : (f.containment ? "val" : "ref");
    std::string out = kw + " " + type_text + format_bounds(f.bounds) + " " + f.name;
    if (f.default_value)
        out += " = " + format_literal(*f.default_value);
    return out;
}

}  // namespace emfatic

namespace {

struct ClassSyntax {
    MetaClass cls;
    std::vector<std::pair<std::string, SourceLocation>> supertypes;
    std::vector<std::pair<std::string, SourceLocation>> feature_types;
};

/// Rewrites an as-written name into canonical form: own classifiers unqualified, builtin ones
/// qualified with `ecore`. Unresolvable names stay as written for validation to report.
TypeRef canonical(const Metamodel& mm, const std::string& written)
{
    TypeRef ref = TypeRef::parse(written);
    const Metamodel* owner = nullptr;
    if (resolve(mm, ref, &owner)) {
        if (owner == &builtin_ecore() && &mm != owner)
            return TypeRef{std::string(ecore_package), ref.name};
        return TypeRef{"", ref.name};
    }
    return ref;
}

}  // namespace

Result<Metamodel> parse_metamodel(std::string_view text, const std::string& name, const std::string& file)
{
    constexpr Phase phase = Phase::metamodel;
    auto tokens = tokenize(text, file, emfatic::lex_options(phase));
    if (!tokens)
        return tokens.take_diagnostics();

    TokenCursor cur(std::move(tokens).value());
    Diagnostics diags;
    std::vector<ClassSyntax> classes;

    while (!cur.at_end() && diags.empty()) {
        ClassSyntax cs;
        cs.cls.loc = cur.peek().loc;
        if (cur.accept_word("abstract"))
            cs.cls.is_abstract = true;
        if (!cur.accept_word("class")) {
            emfatic::syntax_error(diags, phase, cur.peek(), "'class'");
            break;
        }
        if (cur.peek().kind != TokenKind::identifier) {
            emfatic::syntax_error(diags, phase, cur.peek(), "a class name");
            break;
        }
        cs.cls.name = cur.next().text;
        if (cur.accept_word("extends")) {
            do {
                SourceLocation loc = cur.peek().loc;
                auto qn = emfatic::parse_qualified_name(cur, diags, phase);
                if (!qn)
                    break;
                cs.supertypes.emplace_back(*qn, loc);
            } while (cur.accept_punct(","));
        }
        if (!diags.empty())
            break;
        if (!cur.accept_punct("{")) {
            emfatic::syntax_error(diags, phase, cur.peek(), "'{'");
            break;
        }
        while (!cur.peek().is_punct("}") && diags.empty()) {
            auto f = emfatic::parse_feature(cur, diags, phase);
            if (!f)
                break;
            if (!cur.accept_punct(";")) {
                emfatic::syntax_error(diags, phase, cur.peek(), "';'");
                break;
            }
            MetaFeature mf;
            mf.name = f->name;
            mf.kind = f->kind;
            mf.containment = f->containment;
            mf.bounds = f->bounds;
            mf.default_value = f->default_value;
            mf.loc = f->loc;
            cs.cls.features.push_back(std::move(mf));
            cs.feature_types.emplace_back(f->type, f->type_loc);
        }
        if (!diags.empty())
            break;
        cur.next();
        classes.push_back(std::move(cs));
    }
    if (!diags.empty())
        return diags;

    Metamodel mm;
    mm.name = name;
    for (const ClassSyntax& cs : classes)
        mm.classifiers.push_back(cs.cls);
    // Resolve names once all classes are known.
    for (std::size_t i = 0; i < classes.size(); ++i) {
        auto& cls = std::get<MetaClass>(mm.classifiers[i]);
        for (const auto& [written, loc] : classes[i].supertypes)
            cls.supertypes.push_back(canonical(mm, written));
        for (std::size_t k = 0; k < cls.features.size(); ++k)
            cls.features[k].type = canonical(mm, classes[i].feature_types[k].first);
    }

    diags = validate_metamodel(mm);
    if (has_errors(diags))
        return diags;
    return Result<Metamodel>(std::move(mm), std::move(diags));
}

std::string print_metamodel(const Metamodel& mm)
{
    auto type_text = [&](const TypeRef& ref) {
        if (ref.package == ecore_package && !mm.find(ref.name))
            return ref.name;
        return ref.qualified();
    };
    std::ostringstream out;
    bool first = true;
    for (const Classifier& c : mm.classifiers) {
        const auto* cls = std::get_if<MetaClass>(&c);
        if (!cls)
            continue;
        if (!first)
            out << '\n';
        first = false;
        if (cls->is_abstract)
            out << "abstract ";
        out << "class " << cls->name;
        for (std::size_t i = 0; i < cls->supertypes.size(); ++i)
            out << (i ? ", " : " extends ") << type_text(cls->supertypes[i]);
        out << " {\n";
        for (const MetaFeature& f : cls->features)
            out << "    " << emfatic::format_feature(f, type_text(f.type)) << ";\n";
        out << "}\n";
    }
    return out.str();
}

}  // namespace mdsl
