#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "mdsl/grammar.hpp"
#include "mdsl/lexer.hpp"

namespace mdsl::grammar {

std::string_view to_string(Terminal t)
{
    switch (t) {
    case Terminal::id: return "ID";
    case Terminal::string: return "STRING";
    case Terminal::integer: return "INT";
    }
    return "?";
}

const Rule* Grammar::find(std::string_view name) const
{
    for (const Rule& r : rules)
        if (r.name == name)
            return &r;
    return nullptr;
}

namespace {

constexpr Phase phase = Phase::grammar;

std::optional<Terminal> terminal_named(std::string_view s)
{
    if (s == "ID")
        return Terminal::id;
    if (s == "STRING")
        return Terminal::string;
    if (s == "INT")
        return Terminal::integer;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : cur_(std::move(tokens)) {}

    std::optional<std::vector<Rule>> run()
    {
        std::vector<Rule> rules;
        while (!cur_.at_end()) {
            auto r = rule();
            if (!r)
                return std::nullopt;
            rules.push_back(std::move(*r));
        }
        return rules;
    }

    Diagnostics& diagnostics() { return diags_; }

private:
    void fail(const std::string& expected)
    {
        if (diags_.empty())
            diags_.push_back(make_error(phase, "syntax", "expected " + expected + ", found " + describe(cur_.peek()),
                                        cur_.peek().loc));
    }

    bool expect(std::string_view p)
    {
        if (cur_.accept_punct(p))
            return true;
        fail("'" + std::string(p) + "'");
        return false;
    }

    std::optional<Rule> rule()
    {
        Rule r;
        r.loc = cur_.peek().loc;
        if (cur_.peek().is_word("Abstract") && cur_.peek(1).kind == TokenKind::identifier) {
            cur_.next();
            r.is_abstract = true;
        }
        if (cur_.peek().kind != TokenKind::identifier) {
            fail("a rule name");
            return std::nullopt;
        }
        r.name = cur_.next().text;
        if (!expect(":"))
            return std::nullopt;
        if (r.is_abstract) {
            do {
                if (cur_.peek().kind != TokenKind::identifier) {
                    fail("a rule name");
                    return std::nullopt;
                }
                r.alternatives.push_back(cur_.next().text);
            } while (cur_.accept_punct("|"));
        } else {
            auto body = alternatives();
            if (!body)
                return std::nullopt;
            r.body = std::move(*body);
        }
        if (!expect(";"))
            return std::nullopt;
        return r;
    }

    std::optional<Element> alternatives()
    {
        SourceLocation loc = cur_.peek().loc;
        std::vector<Element> alts;
        do {
            auto s = sequence();
            if (!s)
                return std::nullopt;
            alts.push_back(std::move(*s));
        } while (cur_.accept_punct("|"));
        if (alts.size() == 1)
            return std::move(alts.front());
        Element e;
        e.kind = Element::Kind::alternatives;
        e.children = std::move(alts);
        e.loc = loc;
        return e;
    }

    std::optional<Element> sequence()
    {
        SourceLocation loc = cur_.peek().loc;
        std::vector<Element> items;
        while (!cur_.at_end() && !cur_.peek().is_punct("|") && !cur_.peek().is_punct(")") &&
               !cur_.peek().is_punct(";")) {
            auto item = suffixed();
            if (!item)
                return std::nullopt;
            items.push_back(std::move(*item));
        }
        if (items.empty()) {
            fail("a grammar element");
            return std::nullopt;
        }
        if (items.size() == 1)
            return std::move(items.front());
        Element e;
        e.kind = Element::Kind::sequence;
        e.children = std::move(items);
        e.loc = loc;
        return e;
    }

    std::optional<Element> suffixed()
    {
        auto e = primary();
        if (!e)
            return std::nullopt;
        for (;;) {
            Element::Kind kind;
            if (cur_.peek().is_punct("?"))
                kind = Element::Kind::optional;
            else if (cur_.peek().is_punct("*"))
                kind = Element::Kind::star;
            else if (cur_.peek().is_punct("+"))
                kind = Element::Kind::plus;
            else
                return e;
            cur_.next();
            Element wrap;
            wrap.kind = kind;
            wrap.loc = e->loc;
            wrap.children.push_back(std::move(*e));
            e = std::move(wrap);
        }
    }

    std::optional<Element> primary()
    {
        const Token& t = cur_.peek();
        Element e;
        e.loc = t.loc;
        if (t.kind == TokenKind::string) {
            if (t.text.empty() || std::any_of(t.text.begin(), t.text.end(), [](char c) {
                    return std::isspace(static_cast<unsigned char>(c));
                })) {
                diags_.push_back(make_error(phase, "syntax", "keywords must be non-empty and contain no spaces", t.loc));
                return std::nullopt;
            }
            e.kind = Element::Kind::keyword;
            e.keyword = cur_.next().text;
            return e;
        }
        if (cur_.accept_punct("(")) {
            auto inner = alternatives();
            if (!inner || !expect(")"))
                return std::nullopt;
            return inner;
        }
        if (t.kind != TokenKind::identifier) {
            fail("a keyword, assignment or '('");
            return std::nullopt;
        }
        e.kind = Element::Kind::assignment;
        e.feature = cur_.next().text;
        if (cur_.accept_punct("?")) {
            if (cur_.peek().kind != TokenKind::string) {
                fail("a flag keyword");
                return std::nullopt;
            }
            e.op = AssignOp::flag;
            e.keyword = cur_.next().text;
            return e;
        }
        if (cur_.accept_punct("+="))
            e.op = AssignOp::add;
        else if (cur_.accept_punct("="))
            e.op = AssignOp::set;
        else {
            fail("'=', '+=' or '?' after feature '" + e.feature + "'");
            return std::nullopt;
        }
        if (cur_.peek().kind != TokenKind::identifier) {
            fail("a rule or terminal name");
            return std::nullopt;
        }
        std::string callee = cur_.next().text;
        if (auto term = terminal_named(callee))
            e.terminal = term;
        else
            e.rule = std::move(callee);
        return e;
    }

    TokenCursor cur_;
    Diagnostics diags_;
};

/// Checks rules and assignments against the AST metamodel.
class Validator {
public:
    explicit Validator(const Grammar& g) : g_(g) {}

    Diagnostics run()
    {
        std::set<std::string> names;
        for (const Rule& r : g_.rules)
            if (!names.insert(r.name).second)
                error("duplicate-rule", "duplicate rule '" + r.name + "'", r.loc);
        for (const Rule& r : g_.rules)
            check_rule(r);
        return std::move(diags_);
    }

private:
    void error(std::string code, std::string msg, const SourceLocation& loc)
    {
        diags_.push_back(make_error(phase, std::move(code), std::move(msg), loc));
    }

    ClassHandle class_of(const std::string& name) const { return resolve_class(*g_.ast, TypeRef{"", name}); }

    void check_rule(const Rule& r)
    {
        ClassHandle cls = class_of(r.name);
        if (!cls || cls.mm != g_.ast.get()) {
            error("unknown-class", "rule '" + r.name + "' names no class of the AST metamodel", r.loc);
            return;
        }
        if (r.is_abstract) {
            if (!cls.cls->is_abstract)
                error("grammar-type", "abstract rule '" + r.name + "' names a concrete class", r.loc);
            for (const std::string& alt : r.alternatives) {
                const Rule* target = g_.find(alt);
                if (!target) {
                    error("unknown-rule", "unknown rule '" + alt + "'", r.loc);
                    continue;
                }
                ClassHandle ac = class_of(alt);
                if (ac && !is_subtype(ac, cls))
                    error("grammar-type", "alternative '" + alt + "' is not a subtype of '" + r.name + "'", r.loc);
            }
            return;
        }
        if (cls.cls->is_abstract)
            error("grammar-type", "class '" + r.name + "' is abstract; its rule must be declared Abstract", r.loc);
        check_element(r.body, cls);
    }

    void check_element(const Element& e, ClassHandle cls)
    {
        for (const Element& c : e.children)
            check_element(c, cls);
        if (e.kind != Element::Kind::assignment)
            return;
        auto fh = find_feature(cls, e.feature);
        if (!fh) {
            error("unknown-feature", "class '" + cls.name() + "' has no feature '" + e.feature + "'", e.loc);
            return;
        }
        const MetaFeature& f = *fh->feature;
        const Metamodel& owner = *fh->owner.mm;
        const std::string where = "'" + cls.name() + "." + f.name + "'";
        if (e.op == AssignOp::flag) {
            DataTypeHandle dt = f.is_attribute() ? resolve_datatype(owner, f.type) : DataTypeHandle{};
            if (!dt || dt.type->kind != DataKind::boolean || f.bounds.many())
                error("grammar-operator", "flag assignment needs a single-valued boolean attribute, " + where + " is not",
                      e.loc);
            return;
        }
        if (e.op == AssignOp::add && !f.bounds.many())
            error("grammar-operator", "'+=' on single-valued feature " + where, e.loc);
        if (e.op == AssignOp::set && f.bounds.many())
            error("grammar-operator", "'=' on multi-valued feature " + where + "; use '+='", e.loc);

        if (e.terminal) {
            DataTypeHandle dt = f.is_attribute() ? resolve_datatype(owner, f.type) : DataTypeHandle{};
            DataKind want = *e.terminal == Terminal::integer ? DataKind::integer : DataKind::string;
            if (!dt || dt.type->kind != want)
                error("grammar-type",
                      std::string(to_string(*e.terminal)) + " does not fit " + where + " of type " + f.type.qualified(),
                      e.loc);
            return;
        }
        const Rule* callee = g_.find(e.rule);
        if (!callee) {
            error("unknown-rule", "unknown rule '" + e.rule + "'", e.loc);
            return;
        }
        if (f.is_attribute()) {
            error("grammar-type", "rule '" + e.rule + "' assigned to attribute " + where, e.loc);
            return;
        }
        if (f.is_cross()) {
            error("cross-reference", "cross-reference " + where + " cannot be assigned in a grammar", e.loc);
            return;
        }
        ClassHandle ft = resolve_class(owner, f.type);
        ClassHandle rc = class_of(e.rule);
        if (ft && rc && !is_subtype(rc, ft))
            error("grammar-type", "rule '" + e.rule + "' does not produce a " + f.type.qualified() + " for " + where,
                  e.loc);
    }

    const Grammar& g_;
    Diagnostics diags_;
};

void collect_keywords(const Element& e, std::set<std::string>& out)
{
    if (e.kind == Element::Kind::keyword || (e.kind == Element::Kind::assignment && e.op == AssignOp::flag))
        out.insert(e.keyword);
    for (const Element& c : e.children)
        collect_keywords(c, out);
}

enum class Level { alternatives, sequence, atom };

void print_element(const Element& e, Level level, std::ostream& out)
{
    using K = Element::Kind;
    switch (e.kind) {
    case K::keyword:
        out << quote_string(e.keyword);
        return;
    case K::assignment:
        out << e.feature;
        if (e.op == AssignOp::flag) {
            out << '?' << quote_string(e.keyword);
            return;
        }
        out << (e.op == AssignOp::add ? "+=" : "=") << (e.terminal ? std::string(to_string(*e.terminal)) : e.rule);
        return;
    case K::sequence:
        if (level == Level::atom)
            out << '(';
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            if (i)
                out << ' ';
            print_element(e.children[i], Level::atom, out);
        }
        if (level == Level::atom)
            out << ')';
        return;
    case K::alternatives:
        if (level != Level::alternatives)
            out << '(';
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            if (i)
                out << " | ";
            print_element(e.children[i], Level::sequence, out);
        }
        if (level != Level::alternatives)
            out << ')';
        return;
    case K::optional:
    case K::star:
    case K::plus: {
        const Element& b = e.body();
        bool simple = b.kind == K::keyword || b.kind == K::assignment;
        if (!simple)
            out << '(';
        print_element(b, Level::alternatives, out);
        if (!simple)
            out << ')';
        out << (e.kind == K::optional ? "?" : e.kind == K::star ? "*" : "+");
        return;
    }
    }
}

bool hyphen_word(std::string_view s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (std::size_t i = 1; i < s.size(); ++i) {
        char c = s[i];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
            continue;
        if (c == '-' && i + 1 < s.size() && std::isalpha(static_cast<unsigned char>(s[i + 1])))
            continue;
        return false;
    }
    return true;
}

}  // namespace

Result<Grammar> parse_grammar(std::string_view text, std::shared_ptr<const Metamodel> ast, const std::string& file)
{
    LexOptions opts;
    opts.punctuators = {"+="};
    opts.phase = phase;
    auto tokens = tokenize(text, file, opts);
    if (!tokens)
        return tokens.take_diagnostics();
    Parser p(std::move(tokens).value());
    auto rules = p.run();
    if (!rules)
        return std::move(p.diagnostics());
    Grammar g;
    g.ast = std::move(ast);
    g.rules = std::move(*rules);
    if (g.rules.empty())
        return Diagnostics{make_error(phase, "syntax", "grammar has no rules", SourceLocation{file, 1, 1})};
    Diagnostics diags = Validator(g).run();
    if (has_errors(diags))
        return diags;
    return Result<Grammar>(std::move(g), std::move(diags));
}

std::string print_grammar(const Grammar& g)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < g.rules.size(); ++i) {
        const Rule& r = g.rules[i];
        if (i)
            out << '\n';
        if (r.is_abstract) {
            out << "Abstract " << r.name << ":\n    ";
            for (std::size_t k = 0; k < r.alternatives.size(); ++k)
                out << (k ? " | " : "") << r.alternatives[k];
        } else {
            out << r.name << ":\n    ";
            print_element(r.body, Level::alternatives, out);
        }
        out << ";\n";
    }
    return out.str();
}

bool Vocabulary::is_reserved(std::string_view word) const
{
    return std::find(word_keywords.begin(), word_keywords.end(), word) != word_keywords.end();
}

bool Vocabulary::is_id(std::string_view s) const
{
    bool shape = hyphenated_identifiers ? hyphen_word(s) : is_identifier(s);
    return shape && !is_reserved(s);
}

Vocabulary vocabulary(const Grammar& g)
{
    std::set<std::string> all;
    for (const Rule& r : g.rules)
        if (!r.is_abstract)
            collect_keywords(r.body, all);
    Vocabulary v;
    for (const std::string& k : all) {
        if (hyphen_word(k)) {
            v.word_keywords.push_back(k);
        } else {
            v.punct_keywords.push_back(k);
            if (k.find('-') != std::string::npos) {
                v.hyphenated_identifiers = false;
                v.negative_integers = false;
            }
        }
    }
    return v;
}

}  // namespace mdsl::grammar
