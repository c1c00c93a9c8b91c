#include <map>

#include "grammar_analysis.hpp"
#include "mdsl/lexer.hpp"

namespace mdsl::grammar {
namespace {

using namespace detail;

class TextParser {
public:
    TextParser(const Grammar& g, std::vector<Token> tokens)
        : g_(g), a_(g), v_(vocabulary(g)), tokens_(std::move(tokens)), model_(g.ast)
    {
    }

    Result<Model> run()
    {
        ModelObject* root = parse_rule(g_.entry_rule());
        if (root && symbol(peek()) != end_symbol)
            expected(SymbolSet{end_symbol});
        if (!diags_.empty())
            return std::move(diags_);
        model_.set_root(*root);
        Diagnostics invalid = validate_model(model_);
        if (has_errors(invalid))
            return invalid;
        return std::move(model_);
    }

private:
    const Token& peek() const { return tokens_[pos_]; }

    Symbol symbol(const Token& t) const
    {
        switch (t.kind) {
        case TokenKind::end: return end_symbol;
        case TokenKind::identifier: return v_.is_reserved(t.text) ? keyword_symbol(t.text) : "ID";
        case TokenKind::string: return "STRING";
        case TokenKind::integer: return "INT";
        case TokenKind::punct: return keyword_symbol(t.text);
        }
        return end_symbol;
    }

    bool lookahead_in(const First& f) const { return f.symbols.count(symbol(peek())) != 0; }

    void expected(const SymbolSet& want)
    {
        diags_.push_back(make_error(Phase::parse, "syntax",
                                    "expected " + describe_symbols(want) + ", found " + describe(peek()),
                                    peek().loc));
    }

    ModelObject* parse_rule(const Rule& r)
    {
        if (r.is_abstract) {
            const Rule* nullable = nullptr;
            for (const std::string& alt : r.alternatives) {
                const Rule* ar = a_.rule(alt);
                if (lookahead_in(a_.first(*ar)))
                    return parse_rule(*ar);
                if (a_.first(*ar).nullable && !nullable)
                    nullable = ar;
            }
            if (nullable)
                return parse_rule(*nullable);
            expected(a_.first(r).symbols);
            return nullptr;
        }
        ModelObject& obj = model_.create(resolve_class(*g_.ast, TypeRef{"", r.name}));
        obj.location = peek().loc;
        return parse(r.body, obj) ? &obj : nullptr;
    }

    bool parse(const Element& e, ModelObject& obj)
    {
        using K = Element::Kind;
        switch (e.kind) {
        case K::keyword:
            if (symbol(peek()) != keyword_symbol(e.keyword)) {
                expected(SymbolSet{keyword_symbol(e.keyword)});
                return false;
            }
            ++pos_;
            return true;
        case K::assignment:
            return assign(e, obj);
        case K::sequence:
            for (const Element& c : e.children)
                if (!parse(c, obj))
                    return false;
            return true;
        case K::alternatives: {
            const Element* nullable = nullptr;
            for (const Element& c : e.children) {
                First f = a_.first(c);
                if (lookahead_in(f))
                    return parse(c, obj);
                if (f.nullable && !nullable)
                    nullable = &c;
            }
            if (nullable)
                return parse(*nullable, obj);
            expected(a_.first(e).symbols);
            return false;
        }
        case K::optional:
            return !lookahead_in(a_.first(e.body())) || parse(e.body(), obj);
        case K::plus:
            if (!parse(e.body(), obj))
                return false;
            [[fallthrough]];
        case K::star: {
            First f = a_.first(e.body());
            while (lookahead_in(f)) {
                std::size_t before = pos_;
                if (!parse(e.body(), obj))
                    return false;
                if (pos_ == before)
                    break;
            }
            return true;
        }
        }
        return false;
    }

    bool assign(const Element& e, ModelObject& obj)
    {
        if (e.op == AssignOp::flag) {
            bool present = symbol(peek()) == keyword_symbol(e.keyword);
            if (present)
                ++pos_;
            obj.set_attribute(e.feature, present);
            return true;
        }
        if (e.terminal) {
            Symbol want(to_string(*e.terminal));
            if (symbol(peek()) != want) {
                expected(SymbolSet{want});
                return false;
            }
            const Token& t = tokens_[pos_++];
            Literal value = *e.terminal == Terminal::integer ? Literal(t.int_value) : Literal(t.text);
            if (e.op == AssignOp::add)
                obj.add_attribute(e.feature, std::move(value));
            else
                obj.set_attribute(e.feature, std::move(value));
            return true;
        }
        ModelObject* child = parse_rule(*a_.rule(e.rule));
        if (!child)
            return false;
        if (e.op == AssignOp::add)
            obj.add_child(e.feature, *child);
        else
            obj.set_child(e.feature, *child);
        return true;
    }

    const Grammar& g_;
    Analysis a_;
    Vocabulary v_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    Model model_;
    Diagnostics diags_;
};

std::optional<Literal> unset_value(const MetaFeature& f, const Metamodel& owner)
{
    if (f.default_value)
        return f.default_value;
    DataTypeHandle dt = resolve_datatype(owner, f.type);
    if (!dt)
        return std::nullopt;
    switch (dt.type->kind) {
    case DataKind::boolean: return Literal(false);
    case DataKind::integer: return Literal(std::int64_t{0});
    case DataKind::string: return std::nullopt;
    }
    return std::nullopt;
}

class Renderer {
public:
    explicit Renderer(const Grammar& g) : g_(g), v_(vocabulary(g)) {}

    Result<std::string> run(const Model& m)
    {
        if (!m.root())
            return Diagnostics{make_error(Phase::grammar, "no-root", "model has no root object", ModelPath{"/"})};
        if (!render_object(*m.root(), g_.entry_rule()))
            return Diagnostics{*error_};
        return layout();
    }

private:
    using Cursors = std::map<const ModelObject*, std::map<std::string, std::size_t, std::less<>>>;

    struct State {
        std::vector<std::string> tokens;
        Cursors cursors;
        std::optional<Diagnostic> error;
    };

    State save() const { return State{tokens_, cursors_, error_}; }
    void restore(State s)
    {
        tokens_ = std::move(s.tokens);
        cursors_ = std::move(s.cursors);
        error_ = std::move(s.error);
    }

    bool fail(const ModelObject& obj, std::string code, std::string msg)
    {
        if (!error_)
            error_ = make_error(Phase::grammar, std::move(code), std::move(msg), ModelPath{object_path(obj)});
        return false;
    }

    // The concrete rule for `obj` reachable from `r` through abstract alternatives.
    const Rule* concrete_rule(const Rule& r, const ModelObject& obj, int depth = 0) const
    {
        if (!r.is_abstract)
            return r.name == obj.class_name() ? &r : nullptr;
        if (depth > static_cast<int>(g_.rules.size()))
            return nullptr;
        for (const std::string& alt : r.alternatives)
            if (const Rule* ar = g_.find(alt))
                if (const Rule* found = concrete_rule(*ar, obj, depth + 1))
                    return found;
        return nullptr;
    }

    bool render_object(const ModelObject& obj, const Rule& via)
    {
        const Rule* r = concrete_rule(via, obj);
        if (!r)
            return fail(obj, "no-rule", "no rule for class '" + obj.class_name() + "' reachable from '" + via.name + "'");
        cursors_[&obj];
        if (!render(r->body, obj))
            return false;
        return check_consumed(obj);
    }

    bool check_consumed(const ModelObject& obj)
    {
        const auto& cur = cursors_[&obj];
        for (const auto& [name, slot] : obj.slots()) {
            auto it = cur.find(name);
            std::size_t used = it == cur.end() ? 0 : it->second;
            auto fh = find_feature(obj.cls(), name);
            const MetaFeature& f = *fh->feature;
            std::size_t count = std::visit([](const auto& values) { return values.size(); }, slot);
            if (f.bounds.many()) {
                if (count > used)
                    return fail(obj, "unrendered-value",
                                "rule '" + obj.class_name() + "' renders only " + std::to_string(used) + " of " +
                                    std::to_string(count) + " values of '" + name + "'");
                continue;
            }
            if (used > 0 || count == 0)
                continue;
            if (f.is_attribute()) {
                auto def = unset_value(f, *fh->owner.mm);
                if (def && std::get<ModelObject::Attributes>(slot).front() == *def)
                    continue;
            }
            return fail(obj, "unrendered-value",
                        "rule '" + obj.class_name() + "' does not render the value of '" + name + "'");
        }
        return true;
    }

    std::size_t& cursor(const ModelObject& obj, const std::string& feature) { return cursors_[&obj][feature]; }

    bool flag_pending(const ModelObject& obj, const std::string& feature)
    {
        return cursor(obj, feature) == 0 && obj.bool_attribute(feature);
    }

    std::size_t remaining(const ModelObject& obj, const Element& e)
    {
        const MetaFeature& f = *find_feature(obj.cls(), e.feature)->feature;
        std::size_t used = cursor(obj, e.feature);
        if (e.op == AssignOp::flag)
            return flag_pending(obj, e.feature) ? 1 : 0;
        const ModelObject::SlotValue* slot = obj.slot(e.feature);
        if (!slot)
            return 0;
        std::size_t count = std::visit([](const auto& values) { return values.size(); }, *slot);
        if (!f.bounds.many())
            return used == 0 && count > 0 ? 1 : 0;
        return count > used ? count - used : 0;
    }

    std::size_t score(const Element& e, const ModelObject& obj)
    {
        if (e.kind == Element::Kind::assignment)
            return remaining(obj, e);
        std::size_t s = 0;
        for (const Element& c : e.children)
            s += score(c, obj);
        return s;
    }

    static bool has_assignment(const Element& e)
    {
        if (e.kind == Element::Kind::assignment)
            return true;
        for (const Element& c : e.children)
            if (has_assignment(c))
                return true;
        return false;
    }

    bool render(const Element& e, const ModelObject& obj)
    {
        using K = Element::Kind;
        switch (e.kind) {
        case K::keyword:
            tokens_.push_back(e.keyword);
            return true;
        case K::assignment:
            return render_assignment(e, obj);
        case K::sequence:
            for (const Element& c : e.children)
                if (!render(c, obj))
                    return false;
            return true;
        case K::alternatives: {
            std::vector<std::size_t> scores;
            for (const Element& c : e.children)
                scores.push_back(score(c, obj));
            std::size_t best = *std::max_element(scores.begin(), scores.end());
            State before = save();
            std::optional<Diagnostic> first_error;
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                if (scores[i] != best)
                    continue;
                if (render(e.children[i], obj))
                    return true;
                if (!first_error)
                    first_error = error_;
                restore(before);
            }
            error_ = first_error;
            if (!error_)
                fail(obj, "unrendered-value", "no alternative renders");
            return false;
        }
        case K::optional:
            if (score(e.body(), obj) > 0 || !has_assignment(e.body()))
                return render(e.body(), obj);
            return true;
        case K::plus:
            if (!render(e.body(), obj))
                return false;
            [[fallthrough]];
        case K::star:
            while (score(e.body(), obj) > 0) {
                std::size_t progress = score(e.body(), obj);
                if (!render(e.body(), obj))
                    return false;
                if (score(e.body(), obj) >= progress)
                    break;
            }
            return true;
        }
        return false;
    }

    bool render_assignment(const Element& e, const ModelObject& obj)
    {
        std::size_t& used = cursor(obj, e.feature);
        if (e.op == AssignOp::flag) {
            if (used == 0 && obj.bool_attribute(e.feature)) {
                tokens_.push_back(e.keyword);
                used = 1;
            }
            return true;
        }
        auto fh = find_feature(obj.cls(), e.feature);
        const MetaFeature& f = *fh->feature;
        if (e.terminal) {
            std::optional<Literal> value;
            if (f.bounds.many()) {
                const auto& values = obj.attributes(e.feature);
                if (used < values.size())
                    value = values[used];
            } else if (used == 0) {
                value = obj.attribute(e.feature);
            }
            if (!value)
                return fail(obj, "unset-mandatory", "no value left for '" + obj.class_name() + "." + e.feature + "'");
            ++used;
            return emit_terminal(*e.terminal, *value, obj, e.feature);
        }
        const ModelObject* child = nullptr;
        if (f.bounds.many()) {
            const auto& children = obj.children(e.feature);
            if (used < children.size())
                child = children[used];
        } else if (used == 0) {
            child = obj.child(e.feature);
        }
        if (!child)
            return fail(obj, "unset-mandatory", "no object left for '" + obj.class_name() + "." + e.feature + "'");
        ++used;
        return render_object(*child, *g_.find(e.rule));
    }

    bool emit_terminal(Terminal t, const Literal& value, const ModelObject& obj, const std::string& feature)
    {
        switch (t) {
        case Terminal::id: {
            const auto* s = std::get_if<std::string>(&value);
            if (!s || !v_.is_id(*s))
                return fail(obj, "grammar-type",
                            "value " + format_literal(value) + " of '" + feature + "' cannot be written as an ID");
            tokens_.push_back(*s);
            return true;
        }
        case Terminal::string:
            tokens_.push_back(quote_string(std::get<std::string>(value)));
            return true;
        case Terminal::integer:
            tokens_.push_back(std::to_string(std::get<std::int64_t>(value)));
            return true;
        }
        return false;
    }

    std::string layout() const
    {
        std::string out;
        int indent = 0;
        bool line_start = true;
        auto pad = [&] { out.append(static_cast<std::size_t>(indent) * 4, ' '); };
        for (const std::string& t : tokens_) {
            if (t == "}") {
                indent = std::max(0, indent - 1);
                if (!line_start)
                    out += '\n';
                pad();
                out += "}\n";
                line_start = true;
                continue;
            }
            if (line_start)
                pad();
            else
                out += ' ';
            out += t;
            line_start = false;
            if (t == "{") {
                ++indent;
                out += '\n';
                line_start = true;
            } else if (t == ";") {
                out += '\n';
                line_start = true;
            }
        }
        if (!line_start)
            out += '\n';
        return out;
    }

    const Grammar& g_;
    Vocabulary v_;
    std::vector<std::string> tokens_;
    Cursors cursors_;
    std::optional<Diagnostic> error_;
};

}  // namespace

Result<Model> parse_text(std::string_view text, const Grammar& g, const std::string& file)
{
    Vocabulary v = vocabulary(g);
    LexOptions opts;
    for (const std::string& p : v.punct_keywords)
        if (p.size() > 1)
            opts.punctuators.push_back(p);
    opts.negative_integers = v.negative_integers;
    opts.hyphenated_identifiers = v.hyphenated_identifiers;
    opts.phase = Phase::parse;
    auto tokens = tokenize(text, file, opts);
    if (!tokens)
        return tokens.take_diagnostics();
    return TextParser(g, std::move(tokens).value()).run();
}

Result<std::string> render_ast(const Model& m, const Grammar& g)
{
    return Renderer(g).run(m);
}

}  // namespace mdsl::grammar
