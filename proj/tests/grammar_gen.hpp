#ifndef MDSL_TESTS_GRAMMAR_GEN_HPP
#define MDSL_TESTS_GRAMMAR_GEN_HPP

#include <random>
#include <string>

#include "mdsl/grammar.hpp"
#include "mdsl/model.hpp"

namespace testing_support {

/// Random AST models that some derivation of the grammar produces: the generator walks the
/// rules the way a parser would, picking alternatives and repetition counts at random.
class GrammarWalker {
public:
    GrammarWalker(const mdsl::grammar::Grammar& g, std::mt19937& rng, int max_depth = 4)
        : g_(g), v_(mdsl::grammar::vocabulary(g)), rng_(rng), max_depth_(max_depth)
    {
    }

    mdsl::Model generate()
    {
        mdsl::Model m(g_.ast);
        model_ = &m;
        mdsl::ModelObject& root = object(g_.entry_rule(), 0);
        m.set_root(root);
        model_ = nullptr;
        return m;
    }

private:
    using Element = mdsl::grammar::Element;

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

    mdsl::ModelObject& object(const mdsl::grammar::Rule& r, int depth)
    {
        if (r.is_abstract)
            return object(*g_.find(r.alternatives[pick(r.alternatives.size())]), depth);
        mdsl::ModelObject& obj = model_->create(mdsl::resolve_class(*g_.ast, mdsl::TypeRef{"", r.name}));
        walk(r.body, obj, depth);
        return obj;
    }

    void walk(const Element& e, mdsl::ModelObject& obj, int depth)
    {
        using K = Element::Kind;
        bool deep = depth >= max_depth_;
        switch (e.kind) {
        case K::keyword:
            break;
        case K::assignment:
            assign(e, obj, depth);
            break;
        case K::sequence:
            for (const Element& c : e.children)
                walk(c, obj, depth);
            break;
        case K::alternatives:
            walk(e.children[pick(e.children.size())], obj, depth);
            break;
        case K::optional:
            if (!deep && pick(2))
                walk(e.body(), obj, depth);
            break;
        case K::star:
        case K::plus: {
            std::size_t n = deep ? 0 : pick(4);
            if (e.kind == K::plus)
                n = std::max<std::size_t>(n, 1);
            for (std::size_t i = 0; i < n; ++i)
                walk(e.body(), obj, depth);
            break;
        }
        }
    }

    void assign(const Element& e, mdsl::ModelObject& obj, int depth)
    {
        using mdsl::grammar::AssignOp;
        using mdsl::grammar::Terminal;
        if (e.op == AssignOp::flag) {
            obj.set_attribute(e.feature, pick(2) == 0);
            return;
        }
        if (e.terminal) {
            mdsl::Literal value;
            switch (*e.terminal) {
            case Terminal::id: value = identifier(); break;
            case Terminal::string: value = text(); break;
            case Terminal::integer: value = integer(); break;
            }
            if (e.op == AssignOp::add)
                obj.add_attribute(e.feature, value);
            else
                obj.set_attribute(e.feature, value);
            return;
        }
        mdsl::ModelObject& child = object(*g_.find(e.rule), depth + 1);
        if (e.op == AssignOp::add)
            obj.add_child(e.feature, child);
        else
            obj.set_child(e.feature, child);
    }

    std::string identifier()
    {
        static const char* const stems[] = {"a", "Foo", "bar", "x1", "Node_2", "item", "Q", "value", "zz9"};
        for (;;) {
            std::string s = stems[pick(std::size(stems))];
            if (pick(3) == 0)
                s += std::to_string(pick(100));
            if (v_.hyphenated_identifiers && pick(5) == 0)
                s += "-part";
            if (v_.is_id(s))
                return s;
        }
    }

    std::string text()
    {
        static const char* const pieces[] = {"", "x", " space ", "quote\"", "back\\slash", "tab\t", "line\n", "{;}"};
        std::string s;
        for (std::size_t i = pick(3); i > 0; --i)
            s += pieces[pick(std::size(pieces))];
        return s;
    }

    std::int64_t integer()
    {
        auto n = static_cast<std::int64_t>(pick(50));
        if (v_.negative_integers && pick(4) == 0)
            n = -n - 1;
        return n;
    }

    const mdsl::grammar::Grammar& g_;
    mdsl::grammar::Vocabulary v_;
    std::mt19937& rng_;
    int max_depth_;
    mdsl::Model* model_ = nullptr;
};

}  // namespace testing_support

#endif
