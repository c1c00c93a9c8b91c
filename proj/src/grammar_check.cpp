#include <algorithm>
#include <functional>

#include "grammar_analysis.hpp"
#include "mdsl/lexer.hpp"

namespace mdsl::grammar {
namespace detail {

std::string describe_symbol(const Symbol& s)
{
    if (s == end_symbol)
        return "end of input";
    if (!s.empty() && s.front() == '"')
        return quote_string(s.substr(1));
    return s;
}

std::string describe_symbols(const SymbolSet& s)
{
    std::string out;
    for (const Symbol& sym : s) {
        if (!out.empty())
            out += ", ";
        out += describe_symbol(sym);
    }
    return out;
}

Analysis::Analysis(const Grammar& g) : g_(g)
{
    for (const Rule& r : g.rules) {
        by_name_.emplace(r.name, &r);
        rule_first_[&r];
        follow_[&r];
    }

    for (bool changed = true; changed;) {
        changed = false;
        for (const Rule& r : g.rules) {
            First f;
            if (r.is_abstract) {
                for (const std::string& alt : r.alternatives) {
                    if (const Rule* ar = rule(alt)) {
                        const First& af = rule_first_.at(ar);
                        f.symbols.insert(af.symbols.begin(), af.symbols.end());
                        f.nullable = f.nullable || af.nullable;
                    }
                }
            } else {
                f = first(r.body);
            }
            First& cur = rule_first_.at(&r);
            if (f.symbols != cur.symbols || f.nullable != cur.nullable) {
                cur = std::move(f);
                changed = true;
            }
        }
    }

    if (!g.rules.empty())
        follow_.at(&g.entry_rule()).insert(end_symbol);
    for (;;) {
        auto next = follow_;
        for (const Rule& r : g.rules) {
            if (r.is_abstract) {
                for (const std::string& alt : r.alternatives)
                    if (const Rule* ar = rule(alt))
                        next.at(ar).insert(follow_.at(&r).begin(), follow_.at(&r).end());
                continue;
            }
            auto visit = [&](const Element& e, const SymbolSet& f) {
                if (e.kind == Element::Kind::assignment && e.op != AssignOp::flag && !e.terminal)
                    if (const Rule* callee = rule(e.rule))
                        next.at(callee).insert(f.begin(), f.end());
            };
            walk(r.body, follow_.at(&r), visit);
        }
        if (next == follow_)
            break;
        follow_ = std::move(next);
    }
}

const Rule* Analysis::rule(const std::string& name) const
{
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : it->second;
}

First Analysis::first(const Element& e) const
{
    using K = Element::Kind;
    First f;
    switch (e.kind) {
    case K::keyword:
        f.symbols.insert(keyword_symbol(e.keyword));
        break;
    case K::assignment:
        if (e.op == AssignOp::flag) {
            f.symbols.insert(keyword_symbol(e.keyword));
            f.nullable = true;
        } else if (e.terminal) {
            f.symbols.insert(std::string(to_string(*e.terminal)));
        } else if (const Rule* r = rule(e.rule)) {
            f = rule_first_.at(r);
        }
        break;
    case K::sequence:
        f.nullable = true;
        for (const Element& c : e.children) {
            First cf = first(c);
            f.symbols.insert(cf.symbols.begin(), cf.symbols.end());
            if (!cf.nullable) {
                f.nullable = false;
                break;
            }
        }
        break;
    case K::alternatives:
        for (const Element& c : e.children) {
            First cf = first(c);
            f.symbols.insert(cf.symbols.begin(), cf.symbols.end());
            f.nullable = f.nullable || cf.nullable;
        }
        break;
    case K::optional:
    case K::star:
        f = first(e.body());
        f.nullable = true;
        break;
    case K::plus:
        f = first(e.body());
        break;
    }
    return f;
}

}  // namespace detail

namespace {

using namespace detail;

SymbolSet intersect(const SymbolSet& a, const SymbolSet& b)
{
    SymbolSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

class Checker {
public:
    explicit Checker(const Grammar& g) : g_(g), a_(g) {}

    Diagnostics run()
    {
        a_.each_element([this](const Element& e, const SymbolSet& follow) { check(e, follow); });
        for (const Rule& r : g_.rules)
            if (r.is_abstract)
                check_abstract(r);
        check_left_recursion();
        return std::move(diags_);
    }

private:
    void ambiguity(const std::string& msg, const SourceLocation& loc)
    {
        diags_.push_back(make_error(Phase::grammar, "ambiguity", msg, loc));
    }

    // Alternatives are chosen by one token: FIRST sets must be disjoint, and a nullable
    // alternative must not compete with a token that may follow the whole choice.
    void check_choice(const std::vector<First>& firsts, const std::vector<SourceLocation>& locs,
                      const SymbolSet& follow, const std::string& what)
    {
        std::size_t nullable = 0;
        for (std::size_t j = 0; j < firsts.size(); ++j) {
            for (std::size_t i = 0; i < j; ++i) {
                SymbolSet both = intersect(firsts[i].symbols, firsts[j].symbols);
                if (!both.empty())
                    ambiguity(what + " " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                  " both start with " + describe_symbols(both),
                              locs[j]);
            }
            if (firsts[j].nullable)
                ++nullable;
        }
        if (nullable > 1) {
            ambiguity(what + "s: more than one can match nothing", locs.front());
            return;
        }
        for (std::size_t i = 0; i < firsts.size(); ++i) {
            if (!firsts[i].nullable)
                continue;
            for (std::size_t j = 0; j < firsts.size(); ++j) {
                SymbolSet both = j == i ? SymbolSet{} : intersect(firsts[j].symbols, follow);
                if (!both.empty())
                    ambiguity(what + " " + std::to_string(j + 1) + " starts with " + describe_symbols(both) +
                                  ", which may also follow the empty " + what + " " + std::to_string(i + 1),
                              locs[j]);
            }
        }
    }

    void check(const Element& e, const SymbolSet& follow)
    {
        using K = Element::Kind;
        switch (e.kind) {
        case K::alternatives: {
            std::vector<First> firsts;
            std::vector<SourceLocation> locs;
            for (const Element& c : e.children) {
                firsts.push_back(a_.first(c));
                locs.push_back(c.loc);
            }
            check_choice(firsts, locs, follow, "alternative");
            break;
        }
        case K::optional:
        case K::star:
        case K::plus: {
            First b = a_.first(e.body());
            if (e.kind != K::optional && b.nullable) {
                ambiguity("repeated part can match nothing", e.loc);
                break;
            }
            SymbolSet both = intersect(b.symbols, follow);
            if (!both.empty())
                ambiguity(std::string(e.kind == K::optional ? "optional" : "repeated") + " part starts with " +
                              describe_symbols(both) + ", which may also follow it",
                          e.loc);
            break;
        }
        case K::assignment:
            if (e.op == AssignOp::flag && follow.count(keyword_symbol(e.keyword)))
                ambiguity("flag keyword " + quote_string(e.keyword) + " may also follow the flag", e.loc);
            break;
        default:
            break;
        }
    }

    void check_abstract(const Rule& r)
    {
        std::vector<First> firsts;
        std::vector<SourceLocation> locs;
        for (const std::string& alt : r.alternatives) {
            const Rule* ar = a_.rule(alt);
            if (!ar)
                continue;
            firsts.push_back(a_.first(*ar));
            locs.push_back(r.loc);
        }
        if (!firsts.empty())
            check_choice(firsts, locs, a_.follow(r), "alternative of '" + r.name + "',");
    }

    // Rules a body may call before consuming any token; returns whether the element is nullable.
    bool left_calls(const Element& e, std::set<const Rule*>& out) const
    {
        using K = Element::Kind;
        switch (e.kind) {
        case K::keyword:
            return false;
        case K::assignment:
            if (e.op == AssignOp::flag)
                return true;
            if (e.terminal)
                return false;
            if (const Rule* r = a_.rule(e.rule)) {
                out.insert(r);
                return a_.first(*r).nullable;
            }
            return false;
        case K::sequence:
            for (const Element& c : e.children)
                if (!left_calls(c, out))
                    return false;
            return true;
        case K::alternatives: {
            bool any = false;
            for (const Element& c : e.children)
                any = left_calls(c, out) || any;
            return any;
        }
        case K::optional:
        case K::star:
            left_calls(e.body(), out);
            return true;
        case K::plus:
            return left_calls(e.body(), out);
        }
        return false;
    }

    std::set<const Rule*> left_edges(const Rule& r) const
    {
        std::set<const Rule*> out;
        if (r.is_abstract) {
            for (const std::string& alt : r.alternatives)
                if (const Rule* ar = a_.rule(alt))
                    out.insert(ar);
        } else {
            left_calls(r.body, out);
        }
        return out;
    }

    static void all_calls(const Element& e, const Analysis& a, std::vector<const Rule*>& out)
    {
        if (e.kind == Element::Kind::assignment && e.op != AssignOp::flag && !e.terminal)
            if (const Rule* r = a.rule(e.rule))
                out.push_back(r);
        for (const Element& c : e.children)
            all_calls(c, a, out);
    }

    void check_left_recursion()
    {
        if (g_.rules.empty())
            return;
        // Rules reachable from the entry rule, in discovery order.
        std::vector<const Rule*> reachable{&g_.entry_rule()};
        std::set<const Rule*> seen{&g_.entry_rule()};
        for (std::size_t i = 0; i < reachable.size(); ++i) {
            std::vector<const Rule*> calls;
            const Rule& r = *reachable[i];
            if (r.is_abstract) {
                for (const std::string& alt : r.alternatives)
                    if (const Rule* ar = a_.rule(alt))
                        calls.push_back(ar);
            } else {
                all_calls(r.body, a_, calls);
            }
            for (const Rule* c : calls)
                if (seen.insert(c).second)
                    reachable.push_back(c);
        }
        for (const Rule* r : reachable) {
            std::set<const Rule*> visited;
            std::vector<const Rule*> stack(1, r);
            bool cyclic = false;
            while (!stack.empty() && !cyclic) {
                const Rule* cur = stack.back();
                stack.pop_back();
                for (const Rule* next : left_edges(*cur)) {
                    if (next == r) {
                        cyclic = true;
                        break;
                    }
                    if (visited.insert(next).second)
                        stack.push_back(next);
                }
            }
            if (cyclic)
                diags_.push_back(make_error(Phase::grammar, "left-recursion",
                                            "rule '" + r->name + "' can call itself without consuming input", r->loc));
        }
    }

    const Grammar& g_;
    Analysis a_;
    Diagnostics diags_;
};

}  // namespace

Diagnostics check_grammar(const Grammar& g)
{
    return Checker(g).run();
}

}  // namespace mdsl::grammar
