#ifndef MDSL_GRAMMAR_ANALYSIS_HPP
#define MDSL_GRAMMAR_ANALYSIS_HPP

#include <map>
#include <set>
#include <string>

#include "mdsl/grammar.hpp"

namespace mdsl::grammar::detail {

/// Lookahead symbols: `"kw` for a keyword, `ID`/`STRING`/`INT`, and `$` for end of input.
using Symbol = std::string;
using SymbolSet = std::set<Symbol>;

inline const Symbol end_symbol = "$";

inline Symbol keyword_symbol(const std::string& kw) { return "\"" + kw; }

std::string describe_symbol(const Symbol& s);
std::string describe_symbols(const SymbolSet& s);

struct First {
    SymbolSet symbols;
    bool nullable = false;
};

/// FIRST/nullable per rule and FOLLOW per rule, computed to a fixpoint.
class Analysis {
public:
    explicit Analysis(const Grammar& g);

    First first(const Element& e) const;
    const First& first(const Rule& r) const { return rule_first_.at(&r); }
    const SymbolSet& follow(const Rule& r) const { return follow_.at(&r); }
    const Rule* rule(const std::string& name) const;

    /// Calls `visit(element, follow_set)` for every element reachable inside concrete rule bodies.
    template <class F>
    void each_element(F&& visit) const
    {
        for (const Rule& r : g_.rules)
            if (!r.is_abstract)
                walk(r.body, follow_.at(&r), visit);
    }

    const Grammar& grammar() const { return g_; }

private:
    template <class F>
    void walk(const Element& e, const SymbolSet& follow, F& visit) const
    {
        visit(e, follow);
        switch (e.kind) {
        case Element::Kind::sequence: {
            std::vector<SymbolSet> after(e.children.size());
            SymbolSet cur = follow;
            for (std::size_t i = e.children.size(); i-- > 0;) {
                after[i] = cur;
                First f = first(e.children[i]);
                if (!f.nullable)
                    cur.clear();
                cur.insert(f.symbols.begin(), f.symbols.end());
            }
            for (std::size_t i = 0; i < e.children.size(); ++i)
                walk(e.children[i], after[i], visit);
            break;
        }
        case Element::Kind::alternatives:
        case Element::Kind::optional:
            for (const Element& c : e.children)
                walk(c, follow, visit);
            break;
        case Element::Kind::star:
        case Element::Kind::plus: {
            SymbolSet f = follow;
            First b = first(e.body());
            f.insert(b.symbols.begin(), b.symbols.end());
            walk(e.body(), f, visit);
            break;
        }
        default:
            break;
        }
    }

    const Grammar& g_;
    std::map<std::string, const Rule*> by_name_;
    std::map<const Rule*, First> rule_first_;
    std::map<const Rule*, SymbolSet> follow_;
};

}  // namespace mdsl::grammar::detail

#endif
