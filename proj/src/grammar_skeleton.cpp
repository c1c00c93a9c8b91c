#include <set>
#include <sstream>

#include "mdsl/grammar.hpp"
#include "mdsl/lexer.hpp"

namespace mdsl::grammar {
namespace {

class Skeleton {
public:
    explicit Skeleton(const Metamodel& ast) : ast_(ast)
    {
        for (const Classifier& c : ast.classifiers)
            if (const auto* cls = std::get_if<MetaClass>(&c))
                classes_.push_back(ClassHandle{&ast, cls});
    }

    Result<std::string> run()
    {
        std::vector<ClassHandle> order;
        ClassHandle entry = entry_class();
        if (!entry)
            error("no-concrete-subtype", "metamodel '" + ast_.name + "' has no concrete class", "", "", nullptr);
        else
            order.push_back(entry);
        for (ClassHandle c : classes_)
            if (c != entry)
                order.push_back(c);

        std::ostringstream out;
        bool first = true;
        for (ClassHandle c : order) {
            std::string rule = c.cls->is_abstract ? abstract_rule(c) : concrete_rule(c);
            if (rule.empty())
                continue;
            out << (first ? "" : "\n") << rule;
            first = false;
        }
        if (has_errors(diags_))
            return std::move(diags_);
        return out.str();
    }

private:
    void error(std::string code, std::string msg, const std::string& cls, const std::string& feature,
               const SourceLocation* loc)
    {
        if (loc && !loc->file.empty()) {
            diags_.push_back(make_error(Phase::grammar, std::move(code), std::move(msg), *loc));
            return;
        }
        std::string path = "/" + ast_.name + (cls.empty() ? "" : "/" + cls) + (feature.empty() ? "" : "." + feature);
        diags_.push_back(make_error(Phase::grammar, std::move(code), std::move(msg), ModelPath{path}));
    }

    // The first concrete class that no containment can hold; falls back to the first concrete class.
    ClassHandle entry_class() const
    {
        ClassHandle fallback;
        for (ClassHandle c : classes_) {
            if (c.cls->is_abstract)
                continue;
            if (!fallback)
                fallback = c;
            bool contained = false;
            for (ClassHandle owner : classes_)
                for (const MetaFeature& f : owner.cls->features)
                    if (f.is_containment())
                        if (ClassHandle t = resolve_class(ast_, f.type); t && is_subtype(c, t))
                            contained = true;
            if (!contained)
                return c;
        }
        return fallback;
    }

    std::string keyword_for(ClassHandle c) const
    {
        const std::string& n = c.name();
        if (n.size() > 2 && n.compare(n.size() - 2, 2, "AS") == 0) {
            std::string stem = n.substr(0, n.size() - 2);
            if (!ast_.find(stem))
                return stem;
        }
        return n;
    }

    std::string abstract_rule(ClassHandle c)
    {
        std::vector<std::string> alts;
        for (ClassHandle sub : subtypes_of(ast_, c, false))
            if (!sub.cls->is_abstract && sub.mm == &ast_)
                alts.push_back(sub.name());
        if (alts.empty()) {
            error("no-concrete-subtype", "abstract class '" + c.name() + "' has no concrete subtype", c.name(), "",
                  &c.cls->loc);
            return "";
        }
        std::string out = "Abstract " + c.name() + ":\n    ";
        for (std::size_t i = 0; i < alts.size(); ++i)
            out += (i ? " | " : "") + alts[i];
        return out + ";\n";
    }

    std::string concrete_rule(ClassHandle c)
    {
        std::string out = c.name() + ":\n    " + quote_string(keyword_for(c)) + " \"{\"";
        for (const FeatureHandle& fh : all_features(c)) {
            std::string part = feature_part(c, *fh.feature, *fh.owner.mm);
            if (!part.empty())
                out += "\n        " + part;
        }
        return out + "\n    \"}\";\n";
    }

    std::string feature_part(ClassHandle c, const MetaFeature& f, const Metamodel& owner)
    {
        const std::string kw = quote_string(f.name);
        const bool many = f.bounds.many();
        const std::string op = many ? "+=" : "=";
        std::string callee;
        if (f.is_cross()) {
            error("cross-reference", "'" + c.name() + "." + f.name + "' is a cross-reference; translate it first",
                  c.name(), f.name, &f.loc);
            return "";
        }
        if (f.is_attribute()) {
            DataTypeHandle dt = resolve_datatype(owner, f.type);
            if (!dt)
                return "";
            if (dt.type->kind == DataKind::boolean) {
                if (many) {
                    error("grammar-type", "multi-valued boolean '" + c.name() + "." + f.name + "' has no flag syntax",
                          c.name(), f.name, &f.loc);
                    return "";
                }
                return f.name + "?" + kw;
            }
            callee = dt.type->kind == DataKind::integer ? "INT" : "STRING";
        } else {
            ClassHandle t = resolve_class(owner, f.type);
            if (!t || t.mm != &ast_) {
                error("grammar-type", "containment '" + c.name() + "." + f.name + "' has no rule for its type",
                      c.name(), f.name, &f.loc);
                return "";
            }
            callee = t.name();
        }
        const std::string unit = kw + " \"=\" " + f.name + op + callee;
        if (!many)
            return f.bounds.lower >= 1 ? unit : "(" + unit + ")?";

        std::string out;
        for (int i = 0; i < f.bounds.lower; ++i)
            out += (i ? " " : "") + unit;
        std::string tail;
        if (f.bounds.upper == unbounded) {
            tail = "(" + unit + ")*";
        } else {
            for (int i = f.bounds.lower; i < f.bounds.upper; ++i)
                tail = "(" + unit + (tail.empty() ? "" : " " + tail) + ")?";
        }
        if (!tail.empty())
            out += (out.empty() ? "" : " ") + tail;
        return out;
    }

    const Metamodel& ast_;
    std::vector<ClassHandle> classes_;
    Diagnostics diags_;
};

}  // namespace

Result<std::string> generate_grammar_skeleton(const Metamodel& ast)
{
    return Skeleton(ast).run();
}

}  // namespace mdsl::grammar
