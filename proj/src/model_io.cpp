#include "mdsl/model_io.hpp"

#include <map>
#include <sstream>
#include <unordered_map>

#include "mdsl/lexer.hpp"

namespace mdsl {
namespace {

std::string class_label(const Model& m, const ModelObject& o)
{
    if (o.cls().mm == &m.metamodel())
        return o.class_name();
    return o.cls().mm->name + "::" + o.class_name();
}

std::unordered_map<const ModelObject*, int> number(const Model& m)
{
    std::unordered_map<const ModelObject*, int> ids;
    if (m.root()) {
        int n = 0;
        for (const ModelObject* o : preorder(*m.root()))
            ids[o] = ++n;
    }
    return ids;
}

class Dumper {
public:
    explicit Dumper(const Model& m) : m_(m), ids_(number(m)) {}

    std::string run()
    {
        if (m_.root())
            object(*m_.root(), 0);
        return out_.str();
    }

private:
    void indent(int depth) { out_ << std::string(static_cast<std::size_t>(depth) * 2, ' '); }

    std::string ref(const ModelObject* target)
    {
        auto it = ids_.find(target);
        if (it != ids_.end())
            return "-> #" + std::to_string(it->second);
        if (const Import* imp = m_.import_of(target)) {
            auto& table = import_ids_[imp->name];
            if (table.empty())
                table = number(*imp->model);
            auto jt = table.find(target);
            if (jt != table.end())
                return "-> " + imp->name + "#" + std::to_string(jt->second);
        }
        return "-> #0";
    }

    // Writes the object header and body; the caller has already indented.
    void object(const ModelObject& o, int depth)
    {
        out_ << class_label(m_, o) << " #" << ids_.at(&o) << " {";
        bool any = false;
        for (const FeatureHandle& fh : all_features(o.cls())) {
            const MetaFeature& f = *fh.feature;
            if (!o.is_set(f.name))
                continue;
            if (!any)
                out_ << '\n';
            any = true;
            indent(depth + 1);
            out_ << f.name << " = ";
            if (f.is_attribute()) {
                const auto& values = o.attributes(f.name);
                if (f.bounds.many()) {
                    out_ << '[';
                    for (std::size_t i = 0; i < values.size(); ++i)
                        out_ << (i ? ", " : "") << format_literal(values[i]);
                    out_ << ']';
                } else {
                    out_ << format_literal(values.front());
                }
                out_ << '\n';
            } else if (f.is_containment()) {
                const auto& kids = o.children(f.name);
                if (f.bounds.many()) {
                    out_ << "[\n";
                    for (const ModelObject* k : kids) {
                        indent(depth + 2);
                        object(*k, depth + 2);
                    }
                    indent(depth + 1);
                    out_ << "]\n";
                } else {
                    object(*kids.front(), depth + 1);
                }
            } else {
                const auto& refs = o.references(f.name);
                if (f.bounds.many()) {
                    out_ << '[';
                    for (std::size_t i = 0; i < refs.size(); ++i)
                        out_ << (i ? ", " : "") << ref(refs[i]);
                    out_ << ']';
                } else {
                    out_ << ref(refs.front());
                }
                out_ << '\n';
            }
        }
        if (any) {
            indent(depth);
            out_ << "}\n";
        } else {
            out_ << " }\n";
        }
    }

    const Model& m_;
    std::unordered_map<const ModelObject*, int> ids_;
    std::map<std::string, std::unordered_map<const ModelObject*, int>> import_ids_;
    std::ostringstream out_;
};

struct PendingRef {
    ModelObject* owner;
    std::string feature;
    std::string import;  // empty for local
    int id;
    SourceLocation loc;
};

class Loader {
public:
    Loader(std::vector<Token> tokens, std::shared_ptr<const Metamodel> mm, const std::vector<Import>& imports)
        : cur_(std::move(tokens)), model_(std::move(mm)), imports_(imports)
    {
    }

    Result<Model> run()
    {
        for (const Import& imp : imports_)
            model_.add_import(imp.name, imp.model);
        ModelObject* root = object();
        if (root && !cur_.at_end())
            fail(cur_.peek(), "expected end of input, found " + describe(cur_.peek()));
        if (!root || !diags_.empty())
            return std::move(diags_);
        model_.set_root(*root);
        link();
        if (!diags_.empty())
            return std::move(diags_);
        return std::move(model_);
    }

private:
    void fail(const Token& at, std::string msg, std::string code = "syntax")
    {
        if (diags_.empty())
            diags_.push_back(make_error(Phase::parse, std::move(code), std::move(msg), at.loc));
    }

    bool expect_punct(std::string_view p)
    {
        if (cur_.accept_punct(p))
            return true;
        fail(cur_.peek(), "expected '" + std::string(p) + "', found " + describe(cur_.peek()));
        return false;
    }

    ModelObject* object()
    {
        const Token& start = cur_.peek();
        if (start.kind != TokenKind::identifier) {
            fail(start, "expected a class name, found " + describe(start));
            return nullptr;
        }
        std::string qn = cur_.next().text;
        while (cur_.peek().is_punct("::")) {
            cur_.next();
            if (cur_.peek().kind != TokenKind::identifier) {
                fail(cur_.peek(), "expected identifier after '::'");
                return nullptr;
            }
            qn += "::" + cur_.next().text;
        }
        ClassHandle cls = resolve_class(model_.metamodel(), TypeRef::parse(qn));
        if (!cls) {
            fail(start, "unknown class '" + qn + "'", "unknown-class");
            return nullptr;
        }
        if (!expect_punct("#"))
            return nullptr;
        if (cur_.peek().kind != TokenKind::integer) {
            fail(cur_.peek(), "expected object id, found " + describe(cur_.peek()));
            return nullptr;
        }
        const Token& id_tok = cur_.next();
        ModelObject& obj = model_.create(cls);
        obj.location = start.loc;
        if (!by_id_.emplace(static_cast<int>(id_tok.int_value), &obj).second) {
            fail(id_tok, "duplicate object id #" + id_tok.text);
            return nullptr;
        }
        if (!expect_punct("{"))
            return nullptr;
        while (diags_.empty() && !cur_.peek().is_punct("}")) {
            if (cur_.at_end()) {
                fail(cur_.peek(), "unterminated object body");
                return nullptr;
            }
            slot(obj);
        }
        if (!diags_.empty())
            return nullptr;
        cur_.next();
        return &obj;
    }

    void slot(ModelObject& obj)
    {
        const Token& name = cur_.peek();
        if (name.kind != TokenKind::identifier) {
            fail(name, "expected a feature name, found " + describe(name));
            return;
        }
        cur_.next();
        auto f = find_feature(obj.cls(), name.text);
        if (!f) {
            fail(name, "class '" + obj.class_name() + "' has no feature '" + name.text + "'", "unknown-feature");
            return;
        }
        if (!expect_punct("="))
            return;
        if (cur_.accept_punct("[")) {
            while (diags_.empty() && !cur_.peek().is_punct("]")) {
                value(obj, *f->feature);
                cur_.accept_punct(",");
                if (cur_.at_end())
                    fail(cur_.peek(), "unterminated list");
            }
            if (diags_.empty())
                cur_.next();
            return;
        }
        value(obj, *f->feature);
    }

    void value(ModelObject& obj, const MetaFeature& f)
    {
        const Token& t = cur_.peek();
        auto kind_error = [&] {
            fail(t, "value " + describe(t) + " does not fit feature '" + f.name + "'", "slot-kind");
        };
        if (t.kind == TokenKind::string || t.kind == TokenKind::integer || t.is_word("true") || t.is_word("false")) {
            if (!f.is_attribute())
                return kind_error();
            cur_.next();
            Literal l = t.kind == TokenKind::string    ? Literal{t.text}
                        : t.kind == TokenKind::integer ? Literal{t.int_value}
                                                       : Literal{t.text == "true"};
            obj.add_attribute(f.name, std::move(l));
            return;
        }
        if (t.is_punct("->")) {
            if (!f.is_cross())
                return kind_error();
            cur_.next();
            PendingRef p{&obj, f.name, "", 0, t.loc};
            if (cur_.peek().kind == TokenKind::identifier)
                p.import = cur_.next().text;
            if (!expect_punct("#"))
                return;
            if (cur_.peek().kind != TokenKind::integer)
                return fail(cur_.peek(), "expected object id after '#'");
            p.id = static_cast<int>(cur_.next().int_value);
            pending_.push_back(std::move(p));
            return;
        }
        if (t.kind == TokenKind::identifier) {
            if (!f.is_containment())
                return kind_error();
            if (ModelObject* child = object())
                obj.add_child(f.name, *child);
            return;
        }
        fail(t, "expected a value, found " + describe(t));
    }

    void link()
    {
        std::map<std::string, std::unordered_map<int, const ModelObject*>> import_tables;
        for (const PendingRef& p : pending_) {
            const ModelObject* target = nullptr;
            if (p.import.empty()) {
                auto it = by_id_.find(p.id);
                if (it != by_id_.end())
                    target = it->second;
            } else {
                const Import* imp = nullptr;
                for (const Import& i : model_.imports())
                    if (i.name == p.import)
                        imp = &i;
                if (!imp) {
                    diags_.push_back(make_error(Phase::parse, "dangling-reference", "unknown import '" + p.import + "'", p.loc));
                    continue;
                }
                auto& table = import_tables[p.import];
                if (table.empty() && imp->model->root()) {
                    int n = 0;
                    for (const ModelObject* o : preorder(*imp->model->root()))
                        table[++n] = o;
                }
                auto it = table.find(p.id);
                if (it != table.end())
                    target = it->second;
            }
            if (!target) {
                diags_.push_back(make_error(Phase::parse, "dangling-reference",
                                            "reference to unknown object " + (p.import.empty() ? "" : p.import) + "#" +
                                                std::to_string(p.id),
                                            p.loc));
                continue;
            }
            p.owner->add_reference(p.feature, *target);
        }
    }

    TokenCursor cur_;
    Model model_;
    const std::vector<Import>& imports_;
    std::unordered_map<int, ModelObject*> by_id_;
    std::vector<PendingRef> pending_;
    Diagnostics diags_;
};

}  // namespace

std::string dump_model(const Model& m)
{
    return Dumper(m).run();
}

Result<Model> load_model(std::string_view text, std::shared_ptr<const Metamodel> mm, const std::vector<Import>& imports,
                         const std::string& file)
{
    LexOptions opts;
    opts.punctuators = {"->", "::"};
    opts.negative_integers = true;
    auto tokens = tokenize(text, file, opts);
    if (!tokens)
        return tokens.take_diagnostics();
    return Loader(std::move(tokens).value(), std::move(mm), imports).run();
}

}  // namespace mdsl
