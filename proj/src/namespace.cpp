#include "mdsl/namespace.hpp"

#include <algorithm>

namespace mdsl {

Namespace::Namespace() : root_(std::make_unique<Node>()) {}

Namespace::Node* Namespace::scope_node(const Path& scope)
{
    Node* node = root_.get();
    for (const std::string& seg : scope) {
        auto it = node->children.find(seg);
        if (it == node->children.end()) {
            auto child = std::make_unique<Node>();
            child->parent = node;
            it = node->children.emplace(seg, std::move(child)).first;
        }
        node = it->second.get();
    }
    return node;
}

bool Namespace::define(const Path& scope, const std::string& name, const ModelObject& obj)
{
    Node* node = scope_node(scope);
    auto it = node->children.find(name);
    if (it == node->children.end()) {
        auto child = std::make_unique<Node>();
        child->parent = node;
        it = node->children.emplace(name, std::move(child)).first;
    }
    if (it->second->object)
        return false;
    it->second->object = &obj;
    for (const auto& stub : stubs_)
        if (!stub->object)
            stub->object = find(stub->context, stub->name);
    return true;
}

const ModelObject* Namespace::lookup_local(const Path& scope, const std::string& name) const
{
    const Node* node = root_.get();
    for (const std::string& seg : scope) {
        auto next = node->children.find(seg);
        if (next == node->children.end())
            return nullptr;
        node = next->second.get();
    }
    auto it = node->children.find(name);
    return it == node->children.end() ? nullptr : it->second->object;
}

const Namespace::Node* Namespace::innermost(const Path& context) const
{
    const Node* node = root_.get();
    for (const std::string& seg : context) {
        auto it = node->children.find(seg);
        if (it == node->children.end())
            break;
        node = it->second.get();
    }
    return node;
}

const ModelObject* Namespace::find(const Path& context, const Path& qname) const
{
    if (qname.empty())
        return nullptr;
    for (const Node* scope = innermost(context); scope; scope = scope->parent) {
        auto it = scope->children.find(qname.front());
        if (it == scope->children.end())
            continue;
        const Node* node = it->second.get();
        for (std::size_t i = 1; i < qname.size() && node; ++i) {
            auto next = node->children.find(qname[i]);
            node = next == node->children.end() ? nullptr : next->second.get();
        }
        return node ? node->object : nullptr;
    }
    return nullptr;
}

std::shared_ptr<const NameStub> Namespace::resolve(const Path& context, const Path& qname,
                                                   std::variant<SourceLocation, ModelPath> where)
{
    auto stub = std::make_shared<NameStub>(NameStub{context, qname, std::move(where), find(context, qname)});
    if (!stub->object)
        stubs_.push_back(stub);
    return stub;
}

std::size_t Namespace::pending() const
{
    return static_cast<std::size_t>(
        std::count_if(stubs_.begin(), stubs_.end(), [](const auto& s) { return s->object == nullptr; }));
}

Diagnostics Namespace::finalize() const
{
    Diagnostics out;
    for (const auto& stub : stubs_) {
        if (stub->object)
            continue;
        std::string msg = "unresolved reference '" + join_name(stub->name) + "'";
        if (const auto* loc = std::get_if<SourceLocation>(&stub->where))
            out.push_back(make_error(Phase::resolve, "unresolved-name", msg, *loc));
        else
            out.push_back(make_error(Phase::resolve, "unresolved-name", msg, std::get<ModelPath>(stub->where)));
    }
    return out;
}

std::string join_name(const std::vector<std::string>& segments, std::string_view separator)
{
    std::string out;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (i)
            out += separator;
        out += segments[i];
    }
    return out;
}

std::vector<std::string> split_name(std::string_view text, std::string_view separator)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = text.find(separator, start);
        out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + separator.size();
    }
    return out;
}

}  // namespace mdsl
