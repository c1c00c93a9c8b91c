#ifndef MDSL_NAMESPACE_HPP
#define MDSL_NAMESPACE_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mdsl/diagnostics.hpp"
#include "mdsl/model.hpp"

namespace mdsl {

/// A name looked up before (or without) its definition. `object` is filled in once a
/// matching define() happens.
struct NameStub {
    std::vector<std::string> context;
    std::vector<std::string> name;
    std::variant<SourceLocation, ModelPath> where;
    const ModelObject* object = nullptr;
};

/// Hierarchical scopes of named model objects. A scope path such as {"a", "b"} names the
/// scope opened by binding `b` inside binding `a`; scopes spring into existence on first use.
class Namespace {
public:
    using Path = std::vector<std::string>;

    Namespace();

    /// False (and nothing changes) when `name` is already bound to an object in `scope`.
    bool define(const Path& scope, const std::string& name, const ModelObject& obj);

    /// The object bound to `name` directly in `scope`, or null.
    const ModelObject* lookup_local(const Path& scope, const std::string& name) const;

    /// Searches `context` and then its enclosing scopes for the first segment; the rest of a
    /// qualified name is followed from the innermost scope where the first segment binds. The
    /// stub is already complete when the name resolves now, otherwise it stays pending.
    std::shared_ptr<const NameStub> resolve(const Path& context, const Path& qname,
                                            std::variant<SourceLocation, ModelPath> where = ModelPath{"/"});

    /// What resolve() would bind right now, without recording a stub.
    const ModelObject* lookup(const Path& context, const Path& qname) const { return find(context, qname); }

    /// One `unresolved-name` diagnostic per stub still pending.
    Diagnostics finalize() const;

    std::size_t pending() const;

private:
    struct Node {
        const ModelObject* object = nullptr;
        std::map<std::string, std::unique_ptr<Node>> children;
        Node* parent = nullptr;
    };

    Node* scope_node(const Path& scope);
    const Node* innermost(const Path& context) const;
    const ModelObject* find(const Path& context, const Path& qname) const;

    std::unique_ptr<Node> root_;
    std::vector<std::shared_ptr<NameStub>> stubs_;
};

std::string join_name(const std::vector<std::string>& segments, std::string_view separator = "::");
std::vector<std::string> split_name(std::string_view text, std::string_view separator = "::");

}  // namespace mdsl

#endif
