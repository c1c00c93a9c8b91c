#ifndef MDSL_DIAGNOSTICS_HPP
#define MDSL_DIAGNOSTICS_HPP

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mdsl {

enum class Severity { error, warning };

enum class Phase { metamodel, transformation, grammar, parse, resolve, validate };

std::string_view to_string(Severity s);
std::string_view to_string(Phase p);

/// Position inside a text input. Lines and columns are 1-based.
struct SourceLocation {
    std::string file;
    int line = 1;
    int column = 1;

    friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

/// Slash-separated containment path of a model object, e.g. `/actions[0]/target`.
struct ModelPath {
    std::string path;

    friend bool operator==(const ModelPath&, const ModelPath&) = default;
};

struct Diagnostic {
    Severity severity = Severity::error;
    Phase phase = Phase::parse;
    std::string code;
    std::string message;
    std::variant<SourceLocation, ModelPath> location;

    bool is_error() const { return severity == Severity::error; }
    const SourceLocation* source() const { return std::get_if<SourceLocation>(&location); }
    const ModelPath* model_path() const { return std::get_if<ModelPath>(&location); }
};

/// Stable diagnostic codes. Every diagnostic the toolkit emits uses one of these.
struct DiagnosticCode {
    std::string_view code;
    std::string_view description;
};

const std::vector<DiagnosticCode>& diagnostic_codes();
bool is_registered_code(std::string_view code);

Diagnostic make_error(Phase phase, std::string code, std::string message, SourceLocation loc);
Diagnostic make_error(Phase phase, std::string code, std::string message, ModelPath path);

using Diagnostics = std::vector<Diagnostic>;

bool has_errors(const Diagnostics& diags);

/// Source-located diagnostics first (file, line, column, code), then model-path ones
/// (path, code). Stable, so equal keys keep emission order.
void sort_diagnostics(Diagnostics& diags);

/// `file:line:col: severity[code]: message` or `model:<path>: severity[code]: message`.
std::string format_diagnostic(const Diagnostic& d);

/// One JSON object per line.
std::string format_diagnostic_json(const Diagnostic& d);

void append(Diagnostics& into, Diagnostics from);

/// A value or the diagnostics that prevented producing it. Warnings may accompany a value.
template <class T>
class Result {
public:
    Result(T value) : value_(std::move(value)) {}
    Result(T value, Diagnostics diags) : value_(std::move(value)), diags_(std::move(diags)) {}
    Result(Diagnostics diags) : diags_(std::move(diags)) {}

    bool ok() const { return value_.has_value(); }
    explicit operator bool() const { return ok(); }

    T& value() & { return *value_; }
    const T& value() const& { return *value_; }
    T&& value() && { return std::move(*value_); }
    T* operator->() { return &*value_; }
    const T* operator->() const { return &*value_; }
    T& operator*() { return *value_; }
    const T& operator*() const { return *value_; }

    const Diagnostics& diagnostics() const { return diags_; }
    Diagnostics& diagnostics() { return diags_; }
    Diagnostics take_diagnostics() { return std::move(diags_); }

private:
    std::optional<T> value_;
    Diagnostics diags_;
};

}  // namespace mdsl

#endif
