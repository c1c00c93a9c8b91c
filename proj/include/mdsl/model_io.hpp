#ifndef MDSL_MODEL_IO_HPP
#define MDSL_MODEL_IO_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mdsl/diagnostics.hpp"
#include "mdsl/model.hpp"

namespace mdsl {

/// Canonical `.model` text: depth-first, sequential `#n` ids, two-space indentation,
/// features in declaration order with inherited ones first. References into an import are
/// written `-> <import>#<n>` using the import's own numbering.
std::string dump_model(const Model& m);

/// Parses `dump_model` output. Imports named in the text must be supplied in `imports`.
Result<Model> load_model(std::string_view text, std::shared_ptr<const Metamodel> mm,
                         const std::vector<Import>& imports = {}, const std::string& file = "");

}  // namespace mdsl

#endif
