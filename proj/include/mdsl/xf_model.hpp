#ifndef MDSL_XF_MODEL_HPP
#define MDSL_XF_MODEL_HPP

#include <memory>

#include "mdsl/model.hpp"
#include "mdsl/xf.hpp"

namespace mdsl::xf {

/// language_metamodel_source() parsed once, named `xf`.
const std::shared_ptr<const Metamodel>& language_metamodel();

/// Names introduced by `create` actions, in action order.
std::vector<std::string> created_names(const Transformation& t);

/// The transformation as an instance of language_metamodel(). Classifier references point
/// into `universe` (see build_universe), which becomes the model's `universe` import.
Result<Model> to_model(const Transformation& t, std::shared_ptr<const Model> universe);

}  // namespace mdsl::xf

#endif
