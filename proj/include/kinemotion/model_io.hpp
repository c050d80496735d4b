#pragma once

#include <string>
#include <string_view>

#include "kinemotion/random_forest.hpp"
#include "kinemotion/rfecv.hpp"

namespace kinemotion {

inline constexpr int kModelFormatVersion = 1;

/// JSON artifact: {"format":"kinemotion-model","version":1,"kind":"svm"|"forest",...}
std::string serialize_model(const LinearSvmPipeline& model);
std::string serialize_model(const ForestModel& model);

/// Throw FormatError on wrong kind or version.
LinearSvmPipeline deserialize_svm(std::string_view text);
ForestModel deserialize_forest(std::string_view text);

}  // namespace kinemotion
