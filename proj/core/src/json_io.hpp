/*
 * Copyright 2026 The lipkern authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Internal JSON tree layer shared by the library and the CLI. Not installed.

#ifndef LIPKERN_JSON_IO_HPP
#define LIPKERN_JSON_IO_HPP

#include <string>

#include "json.hpp"

#include "lipkern/estimator.hpp"
#include "lipkern/monotone.hpp"

namespace lipkern::jsonio {

using json = nlohmann::ordered_json;

/// Serializes a tree with every float printed at 17 significant digits, so
/// parsing the text recovers the exact double. Keys keep insertion order;
/// output is deterministic. Non-finite numbers are rejected.
std::string dump17(const json& tree, int indent = 2);

json vector_to_tree(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_tree(const json& tree);
json matrix_to_tree(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_tree(const json& tree);

json kernel_to_tree(const KernelSpec& spec);
KernelSpec kernel_from_tree(const json& tree);

json dataset_to_tree(const Dataset& data);
Dataset dataset_from_tree(const json& tree);

json model_to_tree(const FittedModel& model);
FittedModel model_from_tree(const json& tree);

json monotone_to_tree(const MonotoneModel& model);
MonotoneModel monotone_from_tree(const json& tree);

} // namespace lipkern::jsonio

#endif // LIPKERN_JSON_IO_HPP
