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

#ifndef LIPKERN_SERIALIZE_HPP
#define LIPKERN_SERIALIZE_HPP

#include <string>

#include "lipkern/hodgkin.hpp"
#include "lipkern/monotone.hpp"

namespace lipkern {

// JSON text forms. Floats are written with 17 significant digits, so every
// document round-trips to the exact same doubles; re-serializing a loaded
// document reproduces it byte for byte.

std::string kernel_to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const std::string& text);

std::string dataset_to_json(const Dataset& data);
Dataset dataset_from_json(const std::string& text);

std::string model_to_json(const FittedModel& model);
FittedModel model_from_json(const std::string& text);

std::string monotone_model_to_json(const MonotoneModel& model);
MonotoneModel monotone_model_from_json(const std::string& text);

/// Long-form CSV of a step-response dataset: voltage,t,u,y.
std::string hh_dataset_to_csv(const hodgkin::Params& params, const Dataset& data);

/// Per-voltage data/model trajectories: voltage,t,y_data,y_model.
std::string reproduce_figure_csv(const hodgkin::Params& params,
                                 const hodgkin::ReproduceReport& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace lipkern

#endif // LIPKERN_SERIALIZE_HPP
