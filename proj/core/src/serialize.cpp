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

#include "lipkern/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json_io.hpp"

namespace lipkern {

namespace {

std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x == 0.0 ? 0.0 : x);
    return buf;
}

} // namespace

std::string kernel_to_json(const KernelSpec& spec) {
    return jsonio::dump17(jsonio::kernel_to_tree(spec));
}

KernelSpec kernel_from_json(const std::string& text) {
    return jsonio::kernel_from_tree(jsonio::json::parse(text));
}

std::string dataset_to_json(const Dataset& data) {
    return jsonio::dump17(jsonio::dataset_to_tree(data));
}

Dataset dataset_from_json(const std::string& text) {
    return jsonio::dataset_from_tree(jsonio::json::parse(text));
}

std::string model_to_json(const FittedModel& model) {
    return jsonio::dump17(jsonio::model_to_tree(model));
}

FittedModel model_from_json(const std::string& text) {
    return jsonio::model_from_tree(jsonio::json::parse(text));
}

std::string monotone_model_to_json(const MonotoneModel& model) {
    return jsonio::dump17(jsonio::monotone_to_tree(model));
}

MonotoneModel monotone_model_from_json(const std::string& text) {
    return jsonio::monotone_from_tree(jsonio::json::parse(text));
}

std::string hh_dataset_to_csv(const hodgkin::Params& params, const Dataset& data) {
    if (static_cast<std::size_t>(data.size()) != params.voltages.size()) {
        throw DimensionError("dataset size does not match the voltage list");
    }
    const Eigen::VectorXd t = params.time_grid();
    std::string out = "voltage,t,u,y\n";
    for (int i = 0; i < data.size(); ++i) {
        for (Eigen::Index j = 0; j < t.size(); ++j) {
            out += csv_number(params.voltages[i]);
            out += ',';
            out += csv_number(t[j]);
            out += ',';
            out += csv_number(data.inputs[i][j]);
            out += ',';
            out += csv_number(data.outputs[i][j]);
            out += '\n';
        }
    }
    return out;
}

std::string reproduce_figure_csv(const hodgkin::Params& params,
                                 const hodgkin::ReproduceReport& report) {
    const Eigen::VectorXd t = params.time_grid();
    std::string out = "voltage,t,y_data,y_model\n";
    for (const auto& row : report.per_voltage) {
        for (Eigen::Index j = 0; j < t.size(); ++j) {
            out += csv_number(row.voltage);
            out += ',';
            out += csv_number(t[j]);
            out += ',';
            out += csv_number(row.y_data[j]);
            out += ',';
            out += csv_number(row.y_model[j]);
            out += '\n';
        }
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file for reading: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << content;
    if (!out) throw Error("failed to write file: " + path);
}

} // namespace lipkern
