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

#include "json_io.hpp"

#include <cmath>
#include <cstdio>

namespace lipkern::jsonio {

namespace {

void append_double(std::string& out, double x) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("cannot serialize non-finite number");
    }
    if (x == 0.0) { // normalize -0 so round trips are stable
        out += "0";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out += buf;
}

void dump_rec(const json& tree, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (tree.type()) {
        case json::value_t::object: {
            if (tree.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = tree.begin(); it != tree.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                out += json(it.key()).dump();
                out += ": ";
                dump_rec(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (tree.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& item : tree) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_rec(item, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float:
            append_double(out, tree.get<double>());
            return;
        default:
            out += tree.dump();
            return;
    }
}

} // namespace

std::string dump17(const json& tree, int indent) {
    std::string out;
    dump_rec(tree, out, indent, 0);
    out += "\n";
    return out;
}

json vector_to_tree(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Eigen::VectorXd vector_from_tree(const json& tree) {
    if (!tree.is_array()) throw std::invalid_argument("expected a JSON array of numbers");
    Eigen::VectorXd v(tree.size());
    for (std::size_t i = 0; i < tree.size(); ++i) v[static_cast<Eigen::Index>(i)] = tree[i].get<double>();
    return v;
}

json matrix_to_tree(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_tree(const json& tree) {
    if (!tree.is_array() || tree.empty()) {
        throw std::invalid_argument("expected a JSON array of rows");
    }
    const std::size_t cols = tree[0].size();
    Eigen::MatrixXd m(tree.size(), cols);
    for (std::size_t i = 0; i < tree.size(); ++i) {
        if (tree[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = tree[i][j].get<double>();
        }
    }
    return m;
}

json kernel_to_tree(const KernelSpec& spec) {
    json params = json::object();
    switch (spec.variant()) {
        case KernelSpec::Variant::Bilinear:
        case KernelSpec::Variant::ScaledLaplacian:
            break;
        case KernelSpec::Variant::Gaussian:
            params["sigma"] = spec.sigma();
            break;
        case KernelSpec::Variant::InversePower:
            params["c"] = spec.c();
            params["d"] = spec.d();
            break;
        case KernelSpec::Variant::PolynomialScalar:
            params["c"] = spec.c();
            params["degree"] = spec.degree();
            break;
        case KernelSpec::Variant::ScalarTimesOperator:
            params["base"] = kernel_to_tree(spec.base());
            params["r"] = matrix_to_tree(spec.r_matrix());
            break;
        case KernelSpec::Variant::ConvexSum: {
            json terms = json::array();
            for (const auto& term : spec.terms()) {
                json entry = json::object();
                entry["weight"] = term.weight;
                entry["kernel"] = kernel_to_tree(*term.kernel);
                terms.push_back(std::move(entry));
            }
            params["terms"] = std::move(terms);
            break;
        }
        case KernelSpec::Variant::Conjugated:
            params["base"] = kernel_to_tree(spec.base());
            params["r"] = matrix_to_tree(spec.r_matrix());
            break;
    }
    json tree = json::object();
    tree["variant"] = spec.variant_name();
    tree["params"] = std::move(params);
    return tree;
}

KernelSpec kernel_from_tree(const json& tree) {
    const std::string variant = tree.at("variant").get<std::string>();
    const json& params = tree.at("params");
    if (variant == "bilinear") return KernelSpec::bilinear();
    if (variant == "gaussian") return KernelSpec::gaussian(params.at("sigma").get<double>());
    if (variant == "scaled_laplacian") return KernelSpec::scaled_laplacian();
    if (variant == "inverse_power") {
        return KernelSpec::inverse_power(params.at("c").get<double>(), params.at("d").get<double>());
    }
    if (variant == "polynomial") {
        return KernelSpec::polynomial(params.at("c").get<double>(), params.at("degree").get<int>());
    }
    if (variant == "scalar_times_operator") {
        return KernelSpec::scalar_times_operator(kernel_from_tree(params.at("base")),
                                                 matrix_from_tree(params.at("r")));
    }
    if (variant == "convex_sum") {
        std::vector<std::pair<double, KernelSpec>> terms;
        for (const auto& entry : params.at("terms")) {
            terms.emplace_back(entry.at("weight").get<double>(),
                               kernel_from_tree(entry.at("kernel")));
        }
        return KernelSpec::convex_sum(terms);
    }
    if (variant == "conjugated") {
        return KernelSpec::conjugated(kernel_from_tree(params.at("base")),
                                      matrix_from_tree(params.at("r")));
    }
    throw std::invalid_argument("unknown kernel variant '" + variant + "'");
}

json dataset_to_tree(const Dataset& data) {
    json tree = json::object();
    json inputs = json::array();
    for (const auto& u : data.inputs) inputs.push_back(vector_to_tree(u));
    json outputs = json::array();
    for (const auto& y : data.outputs) outputs.push_back(vector_to_tree(y));
    tree["inputs"] = std::move(inputs);
    tree["outputs"] = std::move(outputs);
    return tree;
}

Dataset dataset_from_tree(const json& tree) {
    Dataset data;
    for (const auto& u : tree.at("inputs")) data.inputs.push_back(vector_from_tree(u));
    for (const auto& y : tree.at("outputs")) data.outputs.push_back(vector_from_tree(y));
    data.validate();
    return data;
}

json model_to_tree(const FittedModel& model) {
    json tree = json::object();
    tree["kernel"] = kernel_to_tree(model.kernel);
    json inputs = json::array();
    for (const auto& u : model.train_inputs) inputs.push_back(vector_to_tree(u));
    tree["train_inputs"] = std::move(inputs);
    json coeffs = json::array();
    for (const auto& c : model.coefficients) coeffs.push_back(vector_to_tree(c));
    tree["coefficients"] = std::move(coeffs);
    tree["gamma"] = model.gamma;
    tree["rkhs_norm"] = model.rkhs_norm;
    if (model.lipschitz_certified) {
        tree["lipschitz_certified"] = *model.lipschitz_certified;
    } else {
        tree["lipschitz_certified"] = nullptr;
    }
    json dims = json::object();
    dims["n"] = static_cast<int>(model.train_inputs.size());
    dims["d"] = model.input_dim();
    dims["m"] = model.output_dim();
    tree["dims"] = std::move(dims);
    return tree;
}

FittedModel model_from_tree(const json& tree) {
    FittedModel model;
    model.kernel = kernel_from_tree(tree.at("kernel"));
    for (const auto& u : tree.at("train_inputs")) model.train_inputs.push_back(vector_from_tree(u));
    for (const auto& c : tree.at("coefficients")) model.coefficients.push_back(vector_from_tree(c));
    model.gamma = tree.at("gamma").get<double>();
    model.rkhs_norm = tree.at("rkhs_norm").get<double>();
    if (!tree.at("lipschitz_certified").is_null()) {
        model.lipschitz_certified = tree.at("lipschitz_certified").get<double>();
    }
    const json& dims = tree.at("dims");
    if (dims.at("n").get<int>() != static_cast<int>(model.train_inputs.size()) ||
        dims.at("d").get<int>() != model.input_dim() ||
        dims.at("m").get<int>() != model.output_dim() ||
        model.train_inputs.size() != model.coefficients.size()) {
        throw std::invalid_argument("model dims do not match its arrays");
    }
    return model;
}

json monotone_to_tree(const MonotoneModel& model) {
    json tree = json::object();
    tree["s_model"] = model_to_tree(model.s_model);
    tree["ell"] = model.ell;
    json picard = json::object();
    picard["tol"] = model.picard.tol;
    picard["max_iter"] = model.picard.max_iter;
    tree["picard"] = std::move(picard);
    return tree;
}

MonotoneModel monotone_from_tree(const json& tree) {
    PicardOptions picard;
    picard.tol = tree.at("picard").at("tol").get<double>();
    picard.max_iter = tree.at("picard").at("max_iter").get<long>();
    return make_monotone_model(model_from_tree(tree.at("s_model")),
                               tree.at("ell").get<double>(), picard);
}

} // namespace lipkern::jsonio
