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

// lipkern command-line front end.
//
// Exit codes: 0 success, 1 check failure (audit violation, failed
// reproduction bound, non-convergence), 2 usage error. Every command prints
// one JSON document to stdout that echoes its resolved configuration, so
// identical flags and seed give byte-identical output. LIPKERN_THREADS caps
// internal parallelism.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "json_io.hpp"
#include "lipkern/serialize.hpp"

namespace fs = std::filesystem;
using lipkern::jsonio::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        const std::string token = text.substr(pos, next - pos);
        try {
            std::size_t used = 0;
            values.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw UsageError("malformed number token '" + token + "'");
        }
        pos = next + 1;
    }
    if (values.empty()) throw UsageError("empty number list");
    return values;
}

// Flat kernel grammar: name:key=val,key=val. Composite kernels are written
// as JSON files and passed with --kernel-json.
lipkern::KernelSpec parse_kernel_flag(const std::string& text) {
    std::string name = text;
    std::string args;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        name = text.substr(0, colon);
        args = text.substr(colon + 1);
    }
    std::map<std::string, double> kv;
    std::size_t pos = 0;
    while (pos < args.size()) {
        std::size_t next = args.find(',', pos);
        if (next == std::string::npos) next = args.size();
        const std::string token = args.substr(pos, next - pos);
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw UsageError("malformed kernel parameter '" + token + "'");
        try {
            kv[token.substr(0, eq)] = std::stod(token.substr(eq + 1));
        } catch (const std::exception&) {
            throw UsageError("malformed kernel parameter '" + token + "'");
        }
        pos = next + 1;
    }
    const auto need = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw UsageError("kernel '" + name + "' needs parameter " + key);
        return it->second;
    };
    try {
        if (name == "bilinear") return lipkern::KernelSpec::bilinear();
        if (name == "gaussian") return lipkern::KernelSpec::gaussian(need("sigma"));
        if (name == "laplacian" || name == "scaled-laplacian" || name == "scaled_laplacian") {
            return lipkern::KernelSpec::scaled_laplacian();
        }
        if (name == "inverse-power" || name == "inverse_power") {
            return lipkern::KernelSpec::inverse_power(need("c"), need("d"));
        }
        if (name == "poly" || name == "polynomial") {
            const double degree = kv.count("degree") ? kv["degree"] : need("d");
            return lipkern::KernelSpec::polynomial(need("c"), static_cast<int>(degree));
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    throw UsageError("unknown kernel '" + name + "' (composites go through --kernel-json)");
}

// Flags take precedence over the config file when both are given.
lipkern::KernelSpec resolve_kernel(const std::string& flag, const std::string& json_path) {
    if (!flag.empty()) return parse_kernel_flag(flag);
    if (!json_path.empty()) {
        try {
            return lipkern::kernel_from_json(lipkern::read_text_file(json_path));
        } catch (const std::exception& e) {
            throw UsageError(std::string("failed to load kernel file: ") + e.what());
        }
    }
    throw UsageError("a kernel is required (--kernel or --kernel-json)");
}

lipkern::Dataset load_dataset(const std::string& path) {
    try {
        return lipkern::dataset_from_json(lipkern::read_text_file(path));
    } catch (const std::exception& e) {
        throw UsageError(std::string("failed to load dataset: ") + e.what());
    }
}

Eigen::VectorXd parse_vector_flag(const std::string& inline_text, const std::string& file_path,
                                  const char* what) {
    if (!inline_text.empty() && !file_path.empty()) {
        throw UsageError(std::string(what) + ": pass inline values or a file, not both");
    }
    if (!file_path.empty()) {
        const json tree = json::parse(lipkern::read_text_file(file_path));
        return lipkern::jsonio::vector_from_tree(tree);
    }
    const std::vector<double> values = parse_number_list(inline_text);
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
    return v;
}

void emit(const json& doc) { std::fputs(lipkern::jsonio::dump17(doc).c_str(), stdout); }

// ---- subcommands ------------------------------------------------------------

int cmd_gen_hh(const std::string& voltages_flag, const std::string& out_prefix, bool normalized,
               bool scattered) {
    lipkern::hodgkin::Params params;
    if (!voltages_flag.empty()) params.voltages = parse_number_list(voltages_flag);
    if (params.voltages.empty()) throw UsageError("voltage list is empty");

    lipkern::Dataset data = lipkern::hodgkin::generate_dataset(params);
    const std::string csv = lipkern::hh_dataset_to_csv(params, data);

    double input_scale = 1.0, output_scale = 1.0;
    if (normalized || scattered) {
        const lipkern::hodgkin::ReproduceConfig defaults;
        double max_u = 0.0, max_y = 0.0;
        for (const auto& u : data.inputs) max_u = std::max(max_u, u.cwiseAbs().maxCoeff());
        for (const auto& y : data.outputs) max_y = std::max(max_y, y.cwiseAbs().maxCoeff());
        input_scale = defaults.unit_shrink * (max_u > 0.0 ? max_u : 1.0);
        output_scale = defaults.unit_shrink * (max_y > 0.0 ? max_y : 1.0);
        for (auto& u : data.inputs) u /= input_scale;
        for (auto& y : data.outputs) y /= output_scale;
    }
    if (scattered) {
        const lipkern::ScatteredData sc = lipkern::scatter(data);
        data.inputs = sc.v;
        data.outputs = sc.z;
    }

    const std::string json_path = out_prefix + ".json";
    const std::string csv_path = out_prefix + ".csv";
    lipkern::write_text_file(json_path, lipkern::dataset_to_json(data));
    lipkern::write_text_file(csv_path, csv);

    json doc;
    doc["command"] = "gen-hh";
    json config;
    config["voltages"] = params.voltages;
    config["normalized"] = normalized;
    config["scattered"] = scattered;
    if (normalized || scattered) {
        config["input_scale"] = input_scale;
        config["output_scale"] = output_scale;
    }
    doc["config"] = std::move(config);
    doc["n"] = data.size();
    doc["d"] = data.input_dim();
    doc["m"] = data.output_dim();
    doc["files"] = json::array({json_path, csv_path});
    emit(doc);
    return kExitOk;
}

int cmd_fit(const std::string& data_path, const std::string& kernel_flag,
            const std::string& kernel_json, std::optional<double> gamma,
            std::optional<double> ell, const std::string& out_path) {
    if (gamma.has_value() == ell.has_value()) {
        throw UsageError("pass exactly one of --gamma or --ell");
    }
    const lipkern::KernelSpec kernel = resolve_kernel(kernel_flag, kernel_json);
    const lipkern::Dataset data = load_dataset(data_path);
    data.validate();

    double fit_gamma = 0.0;
    std::optional<double> achieved;
    if (gamma) {
        if (!(*gamma > 0.0)) throw UsageError("--gamma must be positive");
        fit_gamma = *gamma;
    } else {
        if (!kernel.claims_nonexpansive()) {
            throw UsageError(
                "--ell requires a kernel from the certified nonexpansive catalogue; '" +
                kernel.variant_name() +
                "' with these parameters carries no certificate, so no norm budget can be "
                "enforced");
        }
        if (!(*ell > 0.0)) throw UsageError("--ell must be positive");
        const lipkern::GramMatrix gram =
            lipkern::assemble_gram(kernel, data.inputs, data.output_dim());
        Eigen::VectorXd ybar(static_cast<Eigen::Index>(data.size()) * data.output_dim());
        for (int i = 0; i < data.size(); ++i) {
            ybar.segment(static_cast<Eigen::Index>(i) * data.output_dim(), data.output_dim()) =
                data.outputs[i];
        }
        const lipkern::TuneResult tuned = lipkern::tune_gamma(gram, ybar, *ell);
        fit_gamma = tuned.gamma;
        achieved = tuned.achieved_norm;
    }

    const lipkern::FittedModel model = lipkern::fit(kernel, data, fit_gamma);
    if (!out_path.empty()) lipkern::write_text_file(out_path, lipkern::model_to_json(model));

    json doc;
    doc["command"] = "fit";
    json config;
    config["data"] = data_path;
    config["kernel"] = lipkern::jsonio::kernel_to_tree(kernel);
    if (gamma) config["gamma"] = *gamma;
    if (ell) config["ell"] = *ell;
    doc["config"] = std::move(config);
    doc["gamma"] = model.gamma;
    doc["rkhs_norm"] = model.rkhs_norm;
    if (achieved) doc["tuned_norm"] = *achieved;
    if (model.lipschitz_certified) {
        doc["lipschitz_certified"] = *model.lipschitz_certified;
    } else {
        doc["lipschitz_certified"] = nullptr;
    }
    if (!out_path.empty()) doc["model_file"] = out_path;
    emit(doc);
    return kExitOk;
}

int cmd_check_kernel(const std::string& kernel_flag, const std::string& kernel_json, int dim,
                     long trials, std::uint64_t seed) {
    const lipkern::KernelSpec kernel = resolve_kernel(kernel_flag, kernel_json);
    if (dim < 1) throw UsageError("--dim must be at least 1");
    if (trials < 1) throw UsageError("--trials must be at least 1");

    const lipkern::InputSampler sampler = lipkern::make_uniform_box_sampler(dim, -5.0, 5.0);
    const int m = kernel.resolve_output_dim(kernel.output_dim().value_or(1));
    const lipkern::NonexpansiveAudit audit =
        lipkern::audit_nonexpansive(kernel, sampler, trials, seed, m);

    // PSD spot check over a small sampled input set.
    lipkern::Rng psd_rng(seed + 1);
    std::vector<Eigen::VectorXd> inputs;
    for (int i = 0; i < 10; ++i) inputs.push_back(sampler(psd_rng));
    const lipkern::PsdAudit psd = lipkern::audit_psd(kernel, inputs, m);

    json doc;
    doc["command"] = "check-kernel";
    json config;
    config["kernel"] = lipkern::jsonio::kernel_to_tree(kernel);
    config["dim"] = dim;
    config["trials"] = trials;
    config["seed"] = seed;
    doc["config"] = std::move(config);
    doc["claims_nonexpansive"] = kernel.claims_nonexpansive();
    json nonexp;
    nonexp["pass"] = audit.pass;
    nonexp["evidence"] = "sampling (a pass is necessary, not sufficient)";
    json violations = json::array();
    for (std::size_t i = 0; i < audit.violations.size() && i < 5; ++i) {
        const auto& v = audit.violations[i];
        json item;
        item["metric"] = v.metric;
        item["bound"] = v.bound;
        item["u"] = lipkern::jsonio::vector_to_tree(v.u);
        item["v"] = lipkern::jsonio::vector_to_tree(v.v);
        violations.push_back(std::move(item));
    }
    nonexp["violations"] = std::move(violations);
    nonexp["violation_count"] = audit.violations.size();
    doc["nonexpansive"] = std::move(nonexp);
    json psd_doc;
    psd_doc["min_eig"] = psd.min_eig;
    psd_doc["max_eig"] = psd.max_eig;
    psd_doc["pass"] = psd.pass;
    doc["psd"] = std::move(psd_doc);
    const bool ok = audit.pass && psd.pass;
    doc["pass"] = ok;
    emit(doc);
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_fit_monotone(const std::string& data_path, const std::string& kernel_flag,
                     const std::string& kernel_json, double ell, const std::string& out_path) {
    if (!(ell > 0.0 && ell < 1.0)) throw UsageError("--ell must lie strictly inside (0, 1)");
    const lipkern::KernelSpec kernel = resolve_kernel(kernel_flag, kernel_json);
    if (!kernel.claims_nonexpansive()) {
        throw UsageError("fit-monotone requires a kernel from the certified nonexpansive "
                         "catalogue");
    }
    const lipkern::Dataset data = load_dataset(data_path);
    const lipkern::MonotoneModel model = lipkern::fit_monotone(kernel, data, ell);
    if (!out_path.empty()) {
        lipkern::write_text_file(out_path, lipkern::monotone_model_to_json(model));
    }

    json doc;
    doc["command"] = "fit-monotone";
    json config;
    config["data"] = data_path;
    config["kernel"] = lipkern::jsonio::kernel_to_tree(kernel);
    config["ell"] = ell;
    doc["config"] = std::move(config);
    doc["gamma"] = model.s_model.gamma;
    doc["contraction_norm"] = model.s_model.rkhs_norm;
    doc["ell"] = model.ell;
    if (!out_path.empty()) doc["model_file"] = out_path;
    emit(doc);
    return kExitOk;
}

int cmd_simulate(const std::string& model_path, const std::string& input_text,
                 const std::string& input_file, const std::string& y0_text,
                 std::optional<double> tol, std::optional<long> max_iter) {
    lipkern::MonotoneModel model = [&] {
        try {
            return lipkern::monotone_model_from_json(lipkern::read_text_file(model_path));
        } catch (const std::exception& e) {
            throw UsageError(std::string("failed to load model: ") + e.what());
        }
    }();
    if (tol) model.picard.tol = *tol;
    if (max_iter) model.picard.max_iter = *max_iter;

    const Eigen::VectorXd u = parse_vector_flag(input_text, input_file, "--input");
    Eigen::VectorXd y0 = Eigen::VectorXd::Zero(u.size());
    if (!y0_text.empty()) {
        const std::vector<double> values = parse_number_list(y0_text);
        if (static_cast<Eigen::Index>(values.size()) != u.size()) {
            throw UsageError("--y0 must have the same dimension as --input");
        }
        for (std::size_t i = 0; i < values.size(); ++i) y0[static_cast<Eigen::Index>(i)] = values[i];
    }

    const lipkern::SimulateResult result = lipkern::simulate(model, u, y0, false);

    json doc;
    doc["command"] = "simulate";
    json config;
    config["model"] = model_path;
    config["tol"] = model.picard.tol;
    config["max_iter"] = model.picard.max_iter;
    doc["config"] = std::move(config);
    doc["y_star"] = lipkern::jsonio::vector_to_tree(result.y_star);
    doc["iters"] = result.iters;
    doc["residual"] = result.residual;
    emit(doc);
    return kExitOk;
}

int cmd_reproduce(const std::string& out_dir, std::optional<double> gamma,
                  std::optional<double> kappa, long trials, std::uint64_t seed) {
    lipkern::hodgkin::Params params;
    lipkern::hodgkin::ReproduceConfig config;
    if (gamma) config.gamma = *gamma;
    if (kappa) config.unit_shrink = *kappa;
    config.monotonicity_trials = trials;
    config.seed = seed;

    const lipkern::hodgkin::ReproduceReport report =
        lipkern::hodgkin::reproduce_paper(params, config);

    fs::create_directories(out_dir);
    const std::string figure_path = (fs::path(out_dir) / "figure1.csv").string();
    const std::string report_path = (fs::path(out_dir) / "report.json").string();
    lipkern::write_text_file(figure_path, lipkern::reproduce_figure_csv(params, report));

    json doc;
    doc["command"] = "reproduce";
    json config_doc;
    config_doc["gamma"] = config.gamma;
    config_doc["unit_shrink"] = config.unit_shrink;
    config_doc["monotonicity_trials"] = trials;
    config_doc["seed"] = seed;
    config_doc["voltages"] = params.voltages;
    doc["config"] = std::move(config_doc);
    doc["rkhs_norm"] = report.rkhs_norm;
    doc["input_scale"] = report.input_scale;
    doc["output_scale"] = report.output_scale;
    doc["fit_rmse"] = report.fit_rmse;
    doc["monotonicity_pass"] = report.monotonicity_pass;
    json rows = json::array();
    for (const auto& row : report.per_voltage) {
        json item;
        item["voltage"] = row.voltage;
        item["rmse"] = row.rmse;
        item["range"] = row.range;
        rows.push_back(std::move(item));
    }
    doc["per_voltage"] = std::move(rows);
    doc["bounds_pass"] = report.bounds_pass;
    doc["bound_failures"] = report.bound_failures;
    doc["files"] = json::array({report_path, figure_path});
    lipkern::write_text_file(report_path, lipkern::jsonio::dump17(doc));
    emit(doc);
    return report.bounds_pass ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Identification of Lipschitz-bounded and monotone operators with "
                 "nonexpansive kernels"};
    app.require_subcommand(1);

    // gen-hh
    auto* gen = app.add_subcommand("gen-hh", "Generate potassium-channel step-response data");
    std::string gen_voltages, gen_out = "hh_dataset";
    bool gen_normalized = false, gen_scattered = false;
    gen->add_option("--voltages", gen_voltages, "Comma-separated step levels in mV");
    gen->add_option("--out", gen_out, "Output prefix for .json/.csv");
    gen->add_flag("--normalized", gen_normalized, "Rescale channels to identification units");
    gen->add_flag("--scattered", gen_scattered,
                  "Write the scattered pairs (v, z) = (u + y, u - y) in identification units");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit an operator by regularized least squares");
    std::string fit_data, fit_kernel, fit_kernel_json, fit_out;
    double fit_gamma_val = 0.0, fit_ell_val = 0.0;
    fit_cmd->add_option("--data", fit_data, "Dataset JSON file")->required();
    fit_cmd->add_option("--kernel", fit_kernel, "Kernel as name:key=val,...");
    fit_cmd->add_option("--kernel-json", fit_kernel_json, "Kernel JSON file");
    auto* fit_gamma_opt = fit_cmd->add_option("--gamma", fit_gamma_val, "Regularization level");
    auto* fit_ell_opt =
        fit_cmd->add_option("--ell", fit_ell_val, "Lipschitz budget (tunes gamma)");
    fit_cmd->add_option("--out", fit_out, "Write the fitted model JSON here");

    // check-kernel
    auto* check = app.add_subcommand("check-kernel", "Audit symmetry/PSD/nonexpansiveness");
    std::string check_kernel, check_kernel_json;
    int check_dim = 3;
    long check_trials = 10000;
    std::uint64_t check_seed = 0;
    check->add_option("--kernel", check_kernel, "Kernel as name:key=val,...");
    check->add_option("--kernel-json", check_kernel_json, "Kernel JSON file");
    check->add_option("--dim", check_dim, "Input dimension for sampling");
    check->add_option("--trials", check_trials, "Sampled pairs");
    check->add_option("--seed", check_seed, "Sampler seed");

    // fit-monotone
    auto* mono = app.add_subcommand("fit-monotone", "Identify a monotone operator");
    std::string mono_data, mono_kernel, mono_kernel_json, mono_out;
    double mono_ell = 0.99;
    mono->add_option("--data", mono_data, "Dataset JSON file (square dimensions)")->required();
    mono->add_option("--kernel", mono_kernel, "Kernel as name:key=val,...");
    mono->add_option("--kernel-json", mono_kernel_json, "Kernel JSON file");
    mono->add_option("--ell", mono_ell, "Contraction budget in (0,1)");
    mono->add_option("--out", mono_out, "Write the monotone model JSON here");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Evaluate a monotone model by Picard iteration");
    std::string sim_model, sim_input, sim_input_file, sim_y0;
    double sim_tol = 0.0;
    long sim_max_iter = 0;
    sim->add_option("--model", sim_model, "Monotone model JSON file")->required();
    sim->add_option("--input", sim_input, "Input vector as comma-separated values");
    sim->add_option("--input-file", sim_input_file, "Input vector as a JSON array file");
    sim->add_option("--y0", sim_y0, "Starting iterate (defaults to zero)");
    auto* sim_tol_opt = sim->add_option("--tol", sim_tol, "Override Picard tolerance");
    auto* sim_iter_opt = sim->add_option("--max-iter", sim_max_iter, "Override iteration cap");

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "Run the potassium-channel reproduction");
    std::string rep_out = ".";
    double rep_gamma = 0.0, rep_kappa = 0.0;
    long rep_trials = 1000;
    std::uint64_t rep_seed = 0;
    rep->add_option("--out-dir", rep_out, "Directory for report.json and figure1.csv");
    auto* rep_gamma_opt = rep->add_option("--gamma", rep_gamma, "Override regularization");
    auto* rep_kappa_opt = rep->add_option("--kappa", rep_kappa, "Override unit shrink factor");
    rep->add_option("--trials", rep_trials, "Monotonicity sweep pairs");
    rep->add_option("--seed", rep_seed, "Sweep seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen_hh(gen_voltages, gen_out, gen_normalized, gen_scattered);
        }
        if (fit_cmd->parsed()) {
            std::optional<double> gamma, ell;
            if (fit_gamma_opt->count() > 0) gamma = fit_gamma_val;
            if (fit_ell_opt->count() > 0) ell = fit_ell_val;
            return cmd_fit(fit_data, fit_kernel, fit_kernel_json, gamma, ell, fit_out);
        }
        if (check->parsed()) {
            return cmd_check_kernel(check_kernel, check_kernel_json, check_dim, check_trials,
                                    check_seed);
        }
        if (mono->parsed()) {
            return cmd_fit_monotone(mono_data, mono_kernel, mono_kernel_json, mono_ell, mono_out);
        }
        if (sim->parsed()) {
            std::optional<double> tol;
            std::optional<long> max_iter;
            if (sim_tol_opt->count() > 0) tol = sim_tol;
            if (sim_iter_opt->count() > 0) max_iter = sim_max_iter;
            return cmd_simulate(sim_model, sim_input, sim_input_file, sim_y0, tol, max_iter);
        }
        if (rep->parsed()) {
            std::optional<double> gamma, kappa;
            if (rep_gamma_opt->count() > 0) gamma = rep_gamma;
            if (rep_kappa_opt->count() > 0) kappa = rep_kappa;
            return cmd_reproduce(rep_out, gamma, kappa, rep_trials, rep_seed);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const lipkern::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const lipkern::ConvergenceError& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const lipkern::Error& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
