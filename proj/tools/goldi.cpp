// Command-line front end: training runs, activation comparisons, moments
// checks, ODE flows, inversion round trips and interpretability exports.
//
// Exit codes: 0 success, 2 configuration error, 3 training divergence,
// 4 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "goldilocks/goldilocks.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace goldilocks;

namespace {

constexpr double kPi = 3.14159265358979323846;

ExperimentConfig load_or_default(const std::string& config_path) {
    if (config_path.empty()) return ExperimentConfig{};
    return ExperimentConfig::load(config_path);
}

void write_json_report(const fs::path& path, const json& j) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::string token;
    for (char ch : text + ",") {
        if (ch == ',') {
            if (!token.empty()) seeds.push_back(std::stoull(token));
            token.clear();
        } else {
            token += ch;
        }
    }
    if (seeds.empty()) throw ConfigError("empty seed list");
    return seeds;
}

std::vector<std::string> parse_name_list(const std::string& text) {
    std::vector<std::string> names;
    std::string token;
    for (char ch : text + ",") {
        if (ch == ',') {
            if (!token.empty()) names.push_back(token);
            token.clear();
        } else {
            token += ch;
        }
    }
    return names;
}

std::vector<Vector> parse_vector_list(const std::string& text) {
    std::vector<Vector> vectors;
    Vector current;
    std::string token;
    auto flush_component = [&]() {
        if (!token.empty()) {
            current.push_back(std::stod(token));
            token.clear();
        }
    };
    for (char ch : text + ";") {
        if (ch == ';') {
            flush_component();
            if (!current.empty()) vectors.push_back(std::move(current));
            current.clear();
        } else if (ch == ',') {
            flush_component();
        } else {
            token += ch;
        }
    }
    return vectors;
}

int cmd_train(const std::string& config_path, const ExperimentConfig& overrides,
              const std::vector<std::string>& set_flags) {
    ExperimentConfig cfg = load_or_default(config_path);
    auto has = [&](const std::string& f) {
        return std::find(set_flags.begin(), set_flags.end(), f) != set_flags.end();
    };
    if (has("seed")) cfg.seed = overrides.seed;
    if (has("out")) cfg.out_dir = overrides.out_dir;
    if (has("activation")) cfg.activation = overrides.activation;
    if (has("epochs")) cfg.epochs = overrides.epochs;
    if (has("lr")) cfg.learning_rate = overrides.learning_rate;
    if (has("l2")) cfg.l2_beta = overrides.l2_beta;
    if (has("dropout")) cfg.dropout_prob = overrides.dropout_prob;
    cfg.validate();

    RunReport report = run_toy_experiment(cfg);
    std::printf("run %s: final_error=%s epochs=%zu wall=%.2fs out=%s\n", cfg.run_id.c_str(),
                format_double(report.final_error).c_str(), cfg.epochs, report.wall_seconds,
                cfg.out_dir.c_str());
    return 0;
}

int cmd_compare(const std::string& config_path, std::string activations, std::string seeds,
                std::size_t epochs, double lr, double threshold, std::string out_dir) {
    ExperimentConfig base = load_or_default(config_path);
    base.epochs = epochs;
    base.learning_rate = lr;
    base.out_dir = out_dir;
    std::vector<std::string> acts = parse_name_list(activations);
    std::vector<std::uint64_t> seed_list = parse_seed_list(seeds);
    auto rows = compare_activations(base, acts, seed_list, threshold);
    fs::create_directories(out_dir);
    write_comparison_csv(fs::path(out_dir) / "comparison.csv", rows);

    for (const std::string& act : acts) {
        std::vector<long> reached;
        for (const ComparisonRow& r : rows)
            if (r.activation == act && r.epochs_to_threshold >= 0)
                reached.push_back(r.epochs_to_threshold);
        std::sort(reached.begin(), reached.end());
        if (reached.empty()) {
            std::printf("%-17s threshold %.0f%% never reached (%zu seeds)\n", act.c_str(),
                        threshold * 100, seed_list.size());
        } else {
            long median = reached[reached.size() / 2];
            std::printf("%-17s median epochs to %.0f%% error: %ld (%zu/%zu seeds reached)\n",
                        act.c_str(), threshold * 100, median, reached.size(),
                        seed_list.size());
        }
    }
    std::printf("wrote %s/comparison.csv\n", out_dir.c_str());
    return 0;
}

int cmd_moments_check(const std::string& activation, double mu, double sigma, double w, double b,
                      std::size_t samples, std::uint64_t seed, const std::string& out_dir) {
    ActivationSpec spec = ActivationSpec::parse(activation);
    NeuronMoments lemma = propagate_neuron(mu, sigma * sigma, w, b, spec);

    GaussianMoments in;
    in.mean = {mu};
    in.cov = Matrix::from_rows({{sigma * sigma}});
    McResult mc = mc_oracle(in, Matrix::from_rows({{w}}), {b}, spec, samples, seed);

    double mean_gap = std::abs(lemma.mean - mc.estimate.mean[0]);
    double var_gap = std::abs(lemma.variance - mc.estimate.cov(0, 0));
    double mean_tol = std::max(0.05 * std::abs(mc.estimate.mean[0]), 3.0 * mc.mean_se[0]);
    double var_tol = std::max(0.05 * std::abs(mc.estimate.cov(0, 0)), 3.0 * mc.cov_se(0, 0));
    bool mean_ok = mean_gap <= mean_tol;
    bool var_ok = var_gap <= var_tol;

    json j;
    j["inputs"] = {{"activation", activation}, {"mu", mu},     {"sigma", sigma},
                   {"w", w},                   {"b", b},       {"samples", samples},
                   {"seed", seed}};
    j["lemma"] = {{"mean", lemma.mean}, {"variance", lemma.variance}};
    j["oracle"] = {{"mean", mc.estimate.mean[0]},
                   {"variance", mc.estimate.cov(0, 0)},
                   {"mean_se", mc.mean_se[0]},
                   {"variance_se", mc.cov_se(0, 0)}};
    j["tolerance"] = "max(5% relative, 3 standard errors)";
    j["pass"] = {{"mean", mean_ok}, {"variance", var_ok}};
    write_json_report(fs::path(out_dir) / "moments_check.json", j);

    std::printf("lemma mean=%s var=%s | oracle mean=%s var=%s | %s\n",
                format_double(lemma.mean).c_str(), format_double(lemma.variance).c_str(),
                format_double(mc.estimate.mean[0]).c_str(),
                format_double(mc.estimate.cov(0, 0)).c_str(),
                (mean_ok && var_ok) ? "PASS" : "FAIL");
    std::printf("wrote %s/moments_check.json\n", out_dir.c_str());
    return 0;
}

int cmd_ode(const std::string& activation, double a0, double v, double c, double step,
            double span, const std::string& integrator, const std::string& out_dir) {
    ActivationSpec spec = ActivationSpec::parse(activation);
    if (!spec.is_goldilocks()) throw ConfigError("ode: activation must be Goldilocks");
    FlowConfig cfg;
    cfg.step = step;
    cfg.n_start = 0.0;
    cfg.n_end = span;
    if (integrator == "rk4")
        cfg.integrator = Integrator::RK4;
    else if (integrator == "euler")
        cfg.integrator = Integrator::Euler;
    else
        throw ConfigError("ode: integrator must be rk4 or euler");

    FlowField field = FlowField::scalar(v, c, spec);
    auto samples = flow_forward(field, {a0}, cfg);
    double y_end = samples.back().y[0];
    double a_start = v * a0 + c;
    double a_end = v * y_end + c;

    json j;
    j["config"] = {{"activation", activation}, {"a0", a0},     {"v", v},
                   {"c", c},                   {"step", step}, {"span", span},
                   {"integrator", integrator}};
    j["y_end"] = y_end;
    j["a_end"] = a_end;
    if (a_start != 0.0 && a_end != 0.0) {
        double inv_start = implicit_invariant(spec.hump_kind, a_start);
        double inv_end = implicit_invariant(spec.hump_kind, a_end);
        j["invariant_start"] = inv_start;
        j["invariant_end"] = inv_end;
        j["invariant_change"] = inv_end - inv_start;
        if (spec.hump_kind == HumpKind::Lorentzian) {
            // the separable Lorentzian flow grows ln A^2 + A^2 at rate 2/pi
            double expected = 2.0 * span / kPi;
            j["expected_change"] = expected;
            j["drift"] = (inv_end - inv_start) - expected;
        }
    }
    write_json_report(fs::path(out_dir) / "ode_report.json", j);
    std::printf("a(0)=%s a(%s)=%s\n", format_double(a_start).c_str(),
                format_double(span).c_str(), format_double(a_end).c_str());
    if (j.contains("invariant_change"))
        std::printf("invariant change=%s%s\n", format_double(j["invariant_change"]).c_str(),
                    j.contains("drift")
                        ? (" drift=" + format_double(j["drift"].get<double>())).c_str()
                        : "");
    std::printf("wrote %s/ode_report.json\n", out_dir.c_str());
    return 0;
}

int cmd_invert(const std::string& activation, std::size_t depth, std::size_t width,
               std::uint64_t seed, double tol, const std::string& out_dir) {
    ActivationSpec spec = ActivationSpec::parse(activation);
    if (!spec.is_goldilocks()) throw ConfigError("invert: activation must be Goldilocks");

    // Random square full-rank net and input, drawn from the documented streams.
    Rng rng = Rng::stream(seed, "weights");
    Network net;
    for (std::size_t n = 0; n < depth; ++n) {
        Layer layer;
        layer.weights = Matrix(width, width);
        do {
            for (double& x : layer.weights.data()) x = rng.uniform(-1.0, 1.0);
        } while (numerical_rank(layer.weights) < width);
        layer.bias.resize(width);
        for (double& x : layer.bias) x = rng.uniform(-0.5, 0.5);
        layer.activation = spec;
        net.layers.push_back(std::move(layer));
    }
    Rng in_rng = Rng::stream(seed, "data");
    Vector input(width);
    for (double& x : input) x = in_rng.uniform(-1.0, 1.0);

    Vector output = forward(net, std::vector<Vector>{input}).outputs().row(0);
    Vector recovered = invert_network_exact(net, output, tol);
    double exact_err = norm2(subtract(recovered, input));

    InterpretableChain chain = build_chain(net);
    Trajectory traj = forward_interpretable(chain, {input});
    Vector y = traj.states.back()[0];
    for (std::size_t n = chain.flow_depth; n-- > 0;)
        y = first_order_inverse_interpretable(chain, y, n);
    double first_order_err = norm2(subtract(y, input));

    json j;
    j["config"] = {{"activation", activation}, {"depth", depth}, {"width", width},
                   {"seed", seed},             {"tol", tol}};
    j["input"] = input;
    j["output"] = output;
    j["exact_roundtrip_error"] = exact_err;
    j["first_order_roundtrip_error"] = first_order_err;
    write_json_report(fs::path(out_dir) / "invert_report.json", j);
    std::printf("exact round trip %.3e, stated-formula round trip %.3e\n", exact_err, first_order_err);
    std::printf("wrote %s/invert_report.json\n", out_dir.c_str());
    return 0;
}

int cmd_phase_diagram(const std::string& model_path, const std::string& config_path,
                      std::uint64_t seed, std::size_t layer, const std::string& formulation,
                      double grid_min, double grid_max, std::size_t grid_n,
                      const std::string& out_dir) {
    Network net;
    if (!model_path.empty()) {
        net = load_model(model_path);
    } else {
        ExperimentConfig cfg = load_or_default(config_path);
        cfg.seed = seed;
        net = init_weights(cfg.shape(), cfg.seed, cfg.init_scale);
    }
    GridSpec grid{grid_min, grid_max, grid_n, grid_min, grid_max, grid_n};
    std::vector<Arrow> arrows;
    if (formulation == "direct") {
        arrows = phase_diagram(net, grid, layer);
    } else if (formulation == "interpretable") {
        arrows = phase_diagram(build_chain(net), grid, layer);
    } else {
        throw ConfigError("phase-diagram: formulation must be direct or interpretable");
    }
    write_phase_diagram_csv(fs::path(out_dir) / "phase_diagram.csv", arrows, layer);
    std::printf("wrote %s/phase_diagram.csv (%zu arrows)\n", out_dir.c_str(), arrows.size());
    return 0;
}

int cmd_backproject(const std::string& model_path, long layer_flag, const std::string& vectors,
                    const std::string& out_dir) {
    Network net = load_model(model_path);
    InterpretableChain chain = build_chain(net);
    std::size_t layer = layer_flag < 0 ? chain.depth() : static_cast<std::size_t>(layer_flag);
    if (layer == 0 || layer > chain.depth())
        throw ConfigError("backproject: layer must be in [1, depth]");

    std::vector<Vector> targets;
    if (!vectors.empty()) {
        targets = parse_vector_list(vectors);
    } else {
        // one-hot basis of the layer's output space
        std::size_t dim = chain.v[layer - 1].rows();
        for (std::size_t i = 0; i < dim; ++i) {
            Vector v(dim, 0.0);
            v[i] = 1.0;
            targets.push_back(std::move(v));
        }
    }

    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "backprojection.csv", std::ios::binary);
    out << "layer,vector_id,coord,value,lossy\n";
    for (std::size_t k = 0; k < targets.size(); ++k) {
        BackProjection bp = to_input_coords(chain, targets[k], layer);
        for (std::size_t c = 0; c < bp.point.size(); ++c)
            out << layer << ',' << k << ',' << c << ',' << format_double(bp.point[c]) << ','
                << (bp.lossy ? 1 : 0) << '\n';
    }
    std::printf("wrote %s/backprojection.csv (%zu vectors)\n", out_dir.c_str(), targets.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Goldilocks residual networks: training, moments, flows and inversion"};
    app.require_subcommand(1);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train on the 2-d toy task and emit artifacts");
    std::string train_config;
    ExperimentConfig ov;
    train_cmd->add_option("--config", train_config, "JSON experiment config");
    auto* f_seed = train_cmd->add_option("--seed", ov.seed, "PRNG seed");
    auto* f_out = train_cmd->add_option("--out", ov.out_dir, "output directory");
    auto* f_act = train_cmd->add_option("--activation", ov.activation, "hidden activation name");
    auto* f_epochs = train_cmd->add_option("--epochs", ov.epochs, "training epochs");
    auto* f_lr = train_cmd->add_option("--lr", ov.learning_rate, "learning rate");
    auto* f_l2 = train_cmd->add_option("--l2", ov.l2_beta, "L2 penalty coefficient");
    auto* f_drop = train_cmd->add_option("--dropout", ov.dropout_prob, "dropout probability");

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "Compare activations on the toy task");
    std::string cmp_config, cmp_acts =
        "lorentz-unbiased,lorentz-biased,gauss-unbiased,gauss-biased,relu,selu";
    std::string cmp_seeds = "1,2,3,4,5", cmp_out = "out";
    std::size_t cmp_epochs = 2000;
    double cmp_lr = 0.05, cmp_threshold = 0.05;
    compare_cmd->add_option("--config", cmp_config, "JSON experiment config");
    compare_cmd->add_option("--activations", cmp_acts, "comma-separated activation names");
    compare_cmd->add_option("--seeds", cmp_seeds, "comma-separated seeds");
    compare_cmd->add_option("--epochs", cmp_epochs, "training epochs per run");
    compare_cmd->add_option("--lr", cmp_lr, "learning rate");
    compare_cmd->add_option("--threshold", cmp_threshold, "target error fraction");
    compare_cmd->add_option("--out", cmp_out, "output directory");

    // moments-check
    auto* mom_cmd = app.add_subcommand("moments-check", "Moments lemma vs Monte-Carlo oracle");
    std::string mom_act = "lorentz-unbiased", mom_out = "out";
    double mom_mu = 0.0, mom_sigma = 0.1, mom_w = 1.0, mom_b = 0.0;
    std::size_t mom_samples = 1000000;
    std::uint64_t mom_seed = 1;
    mom_cmd->add_option("--activation", mom_act, "Goldilocks activation name");
    mom_cmd->add_option("--mu", mom_mu, "input mean");
    mom_cmd->add_option("--sigma", mom_sigma, "input standard deviation");
    mom_cmd->add_option("--w", mom_w, "neuron weight");
    mom_cmd->add_option("--b", mom_b, "neuron bias");
    mom_cmd->add_option("--samples", mom_samples, "Monte-Carlo sample count");
    mom_cmd->add_option("--seed", mom_seed, "PRNG seed");
    mom_cmd->add_option("--out", mom_out, "output directory");

    // ode
    auto* ode_cmd = app.add_subcommand("ode", "Integrate the continuous-depth flow");
    std::string ode_act = "lorentz-unbiased", ode_int = "rk4", ode_out = "out";
    double ode_a0 = 0.1, ode_v = 1.0, ode_c = 0.0, ode_step = 1e-3, ode_span = kPi;
    ode_cmd->add_option("--activation", ode_act, "Goldilocks activation name");
    ode_cmd->add_option("--a0", ode_a0, "initial state");
    ode_cmd->add_option("--v", ode_v, "scalar weight");
    ode_cmd->add_option("--c", ode_c, "scalar bias");
    ode_cmd->add_option("--step", ode_step, "integrator step");
    ode_cmd->add_option("--span", ode_span, "integration span in n");
    ode_cmd->add_option("--integrator", ode_int, "rk4 or euler");
    ode_cmd->add_option("--out", ode_out, "output directory");

    // invert
    auto* inv_cmd = app.add_subcommand("invert", "Round-trip inversion of a random square net");
    std::string inv_act = "lorentz-unbiased", inv_out = "out";
    std::size_t inv_depth = 3, inv_width = 3;
    std::uint64_t inv_seed = 1;
    double inv_tol = 1e-12;
    inv_cmd->add_option("--activation", inv_act, "Goldilocks activation name");
    inv_cmd->add_option("--depth", inv_depth, "number of layers");
    inv_cmd->add_option("--width", inv_width, "layer width");
    inv_cmd->add_option("--seed", inv_seed, "PRNG seed");
    inv_cmd->add_option("--tol", inv_tol, "Newton residual tolerance");
    inv_cmd->add_option("--out", inv_out, "output directory");

    // phase-diagram
    auto* phase_cmd = app.add_subcommand("phase-diagram", "One-layer phase diagram on a grid");
    std::string ph_model, ph_config, ph_form = "interpretable", ph_out = "out";
    std::uint64_t ph_seed = 1;
    std::size_t ph_layer = 0, ph_n = 21;
    double ph_min = -4.0, ph_max = 4.0;
    phase_cmd->add_option("--model", ph_model, "model.json from a training run");
    phase_cmd->add_option("--config", ph_config, "config for a fresh initial net");
    phase_cmd->add_option("--seed", ph_seed, "seed for a fresh initial net");
    phase_cmd->add_option("--layer", ph_layer, "layer index");
    phase_cmd->add_option("--formulation", ph_form, "direct or interpretable");
    phase_cmd->add_option("--grid-min", ph_min, "grid lower bound (both axes)");
    phase_cmd->add_option("--grid-max", ph_max, "grid upper bound (both axes)");
    phase_cmd->add_option("--grid-n", ph_n, "grid points per axis");
    phase_cmd->add_option("--out", ph_out, "output directory");

    // backproject
    auto* back_cmd = app.add_subcommand("backproject", "Project layer states to input coords");
    std::string bp_model, bp_vectors, bp_out = "out";
    long bp_layer = -1;
    back_cmd->add_option("--model", bp_model, "model.json from a training run")->required();
    back_cmd->add_option("--layer", bp_layer, "layer (1..depth, default: output layer)");
    back_cmd->add_option("--vectors", bp_vectors,
                         "states to backproject, e.g. \"1,0;0,1\" (default: one-hot basis)");
    back_cmd->add_option("--out", bp_out, "output directory");

    try {
        app.parse(argc, argv);

        if (*train_cmd) {
            std::vector<std::string> set;
            if (*f_seed) set.push_back("seed");
            if (*f_out) set.push_back("out");
            if (*f_act) set.push_back("activation");
            if (*f_epochs) set.push_back("epochs");
            if (*f_lr) set.push_back("lr");
            if (*f_l2) set.push_back("l2");
            if (*f_drop) set.push_back("dropout");
            return cmd_train(train_config, ov, set);
        }
        if (*compare_cmd)
            return cmd_compare(cmp_config, cmp_acts, cmp_seeds, cmp_epochs, cmp_lr,
                               cmp_threshold, cmp_out);
        if (*mom_cmd)
            return cmd_moments_check(mom_act, mom_mu, mom_sigma, mom_w, mom_b, mom_samples,
                                     mom_seed, mom_out);
        if (*ode_cmd)
            return cmd_ode(ode_act, ode_a0, ode_v, ode_c, ode_step, ode_span, ode_int, ode_out);
        if (*inv_cmd) return cmd_invert(inv_act, inv_depth, inv_width, inv_seed, inv_tol, inv_out);
        if (*phase_cmd)
            return cmd_phase_diagram(ph_model, ph_config, ph_seed, ph_layer, ph_form, ph_min,
                                     ph_max, ph_n, ph_out);
        if (*back_cmd) return cmd_backproject(bp_model, bp_layer, bp_vectors, bp_out);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const DivergenceError& e) {
        std::fprintf(stderr, "divergence: %s\n", e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}
