#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "goldilocks/errors.hpp"
#include "goldilocks/interpret.hpp"
#include "goldilocks/network.hpp"
#include "goldilocks/rng.hpp"

namespace goldilocks {

/// Shortest round-trip decimal form; used for every number we write so that
/// repeated runs emit byte-identical files.
inline std::string format_double(double v) {
    std::array<char, 32> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

// ---------------------------------------------------------------------------
// Toy dataset
// ---------------------------------------------------------------------------

/// Mixture of 2-d Gaussians; the default is the three-component two-class
/// setup: 100 points of class 0 at (-1,0), 100+100 of class 1 at (1,2) and
/// (1,-2), unit isotropic noise.
struct ToyDatasetSpec {
    std::vector<Vector> means = {{-1.0, 0.0}, {1.0, 2.0}, {1.0, -2.0}};
    std::vector<int> labels = {0, 1, 1};
    std::size_t count_per_component = 100;
    double stddev = 1.0;
    std::uint64_t seed = 1;

    void validate() const {
        if (means.empty() || means.size() != labels.size())
            throw ConfigError("dataset: means and labels must align and be nonempty");
        for (const Vector& m : means)
            if (m.size() != 2) throw ConfigError("dataset: means must be 2-dimensional");
        if (count_per_component == 0) throw ConfigError("dataset: count must be positive");
        if (!(stddev >= 0.0)) throw ConfigError("dataset: stddev must be nonnegative");
        for (int l : labels)
            if (l != 0 && l != 1) throw ConfigError("dataset: labels must be 0 or 1");
    }
};

/// Draws the components in order, points in order, coordinates in order from
/// the "data" stream, so the dataset is a pure function of the spec.
inline LabeledBatch gen_toy_dataset(const ToyDatasetSpec& spec) {
    spec.validate();
    Rng rng = Rng::stream(spec.seed, "data");
    const std::size_t total = spec.means.size() * spec.count_per_component;
    LabeledBatch batch;
    batch.inputs = Matrix(total, 2);
    batch.targets = Matrix(total, 1);
    std::size_t row = 0;
    for (std::size_t comp = 0; comp < spec.means.size(); ++comp) {
        for (std::size_t k = 0; k < spec.count_per_component; ++k, ++row) {
            batch.inputs(row, 0) = spec.means[comp][0] + spec.stddev * rng.gaussian();
            batch.inputs(row, 1) = spec.means[comp][1] + spec.stddev * rng.gaussian();
            batch.targets(row, 0) = static_cast<double>(spec.labels[comp]);
        }
    }
    return batch;
}

// ---------------------------------------------------------------------------
// Network construction
// ---------------------------------------------------------------------------

struct NetworkShape {
    std::size_t input_dim = 2;
    std::size_t depth = 6;  // hidden layers
    std::size_t width = 2;
    std::size_t output_dim = 1;
    ActivationSpec hidden = ActivationSpec::goldilocks(HumpKind::Lorentzian,
                                                       GoldilocksMode::Biased);
    ActivationSpec output = ActivationSpec::sigmoid();
};

/// Every weight and bias entry i.i.d. uniform on [-scale, +scale] from the
/// "weights" stream, drawn layer by layer (weights row-major, then bias).
inline Network init_weights(const NetworkShape& shape, std::uint64_t seed,
                            double scale = 0.005) {
    if (!(scale > 0.0)) throw ConfigError("init_weights: scale must be positive");
    if (shape.depth == 0 && shape.output_dim == 0) throw ConfigError("init_weights: empty shape");
    Rng rng = Rng::stream(seed, "weights");
    Network net;
    auto push = [&](std::size_t out, std::size_t in, const ActivationSpec& act) {
        Layer layer;
        layer.weights = Matrix(out, in);
        for (double& w : layer.weights.data()) w = rng.uniform(-scale, scale);
        layer.bias.resize(out);
        for (double& b : layer.bias) b = rng.uniform(-scale, scale);
        layer.activation = act;
        net.layers.push_back(std::move(layer));
    };
    std::size_t prev = shape.input_dim;
    for (std::size_t n = 0; n < shape.depth; ++n) {
        push(shape.width, prev, shape.hidden);
        prev = shape.width;
    }
    push(shape.output_dim, prev, shape.output);
    return net;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// Fraction of points whose thresholded output (>= threshold reads as class
/// 1) disagrees with the label.
inline double classification_error(const std::vector<double>& outputs,
                                   const std::vector<int>& labels, double threshold = 0.5) {
    if (outputs.size() != labels.size())
        throw ShapeError("classification_error: lengths differ");
    if (outputs.empty()) throw ShapeError("classification_error: empty input");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        int predicted = outputs[i] >= threshold ? 1 : 0;
        if (predicted != labels[i]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(outputs.size());
}

/// Column-0 convenience for batch matrices.
inline double classification_error_batch(const Matrix& outputs, const Matrix& targets,
                                         double threshold = 0.5) {
    std::vector<double> out(outputs.rows());
    std::vector<int> lab(outputs.rows());
    for (std::size_t s = 0; s < outputs.rows(); ++s) {
        out[s] = outputs(s, 0);
        lab[s] = targets(s, 0) >= 0.5 ? 1 : 0;
    }
    return classification_error(out, lab, threshold);
}

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    std::string run_id = "toy";
    std::string activation = "lorentz-biased";
    std::size_t depth = 6;
    std::size_t width = 2;
    std::string output_activation = "sigmoid";
    std::string loss;  // empty = pair with output activation
    std::string optimizer = "adam";  // the +-0.005 init needs per-parameter scaling
    double learning_rate = 0.05;
    std::size_t epochs = 20000;
    double l2_beta = 0.0;
    double dropout_prob = 0.0;
    std::uint64_t seed = 1;
    std::size_t batch_size = 0;
    double init_scale = 0.005;
    double threshold = 0.5;
    std::vector<std::size_t> snapshot_epochs;  // empty = {0, epochs}
    ToyDatasetSpec dataset;
    bool dataset_seed_set = false;
    std::string out_dir = "out";

    /// squared-error with linear outputs, binary-cross-entropy with sigmoid
    /// outputs, unless overridden.
    LossKind loss_kind() const {
        if (!loss.empty()) return parse_loss(loss);
        return output_activation == "sigmoid" ? LossKind::BinaryCrossEntropy
                                              : LossKind::SquaredError;
    }

    std::uint64_t dataset_seed() const { return dataset_seed_set ? dataset.seed : seed; }

    std::vector<std::size_t> snapshots() const {
        std::vector<std::size_t> s = snapshot_epochs;
        if (s.empty()) s = {0, epochs};
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        while (!s.empty() && s.back() > epochs) s.pop_back();
        return s;
    }

    void validate() const {
        ActivationSpec::parse(activation);
        ActivationSpec::parse(output_activation);
        if (!loss.empty()) parse_loss(loss);
        parse_optimizer(optimizer);
        if (depth == 0 || width == 0) throw ConfigError("config: depth and width must be positive");
        if (!(learning_rate >= 0.0)) throw ConfigError("config: learning_rate must be nonnegative");
        if (!(l2_beta >= 0.0)) throw ConfigError("config: l2_beta must be nonnegative");
        if (!(dropout_prob >= 0.0 && dropout_prob < 1.0))
            throw ConfigError("config: dropout_prob must be in [0,1)");
        if (!(init_scale > 0.0)) throw ConfigError("config: init_scale must be positive");
        if (run_id.find(',') != std::string::npos || run_id.find('\n') != std::string::npos)
            throw ConfigError("config: run_id must not contain commas or newlines");
        dataset.validate();
    }

    TrainConfig train_config() const {
        TrainConfig t;
        t.learning_rate = learning_rate;
        t.epochs = epochs;
        t.l2_beta = l2_beta;
        t.dropout_prob = dropout_prob;
        t.seed = seed;
        t.batch_size = batch_size;
        t.optimizer = parse_optimizer(optimizer);
        return t;
    }

    NetworkShape shape() const {
        NetworkShape s;
        s.input_dim = 2;
        s.depth = depth;
        s.width = width;
        s.output_dim = 1;
        s.hidden = ActivationSpec::parse(activation);
        s.output = ActivationSpec::parse(output_activation);
        return s;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["run_id"] = run_id;
        j["activation"] = activation;
        j["depth"] = depth;
        j["width"] = width;
        j["output_activation"] = output_activation;
        j["loss"] = loss_name(loss_kind());
        j["optimizer"] = optimizer;
        j["learning_rate"] = learning_rate;
        j["epochs"] = epochs;
        j["l2_beta"] = l2_beta;
        j["dropout_prob"] = dropout_prob;
        j["seed"] = seed;
        j["batch_size"] = batch_size;
        j["init_scale"] = init_scale;
        j["threshold"] = threshold;
        j["snapshot_epochs"] = snapshots();
        nlohmann::json d;
        d["means"] = dataset.means;
        d["labels"] = dataset.labels;
        d["count_per_component"] = dataset.count_per_component;
        d["stddev"] = dataset.stddev;
        d["seed"] = dataset_seed();
        j["dataset"] = d;
        j["out_dir"] = out_dir;
        return j;
    }

    static ExperimentConfig from_json(const nlohmann::json& j) {
        static const std::vector<std::string> known = {
            "run_id", "activation", "depth", "width", "output_activation", "loss",
            "optimizer", "learning_rate", "epochs", "l2_beta", "dropout_prob", "seed",
            "batch_size", "init_scale", "threshold", "snapshot_epochs", "dataset", "out_dir"};
        static const std::vector<std::string> known_ds = {"means", "labels",
                                                          "count_per_component", "stddev",
                                                          "seed"};
        if (!j.is_object()) throw ConfigError("config: expected a JSON object");
        for (auto it = j.begin(); it != j.end(); ++it)
            if (std::find(known.begin(), known.end(), it.key()) == known.end())
                throw ConfigError("config: unknown key '" + it.key() + "'");
        ExperimentConfig cfg;
        try {
            if (j.contains("run_id")) cfg.run_id = j["run_id"].get<std::string>();
            if (j.contains("activation")) cfg.activation = j["activation"].get<std::string>();
            if (j.contains("depth")) cfg.depth = j["depth"].get<std::size_t>();
            if (j.contains("width")) cfg.width = j["width"].get<std::size_t>();
            if (j.contains("output_activation"))
                cfg.output_activation = j["output_activation"].get<std::string>();
            if (j.contains("loss")) cfg.loss = j["loss"].get<std::string>();
            if (j.contains("optimizer")) cfg.optimizer = j["optimizer"].get<std::string>();
            if (j.contains("learning_rate")) cfg.learning_rate = j["learning_rate"].get<double>();
            if (j.contains("epochs")) cfg.epochs = j["epochs"].get<std::size_t>();
            if (j.contains("l2_beta")) cfg.l2_beta = j["l2_beta"].get<double>();
            if (j.contains("dropout_prob")) cfg.dropout_prob = j["dropout_prob"].get<double>();
            if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
            if (j.contains("batch_size")) cfg.batch_size = j["batch_size"].get<std::size_t>();
            if (j.contains("init_scale")) cfg.init_scale = j["init_scale"].get<double>();
            if (j.contains("threshold")) cfg.threshold = j["threshold"].get<double>();
            if (j.contains("snapshot_epochs"))
                cfg.snapshot_epochs = j["snapshot_epochs"].get<std::vector<std::size_t>>();
            if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
            if (j.contains("dataset")) {
                const auto& d = j["dataset"];
                if (!d.is_object()) throw ConfigError("config: dataset must be an object");
                for (auto it = d.begin(); it != d.end(); ++it)
                    if (std::find(known_ds.begin(), known_ds.end(), it.key()) == known_ds.end())
                        throw ConfigError("config: unknown dataset key '" + it.key() + "'");
                if (d.contains("means")) cfg.dataset.means = d["means"].get<std::vector<Vector>>();
                if (d.contains("labels")) cfg.dataset.labels = d["labels"].get<std::vector<int>>();
                if (d.contains("count_per_component"))
                    cfg.dataset.count_per_component = d["count_per_component"].get<std::size_t>();
                if (d.contains("stddev")) cfg.dataset.stddev = d["stddev"].get<double>();
                if (d.contains("seed")) {
                    cfg.dataset.seed = d["seed"].get<std::uint64_t>();
                    cfg.dataset_seed_set = true;
                }
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        cfg.validate();
        return cfg;
    }

    static ExperimentConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config: parse error in ") + path + ": " + e.what());
        }
        return from_json(j);
    }
};

// ---------------------------------------------------------------------------
// File emission
// ---------------------------------------------------------------------------

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

}  // namespace detail

inline void write_metrics_csv(const std::filesystem::path& path,
                              const std::vector<EpochMetrics>& metrics) {
    auto out = detail::open_out(path);
    out << "epoch,loss,train_error\n";
    for (const EpochMetrics& m : metrics)
        out << m.epoch << ',' << format_double(m.loss) << ',' << format_double(m.error) << '\n';
}

struct TrajectoryRow {
    std::string run_id;
    std::size_t epoch, layer, point_id, coord;
    double value;
};

inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const std::vector<TrajectoryRow>& rows) {
    auto out = detail::open_out(path);
    out << "run_id,epoch,layer,point_id,coord,value\n";
    for (const TrajectoryRow& r : rows)
        out << r.run_id << ',' << r.epoch << ',' << r.layer << ',' << r.point_id << ','
            << r.coord << ',' << format_double(r.value) << '\n';
}

inline void append_trajectory_rows(std::vector<TrajectoryRow>& rows, const std::string& run_id,
                                   std::size_t epoch, const Trajectory& traj) {
    for (std::size_t rec = 0; rec < traj.states.size(); ++rec)
        for (std::size_t p = 0; p < traj.states[rec].size(); ++p)
            for (std::size_t c = 0; c < traj.states[rec][p].size(); ++c)
                rows.push_back({run_id, epoch, traj.layers[rec], p, c,
                                traj.states[rec][p][c]});
}

inline void write_hyperplanes_csv(const std::filesystem::path& path,
                                  const std::vector<Hyperplane>& planes, std::size_t dim) {
    auto out = detail::open_out(path);
    out << "layer,neuron";
    for (std::size_t d = 0; d < dim; ++d) out << ",normal_" << d;
    out << ",offset\n";
    for (const Hyperplane& h : planes) {
        out << h.layer << ',' << h.neuron;
        for (double v : h.normal) out << ',' << format_double(v);
        out << ',' << format_double(h.offset) << '\n';
    }
}

inline void write_phase_diagram_csv(const std::filesystem::path& path,
                                    const std::vector<Arrow>& arrows, std::size_t layer) {
    auto out = detail::open_out(path);
    out << "layer,start_0,start_1,end_0,end_1\n";
    for (const Arrow& a : arrows)
        out << layer << ',' << format_double(a.start[0]) << ',' << format_double(a.start[1])
            << ',' << format_double(a.end[0]) << ',' << format_double(a.end[1]) << '\n';
}

inline nlohmann::json model_to_json(const Network& net) {
    nlohmann::json j;
    j["input_dim"] = net.input_dim();
    nlohmann::json layers = nlohmann::json::array();
    for (const Layer& l : net.layers) {
        nlohmann::json lj;
        lj["activation"] = l.activation.name();
        lj["rows"] = l.weights.rows();
        lj["cols"] = l.weights.cols();
        lj["weights"] = l.weights.data();
        lj["bias"] = l.bias;
        layers.push_back(lj);
    }
    j["layers"] = layers;
    return j;
}

inline Network model_from_json(const nlohmann::json& j) {
    Network net;
    try {
        for (const auto& lj : j.at("layers")) {
            Layer l;
            std::size_t rows = lj.at("rows").get<std::size_t>();
            std::size_t cols = lj.at("cols").get<std::size_t>();
            l.weights = Matrix(rows, cols);
            l.weights.data() = lj.at("weights").get<std::vector<double>>();
            if (l.weights.data().size() != rows * cols)
                throw ConfigError("model: weight count does not match rows*cols");
            l.bias = lj.at("bias").get<Vector>();
            l.activation = ActivationSpec::parse(lj.at("activation").get<std::string>());
            net.layers.push_back(std::move(l));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    net.validate();
    return net;
}

inline void save_model(const std::filesystem::path& path, const Network& net) {
    auto out = detail::open_out(path);
    out << model_to_json(net).dump(2) << '\n';
}

inline Network load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("model: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model: parse error: ") + e.what());
    }
    return model_from_json(j);
}

// ---------------------------------------------------------------------------
// Experiment driver
// ---------------------------------------------------------------------------

struct RunReport {
    nlohmann::json config;
    std::vector<EpochMetrics> metrics;
    double final_error = 0.0;
    std::vector<std::string> artifacts;
    Network trained;
    double wall_seconds = 0.0;  // reported on stdout, never written to files

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["config"] = config;
        nlohmann::json rows = nlohmann::json::array();
        for (const EpochMetrics& m : metrics) {
            nlohmann::json r;
            r["epoch"] = m.epoch;
            r["loss"] = m.loss;
            r["error"] = m.error;
            rows.push_back(r);
        }
        j["epochs"] = rows;
        j["final_error"] = final_error;
        j["artifacts"] = artifacts;
        return j;
    }
};

/// Trains the configured network on the toy dataset and emits metrics.csv,
/// trajectory.csv, hyperplanes.csv, model.json and report.json into
/// cfg.out_dir. Trajectories and hyperplanes are recorded through the
/// interpretable chain, so they are skipped (with the artifact list saying
/// so) when the hidden activation is not Goldilocks. Deterministic: the same
/// config yields byte-identical files.
inline RunReport run_toy_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    ToyDatasetSpec dspec = cfg.dataset;
    dspec.seed = cfg.dataset_seed();
    LabeledBatch data = gen_toy_dataset(dspec);
    Network net = init_weights(cfg.shape(), cfg.seed, cfg.init_scale);
    const bool interpretable = cfg.shape().hidden.is_goldilocks();

    std::vector<Vector> points;
    points.reserve(data.size());
    for (std::size_t s = 0; s < data.size(); ++s) points.push_back(data.inputs.row(s));

    std::vector<TrajectoryRow> traj_rows;
    auto record_snapshot = [&](std::size_t epoch) {
        if (!interpretable) return;
        InterpretableChain chain = build_chain(net);
        append_trajectory_rows(traj_rows, cfg.run_id, epoch,
                               forward_interpretable(chain, points));
    };

    RunReport report;
    report.config = cfg.to_json();

    const std::vector<std::size_t> snaps = cfg.snapshots();
    std::size_t trained_epochs = 0;
    bool first_chunk = true;
    auto train_chunk = [&](std::size_t upto) {
        if (upto <= trained_epochs) return;
        TrainConfig tc = cfg.train_config();
        tc.epochs = upto - trained_epochs;
        TrainResult res = train(net, data, cfg.loss_kind(), tc);
        net = std::move(res.net);
        for (EpochMetrics& m : res.metrics) {
            m.epoch += trained_epochs;
            if (!first_chunk && m.epoch == trained_epochs) continue;  // boundary row repeats
            report.metrics.push_back(m);
        }
        trained_epochs = upto;
        first_chunk = false;
    };

    for (std::size_t s : snaps) {
        train_chunk(s);
        record_snapshot(s);
    }
    train_chunk(cfg.epochs);
    if (report.metrics.empty()) {
        // zero-epoch run: still evaluate the initial network once
        TrainConfig tc = cfg.train_config();
        tc.epochs = 0;
        report.metrics = train(net, data, cfg.loss_kind(), tc).metrics;
    }

    report.final_error = report.metrics.back().error;

    const std::filesystem::path dir = cfg.out_dir;
    write_metrics_csv(dir / "metrics.csv", report.metrics);
    report.artifacts.push_back("metrics.csv");
    if (interpretable) {
        write_trajectory_csv(dir / "trajectory.csv", traj_rows);
        report.artifacts.push_back("trajectory.csv");
        InterpretableChain chain = build_chain(net);
        std::vector<Hyperplane> planes;
        for (std::size_t n = 0; n < chain.depth(); ++n)
            for (Hyperplane& h : hyperplanes(chain, n)) planes.push_back(std::move(h));
        write_hyperplanes_csv(dir / "hyperplanes.csv", planes, chain.input_dim);
        report.artifacts.push_back("hyperplanes.csv");
    }
    save_model(dir / "model.json", net);
    report.artifacts.push_back("model.json");

    report.trained = net;
    {
        auto out = detail::open_out(dir / "report.json");
        out << report.to_json().dump(2) << '\n';
    }
    report.artifacts.push_back("report.json");

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// ---------------------------------------------------------------------------
// Activation comparison
// ---------------------------------------------------------------------------

struct ComparisonRow {
    std::string activation;
    std::uint64_t seed;
    long epochs_to_threshold;  // -1 if the threshold error was never reached
    double best_error;
    double final_error;
};

/// Trains the same configuration (same seeds, same data, same initial draws)
/// once per activation and reports speed-to-threshold and best error.
inline std::vector<ComparisonRow> compare_activations(const ExperimentConfig& base,
                                                      const std::vector<std::string>& activations,
                                                      const std::vector<std::uint64_t>& seeds,
                                                      double error_threshold = 0.05) {
    std::vector<ComparisonRow> rows;
    for (const std::string& act : activations) {
        ActivationSpec::parse(act);
        for (std::uint64_t seed : seeds) {
            ExperimentConfig cfg = base;
            cfg.activation = act;
            cfg.seed = seed;
            cfg.validate();
            ToyDatasetSpec dspec = cfg.dataset;
            dspec.seed = cfg.dataset_seed();
            LabeledBatch data = gen_toy_dataset(dspec);
            Network net = init_weights(cfg.shape(), cfg.seed, cfg.init_scale);
            TrainResult res = train(net, data, cfg.loss_kind(), cfg.train_config());
            ComparisonRow row;
            row.activation = act;
            row.seed = seed;
            row.epochs_to_threshold = -1;
            row.best_error = 1.0;
            for (const EpochMetrics& m : res.metrics) {
                row.best_error = std::min(row.best_error, m.error);
                if (row.epochs_to_threshold < 0 && m.error <= error_threshold)
                    row.epochs_to_threshold = static_cast<long>(m.epoch);
            }
            row.final_error = res.metrics.back().error;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline void write_comparison_csv(const std::filesystem::path& path,
                                 const std::vector<ComparisonRow>& rows) {
    auto out = detail::open_out(path);
    out << "activation,seed,epochs_to_threshold,best_error,final_error\n";
    for (const ComparisonRow& r : rows)
        out << r.activation << ',' << r.seed << ',' << r.epochs_to_threshold << ','
            << format_double(r.best_error) << ',' << format_double(r.final_error) << '\n';
}

}  // namespace goldilocks
