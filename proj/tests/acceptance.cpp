// Acceptance suite: one line per criterion, nonzero exit if any fail.
// Criteria are asserted at their stated tolerances; measured values are
// printed so failures are diagnosable from the log alone.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "goldilocks/goldilocks.hpp"

using namespace goldilocks;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Criterion {
    int id;
    std::string name;
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back(what);
        }
    }
    void note(const std::string& what) { notes.push_back(what); }
};

std::vector<Criterion> g_results;

class Scope {
public:
    Scope(int id, std::string name) : start_(std::chrono::steady_clock::now()) {
        criterion_.id = id;
        criterion_.name = std::move(name);
    }
    ~Scope() {
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::printf("[%s] criterion %d: %s (%.1fs)\n", criterion_.pass ? "PASS" : "FAIL",
                    criterion_.id, criterion_.name.c_str(), secs);
        for (const std::string& n : criterion_.notes) std::printf("       - %s\n", n.c_str());
        std::fflush(stdout);
        g_results.push_back(criterion_);
    }
    Criterion* operator->() { return &criterion_; }
    Criterion& get() { return criterion_; }

private:
    Criterion criterion_;
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------- helpers

Network random_net(Rng& rng, const std::vector<std::size_t>& dims,
                   const ActivationSpec& hidden, const ActivationSpec& output,
                   double scale = 0.8, bool square_full_rank = false) {
    Network net;
    for (std::size_t n = 0; n + 1 < dims.size(); ++n) {
        Layer layer;
        layer.weights = Matrix(dims[n + 1], dims[n]);
        do {
            for (double& v : layer.weights.data()) v = rng.uniform(-scale, scale);
        } while (square_full_rank && (numerical_rank(layer.weights) < dims[n + 1] ||
                                      svd(layer.weights).sigma.back() < 1e-2));
        layer.bias.resize(dims[n + 1]);
        for (double& v : layer.bias) v = rng.uniform(-0.5, 0.5);
        layer.activation = (n + 2 == dims.size()) ? output : hidden;
        net.layers.push_back(std::move(layer));
    }
    return net;
}

double objective(const Network& net, const Matrix& inputs, const Matrix& targets, LossKind loss,
                 double beta) {
    double value = loss_value(loss, forward(net, inputs).outputs(), targets);
    if (beta != 0.0)
        for (const Layer& l : net.layers)
            for (double w : l.weights.data()) value += beta * w * w;
    return value;
}

double grad_rel(double analytic, double numeric) {
    return std::abs(analytic - numeric) /
           std::max({std::abs(analytic), std::abs(numeric), 1e-3});
}

double max_fd_gap(Network net, Matrix inputs, const Matrix& targets, LossKind loss,
                  double beta) {
    const double h = 1e-5;
    ForwardTrace trace = forward(net, inputs);
    Gradients grads = backward(net, trace, loss, targets, beta);
    double worst = 0.0;
    auto probe = [&](double& slot, double analytic) {
        double saved = slot;
        slot = saved + h;
        double up = objective(net, inputs, targets, loss, beta);
        slot = saved - h;
        double down = objective(net, inputs, targets, loss, beta);
        slot = saved;
        worst = std::max(worst, grad_rel(analytic, (up - down) / (2.0 * h)));
    };
    for (std::size_t n = 0; n < net.depth(); ++n) {
        for (std::size_t i = 0; i < net.layers[n].weights.size(); ++i)
            probe(net.layers[n].weights.data()[i], grads.weights[n].data()[i]);
        for (std::size_t i = 0; i < net.layers[n].bias.size(); ++i)
            probe(net.layers[n].bias[i], grads.bias[n][i]);
    }
    for (std::size_t i = 0; i < inputs.size(); ++i)
        probe(inputs.data()[i], grads.inputs.data()[i]);
    return worst;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double scalar_g(const ActivationSpec& spec, double x) {
    return goldilocks_g(spec.hump_kind, spec.mode, x).value;
}

double solve_tail_weight(const ActivationSpec& spec, double eps) {
    double lo = 1.5, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (std::abs(scalar_g(spec, mid)) > eps)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

const std::vector<std::pair<std::string, ActivationSpec>>& goldilocks_variants() {
    static const std::vector<std::pair<std::string, ActivationSpec>> v = {
        {"lorentz-unbiased",
         ActivationSpec::goldilocks(HumpKind::Lorentzian, GoldilocksMode::Unbiased)},
        {"lorentz-biased",
         ActivationSpec::goldilocks(HumpKind::Lorentzian, GoldilocksMode::Biased)},
        {"gauss-unbiased",
         ActivationSpec::goldilocks(HumpKind::Gaussian, GoldilocksMode::Unbiased)},
        {"gauss-biased",
         ActivationSpec::goldilocks(HumpKind::Gaussian, GoldilocksMode::Biased)},
    };
    return v;
}

// ---------------------------------------------------------------- criteria

void criterion_1_gradients() {
    Scope c(1, "gradient fidelity vs central finite differences (step 1e-5, < 1e-6)");
    Rng rng = Rng::stream(1001, "acceptance");
    std::vector<ActivationSpec> hidden = {
        ActivationSpec::goldilocks(HumpKind::Lorentzian, GoldilocksMode::Unbiased),
        ActivationSpec::goldilocks(HumpKind::Lorentzian, GoldilocksMode::Biased),
        ActivationSpec::goldilocks(HumpKind::Gaussian, GoldilocksMode::Unbiased),
        ActivationSpec::goldilocks(HumpKind::Gaussian, GoldilocksMode::Biased),
        ActivationSpec::selu(),
        ActivationSpec::sigmoid(),
    };
    double worst = 0.0;
    int nets = 0;
    for (const ActivationSpec& act : hidden) {
        for (int k = 0; k < 4; ++k) {
            std::size_t depth = 1 + static_cast<std::size_t>(rng.next_unit() * 4);
            std::vector<std::size_t> dims;
            dims.push_back(1 + static_cast<std::size_t>(rng.next_unit() * 8));
            for (std::size_t d = 0; d < depth; ++d)
                dims.push_back(1 + static_cast<std::size_t>(rng.next_unit() * 8));
            bool bce = (k == 3);
            Network net = random_net(rng, dims, act,
                                     bce ? ActivationSpec::sigmoid() : ActivationSpec::linear());
            std::size_t batch = 2 + static_cast<std::size_t>(rng.next_unit() * 3);
            Matrix inputs(batch, dims.front());
            for (double& v : inputs.data()) v = rng.uniform(-1.5, 1.5);
            Matrix targets(batch, dims.back());
            for (double& v : targets.data()) v = rng.uniform(0.0, 1.0);
            double beta = (k == 2) ? 0.01 : 0.0;
            worst = std::max(worst, max_fd_gap(net, inputs, targets,
                                               bce ? LossKind::BinaryCrossEntropy
                                                   : LossKind::SquaredError,
                                               beta));
            ++nets;
        }
    }
    c->note("max relative gradient error over " + std::to_string(nets) + " nets: " +
            fmt(worst));
    c->require(worst < 1e-6, "max relative error " + fmt(worst) + " >= 1e-6");
}

void criterion_2_equivalence() {
    Scope c(2, "direct/interpretable formulation equivalence (< 1e-8 per layer)");
    Rng rng = Rng::stream(1002, "acceptance");
    double worst = 0.0;
    int nets = 0;
    for (int trial = 0; trial < 12; ++trial) {
        const auto& variant = goldilocks_variants()[trial % 4].second;
        std::size_t dim = 2 + static_cast<std::size_t>(rng.next_unit() * 3);
        std::size_t depth = 2 + static_cast<std::size_t>(rng.next_unit() * 3);
        std::vector<std::size_t> dims(depth + 1, dim);
        Network net = random_net(rng, dims, variant, variant, 0.9, true);
        InterpretableChain chain = build_chain(net);

        std::vector<Vector> batch;
        for (int p = 0; p < 3; ++p) {
            Vector x(dim);
            for (double& v : x) v = rng.uniform(-1.5, 1.5);
            batch.push_back(std::move(x));
        }
        ForwardTrace direct = forward(net, batch);
        Trajectory traj = forward_interpretable(chain, batch);
        for (std::size_t n = 1; n <= net.depth(); ++n)
            for (std::size_t p = 0; p < batch.size(); ++p) {
                Vector x = add(multiply(chain.v[n - 1], traj.states[n][p]), chain.c[n - 1]);
                for (std::size_t i = 0; i < dim; ++i)
                    worst = std::max(worst, std::abs(x[i] - direct.post[n - 1](p, i)));
            }
        ++nets;
    }
    c->note("max coordinate gap over " + std::to_string(nets) + " nets: " + fmt(worst));
    c->require(worst < 1e-8, "max gap " + fmt(worst) + " >= 1e-8");
}

void criterion_3_invertibility() {
    Scope c(3, "invertibility: exact Newton round trips, O(eps^2) stated inverse, rank gate");
    Rng rng = Rng::stream(1003, "acceptance");

    double worst_rt = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto& variant = goldilocks_variants()[trial % 4].second;
        std::vector<std::size_t> dims(4, 3);
        Network net = random_net(rng, dims, variant, variant, 0.9, true);
        Vector input = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Vector output = forward(net, std::vector<Vector>{input}).outputs().row(0);
        Vector recovered = invert_network_exact(net, output);
        worst_rt = std::max(worst_rt, norm2(subtract(recovered, input)));
    }
    c->note("worst exact round-trip error over 5 nets: " + fmt(worst_rt));
    c->require(worst_rt < 1e-9, "round-trip error " + fmt(worst_rt) + " >= 1e-9");

    // amplitude sweep: scalar weight s puts the activation at A = s, so
    // max|g| = |g(s)| is the swept amplitude
    const ActivationSpec gauss_u = goldilocks_variants()[2].second;
    const double eps0 = std::abs(scalar_g(gauss_u, 2.0));
    std::vector<double> errors;
    for (int k = 0; k < 4; ++k) {
        double s = solve_tail_weight(gauss_u, eps0 / (1 << k));
        Network net;
        net.layers.push_back({Matrix::from_rows({{s}}), {0.0}, gauss_u});
        InterpretableChain chain = build_chain(net);
        Trajectory traj = forward_interpretable(chain, {{1.0}});
        double back = first_order_inverse_interpretable(chain, {traj.states[1][0][0]}, 0)[0];
        errors.push_back(std::abs(back - 1.0));
    }
    std::string ratios;
    for (int k = 0; k < 3; ++k) {
        double r = errors[k] / errors[k + 1];
        ratios += (k ? ", " : "") + fmt(r);
        c->require(r > 3.0 && r < 5.0,
                   "amplitude-halving error ratio " + fmt(r) + " outside [3, 5]");
    }
    c->note("stated-inverse error ratios across the 4-point sweep: " + ratios);

    Layer bad;
    bad.weights = Matrix::from_rows({{1.0, 2.0}, {2.0, 4.0}});
    bad.bias = {0.0, 0.0};
    bad.activation = goldilocks_variants()[0].second;
    bool raised = false;
    try {
        invert_layer_exact(bad, {1.0, 2.0});
    } catch (const NotInvertibleError&) {
        raised = true;
    }
    c->require(raised, "rank-deficient weights did not raise not-invertible");
}

void criterion_4_moments() {
    Scope c(4, "moments lemma vs 1e6-sample oracle, max(5% rel, 3 SE) per entry");
    const std::size_t n = 1000000;
    const std::uint64_t seed = 20240501;
    int cells = 0, failed = 0;
    std::vector<std::string> failures;

    for (const auto& [name, spec] : goldilocks_variants()) {
        for (double sigma : {0.1, 0.3, 0.5}) {
            for (double b : {0.0, 0.5}) {
                for (double w : {-1.0, -0.5, 0.5, 1.0}) {
                    NeuronMoments lemma = propagate_neuron(0.0, sigma * sigma, w, b, spec);
                    GaussianMoments in;
                    in.mean = {0.0};
                    in.cov = Matrix::from_rows({{sigma * sigma}});
                    McResult mc =
                        mc_oracle(in, Matrix::from_rows({{w}}), {b}, spec, n, seed + cells);
                    auto entry_ok = [](double pred, double est, double se) {
                        return std::abs(pred - est) <=
                               std::max(0.05 * std::abs(est), 3.0 * se);
                    };
                    bool mean_ok = entry_ok(lemma.mean, mc.estimate.mean[0], mc.mean_se[0]);
                    bool var_ok =
                        entry_ok(lemma.variance, mc.estimate.cov(0, 0), mc.cov_se(0, 0));
                    ++cells;
                    if (!mean_ok || !var_ok) {
                        ++failed;
                        char buf[256];
                        std::snprintf(buf, sizeof(buf),
                                      "%s sigma=%.1f b=%.1f w=%+.1f: lemma(mean %s, var %s) "
                                      "oracle(mean %s, var %s)%s%s",
                                      name.c_str(), sigma, b, w, fmt(lemma.mean).c_str(),
                                      fmt(lemma.variance).c_str(),
                                      fmt(mc.estimate.mean[0]).c_str(),
                                      fmt(mc.estimate.cov(0, 0)).c_str(),
                                      mean_ok ? "" : " MEAN-OUT", var_ok ? "" : " VAR-OUT");
                        failures.push_back(buf);
                    }
                }
            }
        }
    }

    // pinned value: sigma=0.1, w=1, b=0, unbiased Lorentzian variance
    NeuronMoments pinned =
        propagate_neuron(0.0, 0.01, 1.0, 0.0, goldilocks_variants()[0].second);
    c->require(std::abs(pinned.variance - 0.0173794) < 1e-7,
               "pinned variance " + fmt(pinned.variance) + " != 0.0173794");
    c->note("pinned sigma=0.1 unbiased-Lorentzian variance: " + fmt(pinned.variance));

    // layer form on a random small-covariance 3x3 case
    {
        Rng rng = Rng::stream(1004, "acceptance");
        GaussianMoments in;
        in.mean = {0.2, -0.3, 0.1};
        Matrix half(3, 3);
        for (double& v : half.data()) v = rng.uniform(-0.12, 0.12);
        in.cov = multiply(half, transpose(half));
        Matrix w(3, 3);
        for (double& v : w.data()) v = rng.uniform(-1.0, 1.0);
        Vector b = {0.1, -0.2, 0.3};
        const ActivationSpec& spec = goldilocks_variants()[0].second;
        GaussianMoments lemma = propagate_layer(in, w, b, spec);
        McResult mc = mc_oracle(in, w, b, spec, n, seed + 999);
        bool layer_ok = true;
        for (std::size_t i = 0; i < 3; ++i)
            layer_ok &= std::abs(lemma.mean[i] - mc.estimate.mean[i]) <=
                        std::max(0.05 * std::abs(mc.estimate.mean[i]), 3.0 * mc.mean_se[i]);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                layer_ok &= std::abs(lemma.cov(i, j) - mc.estimate.cov(i, j)) <=
                            std::max(0.05 * std::abs(mc.estimate.cov(i, j)),
                                     3.0 * mc.cov_se(i, j));
        c->require(layer_ok, "propagate_layer outside tolerance on the 3x3 small-Sigma case");
    }

    c->note(std::to_string(cells - failed) + "/" + std::to_string(cells) +
            " neuron grid cells within tolerance");
    for (const std::string& f : failures) c->note(f);
    c->require(failed == 0, std::to_string(failed) +
                                " grid cells exceed max(5% rel, 3 SE): the lemma is a "
                                "second-order truncation and its error at sigma >= 0.3, "
                                "|w| >= 0.5 genuinely exceeds the stated tolerance");
}

void criterion_5_ode() {
    Scope c(5, "scalar Lorentzian flow invariant over span pi, RK4 4th-order convergence");
    FlowField field = FlowField::scalar(
        1.0, 0.0, ActivationSpec::goldilocks(HumpKind::Lorentzian, GoldilocksMode::Unbiased));
    FlowConfig cfg;
    cfg.step = 1e-3;
    cfg.n_start = 0.0;
    cfg.n_end = kPi;
    auto samples = flow_forward(field, {0.1}, cfg);
    double change = implicit_invariant(HumpKind::Lorentzian, samples.back().y[0]) -
                    implicit_invariant(HumpKind::Lorentzian, 0.1);
    c->note("measured change of ln A^2 + A^2 over span pi: " + fmt(change) +
            " (stated expectation 1 +- 1e-6; separation of variables gives exactly "
            "2*span/pi = 2)");
    c->require(std::abs(change - 1.0) <= 1e-6,
               "invariant change " + fmt(change) + " is not 1 +- 1e-6");

    auto end_state = [&](double step) {
        FlowConfig f = cfg;
        f.step = step;
        return flow_forward(field, {0.1}, f).back().y[0];
    };
    double reference = end_state(1e-5);
    double ratio = std::abs(end_state(0.04) - reference) /
                   std::abs(end_state(0.02) - reference);
    c->note("RK4 step-halving error ratio: " + fmt(ratio));
    c->require(ratio > 8.0 && ratio < 32.0,
               "step-halving ratio " + fmt(ratio) + " outside [8, 32]");
}

void criterion_6_toy() {
    Scope c(6, "toy experiment: <= 5% training error, sigmoid <= linear over 5 seeds");
    struct Outcome {
        double best;
        double final_error;
    };
    auto run = [&](std::uint64_t seed, bool sigmoid_out) {
        ExperimentConfig cfg;  // defaults: 6x2 lorentz-biased, adam, lr 0.05, 20000 epochs
        cfg.seed = seed;
        cfg.output_activation = sigmoid_out ? "sigmoid" : "linear";
        ToyDatasetSpec dspec = cfg.dataset;
        dspec.seed = cfg.dataset_seed();
        LabeledBatch data = gen_toy_dataset(dspec);
        Network net = init_weights(cfg.shape(), cfg.seed, cfg.init_scale);
        TrainResult res = train(net, data, cfg.loss_kind(), cfg.train_config());
        Outcome out{1.0, res.metrics.back().error};
        for (const EpochMetrics& m : res.metrics) out.best = std::min(out.best, m.error);
        return out;
    };

    Outcome seed1 = run(1, true);
    c->note("seed 1 sigmoid-output training error: best " + fmt(seed1.best) + ", final " +
            fmt(seed1.final_error));
    c->require(seed1.best <= 0.05,
               "best training error " + fmt(seed1.best) +
                   " > 5%: with the pinned +-0.005 initialization the 39-parameter network "
                   "trains to ~7-8% here (plain gradient descent cannot leave the 33.3% "
                   "majority-class plateau at all; the sample's Bayes error is 8.7%, and "
                   "restarts from favorable large initializations bottom out at 5.3%)");

    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        Outcome sig = (seed == 1) ? seed1 : run(seed, true);
        Outcome lin = run(seed, false);
        c->note("seed " + std::to_string(seed) + ": final sigmoid " + fmt(sig.final_error) +
                " vs linear " + fmt(lin.final_error));
        c->require(sig.final_error <= lin.final_error,
                   "seed " + std::to_string(seed) + ": sigmoid final error " +
                       fmt(sig.final_error) + " > linear final error " +
                       fmt(lin.final_error));
    }
}

void criterion_7_determinism() {
    Scope c(7, "byte-identical outputs across repeated runs of the same config");
    fs::path dir = fs::path("acceptance_out") / "determinism";
    fs::remove_all(dir);

    ExperimentConfig cfg;
    cfg.epochs = 300;
    cfg.out_dir = (dir / "train").string();
    run_toy_experiment(cfg);
    std::map<std::string, std::string> first;
    for (const auto& entry : fs::directory_iterator(dir / "train"))
        first[entry.path().filename().string()] = slurp(entry.path());
    run_toy_experiment(cfg);
    for (const auto& [name, bytes] : first) {
        bool same = slurp(dir / "train" / name) == bytes;
        c->require(same, "train artifact " + name + " differs between identical runs");
    }
    c->note("train: " + std::to_string(first.size()) + " artifacts byte-compared");

    ExperimentConfig base;
    base.epochs = 120;
    auto rows_a = compare_activations(base, {"lorentz-biased", "relu"}, {1, 2}, 0.05);
    write_comparison_csv(dir / "cmp_a.csv", rows_a);
    auto rows_b = compare_activations(base, {"lorentz-biased", "relu"}, {1, 2}, 0.05);
    write_comparison_csv(dir / "cmp_b.csv", rows_b);
    c->require(slurp(dir / "cmp_a.csv") == slurp(dir / "cmp_b.csv"),
               "comparison.csv differs between identical runs");
}

void criterion_8_examples() {
    Scope c(8, "module example suite (activation, linalg, interpret, odeflow)");
    auto near = [](double a, double b, double tol) { return std::abs(a - b) <= tol; };
    Criterion& cr = c.get();

    // activation examples
    cr.require(near(hump(HumpKind::Lorentzian, 0.0), 0.3183098862, 1e-9), "hump L(0)");
    cr.require(near(hump(HumpKind::Gaussian, 0.0), 0.3989422804, 1e-9), "hump G(0)");
    cr.require(near(hump(HumpKind::Lorentzian, 1.0), 1.0 / (2.0 * kPi), 1e-12), "hump L(1)");
    {
        GDerivs u = goldilocks_g(HumpKind::Lorentzian, GoldilocksMode::Unbiased, 0.0);
        cr.require(u.value == 0.0 && u.d2 == 0.0 && near(u.d1, 0.3183098862, 1e-9),
                   "g lorentz-unbiased at 0");
        GDerivs b = goldilocks_g(HumpKind::Lorentzian, GoldilocksMode::Biased, 0.0);
        cr.require(near(b.value, 0.3183098862, 1e-9) && b.d1 == 0.0 &&
                       near(b.d2, -0.6366197724, 1e-9),
                   "g lorentz-biased at 0");
        GDerivs g1 = goldilocks_g(HumpKind::Gaussian, GoldilocksMode::Unbiased, 1.0);
        cr.require(near(g1.value, 0.2419707245, 1e-9), "g gauss-unbiased at 1");
        Activated a0 = activate(ActivationSpec::parse("lorentz-unbiased"), 0.0);
        cr.require(a0.value == 0.0 && near(a0.d1, 1.3183098862, 1e-9), "A lorentz-unbiased 0");
        Activated b0 = activate(ActivationSpec::parse("lorentz-biased"), 0.0);
        cr.require(near(b0.value, 0.3183098862, 1e-9) && near(b0.d1, 1.0, 1e-12),
                   "A lorentz-biased 0");
        Activated tail = activate(ActivationSpec::parse("lorentz-unbiased"), 100.0);
        cr.require(near(tail.value, 100.0 + 100.0 / (kPi * 10001.0), 1e-9), "A tail at 100");
    }

    // linalg examples
    cr.require(frobenius_norm(subtract(pseudoinverse(Matrix::identity(3)),
                                       Matrix::identity(3))) < 1e-12,
               "pinv identity");
    cr.require(near(pseudoinverse(Matrix::from_rows({{2.0}}))(0, 0), 0.5, 1e-14),
               "pinv scalar");
    {
        Rng rng = Rng::stream(1008, "acceptance");
        Matrix m(2, 3);
        for (double& v : m.data()) v = rng.uniform(-1.0, 1.0);
        Matrix p = pseudoinverse(m);
        cr.require(frobenius_norm(subtract(multiply(multiply(m, p), m), m)) < 1e-10,
                   "pinv M M+ M = M");
        cr.require(numerical_rank(Matrix::identity(4)) == 4, "rank identity(4)");
        cr.require(numerical_rank(Matrix(3, 3)) == 0, "rank zero matrix");
        cr.require(numerical_rank(outer({1, 2, 3}, {4, 5, 6})) == 1, "rank outer product");
    }

    // interpret examples
    {
        Network one;
        one.layers.push_back({Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}}), {0.5, -0.5},
                              ActivationSpec::parse("lorentz-unbiased")});
        InterpretableChain chain = build_chain(one);
        cr.require(chain.v[0].data() == one.layers[0].weights.data() &&
                       chain.c[0] == one.layers[0].bias,
                   "chain base case");

        Network two;
        for (int i = 0; i < 2; ++i)
            two.layers.push_back({scale(Matrix::identity(2), 2.0), Vector(2, 0.0),
                                  ActivationSpec::parse("lorentz-unbiased")});
        InterpretableChain c2 = build_chain(two);
        cr.require(frobenius_norm(subtract(c2.v[1], scale(Matrix::identity(2), 4.0))) <
                           1e-14 &&
                       max_abs(c2.c[1]) == 0.0,
                   "chain product 2I * 2I");

        Network ident;
        for (int i = 0; i < 4; ++i)
            ident.layers.push_back({Matrix::identity(2), Vector(2, 0.0),
                                    ActivationSpec::parse("lorentz-unbiased")});
        InterpretableChain ci = build_chain(ident);
        bool all_identity = true;
        for (std::size_t n = 0; n < 4; ++n)
            all_identity &= frobenius_norm(subtract(ci.v[n], Matrix::identity(2))) == 0.0 &&
                            max_abs(ci.c[n]) == 0.0;
        cr.require(all_identity, "identity chain");

        Trajectory tails = forward_interpretable(ci, {{420.0, -380.0}});
        for (const auto& st : tails.states)
            cr.require(std::abs(st[0][0] - 420.0) < 1e-2 && std::abs(st[0][1] + 380.0) < 1e-2,
                       "tail identity flow");
        Trajectory unit = forward_interpretable(ci, {{1.0, 0.0}});
        cr.require(near(unit.states[1][0][0], 1.0 + 1.0 / (2.0 * kPi), 1e-12),
                   "interpretable step equals direct activation");

        BackProjection bp = to_input_coords(ci, {0.3, 0.4}, 1);
        cr.require(!bp.lossy && bp.point[0] == 0.3 && bp.point[1] == 0.4,
                   "identity backprojection");

        auto planes = hyperplanes(build_chain(Network{{Layer{
                                      Matrix::from_rows({{1.0, 0.0}, {0.0, 2.0}}),
                                      {0.0, -2.0},
                                      ActivationSpec::parse("lorentz-unbiased")}}}),
                                  0);
        cr.require(planes.size() == 2, "one hyperplane per neuron");
        cr.require(planes[0].normal == Vector{1.0, 0.0} && planes[0].offset == 0.0,
                   "hyperplane y1 = 0");
        cr.require(near(dot(planes[1].normal, {5.0, 1.0}) + planes[1].offset, 0.0, 1e-15),
                   "hyperplane y2 = 1");

        Network zerow;
        zerow.layers.push_back({Matrix(2, 2), {0.5, 0.5},
                                ActivationSpec::parse("lorentz-biased")});
        auto arrows = phase_diagram(zerow, GridSpec{-1, 1, 3, -1, 1, 3}, 0);
        double expected = activate(zerow.layers[0].activation, 0.5).value;
        for (const Arrow& a : arrows)
            cr.require(near(a.end[0], expected, 1e-14) && near(a.end[1], expected, 1e-14),
                       "zero-weight phase diagram is constant");
        auto origin_arrows = phase_diagram(ci, GridSpec{-1, 1, 3, -1, 1, 3}, 0);
        for (const Arrow& a : origin_arrows)
            if (a.start[0] == 0.0 && a.start[1] == 0.0)
                cr.require(norm2(subtract(a.end, a.start)) == 0.0, "origin fixed point");
        auto far_arrows = phase_diagram(ci, GridSpec{400, 500, 2, 400, 500, 2}, 0);
        for (const Arrow& a : far_arrows)
            cr.require(norm2(subtract(a.end, a.start)) < 1e-2, "far arrows are short");
    }

    // odeflow examples
    {
        const ActivationSpec lu =
            ActivationSpec::goldilocks(HumpKind::Lorentzian, GoldilocksMode::Unbiased);
        FlowField field = FlowField::scalar(1.0, 0.0, lu);
        FlowConfig fc;
        fc.step = 1e-2;
        fc.n_end = 4.0;
        cr.require(std::abs(flow_forward(field, {300.0}, fc).back().y[0] - 300.0) < 1e-2,
                   "flow tail identity");
        for (const FlowSample& s : flow_forward(field, {0.0}, fc))
            cr.require(s.y[0] == 0.0, "flow fixed point at 0");
        FlowConfig fpi;
        fpi.step = 1e-3;
        fpi.n_end = kPi;
        double change =
            implicit_invariant(HumpKind::Lorentzian,
                               flow_forward(field, {0.1}, fpi).back().y[0]) -
            implicit_invariant(HumpKind::Lorentzian, 0.1);
        // oracle (separation of variables): the change is exactly 2*span/pi
        cr.require(near(change, 2.0, 1e-6), "flow invariant grows at 2/pi");

        cr.require(near(implicit_invariant(HumpKind::Lorentzian, 1.0), 1.0, 1e-14),
                   "invariant L(1)");
        cr.require(near(implicit_invariant(HumpKind::Lorentzian, std::exp(0.5)),
                        1.0 + std::exp(1.0), 1e-12),
                   "invariant L(e^1/2)");
        cr.require(near(implicit_invariant(HumpKind::Gaussian, 1.0), 1.8951178, 1e-7),
                   "invariant G(1) = Ei(1)");

        auto adj_cfg = fpi;
        adj_cfg.n_end = 2.0;
        auto fwd0 = flow_forward(field, {0.0}, adj_cfg);
        auto adj = adjoint_backward(field, fwd0, {1.0}, adj_cfg);
        cr.require(near(adj.front().y[0], std::exp(2.0 / kPi), 1e-9),
                   "adjoint closed form exp(kL)");
        const ActivationSpec gu =
            ActivationSpec::goldilocks(HumpKind::Gaussian, GoldilocksMode::Unbiased);
        FlowField gfield = FlowField::scalar(1.0, 0.0, gu);
        auto gfwd = flow_forward(gfield, {60.0}, adj_cfg);
        for (const FlowSample& s : adjoint_backward(gfield, gfwd, {0.5}, adj_cfg))
            cr.require(near(s.y[0], 0.5, 1e-12), "adjoint constant where g' = 0");

        Vector z = {0.2, -0.7};
        Layer ident{Matrix::identity(2), {0.0, 0.0}, lu};
        Vector x_next(2);
        for (int i = 0; i < 2; ++i) x_next[i] = activate(lu, z[i]).value;
        Vector rec = invert_layer_exact(ident, x_next);
        cr.require(std::abs(rec[0] - z[0]) < 1e-12 && std::abs(rec[1] - z[1]) < 1e-12,
                   "exact inverse recovers constructed state");

        Rng rng = Rng::stream(1009, "acceptance");
        std::vector<std::size_t> dims(4, 3);
        Network net = random_net(rng, dims, lu, lu, 0.9, true);
        Vector input = {0.5, -0.25, 0.75};
        Vector output = forward(net, std::vector<Vector>{input}).outputs().row(0);
        cr.require(norm2(subtract(invert_network_exact(net, output), input)) < 1e-9,
                   "3-layer exact round trip");

        Network tail_net;
        tail_net.layers.push_back({Matrix::from_rows({{1.0}}), {0.0}, lu});
        InterpretableChain tail_chain = build_chain(tail_net);
        double forwarded = forward_interpretable(tail_chain, {{650.0}}).states[1][0][0];
        cr.require(near(first_order_inverse_interpretable(tail_chain, {forwarded}, 0)[0], 650.0,
                        1e-3),
                   "stated inverse exact in the zero-deformation regime");
        double peak_fwd = forward_interpretable(tail_chain, {{1.0}}).states[1][0][0];
        cr.require(std::abs(first_order_inverse_interpretable(tail_chain, {peak_fwd}, 0)[0] - 1.0) >
                       1e-3,
                   "stated inverse error at full amplitude is nonzero");
    }
}

}  // namespace

int main() {
    std::printf("goldilocks acceptance suite\n");
    criterion_1_gradients();
    criterion_2_equivalence();
    criterion_3_invertibility();
    criterion_4_moments();
    criterion_5_ode();
    criterion_6_toy();
    criterion_7_determinism();
    criterion_8_examples();

    int failed = 0;
    for (const Criterion& c : g_results)
        if (!c.pass) ++failed;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failed,
                g_results.size());
    return failed == 0 ? 0 : 1;
}
