#include "drc/train.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "drc/grad.hpp"

namespace drc {

namespace {

constexpr std::uint64_t kInitTag = 21;
constexpr std::uint64_t kStepMaskTag = 22;
constexpr std::uint64_t kRiskMaskTag = 23;
constexpr std::uint64_t kTrialTag = 24;
constexpr std::uint64_t kHeldoutTag = 25;

}  // namespace

void TrainConfig::validate() const {
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
    if (train_size < 1) throw std::invalid_argument("train_size must be >= 1");
    if (test_size < 1) throw std::invalid_argument("test_size must be >= 1");
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
    loss.validate();
}

WeightAssignment initial_weights(const NetworkSpec& spec, std::uint64_t seed) {
    rng::Stream stream(seed, rng::stream_key(kInitTag));
    return random_boundary_weights(spec, stream, 0.5);
}

TrainResult train_with_dropout(const NetworkSpec& spec, const std::vector<Vec>& xs,
                               const std::vector<double>& ys, const TrainConfig& cfg,
                               std::uint64_t seed) {
    cfg.validate();
    spec.validate();
    if (xs.empty()) throw std::invalid_argument("training data must be nonempty");
    if (xs.size() != ys.size())
        throw std::invalid_argument("training inputs/labels count mismatch");
    for (const auto& x : xs) check_input(spec, x);

    const int n = static_cast<int>(xs.size());
    const int k = spec.hidden_layers();
    WeightAssignment w = initial_weights(spec, seed);
    WeightAssignment grad = zero_weights(spec);
    std::vector<double> trajectory;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (int i = 0; i < n; ++i) {
            MaskBundle masks = sample_masks(
                spec, cfg.dropout_type,
                SamplerConfig{cfg.rho, seed,
                              rng::stream_key(kStepMaskTag, static_cast<std::uint64_t>(epoch),
                                              static_cast<std::uint64_t>(i))});
            ForwardTrace trace = lower_trace(spec, w, xs[static_cast<std::size_t>(i)], &masks);
            const Vec& top = w.layers[static_cast<std::size_t>(k)][0];
            double f = top_output(spec, top, trace, &masks);
            double g = loss_grad_f(cfg.loss, f, ys[static_cast<std::size_t>(i)]);
            if (!std::isfinite(f) || !std::isfinite(g))
                throw TrainingDiverged("training diverged at epoch " + std::to_string(epoch) +
                                           " example " + std::to_string(i),
                                       trajectory);
            for (auto& layer : grad.layers)
                for (auto& v : layer) std::fill(v.begin(), v.end(), 0.0);
            backprop_accumulate(spec, w, top, trace, &masks, g, true, grad);
            for (std::size_t l = 0; l < w.layers.size(); ++l)
                for (std::size_t j = 0; j < w.layers[l].size(); ++j)
                    axpy(-cfg.learning_rate, grad.layers[l][j], w.layers[l][j]);
        }
        w = project_weights(w, spec);
        double risk = 0.0;
        for (int i = 0; i < n; ++i) {
            MaskBundle masks = sample_masks(
                spec, cfg.dropout_type,
                SamplerConfig{cfg.rho, seed,
                              rng::stream_key(kRiskMaskTag, static_cast<std::uint64_t>(epoch),
                                              static_cast<std::uint64_t>(i))});
            risk += loss_eval(cfg.loss,
                              forward_dropout(spec, w, xs[static_cast<std::size_t>(i)], masks),
                              ys[static_cast<std::size_t>(i)]);
        }
        risk /= static_cast<double>(n);
        if (!std::isfinite(risk))
            throw TrainingDiverged("training risk non-finite after epoch " +
                                       std::to_string(epoch),
                                   trajectory);
        trajectory.push_back(risk);
    }
    return TrainResult{std::move(w), std::move(trajectory)};
}

namespace {

double clip(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

GapTrial run_gap_trial(const NetworkSpec& spec, const TrainConfig& cfg, double delta,
                       DataDistribution dist, std::uint64_t trial_seed) {
    const int n = cfg.train_size;
    rng::Stream teacher_stream(trial_seed, rng::stream_key(kTrialTag, 0));
    WeightAssignment teacher = random_boundary_weights(spec, teacher_stream, 0.7);
    const double y_cap = cfg.loss.kind == LossKind::Square ? cfg.loss.y_bound : 1.0;

    rng::Stream data_stream(trial_seed, rng::stream_key(kTrialTag, 1));
    std::vector<Vec> xs;
    std::vector<double> ys;
    xs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vec x = sample_input(dist, data_stream, spec.input_dim, spec.input_bound);
        ys.push_back(clip(forward(spec, teacher, x), -y_cap, y_cap));
        xs.push_back(std::move(x));
    }

    TrainResult trained =
        train_with_dropout(spec, xs, ys, cfg, rng::derive(trial_seed, rng::stream_key(kTrialTag, 2)));

    GapTrial trial;
    for (int i = 0; i < n; ++i) {
        MaskBundle masks = sample_masks(
            spec, cfg.dropout_type,
            SamplerConfig{cfg.rho, trial_seed,
                          rng::stream_key(kTrialTag, 3, static_cast<std::uint64_t>(i))});
        trial.empirical_risk +=
            loss_eval(cfg.loss,
                      forward_dropout(spec, trained.weights, xs[static_cast<std::size_t>(i)],
                                      masks),
                      ys[static_cast<std::size_t>(i)]);
    }
    trial.empirical_risk /= static_cast<double>(n);

    rng::Stream heldout_stream(trial_seed, rng::stream_key(kHeldoutTag, 0));
    for (int i = 0; i < cfg.test_size; ++i) {
        Vec x = sample_input(dist, heldout_stream, spec.input_dim, spec.input_bound);
        double y = clip(forward(spec, teacher, x), -y_cap, y_cap);
        MaskBundle masks = sample_masks(
            spec, cfg.dropout_type,
            SamplerConfig{cfg.rho, trial_seed,
                          rng::stream_key(kHeldoutTag, 1, static_cast<std::uint64_t>(i))});
        trial.heldout_risk += loss_eval(cfg.loss, forward_dropout(spec, trained.weights, x, masks), y);
    }
    trial.heldout_risk /= static_cast<double>(cfg.test_size);

    double complexity = theoretical_complexity_bound(spec, cfg.dropout_type, cfg.rho, n);
    BoundReport report = generalization_bound(trial.empirical_risk, complexity, cfg.loss, spec,
                                              delta, n, BoundVariant::Expected, cfg.rho);
    trial.rhs = report.total_bound;
    trial.pass = trial.heldout_risk <= trial.rhs;
    return trial;
}

}  // namespace

GapReport gap_experiment(const NetworkSpec& spec, const TrainConfig& cfg, double delta,
                         int n_trials, DataDistribution dist, std::uint64_t seed, int jobs) {
    cfg.validate();
    spec.validate();
    if (n_trials < 1) throw std::invalid_argument("gap experiment requires n_trials >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");

    GapReport report;
    report.n_trials = n_trials;
    report.delta = delta;
    report.trials.resize(static_cast<std::size_t>(n_trials));

    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int t = next.fetch_add(1);
            if (t >= n_trials) return;
            std::uint64_t trial_seed =
                rng::derive(seed, rng::stream_key(kTrialTag, 100, static_cast<std::uint64_t>(t)));
            report.trials[static_cast<std::size_t>(t)] =
                run_gap_trial(spec, cfg, delta, dist, trial_seed);
        }
    };
    int n_threads = jobs < n_trials ? jobs : n_trials;
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (const GapTrial& trial : report.trials)
        if (trial.pass) ++report.passes;
    report.pass_fraction = static_cast<double>(report.passes) / static_cast<double>(n_trials);
    return report;
}

}  // namespace drc
