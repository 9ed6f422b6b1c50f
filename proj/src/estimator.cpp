#include "drc/estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "drc/grad.hpp"
#include "masked_ops.hpp"

namespace drc {

namespace {

constexpr std::uint64_t kEpsilonTag = 1;
constexpr std::uint64_t kSupTag = 2;
constexpr std::uint64_t kInitTag = 3;
constexpr std::uint64_t kDataTag = 4;
constexpr std::uint64_t kMaskTag = 5;
constexpr std::uint64_t kInnerTag = 6;

struct Moments {
    double mean = 0.0;
    double std_error = 0.0;
};

Moments summarize(const std::vector<double>& values) {
    Moments m;
    if (values.empty()) return m;
    double s = 0.0;
    for (double v : values) s += v;
    m.mean = s / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - m.mean) * (v - m.mean);
        double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        m.std_error = sd / std::sqrt(static_cast<double>(values.size()));
    }
    return m;
}

struct InnerProblem {
    const NetworkSpec& spec;
    DropoutType type;
    const std::vector<Vec>& xs;
    const std::vector<MaskBundle>& masks;
    const std::vector<int>& eps;
    bool absconv;
};

// Coefficient of top unit j in the output: psi_k[j] times the top masks.
double top_coefficient(const MaskBundle& b, const Vec& psi_k, int k, std::size_t j) {
    const std::uint8_t* twm = detail::weight_mask_ptr(b, k, 0);
    const std::uint8_t* tum = detail::unit_mask_ptr(b, k);
    bool keep = (!twm || twm[j]) && (!tum || tum[j]);
    return keep ? psi_k[j] : 0.0;
}

// Objective (1/n) sum_i eps_i f(w, x_i, r_i); with the absconv reduction the
// top L1 ball is replaced by its extreme points, giving
// B_k * max_j | (1/n) sum_i eps_i T_ij | with the maximizing vertex chosen
// fresh at every evaluation. Fills `grad` (pre-zeroed shape) when non-null.
double eval_objective(const InnerProblem& p, const WeightAssignment& w, WeightAssignment* grad) {
    const int k = p.spec.hidden_layers();
    const std::size_t n = p.xs.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    if (grad)
        for (auto& layer : grad->layers)
            for (auto& v : layer) std::fill(v.begin(), v.end(), 0.0);

    if (!p.absconv) {
        const Vec& top = w.layers[static_cast<std::size_t>(k)][0];
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ForwardTrace trace = lower_trace(p.spec, w, p.xs[i], &p.masks[i]);
            obj += p.eps[i] * top_output(p.spec, top, trace, &p.masks[i]);
            if (grad)
                backprop_accumulate(p.spec, w, top, trace, &p.masks[i], p.eps[i] * inv_n, true,
                                    *grad);
        }
        return obj * inv_n;
    }

    const std::size_t m_top = static_cast<std::size_t>(p.spec.level_size(k));
    std::vector<ForwardTrace> traces(n);
    Vec v(m_top, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        traces[i] = lower_trace(p.spec, w, p.xs[i], &p.masks[i]);
        const Vec& psi_k = traces[i].psi[static_cast<std::size_t>(k)];
        for (std::size_t j = 0; j < m_top; ++j)
            v[j] += p.eps[i] * top_coefficient(p.masks[i], psi_k, k, j);
    }
    std::size_t j_star = 0;
    for (std::size_t j = 1; j < m_top; ++j)
        if (std::fabs(v[j]) > std::fabs(v[j_star])) j_star = j;
    double b_top = p.spec.budgets.back();
    double obj = b_top * std::fabs(v[j_star]) * inv_n;
    if (grad) {
        Vec vertex(m_top, 0.0);
        vertex[j_star] = (v[j_star] >= 0.0 ? 1.0 : -1.0) * b_top;
        for (std::size_t i = 0; i < n; ++i)
            backprop_accumulate(p.spec, w, vertex, traces[i], &p.masks[i], p.eps[i] * inv_n, false,
                                *grad);
    }
    return obj;
}

// Normalized projected-gradient ascent from a feasible start; returns the
// best objective value seen. The step is a fixed displacement along the
// normalized gradient, which keeps progress insensitive to the objective's
// scale in the budgets.
double ascent(const InnerProblem& p, WeightAssignment w, const EstimatorConfig& cfg) {
    WeightAssignment grad = zero_weights(p.spec);
    const int k = p.spec.hidden_layers();
    const int last_layer = p.absconv ? k - 1 : k;
    double best = -std::numeric_limits<double>::infinity();
    double eta = cfg.step_size;
    for (int step = 0; step < cfg.ascent_steps; ++step) {
        double obj = eval_objective(p, w, &grad);
        if (!std::isfinite(obj))
            throw std::runtime_error("ascent diverged: non-finite objective at step " +
                                     std::to_string(step));
        if (obj > best) best = obj;
        double gsq = 0.0;
        for (int l = 0; l <= last_layer; ++l)
            for (const auto& gv : grad.layers[static_cast<std::size_t>(l)]) gsq += dot(gv, gv);
        if (gsq == 0.0) break;
        double rate = eta / std::sqrt(gsq);
        for (int l = 0; l <= last_layer; ++l) {
            double radius = p.spec.budgets[static_cast<std::size_t>(l)];
            auto& layer = w.layers[static_cast<std::size_t>(l)];
            for (std::size_t j = 0; j < layer.size(); ++j) {
                axpy(rate, grad.layers[static_cast<std::size_t>(l)][j], layer[j]);
                layer[j] = (l == 0) ? project_l2_ball(layer[j], radius)
                                    : project_l1_ball(layer[j], radius);
            }
        }
        eta *= cfg.step_decay;
    }
    double obj = eval_objective(p, w, nullptr);
    if (!std::isfinite(obj)) throw std::runtime_error("ascent diverged: non-finite objective");
    return obj > best ? obj : best;
}

void check_estimation_inputs(const NetworkSpec& spec, DropoutType type,
                             const std::vector<Vec>& xs, const std::vector<MaskBundle>& masks) {
    spec.validate();
    if (xs.empty()) throw std::invalid_argument("estimator requires n >= 1 samples");
    if (xs.size() != masks.size())
        throw std::invalid_argument("sample/mask count mismatch: " + std::to_string(xs.size()) +
                                    " vs " + std::to_string(masks.size()));
    for (const auto& x : xs) check_input(spec, x);
    for (const auto& b : masks) {
        if (b.dropout_type != type)
            throw std::invalid_argument("mask bundle type does not match requested dropout type");
        check_mask_shapes(spec, b);
    }
}

std::vector<Vec> effective_masks_of(const std::vector<MaskBundle>& masks) {
    std::vector<Vec> eff;
    eff.reserve(masks.size());
    for (const auto& b : masks) eff.push_back(effective_linear_mask(b));
    return eff;
}

}  // namespace

void EstimatorConfig::validate() const {
    if (n_epsilon_draws < 1) throw std::invalid_argument("n_epsilon_draws must be >= 1");
    if (n_restarts < 1) throw std::invalid_argument("n_restarts must be >= 1");
    if (ascent_steps < 1) throw std::invalid_argument("ascent_steps must be >= 1");
    if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be > 0");
    if (!(step_decay > 0.0 && step_decay <= 1.0))
        throw std::invalid_argument("step_decay must lie in (0, 1]");
    if (n_outer_replicates < 1) throw std::invalid_argument("n_outer_replicates must be >= 1");
}

double closed_form_linear_sup(const std::vector<Vec>& xs, const std::vector<Vec>& effective_masks,
                              const std::vector<int>& eps, double b1) {
    if (xs.empty()) throw std::invalid_argument("closed_form_linear_sup requires n >= 1");
    if (xs.size() != effective_masks.size() || xs.size() != eps.size())
        throw std::invalid_argument("closed_form_linear_sup: input count mismatch");
    const std::size_t d = xs[0].size();
    Vec sum(d, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i].size() != d || effective_masks[i].size() != d)
            throw std::invalid_argument("closed_form_linear_sup: length mismatch at sample " +
                                        std::to_string(i));
        if (eps[i] != 1 && eps[i] != -1)
            throw std::invalid_argument("epsilon entries must be +-1");
        for (std::size_t t = 0; t < d; ++t) sum[t] += eps[i] * effective_masks[i][t] * xs[i][t];
    }
    return b1 / static_cast<double>(xs.size()) * norm2(sum);
}

std::vector<int> epsilon_draw(std::uint64_t seed, int draw_index, int n) {
    rng::Stream s(seed, rng::stream_key(kEpsilonTag, static_cast<std::uint64_t>(draw_index)));
    std::vector<int> eps(static_cast<std::size_t>(n));
    for (auto& e : eps) e = s.next_sign();
    return eps;
}

double sup_correlation(const NetworkSpec& spec, DropoutType type, const std::vector<Vec>& xs,
                       const std::vector<MaskBundle>& masks, const std::vector<int>& eps,
                       const EstimatorConfig& cfg, std::uint64_t seed_key,
                       std::vector<double>* restart_best) {
    check_estimation_inputs(spec, type, xs, masks);
    if (eps.size() != xs.size())
        throw std::invalid_argument("epsilon vector length does not match sample size");
    const int k = spec.hidden_layers();
    if (k == 0 && !cfg.force_gradient_ascent)
        return closed_form_linear_sup(xs, effective_masks_of(masks), eps, spec.budgets[0]);

    const bool absconv = cfg.use_absconv_reduction && k >= 1;
    InnerProblem problem{spec, type, xs, masks, eps, absconv};
    // The absconv objective is invariant under eps -> -eps, so the
    // sign-flipped ascent only adds information in the plain parameterization.
    std::vector<int> flipped;
    if (!absconv) {
        flipped.reserve(eps.size());
        for (int e : eps) flipped.push_back(-e);
    }
    InnerProblem flipped_problem{spec, type, xs, masks, flipped, absconv};

    double best_all = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < cfg.n_restarts; ++r) {
        rng::Stream init(seed_key, rng::stream_key(kInitTag, static_cast<std::uint64_t>(r)));
        WeightAssignment w0 = random_boundary_weights(spec, init);
        double val = ascent(problem, w0, cfg);
        if (!absconv) {
            double flipped_val = ascent(flipped_problem, std::move(w0), cfg);
            if (flipped_val > val) val = flipped_val;
        }
        if (restart_best) restart_best->push_back(val);
        if (val > best_all) best_all = val;
    }
    return best_all;
}

ComplexityEstimate estimate_empirical_rademacher(const NetworkSpec& spec, DropoutType type,
                                                 const std::vector<Vec>& xs,
                                                 const std::vector<MaskBundle>& masks,
                                                 const EstimatorConfig& cfg) {
    cfg.validate();
    check_estimation_inputs(spec, type, xs, masks);
    const int n = static_cast<int>(xs.size());
    ComplexityEstimate est;
    for (int t = 0; t < cfg.n_epsilon_draws; ++t) {
        std::vector<int> eps = epsilon_draw(cfg.rng_seed, t, n);
        std::uint64_t key =
            rng::derive(cfg.rng_seed, rng::stream_key(kSupTag, static_cast<std::uint64_t>(t)));
        est.replicate_values.push_back(
            sup_correlation(spec, type, xs, masks, eps, cfg, key, &est.restart_best));
    }
    Moments m = summarize(est.replicate_values);
    est.point = m.mean;
    est.std_error = m.std_error;
    est.n_replicates = cfg.n_epsilon_draws;
    return est;
}

ComplexityEstimate estimate_expected_rademacher(const NetworkSpec& spec, DropoutType type,
                                                const DataSampler& sampler, double rho, int n,
                                                const EstimatorConfig& cfg) {
    cfg.validate();
    spec.validate();
    if (n < 1) throw std::invalid_argument("estimator requires n >= 1 samples");
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
    ComplexityEstimate est;
    for (int rep = 0; rep < cfg.n_outer_replicates; ++rep) {
        rng::Stream data_stream(cfg.rng_seed,
                                rng::stream_key(kDataTag, static_cast<std::uint64_t>(rep)));
        std::vector<Vec> xs;
        xs.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) xs.push_back(sampler(data_stream));
        std::vector<MaskBundle> masks;
        masks.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            masks.push_back(sample_masks(
                spec, type,
                SamplerConfig{rho, cfg.rng_seed,
                              rng::stream_key(kMaskTag, static_cast<std::uint64_t>(rep),
                                              static_cast<std::uint64_t>(i))}));
        EstimatorConfig inner = cfg;
        inner.rng_seed =
            rng::derive(cfg.rng_seed, rng::stream_key(kInnerTag, static_cast<std::uint64_t>(rep)));
        ComplexityEstimate inner_est = estimate_empirical_rademacher(spec, type, xs, masks, inner);
        est.replicate_values.push_back(inner_est.point);
        est.restart_best.insert(est.restart_best.end(), inner_est.restart_best.begin(),
                                inner_est.restart_best.end());
    }
    Moments m = summarize(est.replicate_values);
    est.point = m.mean;
    est.std_error = m.std_error;
    est.n_replicates = cfg.n_outer_replicates;
    return est;
}

}  // namespace drc
