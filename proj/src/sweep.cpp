#include "drc/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace drc {

namespace {

constexpr std::uint64_t kRowTag = 11;

}  // namespace

void SweepConfig::validate() const {
    net_template.validate();
    estimator.validate();
    if (types.empty()) throw std::invalid_argument("sweep needs at least one dropout type");
    if (rho_grid.empty()) throw std::invalid_argument("sweep rho grid must be nonempty");
    if (n_grid.empty()) throw std::invalid_argument("sweep n grid must be nonempty");
    if (k_grid.empty()) throw std::invalid_argument("sweep k grid must be nonempty");
    for (double rho : rho_grid)
        if (!(rho > 0.0 && rho <= 1.0))
            throw std::invalid_argument("sweep rho values must lie in (0, 1]");
    for (int n : n_grid)
        if (n < 1) throw std::invalid_argument("sweep n values must be >= 1");
    for (int k : k_grid) {
        if (k < 0) throw std::invalid_argument("sweep k values must be >= 0");
        derive_spec_for_k(net_template, k).validate();
    }
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
}

NetworkSpec derive_spec_for_k(const NetworkSpec& net_template, int k) {
    if (k == net_template.hidden_layers()) return net_template;
    NetworkSpec spec = net_template;
    int width = net_template.widths.empty() ? 4 : net_template.widths[0];
    double l1_budget = net_template.budgets.size() > 1 ? net_template.budgets[1] : 1.0;
    spec.widths.assign(static_cast<std::size_t>(k), width);
    spec.budgets.assign(1, net_template.budgets[0]);
    spec.budgets.insert(spec.budgets.end(), static_cast<std::size_t>(k), l1_budget);
    return spec;
}

namespace {

// index-addressed worker pool; results land in their slot so output is
// independent of scheduling
void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    int n_threads = jobs < count ? jobs : count;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    struct GridPoint {
        DropoutType type;
        int k;
        double rho;
        int n;
    };
    std::vector<GridPoint> grid;
    for (DropoutType type : cfg.types)
        for (int k : cfg.k_grid)
            for (double rho : cfg.rho_grid)
                for (int n : cfg.n_grid) grid.push_back({type, k, rho, n});

    std::vector<SweepRow> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), cfg.jobs, [&](int g) {
        const GridPoint& p = grid[static_cast<std::size_t>(g)];
        SweepRow& row = rows[static_cast<std::size_t>(g)];
        NetworkSpec spec = derive_spec_for_k(cfg.net_template, p.k);
        row.type = p.type;
        row.k = p.k;
        row.rho = p.rho;
        row.n = p.n;
        row.d = spec.input_dim;
        row.widths = spec.widths;
        row.budgets = spec.budgets;
        row.input_bound = spec.input_bound;
        row.seed = rng::derive(cfg.master_seed,
                               rng::stream_key(kRowTag, static_cast<std::uint64_t>(g)));
        auto start = std::chrono::steady_clock::now();
        try {
            EstimatorConfig est_cfg = cfg.estimator;
            est_cfg.rng_seed = row.seed;
            DataSampler sampler = make_data_sampler(cfg.data, spec.input_dim, spec.input_bound);
            ComplexityEstimate est =
                estimate_expected_rademacher(spec, p.type, sampler, p.rho, p.n, est_cfg);
            row.estimate = est.point;
            row.std_error = est.std_error;
            row.bound = theoretical_complexity_bound(spec, p.type, p.rho, p.n);
            row.dominance = row.estimate <= row.bound + 3.0 * row.std_error;
        } catch (const std::exception& e) {
            row.error = e.what();
            row.estimate = std::nan("");
            row.std_error = std::nan("");
            row.bound = std::nan("");
            row.dominance = false;
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
    });
    return rows;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

template <typename T, typename Fmt>
std::string join(const std::vector<T>& values, Fmt fmt) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ';';
        out += fmt(values[i]);
    }
    return out;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "type,k,rho,n,d,widths,budgets,bhat,estimate,std_error,bound,dominance,seconds,seed\n";
    for (const SweepRow& r : rows) {
        out << to_string(r.type) << ',' << r.k << ',' << format_double(r.rho) << ',' << r.n << ','
            << r.d << ',' << join(r.widths, [](int w) { return std::to_string(w); }) << ','
            << join(r.budgets, format_double) << ',' << format_double(r.input_bound) << ','
            << format_double(r.estimate) << ',' << format_double(r.std_error) << ','
            << format_double(r.bound) << ',' << (r.dominance ? 1 : 0) << ','
            << format_double(r.seconds) << ',' << r.seed << '\n';
    }
    return out.str();
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << sweep_csv(rows);
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw std::invalid_argument("slope fit needs at least 2 points");
    std::vector<double> lx, ly;
    lx.reserve(points.size());
    ly.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& [rho, value] = points[i];
        if (!(rho > 0.0))
            throw std::invalid_argument("slope fit: nonpositive rho at point " +
                                        std::to_string(i));
        if (!(value > 0.0))
            throw std::invalid_argument("slope fit: nonpositive value " + format_double(value) +
                                        " at point " + std::to_string(i) + " (rho=" +
                                        format_double(rho) + ")");
        lx.push_back(std::log(rho));
        ly.push_back(std::log(value));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct rho values");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    double ss_res = syy - sxy * sxy / sxx;
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

}  // namespace drc
