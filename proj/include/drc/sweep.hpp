#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "drc/bounds.hpp"
#include "drc/data.hpp"
#include "drc/estimator.hpp"

namespace drc {

// Grid driver configuration. The k grid re-derives the template's widths and
// budgets: a swept k equal to the template's own depth uses the template
// verbatim, any other k replicates the template's first width and its first
// L1 budget k times.
struct SweepConfig {
    NetworkSpec net_template;
    std::vector<DropoutType> types;
    std::vector<double> rho_grid;   // each in (0, 1]
    std::vector<int> n_grid;
    std::vector<int> k_grid;
    EstimatorConfig estimator;
    DataDistribution data = DataDistribution::UnitSphere;
    std::uint64_t master_seed = 0;
    int jobs = 1;

    void validate() const;
};

struct SweepRow {
    DropoutType type = DropoutType::I;
    int k = 0;
    double rho = 1.0;
    int n = 1;
    int d = 1;
    std::vector<int> widths;
    std::vector<double> budgets;
    double input_bound = 1.0;
    double estimate = 0.0;
    double std_error = 0.0;
    double bound = 0.0;
    bool dominance = false;  // estimate <= bound + 3 * std_error
    double seconds = 0.0;
    std::uint64_t seed = 0;
    std::string error;       // estimator failure, recorded; sweep continues
};

NetworkSpec derive_spec_for_k(const NetworkSpec& net_template, int k);

// One row per (type, k, rho, n) grid point, in that nesting order.
// Deterministic given master_seed, independent of the worker count.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

// CSV schema, fixed column order:
//   type,k,rho,n,d,widths,budgets,bhat,estimate,std_error,bound,dominance,seconds,seed
// Floats carry 17 significant digits; widths and budgets are ';'-joined.
std::string sweep_csv(const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

// 17-significant-digit float formatting used for all emitted values.
std::string format_double(double v);

struct SlopeFit {
    double slope = 0.0;
    double r_squared = 1.0;
};

// Ordinary least squares on (ln rho, ln value). Requires >= 2 points with
// distinct rho and positive values; a nonpositive value is rejected with an
// error naming the offending point.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace drc
