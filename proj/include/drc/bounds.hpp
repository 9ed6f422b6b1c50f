#pragma once

#include <string>
#include <vector>

#include "drc/masks.hpp"
#include "drc/network.hpp"

namespace drc {

enum class LossKind { CrossEntropySigmoid, Square };

std::string to_string(LossKind k);
LossKind loss_kind_from_string(const std::string& s);

// Loss with enough structure to produce a Lipschitz constant and a bound B.
// The entropy loss composes a sigmoid with cross entropy; its output is
// clamped to [p_min, 1 - p_min] so the loss stays bounded, which leaves the
// Lipschitz constant 1 untouched.
struct LossSpec {
    LossKind kind = LossKind::Square;
    double y_bound = 1.0;   // |y| bound, square loss only
    double p_min = 1e-6;    // sigmoid clamp, entropy loss only

    void validate() const;
};

// Entropy loss expects labels in [0, 1] (binary labels as {0, 1}).
double loss_eval(const LossSpec& loss, double f, double y);
// derivative in the first argument (unclamped; magnitude <= Lipschitz constant)
double loss_grad_f(const LossSpec& loss, double f, double y);

// Lipschitz constant of the loss in its first argument over |f| <= f_bound:
// 1 for the sigmoid entropy loss, 2 (y_bound + f_bound) for the square loss.
double loss_lipschitz(const LossSpec& loss, double f_bound);

// Bound B on the loss value: ln(1/p_min) (entropy), (y_bound + f_bound)^2
// (square).
double loss_bound(const LossSpec& loss, double f_bound);

// Upper bound L^k * Bhat * prod_j B_j on |f(w, x, r)| over feasible weights,
// ||x|| <= Bhat and arbitrary masks.
double output_bound(const NetworkSpec& spec);

// Closed-form complexity bounds per regime:
//   k = 0 : Types I/II -> B_1 Bhat sqrt(rho/n),  Type III -> B_1 Bhat rho/sqrt(n)
//   k >= 1: Types I/II -> L^k Bhat (prod B_j) rho^{(k+1)/2} / sqrt(n),
//           Type III   -> same with rho^{k+1}.
double theoretical_complexity_bound(const NetworkSpec& spec, DropoutType type, double rho, int n);

// slope of log(bound) vs log(rho): 1/2, 1, (k+1)/2 or k+1 by regime/type
double bound_rho_exponent(const NetworkSpec& spec, DropoutType type);

enum class BoundVariant { Expected, Empirical };

std::string to_string(BoundVariant v);

struct BoundReport {
    double complexity_quantity = 0.0;  // bound or estimate fed in
    double loss_lipschitz = 0.0;
    double loss_bound = 0.0;           // B
    double mcdiarmid_term = 0.0;       // c * B * sqrt(ln(2/delta)/n)
    double empirical_risk = 0.0;
    double total_bound = 0.0;
    BoundVariant variant = BoundVariant::Expected;
    double rho = 1.0;
    int n = 0;
    double delta = 0.0;
    std::vector<double> budgets;
    double input_bound = 0.0;
};

// Assembles the generalization bound
//   empirical_risk + 2 * loss_lipschitz * complexity_quantity
//                  + c * B * sqrt(ln(2/delta)/n)
// with c = 1 for the expected variant and c = 3 for the empirical variant.
BoundReport generalization_bound(double empirical_risk, double complexity_quantity,
                                 const LossSpec& loss, const NetworkSpec& spec, double delta,
                                 int n, BoundVariant variant, double rho = 1.0);

}  // namespace drc
