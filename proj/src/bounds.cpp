#include "drc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drc {

std::string to_string(LossKind k) {
    return k == LossKind::CrossEntropySigmoid ? "cross_entropy_sigmoid" : "square";
}

LossKind loss_kind_from_string(const std::string& s) {
    if (s == "cross_entropy_sigmoid") return LossKind::CrossEntropySigmoid;
    if (s == "square") return LossKind::Square;
    throw std::invalid_argument("unknown loss kind '" + s + "'");
}

void LossSpec::validate() const {
    if (!(p_min > 0.0 && p_min < 0.5)) throw std::invalid_argument("p_min must lie in (0, 0.5)");
    if (!(y_bound > 0.0)) throw std::invalid_argument("y_bound must be > 0");
}

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double xlog(double y, double ratio) { return y > 0.0 ? y * std::log(ratio) : 0.0; }

}  // namespace

double loss_eval(const LossSpec& loss, double f, double y) {
    if (loss.kind == LossKind::Square) {
        double e = y - f;
        return e * e;
    }
    double p = std::clamp(sigmoid(f), loss.p_min, 1.0 - loss.p_min);
    return xlog(y, y / p) + xlog(1.0 - y, (1.0 - y) / (1.0 - p));
}

double loss_grad_f(const LossSpec& loss, double f, double y) {
    if (loss.kind == LossKind::Square) return 2.0 * (f - y);
    return sigmoid(f) - y;
}

double loss_lipschitz(const LossSpec& loss, double f_bound) {
    if (f_bound < 0.0) throw std::invalid_argument("f_bound must be >= 0");
    if (loss.kind == LossKind::CrossEntropySigmoid) return 1.0;
    return 2.0 * (loss.y_bound + f_bound);
}

double loss_bound(const LossSpec& loss, double f_bound) {
    if (loss.kind == LossKind::CrossEntropySigmoid) return std::log(1.0 / loss.p_min);
    double a = loss.y_bound + f_bound;
    return a * a;
}

double output_bound(const NetworkSpec& spec) {
    spec.validate();
    double b = spec.input_bound;
    for (double budget : spec.budgets) b *= budget;
    return b * std::pow(spec.lipschitz(), spec.hidden_layers());
}

double bound_rho_exponent(const NetworkSpec& spec, DropoutType type) {
    int k = spec.hidden_layers();
    if (k == 0) return type == DropoutType::III ? 1.0 : 0.5;
    return type == DropoutType::III ? static_cast<double>(k + 1)
                                    : static_cast<double>(k + 1) / 2.0;
}

double theoretical_complexity_bound(const NetworkSpec& spec, DropoutType type, double rho, int n) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    return output_bound(spec) * std::pow(rho, bound_rho_exponent(spec, type)) /
           std::sqrt(static_cast<double>(n));
}

std::string to_string(BoundVariant v) {
    return v == BoundVariant::Expected ? "expected" : "empirical";
}

BoundReport generalization_bound(double empirical_risk, double complexity_quantity,
                                 const LossSpec& loss, const NetworkSpec& spec, double delta,
                                 int n, BoundVariant variant, double rho) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    loss.validate();
    BoundReport r;
    r.variant = variant;
    r.empirical_risk = empirical_risk;
    r.complexity_quantity = complexity_quantity;
    double f_bound = output_bound(spec);
    r.loss_lipschitz = loss_lipschitz(loss, f_bound);
    r.loss_bound = loss_bound(loss, f_bound);
    double c = variant == BoundVariant::Expected ? 1.0 : 3.0;
    r.mcdiarmid_term = c * r.loss_bound * std::sqrt(std::log(2.0 / delta) / n);
    r.total_bound = empirical_risk + 2.0 * r.loss_lipschitz * complexity_quantity +
                    r.mcdiarmid_term;
    r.rho = rho;
    r.n = n;
    r.delta = delta;
    r.budgets = spec.budgets;
    r.input_bound = spec.input_bound;
    return r;
}

}  // namespace drc
