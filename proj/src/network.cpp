#include "drc/network.hpp"

#include <stdexcept>

namespace drc {

void NetworkSpec::validate() const {
    if (input_dim < 1) throw std::invalid_argument("input_dim must be >= 1");
    for (std::size_t i = 0; i < widths.size(); ++i)
        if (widths[i] < 1)
            throw std::invalid_argument("width of hidden layer " + std::to_string(i + 1) +
                                        " must be >= 1");
    if (budgets.size() != widths.size() + 1)
        throw std::invalid_argument("expected " + std::to_string(widths.size() + 1) +
                                    " budgets, got " + std::to_string(budgets.size()));
    for (std::size_t j = 0; j < budgets.size(); ++j)
        if (!(budgets[j] > 0.0))
            throw std::invalid_argument("budget B_" + std::to_string(j) + " must be > 0");
    if (!(input_bound > 0.0)) throw std::invalid_argument("input_bound must be > 0");
    activation_info(activation);  // rejects unknown kinds
}

WeightAssignment zero_weights(const NetworkSpec& spec) {
    WeightAssignment w;
    w.layers.resize(static_cast<std::size_t>(spec.weight_layers()));
    for (int l = 0; l < spec.weight_layers(); ++l) {
        auto& layer = w.layers[static_cast<std::size_t>(l)];
        layer.assign(static_cast<std::size_t>(spec.vectors_in_layer(l)),
                     Vec(static_cast<std::size_t>(spec.vector_length(l)), 0.0));
    }
    return w;
}

WeightAssignment random_boundary_weights(const NetworkSpec& spec, rng::Stream& stream,
                                         double scale) {
    WeightAssignment w = zero_weights(spec);
    for (int l = 0; l < spec.weight_layers(); ++l) {
        double radius = spec.budgets[static_cast<std::size_t>(l)] * scale;
        for (int j = 0; j < spec.vectors_in_layer(l); ++j) {
            Vec v = (l == 0) ? rng::sphere_point(stream, spec.vector_length(l), radius)
                             : rng::l1_sphere_point(stream, spec.vector_length(l), radius);
            w.layers[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] = std::move(v);
        }
    }
    return w;
}

void check_shapes(const NetworkSpec& spec, const WeightAssignment& w) {
    spec.validate();
    if (static_cast<int>(w.layers.size()) != spec.weight_layers())
        throw std::invalid_argument("weights: expected " + std::to_string(spec.weight_layers()) +
                                    " layers, got " + std::to_string(w.layers.size()));
    for (int l = 0; l < spec.weight_layers(); ++l) {
        const auto& layer = w.layers[static_cast<std::size_t>(l)];
        if (static_cast<int>(layer.size()) != spec.vectors_in_layer(l))
            throw std::invalid_argument(
                "weights layer " + std::to_string(l) + ": expected " +
                std::to_string(spec.vectors_in_layer(l)) + " vectors, got " +
                std::to_string(layer.size()));
        for (std::size_t j = 0; j < layer.size(); ++j)
            if (static_cast<int>(layer[j].size()) != spec.vector_length(l))
                throw std::invalid_argument(
                    "weights layer " + std::to_string(l) + " vector " + std::to_string(j) +
                    ": expected length " + std::to_string(spec.vector_length(l)) + ", got " +
                    std::to_string(layer[j].size()));
    }
}

void check_input(const NetworkSpec& spec, const Vec& x) {
    if (static_cast<int>(x.size()) != spec.input_dim)
        throw std::invalid_argument("input: expected length " + std::to_string(spec.input_dim) +
                                    ", got " + std::to_string(x.size()));
}

double forward(const NetworkSpec& spec, const WeightAssignment& w, const Vec& x) {
    check_shapes(spec, w);
    check_input(spec, x);
    Vec psi = x;
    int k = spec.hidden_layers();
    for (int l = 0; l < k; ++l) {
        const auto& layer = w.layers[static_cast<std::size_t>(l)];
        Vec next(layer.size());
        for (std::size_t j = 0; j < layer.size(); ++j)
            next[j] = activation_eval(spec.activation, dot(layer[j], psi));
        psi = std::move(next);
    }
    return dot(w.layers[static_cast<std::size_t>(k)][0], psi);
}

WeightAssignment project_weights(const WeightAssignment& w, const NetworkSpec& spec) {
    check_shapes(spec, w);
    WeightAssignment out = w;
    for (int l = 0; l < spec.weight_layers(); ++l) {
        double radius = spec.budgets[static_cast<std::size_t>(l)];
        for (auto& v : out.layers[static_cast<std::size_t>(l)])
            v = (l == 0) ? project_l2_ball(v, radius) : project_l1_ball(v, radius);
    }
    return out;
}

bool weights_feasible(const NetworkSpec& spec, const WeightAssignment& w, double tol) {
    for (int l = 0; l < spec.weight_layers(); ++l) {
        double radius = spec.budgets[static_cast<std::size_t>(l)];
        for (const auto& v : w.layers[static_cast<std::size_t>(l)]) {
            double n = (l == 0) ? norm2(v) : norm1(v);
            if (n > radius + tol) return false;
        }
    }
    return true;
}

}  // namespace drc
