#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace drc {

// All supported activations are Lipschitz and satisfy sigma(0) = 0.
enum class Activation { Tanh, CenteredSigmoid, Relu, Identity };

struct ActivationInfo {
    Activation kind;
    double lipschitz;
    double value_at_zero;  // 0 for every supported kind
};

inline ActivationInfo activation_info(Activation kind) {
    switch (kind) {
        case Activation::Tanh: return {kind, 1.0, 0.0};
        case Activation::CenteredSigmoid: return {kind, 0.25, 0.0};
        case Activation::Relu: return {kind, 1.0, 0.0};
        case Activation::Identity: return {kind, 1.0, 0.0};
    }
    throw std::invalid_argument("unknown activation kind");
}

inline double activation_eval(Activation kind, double t) {
    switch (kind) {
        case Activation::Tanh: return std::tanh(t);
        case Activation::CenteredSigmoid: return 1.0 / (1.0 + std::exp(-t)) - 0.5;
        case Activation::Relu: return t > 0.0 ? t : 0.0;
        case Activation::Identity: return t;
    }
    throw std::invalid_argument("unknown activation kind");
}

// Subgradient at the relu kink is taken as 0 so ascent directions stay
// deterministic.
inline double activation_deriv(Activation kind, double t) {
    switch (kind) {
        case Activation::Tanh: {
            double y = std::tanh(t);
            return 1.0 - y * y;
        }
        case Activation::CenteredSigmoid: {
            double p = 1.0 / (1.0 + std::exp(-t));
            return p * (1.0 - p);
        }
        case Activation::Relu: return t > 0.0 ? 1.0 : 0.0;
        case Activation::Identity: return 1.0;
    }
    throw std::invalid_argument("unknown activation kind");
}

inline std::string to_string(Activation kind) {
    switch (kind) {
        case Activation::Tanh: return "tanh";
        case Activation::CenteredSigmoid: return "centered_sigmoid";
        case Activation::Relu: return "relu";
        case Activation::Identity: return "identity";
    }
    return "?";
}

inline Activation activation_from_string(const std::string& s) {
    if (s == "tanh") return Activation::Tanh;
    if (s == "centered_sigmoid") return Activation::CenteredSigmoid;
    if (s == "relu") return Activation::Relu;
    if (s == "identity") return Activation::Identity;
    throw std::invalid_argument("unknown activation '" + s + "'");
}

}  // namespace drc
