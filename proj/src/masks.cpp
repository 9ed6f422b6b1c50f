#include "drc/masks.hpp"

#include <sstream>
#include <stdexcept>

#include "drc/rng.hpp"
#include "masked_ops.hpp"

namespace drc {

std::string to_string(DropoutType t) {
    switch (t) {
        case DropoutType::I: return "I";
        case DropoutType::II: return "II";
        case DropoutType::III: return "III";
    }
    return "?";
}

DropoutType dropout_type_from_string(const std::string& s) {
    if (s == "I" || s == "1") return DropoutType::I;
    if (s == "II" || s == "2") return DropoutType::II;
    if (s == "III" || s == "3") return DropoutType::III;
    throw std::invalid_argument("unknown dropout type '" + s + "'");
}

namespace {

bool has_unit_masks(DropoutType t) { return t != DropoutType::II; }
bool has_weight_masks(DropoutType t) { return t != DropoutType::I; }

std::vector<std::uint8_t> sample_vector(rng::Stream& s, int len, double rho) {
    std::vector<std::uint8_t> m(static_cast<std::size_t>(len));
    for (auto& e : m) e = s.bernoulli(rho) ? 1 : 0;
    return m;
}

}  // namespace

MaskBundle sample_masks(const NetworkSpec& spec, DropoutType type, const SamplerConfig& cfg) {
    spec.validate();
    if (!(cfg.keep_probability >= 0.0 && cfg.keep_probability <= 1.0))
        throw std::invalid_argument("keep_probability must lie in [0, 1]");
    rng::Stream s(cfg.rng_seed, cfg.stream_id);
    MaskBundle b;
    b.dropout_type = type;
    int k = spec.hidden_layers();
    if (has_unit_masks(type)) {
        b.unit_masks.resize(static_cast<std::size_t>(k) + 1);
        for (int i = 0; i <= k; ++i)
            b.unit_masks[static_cast<std::size_t>(i)] =
                sample_vector(s, spec.level_size(i), cfg.keep_probability);
    }
    if (has_weight_masks(type)) {
        b.weight_masks.resize(static_cast<std::size_t>(spec.weight_layers()));
        for (int l = 0; l < spec.weight_layers(); ++l) {
            auto& layer = b.weight_masks[static_cast<std::size_t>(l)];
            layer.resize(static_cast<std::size_t>(spec.vectors_in_layer(l)));
            for (auto& m : layer) m = sample_vector(s, spec.vector_length(l), cfg.keep_probability);
        }
    }
    return b;
}

MaskBundle all_ones_masks(const NetworkSpec& spec, DropoutType type) {
    return sample_masks(spec, type, SamplerConfig{1.0, 0, 0});
}

void check_mask_shapes(const NetworkSpec& spec, const MaskBundle& masks) {
    int k = spec.hidden_layers();
    if (has_unit_masks(masks.dropout_type)) {
        if (static_cast<int>(masks.unit_masks.size()) != k + 1)
            throw std::invalid_argument("unit masks: expected " + std::to_string(k + 1) +
                                        " levels, got " + std::to_string(masks.unit_masks.size()));
        for (int i = 0; i <= k; ++i)
            if (static_cast<int>(masks.unit_masks[static_cast<std::size_t>(i)].size()) !=
                spec.level_size(i))
                throw std::invalid_argument(
                    "unit mask level " + std::to_string(i) + ": expected length " +
                    std::to_string(spec.level_size(i)) + ", got " +
                    std::to_string(masks.unit_masks[static_cast<std::size_t>(i)].size()));
    } else if (!masks.unit_masks.empty()) {
        throw std::invalid_argument("Type II bundle must not carry unit masks");
    }
    if (has_weight_masks(masks.dropout_type)) {
        if (static_cast<int>(masks.weight_masks.size()) != spec.weight_layers())
            throw std::invalid_argument("weight masks: expected " +
                                        std::to_string(spec.weight_layers()) + " layers, got " +
                                        std::to_string(masks.weight_masks.size()));
        for (int l = 0; l < spec.weight_layers(); ++l) {
            const auto& layer = masks.weight_masks[static_cast<std::size_t>(l)];
            if (static_cast<int>(layer.size()) != spec.vectors_in_layer(l))
                throw std::invalid_argument("weight mask layer " + std::to_string(l) +
                                            ": expected " +
                                            std::to_string(spec.vectors_in_layer(l)) +
                                            " vectors, got " + std::to_string(layer.size()));
            for (std::size_t j = 0; j < layer.size(); ++j)
                if (static_cast<int>(layer[j].size()) != spec.vector_length(l))
                    throw std::invalid_argument(
                        "weight mask layer " + std::to_string(l) + " vector " + std::to_string(j) +
                        ": expected length " + std::to_string(spec.vector_length(l)) + ", got " +
                        std::to_string(layer[j].size()));
        }
    } else if (!masks.weight_masks.empty()) {
        throw std::invalid_argument("Type I bundle must not carry weight masks");
    }
    for (const auto& level : masks.unit_masks)
        for (auto e : level)
            if (e > 1) throw std::invalid_argument("mask entries must be 0 or 1");
    for (const auto& layer : masks.weight_masks)
        for (const auto& m : layer)
            for (auto e : m)
                if (e > 1) throw std::invalid_argument("mask entries must be 0 or 1");
}

namespace detail {

double masked_dot(const Vec& w, const Vec& x, const std::uint8_t* wm, const std::uint8_t* um) {
    double s = 0.0;
    for (std::size_t t = 0; t < w.size(); ++t) {
        bool keep = (!wm || wm[t]) && (!um || um[t]);
        s += keep ? w[t] * x[t] : 0.0;
    }
    return s;
}

const std::uint8_t* unit_mask_ptr(const MaskBundle& b, int level) {
    if (b.dropout_type == DropoutType::II) return nullptr;
    return b.unit_masks[static_cast<std::size_t>(level)].data();
}

const std::uint8_t* weight_mask_ptr(const MaskBundle& b, int layer, int j) {
    if (b.dropout_type == DropoutType::I) return nullptr;
    return b.weight_masks[static_cast<std::size_t>(layer)][static_cast<std::size_t>(j)].data();
}

}  // namespace detail

double forward_dropout(const NetworkSpec& spec, const WeightAssignment& w, const Vec& x,
                       const MaskBundle& masks) {
    check_shapes(spec, w);
    check_input(spec, x);
    check_mask_shapes(spec, masks);
    Vec psi = x;
    int k = spec.hidden_layers();
    for (int l = 0; l < k; ++l) {
        const auto& layer = w.layers[static_cast<std::size_t>(l)];
        const std::uint8_t* um = detail::unit_mask_ptr(masks, l);
        Vec next(layer.size());
        for (std::size_t j = 0; j < layer.size(); ++j)
            next[j] = activation_eval(
                spec.activation,
                detail::masked_dot(layer[j], psi,
                                   detail::weight_mask_ptr(masks, l, static_cast<int>(j)), um));
        psi = std::move(next);
    }
    return detail::masked_dot(w.layers[static_cast<std::size_t>(k)][0], psi,
                              detail::weight_mask_ptr(masks, k, 0),
                              detail::unit_mask_ptr(masks, k));
}

MaskBundle tie_masks(const MaskBundle& type1, const NetworkSpec& spec) {
    if (type1.dropout_type != DropoutType::I)
        throw std::invalid_argument("tie_masks expects a Type I bundle");
    check_mask_shapes(spec, type1);
    MaskBundle tied;
    tied.dropout_type = DropoutType::II;
    tied.weight_masks.resize(static_cast<std::size_t>(spec.weight_layers()));
    for (int l = 0; l < spec.weight_layers(); ++l) {
        const auto& level_mask = type1.unit_masks[static_cast<std::size_t>(l)];
        tied.weight_masks[static_cast<std::size_t>(l)].assign(
            static_cast<std::size_t>(spec.vectors_in_layer(l)), level_mask);
    }
    return tied;
}

Vec effective_linear_mask(const MaskBundle& masks) {
    switch (masks.dropout_type) {
        case DropoutType::I: {
            const auto& m = masks.unit_masks.at(0);
            return Vec(m.begin(), m.end());
        }
        case DropoutType::II: {
            const auto& m = masks.weight_masks.at(0).at(0);
            return Vec(m.begin(), m.end());
        }
        case DropoutType::III: {
            const auto& a = masks.weight_masks.at(0).at(0);
            const auto& b = masks.unit_masks.at(0);
            Vec v(a.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                v[i] = (a[i] && b[i]) ? 1.0 : 0.0;
            return v;
        }
    }
    throw std::invalid_argument("unknown dropout type");
}

std::string dump_masks(const MaskBundle& masks) {
    std::ostringstream out;
    auto write_vector = [&out](const std::vector<std::uint8_t>& m) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i) out << ' ';
            out << static_cast<int>(m[i]);
        }
        out << '\n';
    };
    for (const auto& level : masks.unit_masks) write_vector(level);
    for (const auto& layer : masks.weight_masks)
        for (const auto& m : layer) write_vector(m);
    return out.str();
}

}  // namespace drc
