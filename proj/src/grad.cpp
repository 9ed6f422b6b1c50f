#include "drc/grad.hpp"

#include "masked_ops.hpp"

namespace drc {

namespace {

const std::uint8_t* um_ptr(const MaskBundle* masks, int level) {
    return masks ? detail::unit_mask_ptr(*masks, level) : nullptr;
}

const std::uint8_t* wm_ptr(const MaskBundle* masks, int layer, int j) {
    return masks ? detail::weight_mask_ptr(*masks, layer, j) : nullptr;
}

}  // namespace

ForwardTrace lower_trace(const NetworkSpec& spec, const WeightAssignment& w, const Vec& x,
                         const MaskBundle* masks) {
    ForwardTrace t;
    int k = spec.hidden_layers();
    t.psi.resize(static_cast<std::size_t>(k) + 1);
    t.pre.resize(static_cast<std::size_t>(k));
    t.psi[0] = x;
    for (int l = 0; l < k; ++l) {
        const auto& layer = w.layers[static_cast<std::size_t>(l)];
        const std::uint8_t* um = um_ptr(masks, l);
        Vec& pre = t.pre[static_cast<std::size_t>(l)];
        Vec& out = t.psi[static_cast<std::size_t>(l) + 1];
        pre.resize(layer.size());
        out.resize(layer.size());
        for (std::size_t j = 0; j < layer.size(); ++j) {
            pre[j] = detail::masked_dot(layer[j], t.psi[static_cast<std::size_t>(l)],
                                        wm_ptr(masks, l, static_cast<int>(j)), um);
            out[j] = activation_eval(spec.activation, pre[j]);
        }
    }
    return t;
}

double top_output(const NetworkSpec& spec, const Vec& top, const ForwardTrace& trace,
                  const MaskBundle* masks) {
    int k = spec.hidden_layers();
    return detail::masked_dot(top, trace.psi[static_cast<std::size_t>(k)], wm_ptr(masks, k, 0),
                              um_ptr(masks, k));
}

void backprop_accumulate(const NetworkSpec& spec, const WeightAssignment& w, const Vec& top,
                         const ForwardTrace& trace, const MaskBundle* masks, double coeff,
                         bool include_top_grad, WeightAssignment& grad) {
    int k = spec.hidden_layers();
    const Vec& psi_k = trace.psi[static_cast<std::size_t>(k)];
    const std::uint8_t* twm = wm_ptr(masks, k, 0);
    const std::uint8_t* tum = um_ptr(masks, k);

    Vec delta(psi_k.size());
    Vec* grad_top = include_top_grad ? &grad.layers[static_cast<std::size_t>(k)][0] : nullptr;
    for (std::size_t t = 0; t < psi_k.size(); ++t) {
        bool keep = (!twm || twm[t]) && (!tum || tum[t]);
        delta[t] = keep ? coeff * top[t] : 0.0;
        if (grad_top) (*grad_top)[t] += keep ? coeff * psi_k[t] : 0.0;
    }

    for (int l = k - 1; l >= 0; --l) {
        const auto& layer = w.layers[static_cast<std::size_t>(l)];
        const Vec& psi = trace.psi[static_cast<std::size_t>(l)];
        const Vec& pre = trace.pre[static_cast<std::size_t>(l)];
        const std::uint8_t* um = um_ptr(masks, l);
        Vec next_delta(psi.size(), 0.0);
        for (std::size_t j = 0; j < layer.size(); ++j) {
            double dpre = delta[j] * activation_deriv(spec.activation, pre[j]);
            if (dpre == 0.0) continue;
            const std::uint8_t* wm = wm_ptr(masks, l, static_cast<int>(j));
            const Vec& wv = layer[j];
            Vec& gv = grad.layers[static_cast<std::size_t>(l)][j];
            for (std::size_t t = 0; t < psi.size(); ++t) {
                bool keep = (!wm || wm[t]) && (!um || um[t]);
                gv[t] += keep ? dpre * psi[t] : 0.0;
                next_delta[t] += keep ? dpre * wv[t] : 0.0;
            }
        }
        delta = std::move(next_delta);
    }
}

}  // namespace drc
