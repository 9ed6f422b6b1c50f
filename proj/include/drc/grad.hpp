#pragma once

#include "drc/masks.hpp"
#include "drc/network.hpp"

namespace drc {

// Forward pass with recorded intermediates for backpropagation. psi[0] is the
// input; pre[l] holds the pre-activations producing psi[l+1]. The top weight
// vector is not consumed here so callers can swap it (absconv reduction).
struct ForwardTrace {
    std::vector<Vec> psi;
    std::vector<Vec> pre;
};

// masks == nullptr runs the dropout-free recursion. Shapes are not
// re-validated; callers check once up front.
ForwardTrace lower_trace(const NetworkSpec& spec, const WeightAssignment& w, const Vec& x,
                         const MaskBundle* masks);

// Output inner product <top ⊙ wm, psi_k ⊙ um> for the given top weight vector.
double top_output(const NetworkSpec& spec, const Vec& top, const ForwardTrace& trace,
                  const MaskBundle* masks);

// Accumulates coeff * d f / d w into grad (grad must be zero_weights-shaped).
// `top` is the effective output weight vector; when include_top_grad is false
// only the lower layers receive gradient (used by the absconv reduction,
// where the top vertex is chosen in closed form).
void backprop_accumulate(const NetworkSpec& spec, const WeightAssignment& w, const Vec& top,
                         const ForwardTrace& trace, const MaskBundle* masks, double coeff,
                         bool include_top_grad, WeightAssignment& grad);

}  // namespace drc
