#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drc/activation.hpp"
#include "drc/rng.hpp"
#include "drc/vec.hpp"

namespace drc {

// Architecture plus norm budgets for a fully connected feedforward network
// with no biases and a single real output.
//
// Weight layer l in [0, k] holds the vectors feeding level l+1:
//   l = 0      : widths[0] vectors of length d (L2 budget budgets[0]),
//   1 <= l < k : widths[l] vectors of length widths[l-1] (L1 budget budgets[l]),
//   l = k      : one output vector of length widths[k-1] (L1 budget budgets[k]).
// With no hidden layers (k = 0) there is a single output vector of length d
// whose budget budgets[0] is an L2 budget.
struct NetworkSpec {
    int input_dim = 1;                // d
    std::vector<int> widths;          // m_1..m_k (empty when k = 0)
    std::vector<double> budgets;      // B_0..B_k, size k + 1
    Activation activation = Activation::Identity;
    double input_bound = 1.0;         // L2 bound on inputs

    int hidden_layers() const { return static_cast<int>(widths.size()); }
    int weight_layers() const { return hidden_layers() + 1; }

    // number of weight vectors in layer l
    int vectors_in_layer(int l) const {
        return l == hidden_layers() ? 1 : widths[static_cast<std::size_t>(l)];
    }
    // length of each weight vector in layer l (= size of the level it reads)
    int vector_length(int l) const {
        return l == 0 ? input_dim : widths[static_cast<std::size_t>(l) - 1];
    }
    // size of unit level i (Psi_i): level 0 is the input
    int level_size(int i) const {
        return i == 0 ? input_dim : widths[static_cast<std::size_t>(i) - 1];
    }

    double lipschitz() const { return activation_info(activation).lipschitz; }

    void validate() const;
};

// Concrete weights w: layers[l][j] is the j-th vector of weight layer l.
struct WeightAssignment {
    std::vector<std::vector<Vec>> layers;
};

WeightAssignment zero_weights(const NetworkSpec& spec);

// Weights sampled uniformly on each feasible ball's boundary, optionally
// shrunk toward the interior by `scale` in (0, 1].
WeightAssignment random_boundary_weights(const NetworkSpec& spec, rng::Stream& stream,
                                         double scale = 1.0);

// Throws std::invalid_argument naming the offending layer and the
// expected/actual size.
void check_shapes(const NetworkSpec& spec, const WeightAssignment& w);
void check_input(const NetworkSpec& spec, const Vec& x);

// Dropout-free forward pass: psi_0 = x, psi_i = sigma(<w_j, psi_{i-1}>),
// output = <w_top, psi_k>.
double forward(const NetworkSpec& spec, const WeightAssignment& w, const Vec& x);

// Euclidean projection of every weight vector onto its budget ball
// (L2 for layer 0, L1 for layers >= 1). Feasible vectors pass through
// unchanged.
WeightAssignment project_weights(const WeightAssignment& w, const NetworkSpec& spec);

bool weights_feasible(const NetworkSpec& spec, const WeightAssignment& w, double tol = 1e-9);

}  // namespace drc
