#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drc/network.hpp"

namespace drc {

// Dropout regimes: Type I drops units (including input units), Type II drops
// weights, Type III drops both.
enum class DropoutType { I, II, III };

std::string to_string(DropoutType t);
DropoutType dropout_type_from_string(const std::string& s);

struct SamplerConfig {
    double keep_probability = 1.0;  // rho
    std::uint64_t rng_seed = 0;
    std::uint64_t stream_id = 0;    // replicate index; keyed independently of order
};

// All Bernoulli masks used by one dropout forward pass. Entries are 0/1 bytes.
//   unit_masks[i]       masks unit level Psi_i       (Types I and III)
//   weight_masks[l][j]  masks weight vector w^[l]_j  (Types II and III)
// For Type III the unit mask of a level is shared by every unit of the layer
// reading it, while weight masks are per-vector.
struct MaskBundle {
    DropoutType dropout_type = DropoutType::I;
    std::vector<std::vector<std::uint8_t>> unit_masks;
    std::vector<std::vector<std::vector<std::uint8_t>>> weight_masks;
};

// Each entry is 1 with probability rho, independently; deterministic given
// (rng_seed, stream_id).
MaskBundle sample_masks(const NetworkSpec& spec, DropoutType type, const SamplerConfig& cfg);

MaskBundle all_ones_masks(const NetworkSpec& spec, DropoutType type);

// Structural validation against the spec; throws std::invalid_argument with
// the offending mask and expected/actual size.
void check_mask_shapes(const NetworkSpec& spec, const MaskBundle& masks);

// Masked forward pass implementing the per-type recursion. With all-ones
// masks this reproduces forward() exactly (same arithmetic order).
double forward_dropout(const NetworkSpec& spec, const WeightAssignment& w, const Vec& x,
                       const MaskBundle& masks);

// Converts a Type I bundle into the equivalent Type II bundle: every weight
// mask in layer l becomes a copy of the Type I level-l unit mask. The two
// forward passes agree for every (w, x).
MaskBundle tie_masks(const MaskBundle& type1, const NetworkSpec& spec);

// For networks without hidden layers the mask acts as a single vector on the
// input: Type I unit mask, Type II weight mask, Type III their entrywise
// product. Used by the closed-form linear estimator.
Vec effective_linear_mask(const MaskBundle& masks);

// Debug dump for failure reproduction: one line per mask vector, entries
// space-separated.
std::string dump_masks(const MaskBundle& masks);

}  // namespace drc
