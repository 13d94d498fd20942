#pragma once

#include "secoda/dataset.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace secoda {

// Synthetic benchmark sets with planted, labelled anomalies. Output depends
// only on (name, seed); see Rng for the random stream definition.
struct GenSpec {
    std::string name;
    std::uint64_t seed = 1;
};

// classcircle, mountain, noisymix, sword, helix.
std::span<const std::string_view> dataset_names();

// Throws ParameterError for unknown names ("polis" is reported as unavailable).
std::size_t dataset_size(std::string_view name);

LabeledDataset generate(const GenSpec& spec);

// noisymix recipe at an arbitrary size (n >= 1000), used for scaling runs.
LabeledDataset generate_noisymix(std::size_t n_cases, std::uint64_t seed);

// `<name>_<seed>.csv`
std::string default_file_name(const GenSpec& spec);

}  // namespace secoda
