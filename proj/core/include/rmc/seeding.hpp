#pragma once

#include <cstdint>
#include <initializer_list>

namespace rmc {

/// Deterministic 64-bit seed from a tuple of integers (via std::seed_seq).
/// Distinct tuples give independent streams for all practical purposes.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

}  // namespace rmc
