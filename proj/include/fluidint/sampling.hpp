#pragma once

#include "fluidint/fields.hpp"

#include <cstdint>
#include <vector>

namespace fluidint {

// Halton points in the box [lower, upper] with a Cranley-Patterson rotation drawn from
// the seed. Deterministic for a fixed (box, count, seed).
std::vector<Point> halton_points(const Vec& lower, const Vec& upper, std::size_t count,
                                 std::uint64_t seed);

// Positions from halton_points, velocities from an independent rotation of the same
// sequence over the velocity box.
std::vector<State> sample_states(const Vec& x_lower, const Vec& x_upper, const Vec& v_lower,
                                 const Vec& v_upper, std::size_t count, std::uint64_t seed);

// Seed for check number `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace fluidint
