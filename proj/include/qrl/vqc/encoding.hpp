#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace qrl::vqc {

// How one observation component becomes a rotation angle.
//   Scaled:      clamp to [lo, hi], then map affinely onto [0, 2*pi]
//   Directional: pi when the component is positive, 0 otherwise
//   Continuous:  arctan of the raw component
struct EncodingRule {
    enum class Kind { Scaled, Directional, Continuous };
    Kind kind = Kind::Continuous;
    double lo = 0.0;
    double hi = 0.0;

    static EncodingRule scaled(double lo, double hi);
    static EncodingRule directional() { return {Kind::Directional}; }
    static EncodingRule continuous() { return {Kind::Continuous}; }
};

using EncodingSpec = std::vector<EncodingRule>;

// Named four-component compositions for cart-pole observations
// (position, cart velocity, pole angle, angular velocity):
//   "C"  all continuous
//   "SC" scaled position and angle, continuous velocities
//   "SD" scaled position and angle, directional velocities
// The bounded components use the environment's observation-space limits
// (position +-4.8, angle +-0.418 rad).
EncodingSpec cartpole_encoding(std::string_view name);

// One angle per component. Throws on non-finite input or size mismatch.
std::vector<double> encode(std::span<const double> state, const EncodingSpec& spec);

} // namespace qrl::vqc
