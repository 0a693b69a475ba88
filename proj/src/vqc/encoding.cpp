#include "qrl/vqc/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qrl::vqc {

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

EncodingRule EncodingRule::scaled(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("EncodingRule::scaled: lo must be < hi");
    return {Kind::Scaled, lo, hi};
}

EncodingSpec cartpole_encoding(std::string_view name) {
    const EncodingRule pos = EncodingRule::scaled(-4.8, 4.8);
    const EncodingRule ang = EncodingRule::scaled(-0.418, 0.418);
    if (name == "C")
        return {EncodingRule::continuous(), EncodingRule::continuous(),
                EncodingRule::continuous(), EncodingRule::continuous()};
    if (name == "SC")
        return {pos, EncodingRule::continuous(), ang, EncodingRule::continuous()};
    if (name == "SD")
        return {pos, EncodingRule::directional(), ang, EncodingRule::directional()};
    throw std::invalid_argument("cartpole_encoding: unknown composition '" + std::string(name) + "'");
}

std::vector<double> encode(std::span<const double> state, const EncodingSpec& spec) {
    if (state.size() != spec.size())
        throw std::invalid_argument("encode: state size does not match encoding spec");
    std::vector<double> angles(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double x = state[i];
        if (!std::isfinite(x))
            throw std::invalid_argument("encode: non-finite component at index " + std::to_string(i));
        switch (spec[i].kind) {
        case EncodingRule::Kind::Scaled: {
            const double c = std::clamp(x, spec[i].lo, spec[i].hi);
            angles[i] = kTwoPi * (c - spec[i].lo) / (spec[i].hi - spec[i].lo);
            break;
        }
        case EncodingRule::Kind::Directional:
            // zero maps to 0, matching the strict "positive" test
            angles[i] = x > 0.0 ? 3.141592653589793 : 0.0;
            break;
        case EncodingRule::Kind::Continuous:
            angles[i] = std::atan(x);
            break;
        }
    }
    return angles;
}

} // namespace qrl::vqc
