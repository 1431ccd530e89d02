#pragma once

#include <cstdint>

#include "nsg/types.hpp"

namespace nsg::sampling {

// Categorical draw from softmax(logits / temperature) at every location, or
// the argmax when requested (ties to the lowest index). Each location draws
// from its own counter stream keyed (seed, i, j), so results do not depend on
// traversal order and identical seeds give identical maps.
TokenMap sampleMap(const Tensor3& logits, Scalar temperature, std::uint64_t seed,
                   bool argmax = false);

}  // namespace nsg::sampling
