#pragma once

#include <cstdint>
#include <string>

#include "nsg/types.hpp"

// Seeded synthetic feature fields so experiments can run without external
// data: smooth Gaussian blob mixtures and hard-edged checkerboards.

namespace nsg::demo {

Tensor3 makeBlobs(Index h, Index w, Index channels, std::uint64_t seed);
Tensor3 makeCheckers(Index h, Index w, Index channels, std::uint64_t seed);

// "blobs" or "checkers"
Tensor3 makeReference(const std::string& kind, Index h, Index w, Index channels,
                      std::uint64_t seed);

}  // namespace nsg::demo
