#include "nsg/demo.hpp"

#include <cmath>

#include "nsg/rng.hpp"

namespace nsg::demo {

Tensor3 makeBlobs(Index h, Index w, Index channels, std::uint64_t seed) {
  if (h < 1 || w < 1 || channels < 1)
    throw std::invalid_argument("makeBlobs: dimensions must be positive");
  Tensor3 out(h, w, channels);
  const double extent = static_cast<double>(std::min(h, w));
  for (Index c = 0; c < channels; ++c) {
    rng::Stream rs(rng::combine(seed, 0x626c6f62, static_cast<std::uint64_t>(c)));
    const int blobs = 2 + static_cast<int>(rs.below(4));
    for (int b = 0; b < blobs; ++b) {
      const double ci = rs.uniform() * static_cast<double>(h);
      const double cj = rs.uniform() * static_cast<double>(w);
      const double sigma = extent * rs.uniform(0.08, 0.3);
      const double amp = rs.uniform(-1.5, 1.5);
      for (Index i = 0; i < h; ++i)
        for (Index j = 0; j < w; ++j) {
          const double di = static_cast<double>(i) + 0.5 - ci;
          const double dj = static_cast<double>(j) + 0.5 - cj;
          out(i, j, c) += amp * std::exp(-(di * di + dj * dj) / (2 * sigma * sigma));
        }
    }
  }
  return out;
}

Tensor3 makeCheckers(Index h, Index w, Index channels, std::uint64_t seed) {
  if (h < 1 || w < 1 || channels < 1)
    throw std::invalid_argument("makeCheckers: dimensions must be positive");
  Tensor3 out(h, w, channels);
  for (Index c = 0; c < channels; ++c) {
    rng::Stream rs(rng::combine(seed, 0x63686b72, static_cast<std::uint64_t>(c)));
    const Index period = 1 + static_cast<Index>(rs.below(
                                 static_cast<std::uint64_t>(std::max<Index>(1, std::min(h, w) / 2))));
    const Index pi = static_cast<Index>(rs.below(static_cast<std::uint64_t>(2 * period)));
    const Index pj = static_cast<Index>(rs.below(static_cast<std::uint64_t>(2 * period)));
    const double amp = rs.uniform(0.3, 1.5);
    for (Index i = 0; i < h; ++i)
      for (Index j = 0; j < w; ++j) {
        const bool on = (((i + pi) / period) + ((j + pj) / period)) % 2 == 0;
        out(i, j, c) = on ? amp : -amp;
      }
  }
  return out;
}

Tensor3 makeReference(const std::string& kind, Index h, Index w, Index channels,
                      std::uint64_t seed) {
  if (kind == "blobs") return makeBlobs(h, w, channels, seed);
  if (kind == "checkers") return makeCheckers(h, w, channels, seed);
  throw std::invalid_argument("makeReference: unknown kind '" + kind + "'");
}

}  // namespace nsg::demo
