#include "nsg/sampler.hpp"

#include <cmath>

#include "nsg/rng.hpp"

namespace nsg::sampling {

TokenMap sampleMap(const Tensor3& logits, Scalar temperature, std::uint64_t seed,
                   bool argmax) {
  requireFinite(logits, "sampleMap");
  if (!argmax && !(temperature > 0))
    throw std::domain_error("sampleMap: temperature must be positive");
  TokenMap tokens(logits.rows(), logits.cols());
  const Index vocab = logits.channels();
  Vec p(vocab);
  for (Index i = 0; i < logits.rows(); ++i)
    for (Index j = 0; j < logits.cols(); ++j) {
      const auto site = logits.site(i, j);
      Index pick = 0;
      if (argmax) {
        for (Index v = 1; v < vocab; ++v)
          if (site[v] > site[pick]) pick = v;
      } else {
        const Scalar top = site.maxCoeff();
        Scalar total = 0;
        for (Index v = 0; v < vocab; ++v) {
          p[v] = std::exp((site[v] - top) / temperature);
          total += p[v];
        }
        const double u = rng::toUnit(rng::mix64(
            rng::combine(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j))));
        const Scalar mark = u * total;
        Scalar cum = 0;
        pick = vocab - 1;  // guards against fp shortfall in the running sum
        for (Index v = 0; v < vocab; ++v) {
          cum += p[v];
          if (mark < cum) {
            pick = v;
            break;
          }
        }
      }
      tokens(i, j) = static_cast<std::uint32_t>(pick);
    }
  return tokens;
}

}  // namespace nsg::sampling
