#include <doctest.h>

#include <cmath>

#include "nsg/sampler.hpp"
#include "nsg/rng.hpp"

using namespace nsg;

TEST_CASE("argmax picks the largest logit, ties to the lowest index") {
  Tensor3 logits(1, 2, 4);
  logits(0, 0, 0) = 0.1;
  logits(0, 0, 1) = 2.0;
  logits(0, 0, 2) = 1.5;
  logits(0, 0, 3) = 2.0;  // tie with index 1
  logits(0, 1, 0) = -1.0;
  logits(0, 1, 1) = -1.0;
  logits(0, 1, 2) = -0.5;
  logits(0, 1, 3) = -2.0;
  const TokenMap t = sampling::sampleMap(logits, 1.0, 0, true);
  CHECK(t(0, 0) == 1);
  CHECK(t(0, 1) == 2);
}

TEST_CASE("sampling is deterministic in the seed") {
  rng::Stream rs(301);
  Tensor3 logits(4, 5, 6);
  for (Index n = 0; n < logits.size(); ++n) logits.data()[n] = rs.normal();
  const TokenMap a = sampling::sampleMap(logits, 1.0, 42);
  const TokenMap b = sampling::sampleMap(logits, 1.0, 42);
  CHECK(a == b);
  const TokenMap c = sampling::sampleMap(logits, 1.0, 43);
  CHECK_FALSE(a == c);
}

TEST_CASE("each location draws from its own stream") {
  // same logits at the same (i, j) give the same token regardless of what the
  // rest of the grid holds, because the draw is keyed by (seed, i, j)
  rng::Stream rs(302);
  Vec site(5);
  for (Index v = 0; v < 5; ++v) site[v] = rs.normal();
  Tensor3 small(1, 2, 5), big(3, 4, 5);
  for (Index n = 0; n < small.size(); ++n) small.data()[n] = rs.normal();
  for (Index n = 0; n < big.size(); ++n) big.data()[n] = rs.normal();
  small.site(0, 1) = site;
  big.site(0, 1) = site;
  const TokenMap ts = sampling::sampleMap(small, 0.8, 7);
  const TokenMap tb = sampling::sampleMap(big, 0.8, 7);
  CHECK(ts(0, 1) == tb(0, 1));
}

TEST_CASE("sampling frequencies follow the softmax") {
  Tensor3 logits(1, 1, 3);
  logits(0, 0, 0) = 0.0;
  logits(0, 0, 1) = std::log(2.0);
  logits(0, 0, 2) = std::log(4.0);
  // softmax = (1/7, 2/7, 4/7)
  const int draws = 7000;
  int counts[3] = {0, 0, 0};
  for (int s = 0; s < draws; ++s)
    counts[sampling::sampleMap(logits, 1.0, static_cast<std::uint64_t>(s))(0, 0)] += 1;
  CHECK(std::abs(counts[0] / 7000.0 - 1.0 / 7) < 0.02);
  CHECK(std::abs(counts[1] / 7000.0 - 2.0 / 7) < 0.02);
  CHECK(std::abs(counts[2] / 7000.0 - 4.0 / 7) < 0.02);
}

TEST_CASE("low temperature sharpens toward the argmax") {
  Tensor3 logits(1, 1, 3);
  logits(0, 0, 0) = 0.0;
  logits(0, 0, 1) = 1.0;
  logits(0, 0, 2) = 0.5;
  int hits = 0;
  for (int s = 0; s < 500; ++s)
    hits += sampling::sampleMap(logits, 0.05, static_cast<std::uint64_t>(s))(0, 0) == 1;
  CHECK(hits == 500);
}

TEST_CASE("sampleMap validates temperature and finiteness") {
  Tensor3 logits(1, 1, 2);
  CHECK_THROWS_AS(sampling::sampleMap(logits, 0.0, 1), std::domain_error);
  CHECK_THROWS_AS(sampling::sampleMap(logits, -1.0, 1), std::domain_error);
  // argmax does not consult the temperature
  CHECK(sampling::sampleMap(logits, 0.0, 1, true)(0, 0) == 0);
  logits(0, 0, 1) = std::nan("");
  CHECK_THROWS_AS(sampling::sampleMap(logits, 1.0, 1), std::domain_error);
}
