#include "jpsn/rng.hpp"

#include <cmath>

namespace jpsn {

namespace {

std::seed_seq make_seq(std::uint64_t seed, std::uint64_t stream) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream),
                       static_cast<std::uint32_t>(stream >> 32), 0x6a70736eU};
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  auto seq = make_seq(seed, stream);
  engine_.seed(seq);
}

double Rng::uniform() {
  // 53 random bits, offset by half an ulp so neither endpoint is reachable.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return normal_(engine_); }

double Rng::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

double Rng::exponential() { return -std::log(uniform()); }

std::size_t Rng::below(std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

Rng Rng::spawn(std::uint64_t stream) { return Rng(next_u64(), stream); }

}  // namespace jpsn
