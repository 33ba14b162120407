#include "hermgen/rng.hpp"

namespace hermgen {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) noexcept {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

Xoshiro256::result_type Xoshiro256::operator()() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view role,
                          std::uint64_t index) noexcept {
  std::uint64_t tag = 0xcbf29ce484222325ULL;
  for (unsigned char c : role) {
    tag ^= c;
    tag *= 0x100000001b3ULL;
  }
  std::uint64_t state = seed ^ tag;
  std::uint64_t mixed = splitmix64(state);
  state = mixed ^ (index * 0xd1b54a32d192ed03ULL);
  return splitmix64(state);
}

Xoshiro256 substream(std::uint64_t seed, std::string_view role,
                     std::uint64_t index) noexcept {
  return Xoshiro256(derive_seed(seed, role, index));
}

}  // namespace hermgen
