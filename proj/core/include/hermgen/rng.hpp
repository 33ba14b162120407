#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string_view>

namespace hermgen {

// xoshiro256** seeded through splitmix64. Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// Substream derivation: every random quantity in the library is drawn from
// substream(seed, role, index). The role tag is hashed with 64-bit FNV-1a and
// combined with the seed and index through two splitmix64 rounds, so distinct
// (role, index) pairs under one seed never share generator state.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view role,
                          std::uint64_t index = 0) noexcept;

Xoshiro256 substream(std::uint64_t seed, std::string_view role,
                     std::uint64_t index = 0) noexcept;

// Standard normal draws from a dedicated substream.
class NormalSource {
 public:
  explicit NormalSource(Xoshiro256 engine) : engine_(engine) {}
  NormalSource(std::uint64_t seed, std::string_view role,
               std::uint64_t index = 0)
      : engine_(substream(seed, role, index)) {}

  double operator()() { return dist_(engine_); }
  void fill(std::span<double> out) {
    for (double& v : out) v = dist_(engine_);
  }
  Xoshiro256& engine() noexcept { return engine_; }

 private:
  Xoshiro256 engine_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace hermgen
