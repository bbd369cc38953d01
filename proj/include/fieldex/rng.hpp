#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace fieldex::rng {

// Philox4x64-10 counter-based generator. Streams are addressed by
// (key0, key1, ctr0, ctr1); the remaining counter words enumerate blocks, so
// any (masterSeed, replication, tag) triple yields an independent stream that
// can be generated in any order by any worker.
struct Philox4x64 {
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> c,
                                            std::array<std::uint64_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
      std::uint64_t hi0, lo0, hi1, lo1;
      mulhilo(kMul0, c[0], hi0, lo0);
      mulhilo(kMul1, c[2], hi1, lo1);
      c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    return c;
  }
};

// Stream tags keep the draws consumed by different purposes disjoint.
enum class Tag : std::uint64_t {
  kField = 1,
  kMixtureShared = 2,
  kBridgeMax = 3,
  kBridgeMin = 4,
  kFbm = 5,
  kTiltIndex = 6,
  kOracle = 7,
  kGeneric = 8,
};

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t rep, Tag tag)
      : key_{seed, static_cast<std::uint64_t>(tag)}, ctr_{rep, 0, 0, 0} {}

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      buf_ = Philox4x64::block(ctr_, key_);
      ++ctr_[2];
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  // Uniform on (0,1]; never returns 0 so log() is always safe.
  double next_uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
  }

  // Uniform on [0,1).
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

  // Integer uniform on {0, ..., n-1} by 128-bit scaling (n up to 2^63).
  std::uint64_t next_below(std::uint64_t n) {
    const unsigned __int128 p = static_cast<unsigned __int128>(next_u64()) * n;
    return static_cast<std::uint64_t>(p >> 64);
  }

  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = next_uniform_pos();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.28318530717958647692 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  void next_normal_pair(double& z0, double& z1) {
    const double u1 = next_uniform_pos();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.28318530717958647692 * u2;
    z0 = r * std::cos(a);
    z1 = r * std::sin(a);
  }

 private:
  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> ctr_;
  std::array<std::uint64_t, 4> buf_{};
  int pos_ = 4;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace fieldex::rng
