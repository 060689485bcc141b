#pragma once

// Seeded synthetic two-dimensional Zipf streams.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chh/errors.hpp"
#include "chh/random.hpp"

namespace chh {

/// One stream tuple as stored on disk: 32-bit primary and secondary items.
struct StreamPair {
  std::uint32_t x = 0;
  std::uint32_t y = 0;

  friend bool operator==(const StreamPair&, const StreamPair&) = default;
};

/// Zipf(rho) over ranks 1..m by inversion of a precomputed CDF.
/// P(rank = i) = i^-rho / sum_j j^-rho.
class ZipfSampler {
 public:
  ZipfSampler(double rho, std::uint32_t m) : rho_(rho) {
    if (m == 0) throw std::invalid_argument("zipf universe must be non-empty");
    if (!(rho >= 0) || !std::isfinite(rho)) {
      throw std::invalid_argument("zipf skew must be a finite value >= 0");
    }
    cdf_.resize(m);
    double acc = 0;
    for (std::uint32_t i = 0; i < m; ++i) {
      acc += std::pow(static_cast<double>(i) + 1.0, -rho);
      cdf_[i] = acc;
    }
    for (auto& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
  }

  double skew() const noexcept { return rho_; }
  std::uint32_t universe() const noexcept {
    return static_cast<std::uint32_t>(cdf_.size());
  }

  double probability(std::uint32_t rank) const {
    if (rank == 0 || rank > cdf_.size()) return 0;
    return rank == 1 ? cdf_[0] : cdf_[rank - 1] - cdf_[rank - 2];
  }

  /// Rank in [1, m].
  template <typename Rng>
  std::uint32_t operator()(Rng& rng) const {
    const double u = rng.uniform01();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::uint32_t>(it - cdf_.begin()) + 1;
  }

 private:
  double rho_;
  std::vector<double> cdf_;
};

/// Keyed pseudo-random bijection on [0, m): a balanced four-round Feistel
/// network over the next even power of two, restricted by cycle walking.
class KeyedPermutation {
 public:
  KeyedPermutation(std::uint32_t m, std::uint64_t key) : m_(m), key_(key) {
    if (m == 0) throw std::invalid_argument("permutation domain must be non-empty");
    unsigned bits = std::bit_width(std::uint64_t{m} - 1);
    half_ = std::max(1u, (bits + 1) / 2);
    mask_ = (std::uint64_t{1} << half_) - 1;
  }

  std::uint32_t operator()(std::uint32_t v) const noexcept {
    std::uint64_t r = v;
    do {
      r = encrypt(r);
    } while (r >= m_);
    return static_cast<std::uint32_t>(r);
  }

 private:
  std::uint64_t encrypt(std::uint64_t v) const noexcept {
    std::uint64_t left = v >> half_;
    std::uint64_t right = v & mask_;
    for (std::uint64_t round = 0; round < 4; ++round) {
      const std::uint64_t f = mix64(key_ ^ (round << 56) ^ right) & mask_;
      const std::uint64_t next = left ^ f;
      left = right;
      right = next;
    }
    return (left << half_) | right;
  }

  std::uint64_t m_;
  std::uint64_t key_;
  unsigned half_;
  std::uint64_t mask_;
};

enum class JointModel {
  /// Each primary relabels secondary ranks with its own permutation.
  independent_permuted,
  /// One shared secondary relabeling for every primary.
  plain_independent,
};

inline JointModel parse_joint_model(std::string_view name) {
  if (name == "permuted") return JointModel::independent_permuted;
  if (name == "independent") return JointModel::plain_independent;
  throw std::invalid_argument("unknown joint model: " + std::string(name));
}

struct StreamSpec {
  std::uint64_t n = 1;
  double rho = 1.0;
  std::uint32_t m1 = 1u << 20;
  std::uint32_t m2 = 1u << 20;
  std::uint64_t seed = 0;
  JointModel model = JointModel::independent_permuted;

  void validate() const {
    if (n == 0) throw std::invalid_argument("stream length must be at least 1");
    if (m1 == 0 || m2 == 0) {
      throw std::invalid_argument("universe sizes must be at least 1");
    }
    if (!(rho >= 0) || !std::isfinite(rho)) {
      throw std::invalid_argument("zipf skew must be a finite value >= 0");
    }
  }
};

/// Produces the pairs of a StreamSpec one at a time. x and y are independent
/// Zipf draws; primary ranks go through a seeded permutation of [1, m1] and
/// secondary ranks through a permutation of [1, m2] keyed by the primary (or
/// a single shared one in the plain model).
class StreamGenerator {
 public:
  explicit StreamGenerator(const StreamSpec& spec)
      : spec_((spec.validate(), spec)),
        primary_zipf_(spec.rho, spec.m1),
        secondary_zipf_(spec.rho, spec.m2),
        primary_perm_(spec.m1, mix64(spec.seed ^ 0x7072696d617279ULL)),
        secondary_key_(mix64(spec.seed ^ 0x5ec0ULL)),
        rng_(mix64(spec.seed), 0x2f6a) {}

  const StreamSpec& spec() const noexcept { return spec_; }

  StreamPair next() {
    const std::uint32_t rx = primary_zipf_(rng_);
    const std::uint32_t ry = secondary_zipf_(rng_);
    const std::uint32_t x = primary_perm_(rx - 1) + 1;
    const std::uint64_t key =
        spec_.model == JointModel::independent_permuted
            ? mix64(secondary_key_ + x)
            : secondary_key_;
    const std::uint32_t y = KeyedPermutation(spec_.m2, key)(ry - 1) + 1;
    return {x, y};
  }

 private:
  StreamSpec spec_;
  ZipfSampler primary_zipf_;
  ZipfSampler secondary_zipf_;
  KeyedPermutation primary_perm_;
  std::uint64_t secondary_key_;
  Pcg32 rng_;
};

inline std::vector<StreamPair> gen_stream(const StreamSpec& spec) {
  StreamGenerator gen(spec);
  std::vector<StreamPair> out;
  out.reserve(spec.n);
  for (std::uint64_t i = 0; i < spec.n; ++i) out.push_back(gen.next());
  return out;
}

}  // namespace chh
