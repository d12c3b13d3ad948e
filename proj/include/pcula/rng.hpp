#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>

namespace pcula {

/// Philox4x32-10 block function (Salmon et al., Random123): a keyed bijection
/// on 128-bit counters.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Deterministic stream of standard normal draws.
///
/// Draw i of stream s under seed k is computed as follows:
///   block  = philox4x32_10({lo(i/2), hi(i/2), lo(s), hi(s)}, {lo(k), hi(k)})
///   word   = i even ? block[0] | block[1] << 32 : block[2] | block[3] << 32
///   u      = ((word >> 12) + 0.5) * 2^-52            (in the open interval (0,1))
///   normal = -sqrt(2) * erfc_inv(2 u)                (inverse normal CDF)
///
/// The whole state is (seed, stream, index), so a copy resumes the exact
/// same sequence and chains can be advanced on any thread.
class NormalStream {
 public:
  NormalStream() = default;
  NormalStream(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  double next();
  void fill(Eigen::Ref<Eigen::VectorXd> out);
  Eigen::VectorXd next_vector(Eigen::Index d);

  /// Draw i of this stream without advancing.
  double at(std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t index() const noexcept { return index_; }
  void seek(std::uint64_t index) noexcept { index_ = index; }

  friend bool operator==(const NormalStream&, const NormalStream&) = default;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t index_ = 0;
};

/// Maps 64 random bits to the open unit interval.
double bits_to_open_unit(std::uint64_t word) noexcept;

/// Inverse of the standard normal CDF on (0, 1).
double normal_quantile(double u);

}  // namespace pcula
