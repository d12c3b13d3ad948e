#include "pcula/rng.hpp"

#include "pcula/errors.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>

namespace pcula {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

double bits_to_open_unit(std::uint64_t word) noexcept {
  return (static_cast<double>(word >> 12) + 0.5) * 0x1.0p-52;
}

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw InvalidArgument("normal_quantile: argument must lie in (0, 1)");
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

double NormalStream::at(std::uint64_t index) const {
  const std::uint64_t block = index >> 1;
  const auto out = philox4x32_10(
      {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
       static_cast<std::uint32_t>(stream_),
       static_cast<std::uint32_t>(stream_ >> 32)},
      {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
  const std::size_t lane = (index & 1u) ? 2 : 0;
  const std::uint64_t word =
      static_cast<std::uint64_t>(out[lane]) |
      (static_cast<std::uint64_t>(out[lane + 1]) << 32);
  return normal_quantile(bits_to_open_unit(word));
}

double NormalStream::next() { return at(index_++); }

void NormalStream::fill(Eigen::Ref<Eigen::VectorXd> out) {
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = next();
}

Eigen::VectorXd NormalStream::next_vector(Eigen::Index d) {
  Eigen::VectorXd v(d);
  fill(v);
  return v;
}

}  // namespace pcula
