#include "cgmt/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cgmt/errors.hpp"

namespace cgmt {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept {
  const std::uint64_t product = std::uint64_t{a} * std::uint64_t{b};
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

// 53 random bits mapped to the open interval (0, 1).
inline double to_unit_open(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

void require_positive(Eigen::Index dim, const char* what) {
  if (dim < 1) {
    fail(ErrorKind::InvalidDimension,
         std::string(what) + " must be >= 1, got " + std::to_string(dim));
  }
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double GaussianStream::next() noexcept {
  const std::uint64_t block = position_ >> 1;
  if (block != cached_block_) {
    const auto bits = philox4x32(
        {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
         static_cast<std::uint32_t>(source_.stream_index),
         static_cast<std::uint32_t>(source_.stream_index >> 32)},
        {static_cast<std::uint32_t>(source_.master_seed),
         static_cast<std::uint32_t>(source_.master_seed >> 32)});
    const double u1 = to_unit_open((std::uint64_t{bits[0]} << 32) | bits[1]);
    const double u2 = to_unit_open((std::uint64_t{bits[2]} << 32) | bits[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = {radius * std::cos(angle), radius * std::sin(angle)};
    cached_block_ = block;
  }
  return cached_[position_++ & 1];
}

Vector GaussianStream::vector(Eigen::Index dim) {
  require_positive(dim, "dimension");
  Vector out(dim);
  for (Eigen::Index i = 0; i < dim; ++i) out[i] = next();
  return out;
}

Matrix GaussianStream::matrix(Eigen::Index rows, Eigen::Index cols) {
  require_positive(rows, "rows");
  require_positive(cols, "cols");
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = next();
  return out;
}

Vector sample_gaussian_vector(RandomSource source, Eigen::Index dim) {
  return GaussianStream(source).vector(dim);
}

Matrix sample_gaussian_matrix(RandomSource source, Eigen::Index rows, Eigen::Index cols) {
  return GaussianStream(source).matrix(rows, cols);
}

ChiMean gamma_m(int m) {
  if (m < 1) {
    fail(ErrorKind::InvalidDimension, "gamma_m requires m >= 1, got " + std::to_string(m));
  }
  const double half = 0.5 * m;
  const double value =
      std::numbers::sqrt2 * std::exp(std::lgamma(half + 0.5) - std::lgamma(half));
  return {m, value};
}

}  // namespace cgmt
