#pragma once

// Seeded Gaussian ensembles and chi-distribution moments.
//
// Every draw is a pure function of (master_seed, stream_index, position):
// a Philox4x32-10 block cipher maps the counter (block, stream_index) under
// the key master_seed to 128 random bits, which Box-Muller turns into two
// standard normals. Streams therefore need no shared state and trials can
// run on any worker in any order.
//
// Within one trial the draws are consumed from a single stream in this
// fixed order: G (row-major), z, x0 randomness, g, h.

#include <array>
#include <cstdint>

#include <Eigen/Core>

namespace cgmt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct RandomSource {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  friend bool operator==(const RandomSource&, const RandomSource&) = default;
};

/// Philox4x32 with 10 rounds (Salmon et al. constants).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Sequential reader over one RandomSource. Cheap to copy; a copy resumes
/// at the same position.
class GaussianStream {
 public:
  explicit GaussianStream(RandomSource source) noexcept : source_(source) {}

  double next() noexcept;
  Vector vector(Eigen::Index dim);
  /// rows x cols, filled row by row.
  Matrix matrix(Eigen::Index rows, Eigen::Index cols);

  std::uint64_t position() const noexcept { return position_; }
  const RandomSource& source() const noexcept { return source_; }

 private:
  RandomSource source_;
  std::uint64_t position_ = 0;
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  std::array<double, 2> cached_{};
};

Vector sample_gaussian_vector(RandomSource source, Eigen::Index dim);
Matrix sample_gaussian_matrix(RandomSource source, Eigen::Index rows, Eigen::Index cols);

/// Mean of the chi distribution with m degrees of freedom, E||g||_2 for
/// g ~ N(0, I_m).
struct ChiMean {
  int m = 0;
  double value = 0.0;
};

ChiMean gamma_m(int m);

}  // namespace cgmt
