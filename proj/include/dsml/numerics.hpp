#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dsml {

// Feature / embedding vector. All arithmetic in this project is IEEE double;
// nothing here is templated on the scalar type on purpose.
using Vec = std::vector<double>;

// Dense row-major matrix.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  void fill(double v) { values.assign(values.size(), v); }
  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

// Counter-based pseudo-random generator.
//
// State is (key, counter); the i-th output is
//   mix64(key + i * 0x9E3779B97F4A7C15)
// where mix64 is the SplitMix64 finalizer. The key is derived from
// (seed, stream) as mix64(seed) ^ mix64(stream + 0x632BE59BD9B4E019).
// Only unsigned 64-bit arithmetic is involved, so identical seeds give
// bitwise-identical streams on every platform. Serializing (key, counter)
// captures the full state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller; consumes exactly two draws per call.
  double normal();
  // Uniform integer in [0, n), n > 0. Fixed-point multiply; the O(n/2^64)
  // bias is irrelevant at the scales used here.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }
  void restore(std::uint64_t key, std::uint64_t counter) {
    key_ = key;
    counter_ = counter;
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// max(0, v) elementwise.
Vec relu(const Vec& v);

// Euclidean (L2, non-squared) distance. Throws std::invalid_argument on
// length mismatch.
double euclid(const Vec& a, const Vec& b);

// Numerically stable softmax (max subtraction). v must be nonempty.
Vec softmax(const Vec& v);

// m * v. Throws std::invalid_argument if m.cols != v.size().
Vec matvec(const Mat& m, const Vec& v);

// m^T * v. Throws std::invalid_argument if m.rows != v.size().
Vec matvec_transpose(const Mat& m, const Vec& v);

double dot(const Vec& a, const Vec& b);
double norm(const Vec& v);

// y += s * x
void axpy(double s, const Vec& x, Vec& y);

Vec sub(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec scaled(const Vec& v, double s);

bool all_finite(const Vec& v);
bool all_finite(const Mat& m);

}  // namespace dsml
