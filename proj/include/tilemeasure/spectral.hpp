#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tilemeasure {

class SubstitutionSystem;

using BigInt = boost::multiprecision::cpp_int;

/// A(i, j) = number of copies of prototile i in the substitution of prototile j.
class SubstitutionMatrix {
 public:
  SubstitutionMatrix() = default;
  explicit SubstitutionMatrix(std::size_t n) : n_(n), entries_(n * n, 0) {}
  /// Row-major entries; throws std::invalid_argument on a size mismatch or negative entry.
  SubstitutionMatrix(std::size_t n, std::vector<std::int64_t> row_major);

  std::size_t size() const { return n_; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  std::int64_t column_sum(std::size_t j) const;
  std::int64_t total() const;
  friend bool operator==(const SubstitutionMatrix&, const SubstitutionMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> entries_;
};

SubstitutionMatrix build_matrix(const SubstitutionSystem& sys);

/// Smallest M <= N^2 - 2N + 2 with A^M > 0 entrywise (boolean powering), else nullopt.
std::optional<unsigned> primitivity_exponent(const SubstitutionMatrix& a);

struct SpectralResiduals {
  double eig_left = 0.0;   ///< |v_L^T A - gamma v_L^T|_inf
  double eig_right = 0.0;  ///< |A v_R - gamma v_R|_inf
  double biorth = 0.0;     ///< |v_L^T v_R - 1|
  double lambda = 0.0;     ///< |gamma - lambda^2|
  std::size_t iterations = 0;
};

/// Perron-Frobenius eigendata of a primitive substitution matrix.
struct SpectralData {
  double gamma = 0.0;
  std::vector<double> v_left;   ///< positive, sums to 1
  std::vector<double> v_right;  ///< positive, v_left . v_right = 1
  std::vector<std::int64_t> vertex_counts;
  SpectralResiduals residuals;
};

struct PerronOptions {
  double tolerance = 1e-13;  ///< stop when the sum-normalized iterate moves less than this
  std::size_t max_iterations = 100'000;
};

/// Power iteration on A and A^T from the all-ones vector. Throws SpectralError when A is
/// not primitive or the iteration does not converge.
SpectralData perron(const SubstitutionMatrix& a, double lambda, const PerronOptions& options = {});
/// build_matrix + perron, with vertex counts filled from the prototiles.
SpectralData spectral_data(const SubstitutionSystem& sys);

// Exact counting formulas.

/// A^k 1: entry j is the number of level-k tiles of type j.
std::vector<BigInt> type_counts(const SubstitutionMatrix& a, std::size_t k);
/// 1^T A^k 1
BigInt count_tiles(const SubstitutionMatrix& a, std::size_t k);
/// 1^T A^k e_s
BigInt count_subtiles(const SubstitutionMatrix& a, std::size_t k, std::size_t s);
/// v^T A^k 1
BigInt count_vertex_incidences(const SubstitutionMatrix& a, const std::vector<std::int64_t>& vcount,
                               std::size_t k);

/// ||gamma^{-k} A^k - v_R v_L^T||_inf (maximum absolute row sum).
double projection_defect(const SubstitutionMatrix& a, const SpectralData& spectral, std::size_t k);

}  // namespace tilemeasure
