#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "vertexsos/errors.hpp"

namespace vsos {

using cx = std::complex<double>;

/// Dense complex multi-index array, row-major, immutable after construction.
class ComplexTensor {
 public:
  ComplexTensor(std::vector<std::size_t> shape, std::vector<cx> entries,
                std::vector<std::string> labels = {});

  const std::vector<std::size_t>& shape() const { return shape_; }
  const std::vector<cx>& entries() const { return entries_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t rank() const { return shape_.size(); }

  const cx& at(const std::vector<std::size_t>& idx) const;

  /// Moves factor i of the index structure to position perm[i].
  ComplexTensor permute_factors(const std::vector<std::size_t>& perm) const;

  double frobenius_norm() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<cx> entries_;
  std::vector<std::string> labels_;
};

/// Dense complex square matrix; the carrier for every displayed operator.
class SquareOperator {
 public:
  explicit SquareOperator(std::size_t dim);  // zero matrix
  SquareOperator(std::size_t dim, std::vector<cx> entries);

  static SquareOperator identity(std::size_t dim);
  static SquareOperator diagonal(const std::vector<cx>& d);

  std::size_t dim() const { return dim_; }
  const std::vector<cx>& entries() const { return a_; }

  const cx& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  cx& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }

  SquareOperator operator+(const SquareOperator& o) const;
  SquareOperator operator-(const SquareOperator& o) const;
  SquareOperator operator*(const SquareOperator& o) const;
  SquareOperator scaled(cx s) const;
  std::vector<cx> apply(const std::vector<cx>& v) const;

  cx trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  /// Partial-pivot LU inverse. Throws SingularMatrix when a pivot falls
  /// below 1e-13 * ||A||_F.
  SquareOperator inverse() const;

  /// Rough 1-norm condition estimate via the inverse.
  double condition_estimate() const;

  /// Matrix exponential, scaling-and-squaring with a Taylor core.
  SquareOperator expm() const;

  bool approx_equal(const SquareOperator& o, double tol) const;

 private:
  std::size_t dim_;
  std::vector<cx> a_;
};

/// (A kron B)[i*dB + k, j*dB + l] = A[i,j] * B[k,l].
SquareOperator kron(const SquareOperator& a, const SquareOperator& b);

std::vector<cx> kron_vec(const std::vector<cx>& a, const std::vector<cx>& b);

/// Conjugates an operator on a tensor-product space by the factor
/// permutation that sends factor i to position perm[i].
SquareOperator permute_factors(const SquareOperator& op,
                               const std::vector<std::size_t>& factor_dims,
                               const std::vector<std::size_t>& perm);

/// Embeds a two-site operator acting on factors (site, site+1) of
/// n_sites copies of C^d.
SquareOperator embed_two_site(const SquareOperator& r, std::size_t d,
                              std::size_t n_sites, std::size_t site);

/// Embeds a two-site operator on the (non-adjacent) pair of factors
/// (site_a, site_b), site_a < site_b.
SquareOperator embed_pair(const SquareOperator& r, std::size_t d,
                          std::size_t n_sites, std::size_t site_a,
                          std::size_t site_b);

}  // namespace vsos
