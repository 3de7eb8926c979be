#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

#include "locc/numeric.hpp"

namespace locc {

/// Squared Schmidt coefficients of a bipartite pure state, sorted
/// non-increasing and summing to one (exactly, in rational mode).
///
/// Construction validates and sorts; ties keep their input order. Zero
/// entries are kept unless `NumericOptions::trim_zeros` is set, in which
/// case entries at or below the tolerance are dropped (at least one entry
/// always survives).
template <class T>
class SchmidtVector {
 public:
  explicit SchmidtVector(std::vector<T> probs, const NumericOptions& opts = {});

  std::size_t size() const { return probs_.size(); }
  const std::vector<T>& probs() const { return probs_; }
  const T& operator[](std::size_t i) const { return probs_[i]; }

  /// Number of entries above the tolerance (exactly nonzero in rational mode).
  std::size_t rank(double eps = NumericOptions{}.tolerance) const;

  /// Same vector zero-padded to length `n` (n >= size()).
  SchmidtVector padded(std::size_t n) const;

  friend bool operator==(const SchmidtVector& a, const SchmidtVector& b) {
    return a.probs_ == b.probs_;
  }

 private:
  struct Unchecked {};
  SchmidtVector(Unchecked, std::vector<T> probs) : probs_(std::move(probs)) {}

  std::vector<T> probs_;
};

/// Pads both vectors with zeros to the longer of the two lengths.
template <class T>
std::pair<SchmidtVector<T>, SchmidtVector<T>> pad_to_common(const SchmidtVector<T>& a,
                                                             const SchmidtVector<T>& b);

/// Lossy conversion between numeric modes (rationals are rounded to double;
/// doubles become the rational of their shortest decimal and are then
/// renormalized exactly).
SchmidtVector<double> to_floating(const SchmidtVector<Rational>& sv);
SchmidtVector<Rational> to_rational(const SchmidtVector<double>& sv);

/// Pure state on C^{n_A} (x) C^{n_B}; entry (i, j) is the amplitude on |i_A j_B>.
class BipartiteState {
 public:
  explicit BipartiteState(Eigen::MatrixXcd amplitudes, double tolerance = 1e-9);

  const Eigen::MatrixXcd& amplitudes() const { return amplitudes_; }
  Eigen::Index dim_a() const { return amplitudes_.rows(); }
  Eigen::Index dim_b() const { return amplitudes_.cols(); }

 private:
  Eigen::MatrixXcd amplitudes_;
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityOperator {
 public:
  explicit DensityOperator(Eigen::MatrixXcd matrix, double tolerance = 1e-9);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  Eigen::MatrixXcd matrix_;
};

/// Squared singular values of the amplitude matrix, length min(n_A, n_B).
SchmidtVector<double> schmidt_decompose(const BipartiteState& state,
                                        const NumericOptions& opts = {});

/// Diagonal amplitude matrix with entries sqrt(alpha_i).
template <class T>
BipartiteState state_from_schmidt(const SchmidtVector<T>& sv);

/// All N-fold products of entries, sorted; length size()^N.
template <class T>
SchmidtVector<T> tensor_power(const SchmidtVector<T>& sv, std::size_t copies);

/// Tr_A |psi><psi|, an n_B x n_B operator.
DensityOperator reduced_density(const BipartiteState& state);

/// True when y majorizes x: every head sum of y is at least the matching
/// head sum of x. The shorter vector is zero-padded.
template <class T>
bool majorizes(const SchmidtVector<T>& x, const SchmidtVector<T>& y, double eps = NumericOptions{}.tolerance);

extern template class SchmidtVector<double>;
extern template class SchmidtVector<Rational>;

}  // namespace locc
