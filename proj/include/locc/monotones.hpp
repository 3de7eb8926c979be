#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "locc/schmidt.hpp"

namespace locc {

/// E_k(psi): sum of the squared Schmidt coefficients from index k on
/// (1-based). E_1 is always 1; E_k for k > 1 measures how much weight sits
/// outside the k-1 largest coefficients.
template <class T>
T monotone_E(const SchmidtVector<T>& sv, std::size_t k);

/// (E_1, ..., E_n).
template <class T>
std::vector<T> monotone_profile(const SchmidtVector<T>& sv);

/// Sum of the n-k+1 smallest eigenvalues of sigma. Eigenvalues are clamped
/// to [0, 1] before summing.
double f_k(const DensityOperator& sigma, std::size_t k);

/// A finite pure-state decomposition {p_j, psi_j}.
template <class T>
class Ensemble {
 public:
  using Member = std::pair<T, SchmidtVector<T>>;

  explicit Ensemble(std::vector<Member> members, const NumericOptions& opts = {});

  const std::vector<Member>& members() const { return members_; }

 private:
  std::vector<Member> members_;
};

/// sum_j p_j E_k(psi_j). Any particular ensemble gives an upper bound on the
/// convex-roof value of E_k for the mixed state it realizes; the minimum over
/// ensembles is not computed here.
template <class T>
T ensemble_average_E(const Ensemble<T>& ensemble, std::size_t k);

/// -sum alpha_i log2 alpha_i, in ebits.
template <class T>
double entropy_of_entanglement(const SchmidtVector<T>& sv);

}  // namespace locc
