#include "locc/monotones.hpp"

#include <algorithm>
#include <string>

namespace locc {

template <class T>
T monotone_E(const SchmidtVector<T>& sv, std::size_t k) {
  if (k < 1 || k > sv.size()) {
    throw InvalidInput("monotone index k=" + std::to_string(k) + " outside [1, " +
                       std::to_string(sv.size()) + "]");
  }
  if (k == 1) return T(1);
  T tail = 0;
  for (std::size_t i = k - 1; i < sv.size(); ++i) tail += sv[i];
  return tail;
}

template <class T>
std::vector<T> monotone_profile(const SchmidtVector<T>& sv) {
  std::vector<T> out(sv.size());
  T tail = 0;
  for (std::size_t i = sv.size(); i-- > 0;) {
    tail += sv[i];
    out[i] = tail;
  }
  // E_1 is the full sum; pin it so float profiles start at exactly 1.
  out[0] = 1;
  return out;
}

double f_k(const DensityOperator& sigma, std::size_t k) {
  const auto n = static_cast<std::size_t>(sigma.dim());
  if (k < 1 || k > n) {
    throw InvalidInput("f_k index k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sigma.matrix(), Eigen::EigenvaluesOnly);
  // Eigen returns eigenvalues in increasing order.
  const Eigen::VectorXd& ev = solver.eigenvalues();
  double total = 0.0;
  for (std::size_t i = 0; i < n - k + 1; ++i) {
    total += std::clamp(ev[static_cast<Eigen::Index>(i)], 0.0, 1.0);
  }
  return total;
}

template <class T>
Ensemble<T>::Ensemble(std::vector<Member> members, const NumericOptions& opts)
    : members_(std::move(members)) {
  if (members_.empty()) throw InvalidInput("ensemble is empty");
  T total = 0;
  for (const auto& [weight, state] : members_) {
    if (is_negative(weight, opts.tolerance)) throw InvalidInput("ensemble weight is negative");
    total += weight;
  }
  if (!approx_equal(total, T(1), opts.tolerance)) {
    throw InvalidInput("ensemble weights sum to " + to_string(total) + ", expected 1");
  }
}

template <class T>
T ensemble_average_E(const Ensemble<T>& ensemble, std::size_t k) {
  T total = 0;
  for (const auto& [weight, state] : ensemble.members()) total += weight * monotone_E(state, k);
  return total;
}

template <class T>
double entropy_of_entanglement(const SchmidtVector<T>& sv) {
  double h = 0.0;
  for (const T& x : sv.probs()) {
    const double p = to_double(x);
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

template double monotone_E(const SchmidtVector<double>&, std::size_t);
template Rational monotone_E(const SchmidtVector<Rational>&, std::size_t);
template std::vector<double> monotone_profile(const SchmidtVector<double>&);
template std::vector<Rational> monotone_profile(const SchmidtVector<Rational>&);
template class Ensemble<double>;
template class Ensemble<Rational>;
template double ensemble_average_E(const Ensemble<double>&, std::size_t);
template Rational ensemble_average_E(const Ensemble<Rational>&, std::size_t);
template double entropy_of_entanglement(const SchmidtVector<double>&);
template double entropy_of_entanglement(const SchmidtVector<Rational>&);

}  // namespace locc
