#include "locc/schmidt.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace locc {

namespace {

constexpr std::size_t kMaxTensorLength = std::size_t{1} << 22;

template <class T>
T sum_of(const std::vector<T>& v) {
  T total = 0;
  for (const T& x : v) total += x;
  return total;
}

}  // namespace

template <class T>
SchmidtVector<T>::SchmidtVector(std::vector<T> probs, const NumericOptions& opts) {
  const double eps = opts.tolerance;
  if (probs.empty()) throw InvalidInput("Schmidt vector is empty");
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (is_negative(probs[i], eps)) {
      throw InvalidInput("Schmidt vector entry " + std::to_string(i) + " is negative (" +
                         to_string(probs[i]) + ")");
    }
    if constexpr (std::is_same_v<T, double>) {
      if (!std::isfinite(probs[i])) throw InvalidInput("Schmidt vector entry is not finite");
      probs[i] = std::max(probs[i], 0.0);
    }
  }
  const T total = sum_of(probs);
  if (!approx_equal(total, T(1), eps)) {
    throw InvalidInput("Schmidt vector does not sum to 1 (sum = " + to_string(total) + ")");
  }
  std::stable_sort(probs.begin(), probs.end(), [](const T& a, const T& b) { return a > b; });
  if (opts.trim_zeros) {
    auto keep = std::find_if(probs.begin() + 1, probs.end(), [&](const T& x) { return is_zero(x, eps); });
    probs.erase(keep, probs.end());
  }
  probs_ = std::move(probs);
}

template <class T>
std::size_t SchmidtVector<T>::rank(double eps) const {
  return static_cast<std::size_t>(
      std::count_if(probs_.begin(), probs_.end(), [&](const T& x) { return !is_zero(x, eps); }));
}

template <class T>
SchmidtVector<T> SchmidtVector<T>::padded(std::size_t n) const {
  if (n < probs_.size()) throw InvalidInput("cannot pad a Schmidt vector to a shorter length");
  std::vector<T> out = probs_;
  out.resize(n, T(0));
  return SchmidtVector(Unchecked{}, std::move(out));
}

template class SchmidtVector<double>;
template class SchmidtVector<Rational>;

template <class T>
std::pair<SchmidtVector<T>, SchmidtVector<T>> pad_to_common(const SchmidtVector<T>& a,
                                                             const SchmidtVector<T>& b) {
  const std::size_t n = std::max(a.size(), b.size());
  return {a.padded(n), b.padded(n)};
}

template std::pair<SchmidtVector<double>, SchmidtVector<double>> pad_to_common(
    const SchmidtVector<double>&, const SchmidtVector<double>&);
template std::pair<SchmidtVector<Rational>, SchmidtVector<Rational>> pad_to_common(
    const SchmidtVector<Rational>&, const SchmidtVector<Rational>&);

SchmidtVector<double> to_floating(const SchmidtVector<Rational>& sv) {
  std::vector<double> out;
  out.reserve(sv.size());
  for (const Rational& x : sv.probs()) out.push_back(x.get_d());
  return SchmidtVector<double>(std::move(out));
}

SchmidtVector<Rational> to_rational(const SchmidtVector<double>& sv) {
  std::vector<Rational> out;
  out.reserve(sv.size());
  Rational total = 0;
  for (double x : sv.probs()) {
    out.push_back(rational_from_shortest_decimal(x));
    total += out.back();
  }
  for (Rational& x : out) x /= total;
  return SchmidtVector<Rational>(std::move(out));
}

BipartiteState::BipartiteState(Eigen::MatrixXcd amplitudes, double tolerance)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw InvalidInput("amplitude matrix is empty");
  const double norm_sq = amplitudes_.squaredNorm();
  if (!std::isfinite(norm_sq) || std::abs(norm_sq - 1.0) > tolerance) {
    throw InvalidInput("state is not normalized (squared norm = " + to_string(norm_sq) + ")");
  }
}

DensityOperator::DensityOperator(Eigen::MatrixXcd matrix, double tolerance)
    : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.size() == 0) {
    throw InvalidInput("density operator must be a non-empty square matrix");
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > tolerance) {
    throw InvalidInput("density operator is not Hermitian");
  }
  const std::complex<double> trace = matrix_.trace();
  if (std::abs(trace - 1.0) > tolerance) {
    throw InvalidInput("density operator trace is " + to_string(trace.real()) + ", expected 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tolerance) {
    throw InvalidInput("density operator has a negative eigenvalue");
  }
}

SchmidtVector<double> schmidt_decompose(const BipartiteState& state, const NumericOptions& opts) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(state.amplitudes());
  const Eigen::VectorXd& sigma = svd.singularValues();
  std::vector<double> probs(static_cast<std::size_t>(sigma.size()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    probs[static_cast<std::size_t>(i)] = sigma[i] * sigma[i];
    total += sigma[i] * sigma[i];
  }
  for (double& p : probs) p /= total;
  return SchmidtVector<double>(std::move(probs), opts);
}

template <class T>
BipartiteState state_from_schmidt(const SchmidtVector<T>& sv) {
  const auto n = static_cast<Eigen::Index>(sv.size());
  Eigen::MatrixXcd amps = Eigen::MatrixXcd::Zero(n, n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = to_double(sv[static_cast<std::size_t>(i)]);
    amps(i, i) = std::sqrt(p);
    total += p;
  }
  // Rounding of the rational entries can leave the norm a few ulps off.
  amps /= std::sqrt(total);
  return BipartiteState(std::move(amps));
}

template BipartiteState state_from_schmidt(const SchmidtVector<double>&);
template BipartiteState state_from_schmidt(const SchmidtVector<Rational>&);

template <class T>
SchmidtVector<T> tensor_power(const SchmidtVector<T>& sv, std::size_t copies) {
  if (copies == 0) throw InvalidInput("tensor power needs at least one copy");
  std::size_t length = 1;
  for (std::size_t c = 0; c < copies; ++c) {
    if (length > kMaxTensorLength / sv.size()) {
      throw InvalidInput("tensor power too large (" + std::to_string(sv.size()) + "^" +
                         std::to_string(copies) + " entries)");
    }
    length *= sv.size();
  }
  std::vector<T> current = sv.probs();
  for (std::size_t c = 1; c < copies; ++c) {
    std::vector<T> next;
    next.reserve(current.size() * sv.size());
    for (const T& a : current) {
      for (const T& b : sv.probs()) next.push_back(a * b);
    }
    current = std::move(next);
  }
  // Double products drift from unit sum by O(n^N ulp); widen accordingly.
  NumericOptions opts;
  opts.tolerance = std::max(opts.tolerance, 1e-12 * static_cast<double>(current.size()));
  return SchmidtVector<T>(std::move(current), opts);
}

template SchmidtVector<double> tensor_power(const SchmidtVector<double>&, std::size_t);
template SchmidtVector<Rational> tensor_power(const SchmidtVector<Rational>&, std::size_t);

DensityOperator reduced_density(const BipartiteState& state) {
  const Eigen::MatrixXcd& a = state.amplitudes();
  Eigen::MatrixXcd rho = a.transpose() * a.conjugate();
  // Symmetrize away round-off so the Hermitian check is exact.
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return DensityOperator(std::move(rho));
}

template <class T>
bool majorizes(const SchmidtVector<T>& x, const SchmidtVector<T>& y, double eps) {
  auto [xp, yp] = pad_to_common(x, y);
  T head_x = 0;
  T head_y = 0;
  for (std::size_t i = 0; i < xp.size(); ++i) {
    head_x += xp[i];
    head_y += yp[i];
    if (definitely_less(head_y, head_x, eps)) return false;
  }
  return true;
}

template bool majorizes(const SchmidtVector<double>&, const SchmidtVector<double>&, double);
template bool majorizes(const SchmidtVector<Rational>&, const SchmidtVector<Rational>&, double);

}  // namespace locc
