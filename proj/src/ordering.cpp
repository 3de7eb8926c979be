#include "locc/ordering.hpp"

#include <functional>

namespace locc {

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::first_greater:
      return "first_greater";
    case Verdict::second_greater:
      return "second_greater";
    case Verdict::equal:
      return "equal";
    case Verdict::both_unit:
      return "both_unit";
  }
  return "unknown";
}

template <class T>
ComparisonResult<T> compare(const SchmidtVector<T>& first, const SchmidtVector<T>& second,
                            const NumericOptions& opts) {
  const double eps = opts.tolerance;
  ComparisonResult<T> out{optimal_probability(first, second, opts), optimal_probability(second, first, opts),
                          Verdict::equal};
  if (approx_equal(out.p_forward, T(1), eps) && approx_equal(out.p_backward, T(1), eps)) {
    out.verdict = Verdict::both_unit;
  } else if (definitely_less(out.p_backward, out.p_forward, eps)) {
    out.verdict = Verdict::first_greater;
  } else if (definitely_less(out.p_forward, out.p_backward, eps)) {
    out.verdict = Verdict::second_greater;
  }
  return out;
}

template <class T>
std::optional<std::vector<std::size_t>> find_cycle(const std::vector<SchmidtVector<T>>& states,
                                                   const NumericOptions& opts) {
  const std::size_t n = states.size();
  std::vector<std::vector<std::size_t>> edges(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && compare(states[a], states[b], opts).verdict == Verdict::second_greater) edges[a].push_back(b);
    }
  }
  // Search from each start in increasing order, only through larger
  // indices, so the first cycle found starts at its smallest member.
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<std::size_t> path{start};
    std::vector<bool> on_path(n, false);
    on_path[start] = true;
    std::function<bool(std::size_t)> dfs = [&](std::size_t v) -> bool {
      for (std::size_t w : edges[v]) {
        if (w == start) {
          path.push_back(start);
          return true;
        }
        if (w < start || on_path[w]) continue;
        on_path[w] = true;
        path.push_back(w);
        if (dfs(w)) return true;
        path.pop_back();
        on_path[w] = false;
      }
      return false;
    };
    if (dfs(start)) return path;
  }
  return std::nullopt;
}

template <class T>
std::vector<NonAdditivityInstance<T>> nonadditivity_search(
    const std::vector<std::pair<SchmidtVector<T>, SchmidtVector<T>>>& pairs, const NumericOptions& opts) {
  std::vector<NonAdditivityInstance<T>> found;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [alpha, beta] = pairs[i];
    const T single = optimal_probability(alpha, beta, opts);
    const T squared = single * single;
    const T two_copy = tensor_conversion_probability(alpha, beta, 2, opts);
    if (definitely_less(squared, two_copy, opts.tolerance)) found.push_back({i, single, squared, two_copy});
  }
  return found;
}

#define LOCC_INSTANTIATE_ORDERING(T)                                                                       \
  template ComparisonResult<T> compare(const SchmidtVector<T>&, const SchmidtVector<T>&,                \
                                       const NumericOptions&);                                          \
  template std::optional<std::vector<std::size_t>> find_cycle(const std::vector<SchmidtVector<T>>&,     \
                                                              const NumericOptions&);                   \
  template std::vector<NonAdditivityInstance<T>> nonadditivity_search(                                  \
      const std::vector<std::pair<SchmidtVector<T>, SchmidtVector<T>>>&, const NumericOptions&);

LOCC_INSTANTIATE_ORDERING(double)
LOCC_INSTANTIATE_ORDERING(Rational)

#undef LOCC_INSTANTIATE_ORDERING

}  // namespace locc
