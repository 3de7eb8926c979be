#pragma once

// Pairwise comparison of states by directed conversion probability. Calling
// a state "more entangled" when it converts to the other with the larger
// probability is not transitive; find_cycle exhibits this.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "locc/conversion.hpp"

namespace locc {

enum class Verdict { first_greater, second_greater, equal, both_unit };

const char* to_string(Verdict verdict);

template <class T>
struct ComparisonResult {
  T p_forward;   // P(first -> second)
  T p_backward;  // P(second -> first)
  Verdict verdict;
};

/// first_greater when P(first -> second) > P(second -> first). Float inputs
/// are "equal" inside the tolerance band.
template <class T>
ComparisonResult<T> compare(const SchmidtVector<T>& first, const SchmidtVector<T>& second,
                            const NumericOptions& opts = {});

/// Directed cycle in the "less entangled than" relation: an edge a -> b when
/// P(b -> a) > P(a -> b). Returns 0-based indices with the first repeated at
/// the end, starting from the smallest index on the cycle.
template <class T>
std::optional<std::vector<std::size_t>> find_cycle(const std::vector<SchmidtVector<T>>& states,
                                                   const NumericOptions& opts = {});

template <class T>
struct NonAdditivityInstance {
  std::size_t index;  // position in the input list
  T single;           // P(alpha -> beta)
  T single_squared;
  T two_copy;         // P(alpha^{(x)2} -> beta^{(x)2})
};

/// Pairs whose two-copy probability strictly exceeds the square of the
/// single-copy probability (beyond the tolerance for float inputs).
template <class T>
std::vector<NonAdditivityInstance<T>> nonadditivity_search(
    const std::vector<std::pair<SchmidtVector<T>, SchmidtVector<T>>>& pairs, const NumericOptions& opts = {});

}  // namespace locc
