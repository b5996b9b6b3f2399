#pragma once

#include "matchfame/partial_permutation.hpp"

namespace matchfame {

// Greedy projection onto partial permutations: entries are visited by value
// (descending; ties by row, then column) and accepted while their row and
// column are both free and the value exceeds `theta`. theta must be in [0, 1).
PartialPermutation project_partial(const SparseNonnegMatrix& a, double theta);

// Maximum-weight full permutation of a square matrix (Hungarian algorithm,
// O(n^3)). Throws DataError on non-square input.
PartialPermutation hungarian_project(const SparseNonnegMatrix& a);

}  // namespace matchfame
