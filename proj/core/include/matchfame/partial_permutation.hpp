#pragma once

#include <compare>
#include <optional>
#include <span>
#include <vector>

#include "matchfame/types.hpp"

namespace matchfame {

struct Match {
  Index row = 0;
  Index col = 0;

  friend auto operator<=>(const Match&, const Match&) = default;
};

// Binary matrix with at most one nonzero per row and per column, stored as a
// row-sorted coordinate list. Immutable once built.
class PartialPermutation {
 public:
  PartialPermutation() = default;
  // Empty (all-zero) rows x cols matrix.
  PartialPermutation(Index rows, Index cols);

  // Validates shape, index range and row/column uniqueness; entries may be
  // given in any order. Throws DataError on violation.
  static PartialPermutation FromEntries(Index rows, Index cols,
                                        std::vector<Match> entries);

  // Ones on the diagonal up to min(rows, cols).
  static PartialPermutation Identity(Index rows, Index cols);

  // rows x cols matrix with a 1 at (r, row_to_col[r]) wherever the value is
  // non-negative.
  static PartialPermutation FromRowMap(Index cols,
                                       std::span<const Index> row_to_col);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::span<const Match> entries() const { return entries_; }

  std::optional<Index> col_of(Index row) const;
  bool contains(Index row, Index col) const;

  // Dense lookup: result[r] is the column matched to row r, or -1.
  std::vector<Index> row_map() const;

  friend bool operator==(const PartialPermutation&,
                         const PartialPermutation&) = default;

 private:
  PartialPermutation(Index rows, Index cols, std::vector<Match> sorted,
                     bool /*trusted*/);

  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Match> entries_;
};

struct WeightedEntry {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

// Coordinate-format matrix of strictly positive values, sorted by
// (row, col). Holds pre-projection accumulations.
class SparseNonnegMatrix {
 public:
  SparseNonnegMatrix() = default;
  SparseNonnegMatrix(Index rows, Index cols) : rows_(rows), cols_(cols) {}

  // Duplicates are summed in the order given; zero-valued results are
  // dropped. Negative or non-finite values throw DataError.
  static SparseNonnegMatrix FromTriplets(Index rows, Index cols,
                                         std::vector<WeightedEntry> triplets);

  static SparseNonnegMatrix FromPartialPermutation(const PartialPermutation& p,
                                                   double value = 1.0);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }
  std::span<const WeightedEntry> entries() const { return entries_; }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<WeightedEntry> entries_;
};

// a * b. Throws DataError if a.cols() != b.rows().
PartialPermutation compose(const PartialPermutation& a,
                           const PartialPermutation& b);

PartialPermutation transpose(const PartialPermutation& a);

// Entrywise a <= b, i.e. every match of a is also a match of b.
bool entrywise_leq(const PartialPermutation& a, const PartialPermutation& b);

// nnz(a * b) without materializing the product.
std::size_t product_nnz(const PartialPermutation& a,
                        const PartialPermutation& b);

// tr(a * b * c) without materializing any product.
std::size_t trace_product3(const PartialPermutation& a,
                           const PartialPermutation& b,
                           const PartialPermutation& c);

// Number of common matches, <a, b> for same-shape binary matrices.
std::size_t inner_product(const PartialPermutation& a,
                          const PartialPermutation& b);

}  // namespace matchfame
