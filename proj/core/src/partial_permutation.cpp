#include "matchfame/partial_permutation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace matchfame {
namespace {

std::string ShapeString(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

void CheckChained(const PartialPermutation& a, const PartialPermutation& b,
                  const char* op) {
  if (a.cols() != b.rows()) {
    throw DataError(std::string(op) + ": dimension mismatch " +
                    ShapeString(a.rows(), a.cols()) + " * " +
                    ShapeString(b.rows(), b.cols()));
  }
}

}  // namespace

PartialPermutation::PartialPermutation(Index rows, Index cols)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) {
    throw DataError("PartialPermutation: negative shape " +
                    ShapeString(rows, cols));
  }
}

PartialPermutation::PartialPermutation(Index rows, Index cols,
                                       std::vector<Match> sorted, bool)
    : rows_(rows), cols_(cols), entries_(std::move(sorted)) {}

PartialPermutation PartialPermutation::FromEntries(Index rows, Index cols,
                                                   std::vector<Match> entries) {
  PartialPermutation shape_check(rows, cols);
  std::sort(entries.begin(), entries.end());
  std::vector<char> col_used(static_cast<std::size_t>(cols), 0);
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const Match& m = entries[e];
    if (m.row < 0 || m.row >= rows || m.col < 0 || m.col >= cols) {
      throw DataError("PartialPermutation: entry (" + std::to_string(m.row) +
                      "," + std::to_string(m.col) + ") out of range for " +
                      ShapeString(rows, cols));
    }
    if (e > 0 && entries[e - 1].row == m.row) {
      throw DataError("PartialPermutation: row " + std::to_string(m.row) +
                      " has more than one nonzero");
    }
    if (col_used[m.col]) {
      throw DataError("PartialPermutation: column " + std::to_string(m.col) +
                      " has more than one nonzero");
    }
    col_used[m.col] = 1;
  }
  return PartialPermutation(rows, cols, std::move(entries), true);
}

PartialPermutation PartialPermutation::Identity(Index rows, Index cols) {
  PartialPermutation shape_check(rows, cols);
  std::vector<Match> entries;
  const Index n = std::min(rows, cols);
  entries.reserve(static_cast<std::size_t>(n));
  for (Index d = 0; d < n; ++d) entries.push_back({d, d});
  return PartialPermutation(rows, cols, std::move(entries), true);
}

PartialPermutation PartialPermutation::FromRowMap(
    Index cols, std::span<const Index> row_to_col) {
  std::vector<Match> entries;
  for (std::size_t r = 0; r < row_to_col.size(); ++r) {
    if (row_to_col[r] >= 0) {
      entries.push_back({static_cast<Index>(r), row_to_col[r]});
    }
  }
  return FromEntries(static_cast<Index>(row_to_col.size()), cols,
                     std::move(entries));
}

std::optional<Index> PartialPermutation::col_of(Index row) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), row,
      [](const Match& m, Index r) { return m.row < r; });
  if (it != entries_.end() && it->row == row) return it->col;
  return std::nullopt;
}

bool PartialPermutation::contains(Index row, Index col) const {
  return std::binary_search(entries_.begin(), entries_.end(), Match{row, col});
}

std::vector<Index> PartialPermutation::row_map() const {
  std::vector<Index> map(static_cast<std::size_t>(rows_), -1);
  for (const Match& m : entries_) map[m.row] = m.col;
  return map;
}

SparseNonnegMatrix SparseNonnegMatrix::FromTriplets(
    Index rows, Index cols, std::vector<WeightedEntry> triplets) {
  SparseNonnegMatrix out(rows, cols);
  for (const WeightedEntry& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw DataError("SparseNonnegMatrix: entry out of range");
    }
    if (!std::isfinite(t.value) || t.value < 0.0) {
      throw DataError("SparseNonnegMatrix: values must be finite and >= 0");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const WeightedEntry& a, const WeightedEntry& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  for (const WeightedEntry& t : triplets) {
    if (!out.entries_.empty() && out.entries_.back().row == t.row &&
        out.entries_.back().col == t.col) {
      out.entries_.back().value += t.value;
    } else {
      out.entries_.push_back(t);
    }
  }
  std::erase_if(out.entries_,
                [](const WeightedEntry& e) { return e.value <= 0.0; });
  return out;
}

SparseNonnegMatrix SparseNonnegMatrix::FromPartialPermutation(
    const PartialPermutation& p, double value) {
  std::vector<WeightedEntry> triplets;
  triplets.reserve(p.nnz());
  for (const Match& m : p.entries()) triplets.push_back({m.row, m.col, value});
  return FromTriplets(p.rows(), p.cols(), std::move(triplets));
}

PartialPermutation compose(const PartialPermutation& a,
                           const PartialPermutation& b) {
  CheckChained(a, b, "compose");
  const std::vector<Index> b_map = b.row_map();
  std::vector<Match> out;
  out.reserve(std::min(a.nnz(), b.nnz()));
  for (const Match& m : a.entries()) {
    const Index c = b_map[m.col];
    if (c >= 0) out.push_back({m.row, c});
  }
  // Rows stay sorted and unique; columns are unique because both factors are
  // injective on their supports.
  return PartialPermutation::FromEntries(a.rows(), b.cols(), std::move(out));
}

PartialPermutation transpose(const PartialPermutation& a) {
  std::vector<Match> out;
  out.reserve(a.nnz());
  for (const Match& m : a.entries()) out.push_back({m.col, m.row});
  return PartialPermutation::FromEntries(a.cols(), a.rows(), std::move(out));
}

bool entrywise_leq(const PartialPermutation& a, const PartialPermutation& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DataError("entrywise_leq: shape mismatch " +
                    ShapeString(a.rows(), a.cols()) + " vs " +
                    ShapeString(b.rows(), b.cols()));
  }
  return std::includes(b.entries().begin(), b.entries().end(),
                       a.entries().begin(), a.entries().end());
}

std::size_t product_nnz(const PartialPermutation& a,
                        const PartialPermutation& b) {
  CheckChained(a, b, "product_nnz");
  const std::vector<Index> b_map = b.row_map();
  std::size_t count = 0;
  for (const Match& m : a.entries()) count += b_map[m.col] >= 0 ? 1 : 0;
  return count;
}

std::size_t trace_product3(const PartialPermutation& a,
                           const PartialPermutation& b,
                           const PartialPermutation& c) {
  CheckChained(a, b, "trace_product3");
  CheckChained(b, c, "trace_product3");
  if (c.cols() != a.rows()) {
    throw DataError("trace_product3: c.cols() != a.rows()");
  }
  const std::vector<Index> b_map = b.row_map();
  const std::vector<Index> c_map = c.row_map();
  std::size_t trace = 0;
  for (const Match& m : a.entries()) {
    const Index v = b_map[m.col];
    if (v >= 0 && c_map[v] == m.row) ++trace;
  }
  return trace;
}

std::size_t inner_product(const PartialPermutation& a,
                          const PartialPermutation& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DataError("inner_product: shape mismatch");
  }
  std::size_t count = 0;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() && ib != b.entries().end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace matchfame
