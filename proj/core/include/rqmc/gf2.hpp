#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace rqmc::gf2 {

/// Dense bit matrix over GF(2) with every row packed into one machine word.
///
/// Rows and columns are addressed 1-based to match the row-set notation used
/// throughout the library: column j of a row lives in bit position j-1, and
/// row ell is the ell-th stored word. At most 64 columns are supported.
class BitMatrix {
 public:
  static constexpr int kMaxCols = 64;

  BitMatrix() = default;
  /// All-zero matrix.
  BitMatrix(std::size_t n_rows, int n_cols);
  /// Takes ownership of packed rows; throws if a row has bits past n_cols.
  BitMatrix(std::vector<std::uint64_t> rows, int n_cols);

  static BitMatrix identity(int n);
  /// Builds from explicit 0/1 rows, column 1 first: {{1,0},{1,1}}.
  static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);

  [[nodiscard]] std::size_t n_rows() const noexcept { return rows_.size(); }
  [[nodiscard]] int n_cols() const noexcept { return n_cols_; }
  [[nodiscard]] std::uint64_t column_mask() const noexcept;

  [[nodiscard]] std::uint64_t row(std::size_t ell) const;
  void set_row(std::size_t ell, std::uint64_t bits);
  [[nodiscard]] bool at(std::size_t k, int j) const;
  void set(std::size_t k, int j, bool value);

  [[nodiscard]] std::span<const std::uint64_t> rows() const noexcept { return rows_; }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::vector<std::uint64_t> rows_;
  int n_cols_ = 0;
};

/// Finite nonempty set of positive integers, stored strictly increasing.
class IndexSet {
 public:
  /// Accepts elements in any order; rejects empty input, duplicates and
  /// non-positive values.
  explicit IndexSet(std::vector<int> elements);
  IndexSet(std::initializer_list<int> elements);

  /// L_k = { ell : bit ell-1 of k is set }; k must be nonzero.
  static IndexSet from_walsh_index(std::uint64_t k);

  [[nodiscard]] std::span<const int> elements() const noexcept { return elements_; }
  [[nodiscard]] int card() const noexcept { return static_cast<int>(elements_.size()); }
  [[nodiscard]] long norm() const noexcept { return norm_; }
  [[nodiscard]] int max() const noexcept { return elements_.back(); }
  [[nodiscard]] int min() const noexcept { return elements_.front(); }
  /// j-th largest element, 1 <= j <= card().
  [[nodiscard]] int largest(int j) const;
  /// Sum of the u largest elements, 1 <= u <= card().
  [[nodiscard]] long top_norm(int u) const;
  [[nodiscard]] bool contains(int ell) const;
  /// Inverse of from_walsh_index; requires max() <= 64.
  [[nodiscard]] std::uint64_t walsh_index() const;

  friend bool operator==(const IndexSet& a, const IndexSet& b) { return a.elements_ == b.elements_; }
  friend bool operator<(const IndexSet& a, const IndexSet& b) { return a.elements_ < b.elements_; }

 private:
  std::vector<int> elements_;
  long norm_ = 0;
};

/// Symmetric difference.
IndexSet symmetric_difference(const IndexSet& a, const IndexSet& b);

/// GF(2) rank by row reduction.
int rank(const BitMatrix& mat);

/// GF(2) sum of rows ell in L. Throws std::out_of_range if max(L) > n_rows.
std::uint64_t xor_rows(const BitMatrix& mat, const IndexSet& L);

/// Single-consumer stream over every IndexSet of norm exactly N.
///
/// Sets come out in descending lexicographic order of their decreasing part
/// lists, e.g. N=5 yields {5}, {1,4}, {2,3}.
class IndexSetStream {
 public:
  explicit IndexSetStream(int N);
  std::optional<IndexSet> next();

 private:
  bool advance();

  int n_;
  std::vector<int> parts_;  // strictly decreasing
  bool started_ = false;
  bool done_ = false;
};

std::vector<IndexSet> enumerate_index_sets(int N);

struct DependentSet {
  long norm;
  IndexSet witness;
};

/// Smallest ||L||_1 <= n_max over sets whose rows XOR to zero, with the first
/// witness in enumeration order. Exhaustive: an empty result certifies that no
/// such set exists up to n_max.
std::optional<DependentSet> min_dependent_norm(const BitMatrix& mat, int n_max);

}  // namespace rqmc::gf2
