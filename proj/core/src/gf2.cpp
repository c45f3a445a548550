#include "rqmc/gf2.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rqmc::gf2 {

namespace {

std::uint64_t mask_for(int n_cols) {
  return n_cols >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_cols) - 1;
}

void check_cols(int n_cols) {
  if (n_cols < 0 || n_cols > BitMatrix::kMaxCols) {
    throw std::invalid_argument("BitMatrix: column count " + std::to_string(n_cols) +
                                " outside [0, 64]");
  }
}

}  // namespace

BitMatrix::BitMatrix(std::size_t n_rows, int n_cols) : rows_(n_rows, 0), n_cols_(n_cols) {
  check_cols(n_cols);
}

BitMatrix::BitMatrix(std::vector<std::uint64_t> rows, int n_cols)
    : rows_(std::move(rows)), n_cols_(n_cols) {
  check_cols(n_cols);
  const auto mask = column_mask();
  for (auto r : rows_) {
    if ((r & ~mask) != 0) throw std::invalid_argument("BitMatrix: row has bits beyond column count");
  }
}

BitMatrix BitMatrix::identity(int n) {
  BitMatrix out(static_cast<std::size_t>(n), n);
  for (int k = 1; k <= n; ++k) out.set(static_cast<std::size_t>(k), k, true);
  return out;
}

BitMatrix BitMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  int n_cols = rows.size() == 0 ? 0 : static_cast<int>(rows.begin()->size());
  BitMatrix out(rows.size(), n_cols);
  std::size_t k = 1;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != n_cols) throw std::invalid_argument("BitMatrix: ragged rows");
    int j = 1;
    for (int v : r) out.set(k, j++, v != 0);
    ++k;
  }
  return out;
}

std::uint64_t BitMatrix::column_mask() const noexcept { return mask_for(n_cols_); }

std::uint64_t BitMatrix::row(std::size_t ell) const {
  if (ell < 1 || ell > rows_.size()) throw std::out_of_range("BitMatrix: row index out of range");
  return rows_[ell - 1];
}

void BitMatrix::set_row(std::size_t ell, std::uint64_t bits) {
  if (ell < 1 || ell > rows_.size()) throw std::out_of_range("BitMatrix: row index out of range");
  if ((bits & ~column_mask()) != 0) throw std::invalid_argument("BitMatrix: row has bits beyond column count");
  rows_[ell - 1] = bits;
}

bool BitMatrix::at(std::size_t k, int j) const {
  if (j < 1 || j > n_cols_) throw std::out_of_range("BitMatrix: column index out of range");
  return ((row(k) >> (j - 1)) & 1U) != 0;
}

void BitMatrix::set(std::size_t k, int j, bool value) {
  if (j < 1 || j > n_cols_) throw std::out_of_range("BitMatrix: column index out of range");
  auto r = row(k);
  const auto bit = std::uint64_t{1} << (j - 1);
  rows_[k - 1] = value ? (r | bit) : (r & ~bit);
}

IndexSet::IndexSet(std::vector<int> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw std::invalid_argument("IndexSet: empty");
  std::sort(elements_.begin(), elements_.end());
  if (elements_.front() < 1) throw std::invalid_argument("IndexSet: elements must be >= 1");
  if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end()) {
    throw std::invalid_argument("IndexSet: duplicate element");
  }
  norm_ = std::accumulate(elements_.begin(), elements_.end(), 0L);
}

IndexSet::IndexSet(std::initializer_list<int> elements) : IndexSet(std::vector<int>(elements)) {}

IndexSet IndexSet::from_walsh_index(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("IndexSet: L_0 is empty");
  std::vector<int> el;
  while (k != 0) {
    el.push_back(std::countr_zero(k) + 1);
    k &= k - 1;
  }
  return IndexSet(std::move(el));
}

int IndexSet::largest(int j) const {
  if (j < 1 || j > card()) throw std::out_of_range("IndexSet::largest: j out of range");
  return elements_[elements_.size() - static_cast<std::size_t>(j)];
}

long IndexSet::top_norm(int u) const {
  if (u < 1 || u > card()) throw std::out_of_range("IndexSet::top_norm: u out of range");
  return std::accumulate(elements_.end() - u, elements_.end(), 0L);
}

bool IndexSet::contains(int ell) const {
  return std::binary_search(elements_.begin(), elements_.end(), ell);
}

std::uint64_t IndexSet::walsh_index() const {
  if (max() > 64) throw std::out_of_range("IndexSet::walsh_index: element exceeds 64");
  std::uint64_t k = 0;
  for (int e : elements_) k |= std::uint64_t{1} << (e - 1);
  return k;
}

IndexSet symmetric_difference(const IndexSet& a, const IndexSet& b) {
  std::vector<int> out;
  std::set_symmetric_difference(a.elements().begin(), a.elements().end(), b.elements().begin(),
                                b.elements().end(), std::back_inserter(out));
  return IndexSet(std::move(out));
}

int rank(const BitMatrix& mat) {
  std::vector<std::uint64_t> rows(mat.rows().begin(), mat.rows().end());
  int r = 0;
  for (int col = 0; col < mat.n_cols() && r < static_cast<int>(rows.size()); ++col) {
    const auto bit = std::uint64_t{1} << col;
    auto pivot = std::find_if(rows.begin() + r, rows.end(), [bit](auto w) { return (w & bit) != 0; });
    if (pivot == rows.end()) continue;
    std::iter_swap(rows.begin() + r, pivot);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) != r && (rows[i] & bit) != 0) rows[i] ^= rows[r];
    }
    ++r;
  }
  return r;
}

std::uint64_t xor_rows(const BitMatrix& mat, const IndexSet& L) {
  if (static_cast<std::size_t>(L.max()) > mat.n_rows()) {
    throw std::out_of_range("xor_rows: index " + std::to_string(L.max()) + " exceeds row count " +
                            std::to_string(mat.n_rows()));
  }
  const auto rows = mat.rows();
  std::uint64_t acc = 0;
  for (int ell : L.elements()) acc ^= rows[static_cast<std::size_t>(ell - 1)];
  return acc;
}

IndexSetStream::IndexSetStream(int N) : n_(N) {
  if (N < 1) throw std::invalid_argument("IndexSetStream: N must be >= 1");
}

std::optional<IndexSet> IndexSetStream::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    parts_ = {n_};
  } else if (!advance()) {
    done_ = true;
    return std::nullopt;
  }
  return IndexSet(parts_);
}

// Moves to the next smaller decreasing part list: lower the rightmost part that
// can drop by one while the freed sum still fits below it in distinct parts,
// then refill greedily.
bool IndexSetStream::advance() {
  long tail = 0;
  for (std::size_t i = parts_.size(); i-- > 0;) {
    const long v = parts_[i] - 1;
    const long rest = tail + 1;
    tail += parts_[i];
    if (v < 1 || rest > v * (v - 1) / 2) continue;
    parts_.resize(i + 1);
    parts_[i] = static_cast<int>(v);
    long remaining = rest;
    long bound = v;
    while (remaining > 0) {
      const long a = std::min(bound - 1, remaining);
      parts_.push_back(static_cast<int>(a));
      remaining -= a;
      bound = a;
    }
    return true;
  }
  return false;
}

std::vector<IndexSet> enumerate_index_sets(int N) {
  std::vector<IndexSet> out;
  IndexSetStream stream(N);
  while (auto s = stream.next()) out.push_back(std::move(*s));
  return out;
}

std::optional<DependentSet> min_dependent_norm(const BitMatrix& mat, int n_max) {
  if (n_max < 1) throw std::invalid_argument("min_dependent_norm: N_max must be >= 1");
  if (mat.n_rows() < static_cast<std::size_t>(n_max)) {
    throw std::invalid_argument("min_dependent_norm: matrix has " + std::to_string(mat.n_rows()) +
                                " rows, need at least N_max = " + std::to_string(n_max));
  }
  for (int N = 1; N <= n_max; ++N) {
    IndexSetStream stream(N);
    while (auto L = stream.next()) {
      if (xor_rows(mat, *L) == 0) return DependentSet{N, std::move(*L)};
    }
  }
  return std::nullopt;
}

}  // namespace rqmc::gf2
