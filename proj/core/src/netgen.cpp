#include "rqmc/netgen.hpp"

#include <bit>
#include <cmath>

namespace rqmc::netgen {

namespace {

std::uint64_t low_mask(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

void check_precision(int m, int precision) {
  if (m < 0 || m > 63) throw std::invalid_argument("m must be in [0, 63]");
  if (precision < 1 || precision > 64) throw std::invalid_argument("precision E must be in [1, 64]");
  if (precision < m) throw std::invalid_argument("precision E must be >= m");
}

}  // namespace

std::string to_string(ScrambleKind kind) {
  switch (kind) {
    case ScrambleKind::random_linear: return "linear";
    case ScrambleKind::asm_striped: return "asm";
    case ScrambleKind::identity: return "none";
  }
  return "?";
}

std::string to_string(GeneratorKind kind) {
  return kind == GeneratorKind::identity ? "identity" : "sobol";
}

ScrambleKind parse_scramble_kind(const std::string& name) {
  if (name == "linear") return ScrambleKind::random_linear;
  if (name == "asm") return ScrambleKind::asm_striped;
  if (name == "none") return ScrambleKind::identity;
  throw std::invalid_argument("unknown scramble '" + name + "' (linear|asm|none)");
}

GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "identity") return GeneratorKind::identity;
  if (name == "sobol") return GeneratorKind::sobol_joe_kuo;
  throw std::invalid_argument("unknown generator '" + name + "' (identity|sobol)");
}

ScrambleMatrix::ScrambleMatrix(gf2::BitMatrix bits, ScrambleKind kind) : bits_(std::move(bits)), kind_(kind) {
  const int m = bits_.n_cols();
  check_precision(m, static_cast<int>(bits_.n_rows()));
  for (int k = 1; k <= m; ++k) {
    const auto row = bits_.row(static_cast<std::size_t>(k));
    const auto diag = std::uint64_t{1} << (k - 1);
    if ((row & diag) == 0 || (row & ~low_mask(k)) != 0) {
      throw std::invalid_argument("ScrambleMatrix: row " + std::to_string(k) +
                                  " breaks the unit lower triangular top block");
    }
  }
  if (kind_ == ScrambleKind::asm_striped) {
    for (std::size_t k = 1; k <= bits_.n_rows(); ++k) {
      if (bits_.row(k) != low_mask(std::min<int>(static_cast<int>(k), m))) {
        throw std::invalid_argument("ScrambleMatrix: not an affine striped matrix");
      }
    }
  }
}

DigitalShift::DigitalShift(std::uint64_t value, int precision, TailPolicy tail)
    : value_(value), precision_(precision), tail_(tail) {
  if (precision < 1 || precision > 64) throw std::invalid_argument("DigitalShift: precision must be in [1, 64]");
  if ((value & ~low_mask(precision)) != 0) throw std::invalid_argument("DigitalShift: value exceeds precision");
}

bool DigitalShift::bit(int k) const {
  if (k < 1) throw std::out_of_range("DigitalShift::bit: k must be >= 1");
  if (k > precision_) return false;
  return ((value_ >> (precision_ - k)) & 1U) != 0;
}

PointSet::PointSet(std::vector<std::uint64_t> values, int m, int precision)
    : values_(std::move(values)), m_(m), precision_(precision) {
  check_precision(m, precision);
  if (values_.size() != (std::size_t{1} << m)) throw std::invalid_argument("PointSet: need 2^m values");
  const auto mask = low_mask(precision);
  for (auto v : values_) {
    if ((v & ~mask) != 0) throw std::invalid_argument("PointSet: value exceeds precision");
  }
}

double PointSet::real(std::size_t i) const noexcept {
  const auto v = values_[i];
  if (precision_ > 53) return std::ldexp(static_cast<double>(v >> (precision_ - 53)), -53);
  return std::ldexp(static_cast<double>(v), -precision_);
}

bool PointSet::bit(std::size_t i, int k) const {
  if (k < 1) throw std::out_of_range("PointSet::bit: k must be >= 1");
  if (k > precision_) return false;
  return ((values_.at(i) >> (precision_ - k)) & 1U) != 0;
}

void NetConfig::validate() const {
  if (dimension < 1) throw std::invalid_argument("NetConfig: dimension must be >= 1");
  check_precision(m, precision);
}

gf2::BitMatrix generator_identity(int m) {
  if (m < 0 || m > 63) throw std::invalid_argument("generator_identity: m must be in [0, 63]");
  return gf2::BitMatrix::identity(m);
}

std::vector<gf2::BitMatrix> generator_sobol(const sobol::DirectionNumbers& dn, int d, int m) {
  if (d < 1) throw std::invalid_argument("generator_sobol: d must be >= 1");
  std::vector<gf2::BitMatrix> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int dim = 1; dim <= d; ++dim) {
    out.push_back(m == 0 ? gf2::BitMatrix(0, 0) : sobol::generator_matrix(dn, dim, m));
  }
  return out;
}

ScrambleMatrix random_linear_scramble(int m, int precision, Rng& rng) {
  check_precision(m, precision);
  gf2::BitMatrix bits(static_cast<std::size_t>(precision), m);
  const auto cols = low_mask(m);
  for (int k = 1; k <= precision; ++k) {
    const auto word = rng();
    const auto row = k <= m ? ((word & low_mask(k - 1)) | (std::uint64_t{1} << (k - 1))) : (word & cols);
    bits.set_row(static_cast<std::size_t>(k), row);
  }
  return ScrambleMatrix(std::move(bits), ScrambleKind::random_linear);
}

ScrambleMatrix asm_scramble(int m, int precision) {
  check_precision(m, precision);
  gf2::BitMatrix bits(static_cast<std::size_t>(precision), m);
  for (int k = 1; k <= precision; ++k) bits.set_row(static_cast<std::size_t>(k), low_mask(std::min(k, m)));
  return ScrambleMatrix(std::move(bits), ScrambleKind::asm_striped);
}

ScrambleMatrix identity_scramble(int m, int precision) {
  check_precision(m, precision);
  gf2::BitMatrix bits(static_cast<std::size_t>(precision), m);
  for (int k = 1; k <= m; ++k) bits.set_row(static_cast<std::size_t>(k), std::uint64_t{1} << (k - 1));
  return ScrambleMatrix(std::move(bits), ScrambleKind::identity);
}

DigitalShift random_digital_shift(int precision, Rng& rng) {
  return DigitalShift(rng() & low_mask(precision), precision, TailPolicy::zero);
}

PointSet generate_points(const gf2::BitMatrix& C, const ScrambleMatrix& M, const DigitalShift& D) {
  const int m = M.m();
  const int E = M.precision();
  if (C.n_cols() != m || static_cast<int>(C.n_rows()) != m) {
    throw std::invalid_argument("generate_points: generator must be m x m with m = " + std::to_string(m));
  }
  if (gf2::rank(C) != m) throw SingularGeneratorError("generate_points: generator matrix is singular");
  if (D.precision() != E) throw std::invalid_argument("generate_points: shift precision differs from E");

  // Column j of G = M C, packed so that row k lands at bit E-k.
  std::vector<std::uint64_t> cols(static_cast<std::size_t>(m), 0);
  const auto mrows = M.bits().rows();
  const auto crows = C.rows();
  for (int k = 1; k <= E; ++k) {
    std::uint64_t g = 0;
    for (auto mk = mrows[static_cast<std::size_t>(k - 1)]; mk != 0; mk &= mk - 1) {
      g ^= crows[static_cast<std::size_t>(std::countr_zero(mk))];
    }
    for (; g != 0; g &= g - 1) cols[static_cast<std::size_t>(std::countr_zero(g))] |= std::uint64_t{1} << (E - k);
  }

  const std::size_t n = std::size_t{1} << m;
  std::vector<std::uint64_t> values(n);
  values[0] = D.value();
  for (std::size_t i = 1; i < n; ++i) values[i] = values[i & (i - 1)] ^ cols[static_cast<std::size_t>(std::countr_zero(i))];
  return PointSet(std::move(values), m, E);
}

Rng derive_replicate_rng(std::uint64_t master_seed, std::uint64_t replicate_index, std::uint64_t stream) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(master_seed), hi(master_seed), lo(replicate_index), hi(replicate_index),
                    lo(stream),      hi(stream),      0x9e3779b9U};
  return Rng(seq);
}

}  // namespace rqmc::netgen
