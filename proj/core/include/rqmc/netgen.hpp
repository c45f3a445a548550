#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqmc/gf2.hpp"
#include "rqmc/sobol.hpp"

namespace rqmc::netgen {

using Rng = std::mt19937_64;

/// Raised when a generator matrix is singular over GF(2).
class SingularGeneratorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ScrambleKind { random_linear, asm_striped, identity };
enum class GeneratorKind { identity, sobol_joe_kuo };
enum class TailPolicy { zero, unspecified };

std::string to_string(ScrambleKind kind);
std::string to_string(GeneratorKind kind);
ScrambleKind parse_scramble_kind(const std::string& name);
GeneratorKind parse_generator_kind(const std::string& name);

/// E x m scrambling matrix whose top m x m block is unit lower triangular.
class ScrambleMatrix {
 public:
  /// Validates the triangular structure and, for asm_striped, the stripe
  /// pattern. Throws std::invalid_argument on violation.
  ScrambleMatrix(gf2::BitMatrix bits, ScrambleKind kind);

  [[nodiscard]] const gf2::BitMatrix& bits() const noexcept { return bits_; }
  [[nodiscard]] ScrambleKind kind() const noexcept { return kind_; }
  [[nodiscard]] int precision() const noexcept { return static_cast<int>(bits_.n_rows()); }
  [[nodiscard]] int m() const noexcept { return bits_.n_cols(); }

 private:
  gf2::BitMatrix bits_;
  ScrambleKind kind_;
};

/// First E bits of a digital shift D. Bit k (k = 1 is the most significant)
/// sits at position E-k of value(); bits past E follow tail_policy.
class DigitalShift {
 public:
  DigitalShift(std::uint64_t value, int precision, TailPolicy tail = TailPolicy::zero);
  static DigitalShift zero(int precision) { return DigitalShift(0, precision); }

  [[nodiscard]] std::uint64_t value() const noexcept { return value_; }
  [[nodiscard]] int precision() const noexcept { return precision_; }
  [[nodiscard]] TailPolicy tail_policy() const noexcept { return tail_; }
  [[nodiscard]] bool bit(int k) const;

 private:
  std::uint64_t value_;
  int precision_;
  TailPolicy tail_;
};

/// n = 2^m points of one coordinate as E-bit fixed-point integers.
class PointSet {
 public:
  PointSet(std::vector<std::uint64_t> values, int m, int precision);

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] int m() const noexcept { return m_; }
  [[nodiscard]] int precision() const noexcept { return precision_; }
  [[nodiscard]] const std::vector<std::uint64_t>& values() const noexcept { return values_; }
  [[nodiscard]] std::uint64_t value(std::size_t i) const { return values_.at(i); }
  /// value / 2^E; precisions above 53 bits are truncated, never rounded up to 1.
  [[nodiscard]] double real(std::size_t i) const noexcept;
  /// Bit k (1-based, most significant first) of point i.
  [[nodiscard]] bool bit(std::size_t i, int k) const;

 private:
  std::vector<std::uint64_t> values_;
  int m_;
  int precision_;
};

struct NetConfig {
  int m = 0;
  int precision = 64;
  int dimension = 1;
  GeneratorKind generator = GeneratorKind::identity;
  ScrambleKind scramble = ScrambleKind::random_linear;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument if m < 0, E < m, E > 64 or d < 1.
  void validate() const;
};

gf2::BitMatrix generator_identity(int m);

/// One generator matrix per coordinate; coordinate 1 is the identity.
std::vector<gf2::BitMatrix> generator_sobol(const sobol::DirectionNumbers& dn, int d, int m);

ScrambleMatrix random_linear_scramble(int m, int precision, Rng& rng);
ScrambleMatrix asm_scramble(int m, int precision);
/// Identity on the first m rows, zero below.
ScrambleMatrix identity_scramble(int m, int precision);

DigitalShift random_digital_shift(int precision, Rng& rng);

/// x_i = M C i + D over GF(2), i's bits least significant first.
///
/// Uses the first E = M.precision() rows; m = 0 yields the single point D.
PointSet generate_points(const gf2::BitMatrix& C, const ScrambleMatrix& M, const DigitalShift& D);

/// Independent engine for (master_seed, replicate_index, stream). The same
/// triple always yields the same engine, regardless of call order or thread.
Rng derive_replicate_rng(std::uint64_t master_seed, std::uint64_t replicate_index,
                         std::uint64_t stream = 0);

}  // namespace rqmc::netgen
