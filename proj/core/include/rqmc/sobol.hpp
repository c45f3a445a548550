#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rqmc/gf2.hpp"

namespace rqmc::sobol {

/// Environment variable consulted for the direction-number file path.
inline constexpr const char* kDirectionFileEnv = "RQMC_SOBOL_DIRECTIONS";

/// One line of a Joe-Kuo table: "d s a m_1 .. m_s".
struct DirectionEntry {
  int d;
  int s;                         // degree of the primitive polynomial
  std::uint32_t a;               // interior polynomial coefficients
  std::vector<std::uint32_t> m;  // initial direction integers, all odd, m_j < 2^j
};

/// Parsed Joe-Kuo direction numbers. Coordinate 1 is implicit (identity).
class DirectionNumbers {
 public:
  /// Throws std::runtime_error naming the offending line on malformed input.
  static DirectionNumbers parse(std::istream& in, const std::string& source = "<stream>");
  static DirectionNumbers from_file(const std::filesystem::path& path);
  /// Uses $RQMC_SOBOL_DIRECTIONS, then the bundled table.
  static DirectionNumbers load_default();
  static std::filesystem::path default_path();

  [[nodiscard]] int max_dimension() const noexcept { return static_cast<int>(entries_.size()) + 1; }
  [[nodiscard]] const std::vector<DirectionEntry>& entries() const noexcept { return entries_; }

  /// Direction integers m_1..m_bits of coordinate dim (1-based).
  [[nodiscard]] std::vector<std::uint64_t> direction_integers(int dim, int bits) const;

 private:
  std::vector<DirectionEntry> entries_;
};

/// Generator matrix for one coordinate: column j holds the bits of m_j / 2^j,
/// so the matrix is upper triangular with a unit diagonal.
gf2::BitMatrix generator_matrix(const DirectionNumbers& dn, int dim, int m);

}  // namespace rqmc::sobol
