#include "rqmc/sobol.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef RQMC_DEFAULT_DIRECTION_FILE
#define RQMC_DEFAULT_DIRECTION_FILE "new-joe-kuo-6.21.txt"
#endif

namespace rqmc::sobol {

namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

DirectionNumbers DirectionNumbers::parse(std::istream& in, const std::string& source) {
  DirectionNumbers out;
  std::string line;
  int lineno = 0;
  int last_d = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    // Header row ("d s a m_i") and comments.
    if (first.find_first_not_of("0123456789") != std::string::npos) {
      if (lineno == 1 || first[0] == '#') continue;
      fail(source, lineno, "expected dimension number, got '" + first + "'");
    }
    DirectionEntry e{};
    e.d = std::stoi(first);
    long long s = 0;
    long long a = 0;
    if (!(ls >> s >> a)) fail(source, lineno, "missing degree or polynomial field");
    if (e.d != last_d + 1) fail(source, lineno, "dimensions must increase by one starting at 2");
    if (s < 1 || s > 31) fail(source, lineno, "degree out of range");
    if (a < 0 || a >= (1LL << (s - 1)) ) fail(source, lineno, "polynomial coefficient out of range");
    e.s = static_cast<int>(s);
    e.a = static_cast<std::uint32_t>(a);
    long long mj = 0;
    while (ls >> mj) {
      const auto j = static_cast<int>(e.m.size()) + 1;
      if (mj <= 0 || mj % 2 == 0) fail(source, lineno, "direction integer m_" + std::to_string(j) + " must be odd");
      if (mj >= (1LL << j)) fail(source, lineno, "direction integer m_" + std::to_string(j) + " must be < 2^" + std::to_string(j));
      e.m.push_back(static_cast<std::uint32_t>(mj));
    }
    if (!ls.eof()) fail(source, lineno, "trailing garbage");
    if (static_cast<int>(e.m.size()) != e.s) fail(source, lineno, "expected s direction integers");
    last_d = e.d;
    out.entries_.push_back(std::move(e));
  }
  return out;
}

DirectionNumbers DirectionNumbers::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open direction-number file " + path.string());
  return parse(in, path.string());
}

std::filesystem::path DirectionNumbers::default_path() {
  if (const char* env = std::getenv(kDirectionFileEnv); env != nullptr && *env != '\0') return env;
  return RQMC_DEFAULT_DIRECTION_FILE;
}

DirectionNumbers DirectionNumbers::load_default() { return from_file(default_path()); }

std::vector<std::uint64_t> DirectionNumbers::direction_integers(int dim, int bits) const {
  if (dim < 1 || dim > max_dimension()) {
    throw std::out_of_range("Sobol dimension " + std::to_string(dim) + " not in direction table (max " +
                            std::to_string(max_dimension()) + ")");
  }
  if (bits < 0 || bits > 63) throw std::out_of_range("Sobol: bits must be in [0, 63]");
  std::vector<std::uint64_t> m(static_cast<std::size_t>(bits));
  if (dim == 1) {
    std::fill(m.begin(), m.end(), 1);
    return m;
  }
  const auto& e = entries_[static_cast<std::size_t>(dim - 2)];
  for (int j = 1; j <= bits; ++j) {
    if (j <= e.s) {
      m[j - 1] = e.m[j - 1];
      continue;
    }
    std::uint64_t v = (m[j - e.s - 1] << e.s) ^ m[j - e.s - 1];
    for (int k = 1; k < e.s; ++k) {
      if ((e.a >> (e.s - 1 - k)) & 1U) v ^= m[j - k - 1] << k;
    }
    m[j - 1] = v;
  }
  return m;
}

gf2::BitMatrix generator_matrix(const DirectionNumbers& dn, int dim, int m) {
  if (m < 1 || m > 32) throw std::out_of_range("Sobol generator: m must be in [1, 32]");
  const auto mj = dn.direction_integers(dim, m);
  gf2::BitMatrix c(static_cast<std::size_t>(m), m);
  for (int j = 1; j <= m; ++j) {
    // m_j / 2^j = sum_k bit_{j-k}(m_j) 2^{-k}
    for (int k = 1; k <= j; ++k) {
      if ((mj[j - 1] >> (j - k)) & 1U) c.set(static_cast<std::size_t>(k), j, true);
    }
  }
  return c;
}

}  // namespace rqmc::sobol
