#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <memory>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

#include <CLI11.hpp>

#include "output.hpp"
#include "rqmc/estimator.hpp"
#include "rqmc/gf2.hpp"
#include "rqmc/integrands.hpp"
#include "rqmc/netgen.hpp"
#include "rqmc/partitions.hpp"
#include "rqmc/sobol.hpp"
#include "rqmc/walsh.hpp"

#ifndef RQMC_VERSION
#define RQMC_VERSION "0.0.0"
#endif

namespace rqmc::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using gf2::BitMatrix;
using gf2::IndexSet;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kDefaultSeed = 20240229;

struct ConvergeOptions {
  std::string integrand = "smooth1d";
  int m_min = 0;
  int m_max = 15;
  int bits = 64;
  int replicates = 250;
  int median_count = 11;
  std::uint64_t seed = kDefaultSeed;
  std::string scramble = "linear";
  std::string generator = "auto";
  std::string direction_file;
  int threads = 0;
  std::string out;
};

struct DecompositionOptions {
  int degree = 3;
  int m = 3;
  int configs = 20;
  int bits = 24;
  std::uint64_t seed = kDefaultSeed;
};

struct ChiOptions {
  int r_max = 4;
  int k_max = 64;
  int bound_r_max = 6;
  int bound_k_max = 256;
  int c_max = 20;
};

struct PartitionsOptions {
  int m_max = 50;
  int bidar_n_max = 2000;
};

struct ConcentrationOptions {
  std::vector<int> ms{8, 10, 12};
  int trials = 2000;
  std::uint64_t seed = kDefaultSeed;
};

struct IndependenceOptions {
  int pairs = 50;
  int max_element = 12;
  std::uint64_t seed = kDefaultSeed;
};

struct MindepOptions {
  int m = 10;
  int trials = 1000;
  long threshold = -1;
  std::uint64_t seed = kDefaultSeed;
  bool asm_matrix = false;
};

struct PartitionsDumpOptions {
  std::string table = "q";
  int n_max = 100;
  int m_max = 50;
  std::string out;
};

struct PointsDumpOptions {
  int m = 4;
  int bits = 32;
  int dim = 1;
  std::string generator = "auto";
  std::string scramble = "linear";
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t replicate = 0;
  std::string format = "real";
  bool raw = false;
  std::string direction_file;
  std::string out;
};

// Tallies PASS/FAIL lines for the verify family.
class CheckLog {
 public:
  explicit CheckLog(std::ostream& out) : out_(out) {}
  void record(bool ok, const std::string& line) {
    ++total_;
    if (ok) ++passed_;
    out_ << (ok ? "PASS " : "FAIL ") << line << '\n';
  }
  int finish(const std::string& target) {
    out_ << "verify " << target << ": " << passed_ << "/" << total_ << " checks passed\n";
    return passed_ == total_ ? kExitOk : kExitCheckFailed;
  }

 private:
  std::ostream& out_;
  int total_ = 0;
  int passed_ = 0;
};

std::string rat(const Rational& q) { return q.str(); }

BitMatrix random_nonsingular(netgen::Rng& rng, int m) {
  BitMatrix c(static_cast<std::size_t>(m), m);
  do {
    for (int k = 1; k <= m; ++k) c.set_row(static_cast<std::size_t>(k), rng() & c.column_mask());
  } while (gf2::rank(c) != m);
  return c;
}

// Rows of a random linear scramble without the 64-row cap of ScrambleMatrix.
BitMatrix random_scramble_rows(int m, int rows, netgen::Rng& rng) {
  BitMatrix M(static_cast<std::size_t>(rows), m);
  for (int k = 1; k <= rows; ++k) {
    std::uint64_t row = rng() & M.column_mask();
    if (k <= m) row = (row & ((std::uint64_t{1} << (k - 1)) - 1)) | (std::uint64_t{1} << (k - 1));
    M.set_row(static_cast<std::size_t>(k), row);
  }
  return M;
}

struct ConcentrationResult {
  long threshold;
  int hits;
  double fraction;
  double bound;
  double limit;  // bound plus three binomial standard errors
};

ConcentrationResult sample_concentration(int m, int trials, long threshold, std::uint64_t seed) {
  ConcentrationResult res{threshold, 0, 0.0, 0.4 / std::sqrt(static_cast<double>(m)), 0.0};
  res.limit = res.bound + 3.0 * std::sqrt(res.bound * (1 - res.bound) / trials);
  if (threshold <= 0) return res;
  const int rows = static_cast<int>(std::max<long>(threshold, m));
  for (int t = 0; t < trials; ++t) {
    auto rng = netgen::derive_replicate_rng(seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(m));
    if (gf2::min_dependent_norm(random_scramble_rows(m, rows, rng), static_cast<int>(threshold))) ++res.hits;
  }
  res.fraction = static_cast<double>(res.hits) / trials;
  return res;
}

netgen::GeneratorKind resolve_generator(const std::string& name, int dim) {
  if (name == "auto") return dim == 1 ? netgen::GeneratorKind::identity : netgen::GeneratorKind::sobol_joe_kuo;
  return netgen::parse_generator_kind(name);
}

std::shared_ptr<const sobol::DirectionNumbers> load_directions(const std::string& path) {
  if (path.empty()) return nullptr;
  return std::make_shared<const sobol::DirectionNumbers>(sobol::DirectionNumbers::from_file(path));
}

void write_manifest(const std::string& prefix, RunManifest manifest, double seconds) {
  manifest.tool_version = RQMC_VERSION;
  manifest.wall_seconds = seconds;
  const auto path = prefix + ".manifest.json";
  manifest.outputs.push_back(path);
  write_file(path, manifest.to_json().dump(2) + "\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- converge

int cmd_converge(const ConvergeOptions& o, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.median_count < 1 || o.median_count % 2 == 0) {
    throw UsageError("--median-count must be a positive odd number, got " + std::to_string(o.median_count));
  }
  if (o.m_min > o.m_max) throw UsageError("--m-min exceeds --m-max");
  if (o.m_max > o.bits) throw UsageError("--m-max exceeds --bits; a net with 2^m points needs E >= m");

  const auto f = integrands::lookup(o.integrand);
  estimator::ExperimentConfig cfg;
  cfg.integrand = o.integrand;
  cfg.net.precision = o.bits;
  cfg.net.dimension = f.dim;
  cfg.net.scramble = netgen::parse_scramble_kind(o.scramble);
  cfg.net.generator = resolve_generator(o.generator, f.dim);
  cfg.net.seed = o.seed;
  cfg.k = estimator::k_from_count(o.median_count);
  cfg.R = o.replicates;
  cfg.threads = o.threads;
  cfg.directions = load_directions(o.direction_file);
  for (int m = o.m_min; m <= o.m_max; ++m) cfg.m_range.push_back(m);
  cfg.validate();

  const auto report = estimator::run_experiment(cfg);

  CsvWriter csv({"m", "n", "rmse_median", "rmse_plain", "rmse_mean_proxy"});
  Series med{"median of " + std::to_string(o.median_count), {}, {}};
  Series plain{"plain RQMC", {}, {}};
  Series proxy{"plain / sqrt(" + std::to_string(o.median_count) + ")", {}, {}};
  for (const auto& r : report.records) {
    csv.add_row({std::to_string(r.m), std::to_string(r.n), format_double(r.rmse_median), format_double(r.rmse_plain),
                 format_double(r.rmse_mean_proxy)});
    med.x.push_back(r.m);
    med.y.push_back(r.rmse_median);
    plain.x.push_back(r.m);
    plain.y.push_back(r.rmse_plain);
    proxy.x.push_back(r.m);
    proxy.y.push_back(r.rmse_mean_proxy);
  }

  if (o.out.empty()) {
    out << csv.str();
    return kExitOk;
  }

  // n^{-3/2} through the plain value at the smallest m, and the same line
  // lowered by sqrt(count).
  const auto& first = report.records.front();
  Series ref{"n^-3/2", {}, {}};
  Series ref_mean{"n^-3/2 / sqrt(" + std::to_string(o.median_count) + ")", {}, {}};
  for (const auto& r : report.records) {
    const double v = first.rmse_plain * std::exp2(-1.5 * (r.m - first.m));
    ref.x.push_back(r.m);
    ref.y.push_back(v);
    ref_mean.x.push_back(r.m);
    ref_mean.y.push_back(v / std::sqrt(static_cast<double>(o.median_count)));
  }

  const std::string csv_path = o.out + ".csv";
  const std::string svg_path = o.out + ".svg";
  write_file(csv_path, csv.str());
  emit_svg({med, plain, proxy}, {ref, ref_mean},
           o.integrand + ", E=" + std::to_string(o.bits) + ", R=" + std::to_string(o.replicates), svg_path);

  RunManifest manifest;
  manifest.subcommand = "converge";
  manifest.seed = o.seed;
  manifest.config = {{"integrand", o.integrand},       {"m-min", o.m_min},       {"m-max", o.m_max},
                     {"bits", o.bits},                 {"replicates", o.replicates},
                     {"median-count", o.median_count}, {"seed", o.seed},         {"scramble", o.scramble},
                     {"generator", o.generator}};
  if (!o.direction_file.empty()) manifest.config["direction-file"] = o.direction_file;
  manifest.outputs = {csv_path, svg_path};
  write_manifest(o.out, manifest, seconds_since(t0));

  out << "wrote " << csv_path << ", " << svg_path << ", " << o.out << ".manifest.json\n";
  try {
    const auto fit = estimator::fit_rate(report, estimator::Track::plain, estimator::FitKind::linear);
    out << "plain RQMC slope (m >= 4): " << format_double(fit.slope) << '\n';
  } catch (const std::domain_error&) {
    // too few positive points to fit
  }
  return kExitOk;
}

// ---------------------------------------------------------------- verify

int verify_decomposition(const DecompositionOptions& o, std::ostream& out) {
  if (o.degree < 0 || o.m < 1 || o.configs < 0 || o.bits < 1) throw UsageError("verify decomposition: bad sizes");
  CheckLog log(out);
  netgen::Rng rng(o.seed);
  auto report = [&](const std::string& name, const Rational& direct, const walsh::DecompositionReport& rep) {
    const Rational diff = direct - rep.truncated_sum;
    log.record(walsh::decomposition_holds(direct, rep),
               name + ": direct " + rat(direct) + ", truncated " + format_double(rep.truncated_sum.convert_to<double>()) +
                   ", |diff| " + format_double(boost::multiprecision::abs(diff).convert_to<double>()) + " <= bound " +
                   format_double(rep.truncation_bound) + " (" + std::to_string(rep.contributing_sets.size()) +
                   " contributing sets)");
  };
  for (int t = 0; t < o.configs; ++t) {
    std::vector<Rational> coef;
    for (int r = 0; r <= o.degree; ++r) {
      coef.emplace_back(static_cast<long>(rng() % 11) - 5, 1 + static_cast<long>(rng() % 6));
    }
    if (coef.back() == 0) coef.back() = 1;
    const walsh::Polynomial f(coef);
    const auto C = random_nonsingular(rng, o.m);
    const auto M = netgen::random_linear_scramble(o.m, o.bits, rng);
    const auto D = netgen::random_digital_shift(o.bits, rng);
    const auto direct = walsh::direct_error(f, C, M, D, o.bits);
    report("config " + std::to_string(t + 1), direct, walsh::error_decomposition(f, C, M, D, o.bits, o.bits));
  }
  // f(x) = x, m = 1, M = e_1 on 24 rows, D = 0: error -1/4.
  BitMatrix rows(24, 1);
  rows.set_row(1, 1);
  const netgen::ScrambleMatrix M(rows, netgen::ScrambleKind::random_linear);
  const walsh::Polynomial x({0, 1});
  const auto D = netgen::DigitalShift::zero(24);
  const auto direct = walsh::direct_error(x, BitMatrix::identity(1), M, D, 20);
  report("f(x)=x, m=1, unscrambled", direct, walsh::error_decomposition(x, BitMatrix::identity(1), M, D, 20, 20));
  return log.finish("decomposition");
}

int verify_chi(const ChiOptions& o, std::ostream& out) {
  if (o.r_max < 0 || o.bound_r_max < 0 || o.k_max < 1 || o.bound_k_max < 1 || o.c_max < 1) {
    throw UsageError("verify chi: bad ranges");
  }
  CheckLog log(out);
  int cases = 0;
  std::vector<std::string> bad;
  for (int r = 0; r <= o.r_max; ++r) {
    for (std::uint64_t k = 1; k <= static_cast<std::uint64_t>(o.k_max); ++k) {
      if (r >= IndexSet::from_walsh_index(k).card()) continue;
      ++cases;
      if (walsh::chi(r, k) != 0) bad.push_back("(" + std::to_string(r) + "," + std::to_string(k) + ")");
    }
  }
  log.record(bad.empty(), "chi_{r,k} = 0 whenever r < |k|: " + std::to_string(cases - static_cast<int>(bad.size())) +
                              "/" + std::to_string(cases) + (bad.empty() ? "" : ", first failure " + bad.front()));

  cases = 0;
  bad.clear();
  for (int r = 0; r <= o.bound_r_max; ++r) {
    for (std::uint64_t k = 1; k <= static_cast<std::uint64_t>(o.bound_k_max); ++k) {
      const int card = IndexSet::from_walsh_index(k).card();
      for (int u = 1; u <= card; ++u) {
        ++cases;
        if (!walsh::chi_bound_check(r, k, u)) {
          bad.push_back("(" + std::to_string(r) + "," + std::to_string(k) + ",u=" + std::to_string(u) + ")");
        }
      }
    }
  }
  log.record(bad.empty(), "|chi_{r,k}| <= bound for every u <= |k|: " +
                              std::to_string(cases - static_cast<int>(bad.size())) + "/" + std::to_string(cases) +
                              (bad.empty() ? "" : ", first failure " + bad.front()));

  cases = 0;
  bad.clear();
  for (int r = 0; r <= o.bound_r_max; ++r) {
    for (std::uint64_t k = 1; k <= static_cast<std::uint64_t>(o.k_max); ++k) {
      ++cases;
      if (!walsh::chi_recursion_check(r, k, o.c_max)) {
        bad.push_back("(" + std::to_string(r) + "," + std::to_string(k) + ")");
      }
    }
  }
  log.record(bad.empty(), "recursion with c_max=" + std::to_string(o.c_max) + ": " +
                              std::to_string(cases - static_cast<int>(bad.size())) + "/" + std::to_string(cases) +
                              (bad.empty() ? "" : ", first failure " + bad.front()));
  return log.finish("chi");
}

int verify_partitions(const PartitionsOptions& o, std::ostream& out) {
  if (o.m_max < 1 || o.bidar_n_max < 1) throw UsageError("verify partitions: --m-max and --bidar-n-max must be >= 1");
  CheckLog log(out);
  for (long m = 1; m <= o.m_max; ++m) {
    const auto v = partitions::check_lemma_combinatorics(m);
    log.record(v.holds, "m=" + std::to_string(m) + ": #{L : ||L|| <= " + std::to_string(v.threshold) +
                            "} = " + v.count.str() + " vs 0.4 2^m/sqrt(m) = " + format_double(v.bound) +
                            (v.near_boundary ? " (threshold near an integer)" : ""));
  }
  const auto& table = partitions::shared_table(o.bidar_n_max);
  long first_bad = 0;
  for (long n = 1; n <= o.bidar_n_max && first_bad == 0; ++n) {
    if (!partitions::satisfies_bidar(table.q_distinct(n), n)) first_bad = n;
  }
  log.record(first_bad == 0, "q(N) <= Bidar bound for N <= " + std::to_string(o.bidar_n_max) +
                                 (first_bad ? ", fails at N=" + std::to_string(first_bad) : ""));
  return log.finish("partitions");
}

int verify_concentration(const ConcentrationOptions& o, std::ostream& out) {
  if (o.trials < 1) throw UsageError("verify concentration: --trials must be >= 1");
  CheckLog log(out);
  for (int m : o.ms) {
    if (m < 1 || m > 64) throw UsageError("verify concentration: m must lie in 1..64");
    const long th = partitions::lambda_threshold(m).value;
    const auto r = sample_concentration(m, o.trials, th, o.seed);
    log.record(r.fraction < r.limit, "m=" + std::to_string(m) + ", threshold " + std::to_string(th) + ": fraction " +
                                         format_double(r.fraction) + " < " + format_double(r.limit) +
                                         " (0.4/sqrt(m) = " + format_double(r.bound) + " plus 3 SE)");
  }
  return log.finish("concentration");
}

int verify_independence(const IndependenceOptions& o, std::ostream& out) {
  if (o.pairs < 1 || o.max_element < 2 || o.max_element > 30) {
    throw UsageError("verify independence: need --pairs >= 1 and 2 <= --max-element <= 30");
  }
  CheckLog log(out);
  netgen::Rng rng(o.seed);
  auto draw = [&] {
    std::vector<int> v;
    for (int i = 1; i <= o.max_element; ++i) {
      if (rng() % 3 == 0) v.push_back(i);
    }
    if (v.empty()) v.push_back(1 + static_cast<int>(rng() % static_cast<unsigned>(o.max_element)));
    return IndexSet(v);
  };
  auto show = [](const IndexSet& s) {
    std::string str = "{";
    for (int e : s.elements()) str += (str.size() > 1 ? "," : "") + std::to_string(e);
    return str + "}";
  };
  int done = 0;
  while (done < o.pairs) {
    const auto a = draw();
    const auto b = draw();
    if (a == b) continue;
    ++done;
    const auto p = walsh::sign_independence_check(a, b);
    log.record(p.p1 == Rational(1, 2) && p.p11 == Rational(1, 4),
               show(a) + " " + show(b) + ": P(S=1) = " + rat(p.p1) + ", P(S=S'=1) = " + rat(p.p11));
  }
  return log.finish("independence");
}

// ---------------------------------------------------------------- mindep

int cmd_mindep(const MindepOptions& o, std::ostream& out) {
  if (o.m < 1 || o.m > 64) throw UsageError("--m must lie in 1..64");
  if (o.trials < 1) throw UsageError("--trials must be >= 1");
  const long th = o.threshold >= 0 ? o.threshold : partitions::lambda_threshold(o.m).value;
  out << "m = " << o.m << ", threshold = " << th << '\n';
  if (o.asm_matrix) {
    const long rows = std::max<long>({th, 2L * o.m + 1, o.m});
    if (rows > 64) throw UsageError("--asm needs max(threshold, 2m+1) <= 64 rows");
    const auto M = netgen::asm_scramble(o.m, static_cast<int>(rows));
    const auto dep = gf2::min_dependent_norm(M.bits(), static_cast<int>(rows));
    if (dep) {
      std::string w;
      for (int e : dep->witness.elements()) w += (w.empty() ? "" : ",") + std::to_string(e);
      out << "ASM min dependent norm = " << dep->norm << " (rows {" << w << "}), "
          << (dep->norm <= th ? "within" : "above") << " threshold\n";
    } else {
      out << "ASM: no dependent set of norm <= " << rows << '\n';
    }
    return kExitOk;
  }
  const auto r = sample_concentration(o.m, o.trials, th, o.seed);
  out << "trials = " << o.trials << ", hits = " << r.hits << ", fraction = " << format_double(r.fraction) << '\n';
  out << "bound 0.4/sqrt(m) = " << format_double(r.bound) << ", with 3 SE slack = " << format_double(r.limit) << '\n';
  const bool ok = r.fraction < r.limit;
  out << (ok ? "PASS" : "FAIL") << " fraction below bound\n";
  return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- dumps

int emit_table(const CsvWriter& csv, const std::string& prefix, RunManifest manifest,
               std::chrono::steady_clock::time_point t0, std::ostream& out) {
  if (prefix.empty()) {
    out << csv.str();
    return kExitOk;
  }
  const std::string path = prefix + ".csv";
  write_file(path, csv.str());
  manifest.outputs = {path};
  write_manifest(prefix, std::move(manifest), seconds_since(t0));
  out << "wrote " << path << ", " << prefix << ".manifest.json\n";
  return kExitOk;
}

int cmd_partitions_dump(const PartitionsDumpOptions& o, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.subcommand = "partitions-dump";
  manifest.config = {{"table", o.table}};
  if (o.table == "q") {
    if (o.n_max < 1) throw UsageError("--n-max must be >= 1");
    manifest.config["n-max"] = o.n_max;
    const auto& t = partitions::shared_table(o.n_max);
    CsvWriter csv({"N", "q_distinct", "cumulative"});
    for (long n = 0; n <= o.n_max; ++n) csv.add_row({std::to_string(n), t.q_distinct(n).str(), t.cumulative(n).str()});
    return emit_table(csv, o.out, manifest, t0, out);
  }
  if (o.table == "lemma") {
    if (o.m_max < 1) throw UsageError("--m-max must be >= 1");
    manifest.config["m-max"] = o.m_max;
    CsvWriter csv({"m", "threshold", "count", "bound", "holds"});
    for (long m = 1; m <= o.m_max; ++m) {
      const auto v = partitions::check_lemma_combinatorics(m);
      csv.add_row({std::to_string(m), std::to_string(v.threshold), v.count.str(), format_double(v.bound),
                   v.holds ? "true" : "false"});
    }
    return emit_table(csv, o.out, manifest, t0, out);
  }
  throw UsageError("--table must be q or lemma");
}

int cmd_points_dump(const PointsDumpOptions& o, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.format != "real" && o.format != "int") throw UsageError("--format must be real or int");
  if (o.dim < 1) throw UsageError("--dim must be >= 1");
  estimator::ExperimentConfig cfg;
  cfg.net.m = o.m;
  cfg.net.precision = o.bits;
  cfg.net.dimension = o.dim;
  cfg.net.generator = resolve_generator(o.generator, o.dim);
  cfg.net.scramble = netgen::parse_scramble_kind(o.scramble);
  cfg.net.seed = o.seed;
  cfg.directions = load_directions(o.direction_file);
  cfg.net.validate();
  if (o.m > 24) throw UsageError("--m above 24 would dump more than 16M rows");

  const auto gens = estimator::generators_for(cfg, o.dim, o.m);
  std::vector<netgen::PointSet> coords;
  if (o.raw) {
    for (const auto& C : gens) {
      coords.push_back(netgen::generate_points(C, netgen::identity_scramble(o.m, o.bits), netgen::DigitalShift::zero(o.bits)));
    }
  } else {
    coords = estimator::replicate_points(cfg.net, gens, o.replicate);
  }
  std::vector<std::string> header{"i"};
  for (int j = 1; j <= o.dim; ++j) header.push_back("x" + std::to_string(j));
  CsvWriter csv(header);
  for (std::size_t i = 0; i < coords.front().size(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (const auto& c : coords) row.push_back(o.format == "real" ? format_double(c.real(i)) : std::to_string(c.value(i)));
    csv.add_row(std::move(row));
  }
  RunManifest manifest;
  manifest.subcommand = "points-dump";
  manifest.seed = o.seed;
  manifest.config = {{"m", o.m},           {"bits", o.bits},         {"dim", o.dim},
                     {"generator", o.generator}, {"scramble", o.scramble}, {"seed", o.seed},
                     {"replicate", o.replicate}, {"format", o.format}, {"raw", o.raw}};
  if (!o.direction_file.empty()) manifest.config["direction-file"] = o.direction_file;
  return emit_table(csv, o.out, manifest, t0, out);
}

// ---------------------------------------------------------------- manifests

// "cmd ... --from-manifest FILE ..." becomes "cmd <flags from FILE> ...";
// flags given explicitly on the command line win.
std::vector<std::string> expand_manifest(const std::vector<std::string>& args) {
  auto it = std::find(args.begin(), args.end(), "--from-manifest");
  if (it == args.end()) return args;
  if (it + 1 == args.end()) throw UsageError("--from-manifest needs a file");
  const auto manifest = RunManifest::from_json(json::parse(read_file(*(it + 1))));
  if (args.empty() || args.front() != manifest.subcommand) {
    throw UsageError("manifest was written by '" + manifest.subcommand + "'");
  }
  std::vector<std::string> rest;
  std::set<std::string> given;
  for (auto a = args.begin() + 1; a != args.end(); ++a) {
    if (a == it) {
      ++a;
      continue;
    }
    if (a->rfind("--", 0) == 0) given.insert(a->substr(2, a->find('=') == std::string::npos ? std::string::npos : a->find('=') - 2));
    rest.push_back(*a);
  }
  std::vector<std::string> expanded{manifest.subcommand};
  for (const auto& [key, value] : manifest.config.items()) {
    if (given.count(key)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) expanded.push_back("--" + key);
    } else {
      expanded.push_back("--" + key);
      expanded.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  expanded.insert(expanded.end(), rest.begin(), rest.end());
  return expanded;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app("Randomized QMC on base-2 digital nets with median-of-estimates error control", "rqmc");
  app.set_version_flag("--version", RQMC_VERSION);
  app.require_subcommand(1);

  ConvergeOptions conv;
  auto* converge = app.add_subcommand("converge", "RMSE of plain and median RQMC estimates over a range of m");
  converge->add_option("--integrand", conv.integrand, "smooth1d, holder1d, otl6d, const[:c] or poly:a0,a1,...")
      ->capture_default_str();
  converge->add_option("--m-min", conv.m_min)->capture_default_str()->check(CLI::Range(0, 64));
  converge->add_option("--m-max", conv.m_max)->capture_default_str()->check(CLI::Range(0, 64));
  converge->add_option("--bits", conv.bits, "precision E of each coordinate")->capture_default_str()->check(CLI::Range(1, 64));
  converge->add_option("--replicates", conv.replicates, "R")->capture_default_str()->check(CLI::PositiveNumber);
  converge->add_option("--median-count", conv.median_count, "odd number 2k-1 of estimates per median")
      ->capture_default_str();
  converge->add_option("--seed", conv.seed)->capture_default_str();
  converge->add_option("--scramble", conv.scramble)->capture_default_str()->check(CLI::IsMember({"linear", "asm", "none"}));
  converge->add_option("--generator", conv.generator, "auto picks identity in 1-D and sobol otherwise")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "identity", "sobol"}));
  converge->add_option("--direction-file", conv.direction_file, "Joe-Kuo table (default: $RQMC_SOBOL_DIRECTIONS)");
  converge->add_option("--threads", conv.threads, "0 uses every core; results do not depend on it")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  converge->add_option("--out", conv.out, "path prefix for .csv, .svg and .manifest.json (CSV to stdout if absent)");
  std::string manifest_path;
  converge->add_option("--from-manifest", manifest_path, "rerun the configuration recorded in a manifest");

  auto* verify = app.add_subcommand("verify", "exact checks of the underlying lemmas");
  verify->require_subcommand(1);
  DecompositionOptions dec;
  auto* v_dec = verify->add_subcommand("decomposition", "direct error vs Walsh decomposition on random polynomials");
  v_dec->add_option("--degree", dec.degree)->capture_default_str();
  v_dec->add_option("--m", dec.m)->capture_default_str()->check(CLI::Range(1, 8));
  v_dec->add_option("--configs", dec.configs)->capture_default_str();
  v_dec->add_option("--bits", dec.bits, "rows checked and largest set norm enumerated")->capture_default_str()->check(CLI::Range(1, 40));
  v_dec->add_option("--seed", dec.seed)->capture_default_str();
  ChiOptions chi;
  auto* v_chi = verify->add_subcommand("chi", "vanishing, bound and recursion of the monomial Walsh coefficients");
  v_chi->add_option("--r-max", chi.r_max)->capture_default_str()->check(CLI::Range(0, 12));
  v_chi->add_option("--k-max", chi.k_max)->capture_default_str()->check(CLI::Range(1, 1 << 20));
  v_chi->add_option("--bound-r-max", chi.bound_r_max)->capture_default_str()->check(CLI::Range(0, 12));
  v_chi->add_option("--bound-k-max", chi.bound_k_max)->capture_default_str()->check(CLI::Range(1, 1 << 20));
  v_chi->add_option("--c-max", chi.c_max)->capture_default_str()->check(CLI::Range(1, 40));
  PartitionsOptions part;
  auto* v_part = verify->add_subcommand("partitions", "counting bound on index sets and the Bidar bound");
  v_part->add_option("--m-max", part.m_max)->capture_default_str()->check(CLI::Range(1, 512));
  v_part->add_option("--bidar-n-max", part.bidar_n_max)->capture_default_str()->check(CLI::Range(1, 100000));
  ConcentrationOptions conc;
  auto* v_conc = verify->add_subcommand("concentration", "fraction of scrambles with a short dependent set");
  v_conc->add_option("--m", conc.ms, "one or more m")->capture_default_str();
  v_conc->add_option("--trials", conc.trials)->capture_default_str();
  v_conc->add_option("--seed", conc.seed)->capture_default_str();
  IndependenceOptions ind;
  auto* v_ind = verify->add_subcommand("independence", "pairwise independence of decomposition signs");
  v_ind->add_option("--pairs", ind.pairs)->capture_default_str();
  v_ind->add_option("--max-element", ind.max_element)->capture_default_str();
  v_ind->add_option("--seed", ind.seed)->capture_default_str();

  MindepOptions md;
  auto* mindep = app.add_subcommand("mindep", "sample the minimal dependent norm of random scrambles");
  mindep->add_option("--m", md.m)->capture_default_str();
  mindep->add_option("--trials", md.trials)->capture_default_str();
  mindep->add_option("--threshold", md.threshold, "default floor(lambda m^2)");
  mindep->add_option("--seed", md.seed)->capture_default_str();
  mindep->add_flag("--asm", md.asm_matrix, "use the deterministic ASM matrix instead");

  PartitionsDumpOptions pd;
  auto* pdump = app.add_subcommand("partitions-dump", "CSV of q(N) and cumulative counts, or the per-m lemma table");
  pdump->add_option("--table", pd.table, "q or lemma")->capture_default_str()->check(CLI::IsMember({"q", "lemma"}));
  pdump->add_option("--n-max", pd.n_max)->capture_default_str();
  pdump->add_option("--m-max", pd.m_max)->capture_default_str();
  pdump->add_option("--out", pd.out, "path prefix for .csv and .manifest.json (stdout if absent)");
  pdump->add_option("--from-manifest", manifest_path, "rerun the configuration recorded in a manifest");

  PointsDumpOptions pts;
  auto* points = app.add_subcommand("points-dump", "CSV of one randomized net, as used by converge");
  points->add_option("--m", pts.m)->capture_default_str()->check(CLI::Range(0, 64));
  points->add_option("--bits", pts.bits)->capture_default_str()->check(CLI::Range(1, 64));
  points->add_option("--dim", pts.dim)->capture_default_str();
  points->add_option("--generator", pts.generator)->capture_default_str()->check(CLI::IsMember({"auto", "identity", "sobol"}));
  points->add_option("--scramble", pts.scramble)->capture_default_str()->check(CLI::IsMember({"linear", "asm", "none"}));
  points->add_option("--seed", pts.seed)->capture_default_str();
  points->add_option("--replicate", pts.replicate)->capture_default_str();
  points->add_option("--format", pts.format, "real or int (E-bit integers)")->capture_default_str()->check(CLI::IsMember({"real", "int"}));
  points->add_flag("--raw", pts.raw, "no scramble and no digital shift");
  points->add_option("--direction-file", pts.direction_file);
  points->add_option("--out", pts.out, "path prefix for .csv and .manifest.json (stdout if absent)");
  points->add_option("--from-manifest", manifest_path, "rerun the configuration recorded in a manifest");

  try {
    const auto args = expand_manifest(raw_args);
    std::vector<const char*> argv{"rqmc"};
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "rqmc: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "rqmc: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*converge) return cmd_converge(conv, out);
    if (*v_dec) return verify_decomposition(dec, out);
    if (*v_chi) return verify_chi(chi, out);
    if (*v_part) return verify_partitions(part, out);
    if (*v_conc) return verify_concentration(conc, out);
    if (*v_ind) return verify_independence(ind, out);
    if (*mindep) return cmd_mindep(md, out);
    if (*pdump) return cmd_partitions_dump(pd, out);
    if (*points) return cmd_points_dump(pts, out);
  } catch (const UsageError& e) {
    err << "rqmc: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "rqmc: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "rqmc: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace rqmc::cli
