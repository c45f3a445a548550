#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rqmc/integrands.hpp"
#include "rqmc/netgen.hpp"
#include "rqmc/sobol.hpp"

namespace rqmc::estimator {

/// One experiment: the median of count = 2k-1 replicate estimates, drawn R
/// times, for every m in m_range.
struct ExperimentConfig {
  netgen::NetConfig net;
  std::string integrand = "smooth1d";
  int k = 6;
  int R = 250;
  std::vector<int> m_range;
  /// When set, k(m) = max(1, ceil(c m)) replaces k.
  std::optional<double> k_schedule;
  /// 0 picks std::thread::hardware_concurrency().
  int threads = 0;
  bool keep_raw = false;
  /// Needed for Sobol' generators; loaded from the default file when null.
  std::shared_ptr<const sobol::DirectionNumbers> directions;

  /// Throws std::invalid_argument when k < 1, R < 1, m_range is empty or
  /// some m violates 0 <= m <= E.
  void validate() const;
  [[nodiscard]] int k_for(int m) const;
  [[nodiscard]] int count_for(int m) const { return 2 * k_for(m) - 1; }
};

/// Odd replicate count -> k with 2k-1 = count.
int k_from_count(int count);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

/// (1/n) sum f(x_i) over the points, one PointSet per coordinate.
double estimate_mean(const integrands::Integrand& f, std::span<const netgen::PointSet> coords);
double estimate_mean(const integrands::Integrand& f, const netgen::PointSet& pts);

/// Middle order statistic; throws std::invalid_argument on even or empty input.
double median(std::span<const double> values);

/// Generator matrices for d coordinates at m: the identity for d = 1 with the
/// identity generator, otherwise Sobol' from cfg.directions (or the default file).
std::vector<gf2::BitMatrix> generators_for(const ExperimentConfig& cfg, int d, int m);

/// Randomized point sets of replicate r at net.m, one per generator matrix.
std::vector<netgen::PointSet> replicate_points(const netgen::NetConfig& net, std::span<const gf2::BitMatrix> gens,
                                               std::uint64_t r);

/// R (2k-1) raw estimates for one m, replicate r drawn from
/// derive_replicate_rng(seed, r, m). Bit-identical for any thread count.
std::vector<double> run_replicates(const ExperimentConfig& cfg, int m);
std::vector<double> run_replicates(const ExperimentConfig& cfg, const integrands::Integrand& f, int m);

struct MRecord {
  int m = 0;
  std::uint64_t n = 0;
  int count = 1;
  std::vector<double> medians;
  /// RMSE against the exact mean, or the standard deviation when none is known.
  double rmse_median = 0.0;
  double rmse_plain = 0.0;
  /// rmse_plain / sqrt(count): the error a mean of count estimates would have.
  double rmse_mean_proxy = 0.0;
  bool stddev = false;
  std::vector<double> raw;
};

struct EstimateReport {
  std::string integrand;
  std::vector<MRecord> records;
};

MRecord aggregate(const ExperimentConfig& cfg, int m, std::span<const double> raw,
                  std::optional<double> exact_mean);

EstimateReport run_experiment(const ExperimentConfig& cfg);

enum class FitKind { linear, quadratic };

struct RateFit {
  double intercept = 0.0;
  double slope = 0.0;
  double quad = 0.0;
  int points = 0;
};

/// Least squares for log2(rmse) = a + slope m (+ quad m^2) over m >= warmup
/// with rmse > 0. Throws std::domain_error with fewer than four such points.
RateFit fit_rate(std::span<const int> ms, std::span<const double> rmse, FitKind kind = FitKind::quadratic,
                 int warmup = 4);

enum class Track { median, plain, mean_proxy };
RateFit fit_rate(const EstimateReport& report, Track track = Track::median, FitKind kind = FitKind::quadratic,
                 int warmup = 4);

}  // namespace rqmc::estimator
