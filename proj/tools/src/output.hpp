#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace rqmc::cli {

/// Shortest-free, locale-independent rendering with 17 significant digits.
std::string format_double(double v);

/// Comma-separated rows with a header; fields are quoted only when needed.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(std::vector<std::string> row);
  [[nodiscard]] std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Series {
  std::string label;
  std::vector<double> x;  // log2 n
  std::vector<double> y;  // raw values; plotted on a log2 axis, nonpositive values skipped
};

/// Self-contained SVG: log2 axes, one solid polyline per series, dashed
/// reference lines. Throws std::invalid_argument for an empty series list.
std::string render_svg(const std::vector<Series>& series, const std::vector<Series>& refs,
                       const std::string& title);
void emit_svg(const std::vector<Series>& series, const std::vector<Series>& refs, const std::string& title,
              const std::filesystem::path& path);

/// Writes text to path, throwing std::runtime_error on failure.
void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

struct RunManifest {
  std::string subcommand;
  nlohmann::json config;  // every resolved flag, keyed by flag name without dashes
  std::uint64_t seed = 0;
  std::string tool_version;
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;

  [[nodiscard]] nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

}  // namespace rqmc::cli
