#include "output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace rqmc::cli {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void csv_line(std::ostringstream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
  os << "\r\n";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CsvWriter: empty header");
}

void CsvWriter::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::invalid_argument("CsvWriter: row width does not match header");
  rows_.push_back(std::move(row));
}

std::string CsvWriter::str() const {
  std::ostringstream os;
  csv_line(os, header_);
  for (const auto& r : rows_) csv_line(os, r);
  return os.str();
}

std::string render_svg(const std::vector<Series>& series, const std::vector<Series>& refs, const std::string& title) {
  if (series.empty()) throw std::invalid_argument("render_svg: no series to plot");

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  auto scan = [&](const Series& s) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("render_svg: series '" + s.label + "' is ragged");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      if (s.y[i] > 0 && std::isfinite(s.y[i])) {
        y0 = std::min(y0, std::log2(s.y[i]));
        y1 = std::max(y1, std::log2(s.y[i]));
      }
    }
  };
  for (const auto& s : series) scan(s);
  for (const auto& s : refs) scan(s);
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = -1, y1 = 1;
  if (x1 - x0 < 1) x1 = x0 + 1;
  if (y1 - y0 < 1) y0 -= 0.5, y1 += 0.5;
  y0 = std::floor(y0);
  y1 = std::ceil(y1);

  const double W = 720, H = 480, left = 70, right = 170, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double ly) { return top + (y1 - ly) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << xml_escape(title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  const int xstep = std::max(1, static_cast<int>(std::ceil((x1 - x0) / 16)));
  for (int t = static_cast<int>(std::ceil(x0)); t <= static_cast<int>(std::floor(x1)); t += xstep) {
    os << "<line x1=\"" << num(px(t)) << "\" y1=\"" << top + ph << "\" x2=\"" << num(px(t)) << "\" y2=\""
       << top + ph + 5 << "\" stroke=\"black\"/>";
    os << "<text x=\"" << num(px(t)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << t
       << "</text>\n";
  }
  const int ystep = std::max(1, static_cast<int>(std::ceil((y1 - y0) / 12)));
  for (int t = static_cast<int>(y0); t <= static_cast<int>(y1); t += ystep) {
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << num(py(t)) << "\" x2=\"" << left + pw << "\" y2=\""
       << num(py(t)) << "\" stroke=\"#dddddd\"/>";
    os << "<text x=\"" << left - 8 << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">" << t << "</text>\n";
  }
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">log2 n</text>\n";
  os << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << num(top + ph / 2) << ")\">log2 RMSE</text>\n";

  int legend = 0;
  auto draw = [&](const Series& s, const char* color, bool dashed) {
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
       << (dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.y[i] > 0) || !std::isfinite(s.y[i])) continue;
      os << (first ? "" : " ") << num(px(s.x[i])) << ',' << num(py(std::log2(s.y[i])));
      first = false;
    }
    os << "\"/>\n";
    const double ly = top + 14 + 18 * legend++;
    os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << num(ly) << "\" x2=\"" << left + pw + 40 << "\" y2=\""
       << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\""
       << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>";
    os << "<text x=\"" << left + pw + 46 << "\" y=\"" << num(ly + 4) << "\">" << xml_escape(s.label)
       << "</text>\n";
  };
  for (std::size_t i = 0; i < series.size(); ++i) draw(series[i], kColors[i % 6], false);
  for (const auto& r : refs) draw(r, "#555555", true);
  os << "</svg>\n";
  return os.str();
}

void emit_svg(const std::vector<Series>& series, const std::vector<Series>& refs, const std::string& title,
              const std::filesystem::path& path) {
  write_file(path, render_svg(series, refs, title));
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << text;
  f.close();
  if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

nlohmann::json RunManifest::to_json() const {
  return {{"subcommand", subcommand}, {"config", config},   {"seed", seed},
          {"tool_version", tool_version}, {"outputs", outputs}, {"wall_seconds", wall_seconds}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.subcommand = j.at("subcommand").get<std::string>();
  m.config = j.at("config");
  if (!m.config.is_object()) throw std::invalid_argument("manifest: config must be an object");
  m.seed = j.value("seed", std::uint64_t{0});
  m.tool_version = j.value("tool_version", std::string());
  m.outputs = j.value("outputs", std::vector<std::string>{});
  m.wall_seconds = j.value("wall_seconds", 0.0);
  return m;
}

}  // namespace rqmc::cli
