#include "visco/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace visco::harness {

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw std::invalid_argument("write_csv: header/column mismatch");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_number(columns[c][r]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SampledSignal read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::vector<double> t, v;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) {
      if (line_no == 1) continue;
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected two columns");
    }
    try {
      const double x = std::stod(a);
      const double y = std::stod(b);
      t.push_back(x);
      v.push_back(y);
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": not a number");
    }
  }
  if (t.size() < 4) throw std::runtime_error(path.string() + ": need at least 4 samples");
  if (t.size() % 2 != 0) {
    t.pop_back();
    v.pop_back();
  }
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i)
    if (std::abs(t[i] - t[i - 1] - dt) > 1e-6 * dt)
      throw std::runtime_error(path.string() + ": time column is not uniformly sampled");
  return SampledSignal(TimeGrid(t.front(), dt, t.size()), std::move(v));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

Manifest::Manifest(std::filesystem::path dir, std::string command, nlohmann::json config)
    : dir_(std::move(dir)), path_(dir_ / "manifest.json") {
  doc_["schema"] = 1;
  doc_["command"] = std::move(command);
  doc_["config"] = std::move(config);
  doc_["outputs"] = nlohmann::json::array();
  doc_["units"] = "SI (s, m, kg, rad/s)";
}

void Manifest::add_output(const std::filesystem::path& file) { doc_["outputs"].push_back(file.filename().string()); }

void Manifest::begin() {
  std::filesystem::create_directories(dir_);
  doc_["status"] = "running";
  write();
}

void Manifest::finish(nlohmann::json results, bool passed) {
  doc_["status"] = "complete";
  doc_["results"] = std::move(results);
  doc_["passed"] = passed;
  write();
}

void Manifest::fail(const std::string& error) {
  doc_["status"] = "failed";
  doc_["error"] = error;
  doc_["passed"] = false;
  write();
}

void Manifest::write() const { write_text(path_, doc_.dump(2) + "\n"); }

}  // namespace visco::harness
