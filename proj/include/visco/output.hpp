#ifndef VISCO_OUTPUT_HPP
#define VISCO_OUTPUT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "visco/signal.hpp"

namespace visco::harness {

/// Writes named columns of equal length as CSV with round-trip precision.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Reads a two-column (t, value) CSV with a header line into a uniformly sampled signal.
/// A trailing sample is dropped when the count is odd, since time grids hold an even count.
/// Throws std::runtime_error on malformed input or non-uniform sampling.
SampledSignal read_trace_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Run manifest: written with status "running" before any data, then rewritten on completion.
class Manifest {
 public:
  Manifest(std::filesystem::path dir, std::string command, nlohmann::json config);
  void add_output(const std::filesystem::path& file);
  void begin();
  void finish(nlohmann::json results, bool passed);
  void fail(const std::string& error);
  const std::filesystem::path& path() const { return path_; }

 private:
  void write() const;
  std::filesystem::path dir_, path_;
  nlohmann::json doc_;
};

}  // namespace visco::harness

#endif  // VISCO_OUTPUT_HPP
