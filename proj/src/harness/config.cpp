#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "visco/harness.hpp"

namespace visco::harness {

namespace {

const std::map<std::string, std::string>& base_defaults() {
  static const std::map<std::string, std::string> d = {
      {"medium.rho", "1000"},
      {"medium.c_p", "40"},
      {"medium.c_s", "1"},
      {"medium.nu_p", "0"},
      {"medium.nu_s", "0.2"},
      {"medium.y", "2"},
      {"geometry.r", "0.015"},
      {"geometry.source", "0,0,0"},
      {"geometry.receiver", "0.015,0,0"},
      {"geometry.array_radius", "0.05"},
      {"geometry.receivers", "16"},
      {"grid.n", "8192"},
      {"grid.dt", "0"},
      {"grid.omega_factor", "80"},
      {"grid.t0_fraction", "0.25"},
      {"grid.extent", "0.03"},
      {"grid.points", "201"},
      {"fig1.cases", "1.5:4,2:0.2,2.5:0.002"},
      {"fig2.time", "0.015"},
      {"fig2.cases", "2:0.2,2.5:0.002"},
      {"fig3.eps", "1e-5,3e-5,1e-4,3e-4,1e-3"},
      {"fig3.dt", "5e-4"},
      {"fig3.t_end", "2.5"},
      {"imaging.voxel", "5e-4"},
      {"imaging.search_half", "20"},
      {"imaging.channel", "transverse"},
      {"imaging.method", "first_order"},
      {"imaging.snr_db", "inf"},
      {"imaging.trials", "10"},
      {"imaging.source_spread", "8"},
      {"kk.cases", "2:0.2,1.5:0.1,2.5:0.002"},
      {"kk.sizes", "256,512,1024,2048"},
      {"run.seed", "1"},
  };
  return d;
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config " + key + ": not a number: '" + text + "'");
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw std::invalid_argument("config " + key + ": not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

Config Config::defaults(const std::string& scenario) {
  static const std::vector<std::string> known = {"fig1", "fig2", "fig3", "localize", "kk-check", "green", "correct"};
  if (std::find(known.begin(), known.end(), scenario) == known.end())
    throw std::invalid_argument("unknown scenario: " + scenario);
  Config c;
  c.scenario_ = scenario;
  c.entries_ = base_defaults();
  if (scenario == "localize") {
    // Shear speed of soft tissue keeps eps * omega_max below 1 at this voxel size.
    c.entries_["medium.c_s"] = "1600";
    c.entries_["medium.c_p"] = "64000";
    c.entries_["geometry.source"] = "0.01,0,0";
    c.entries_["grid.n"] = "512";
  }
  return c;
}

Config Config::load(const std::string& scenario, const std::optional<std::filesystem::path>& file,
                    const std::vector<std::string>& overrides) {
  Config c = defaults(scenario);
  if (file) {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::read_ini(file->string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw std::invalid_argument(std::string("config file: ") + e.what());
    }
    for (const auto& [name, node] : tree) {
      if (node.empty()) {
        if (name == "schema") {
          if (node.data() != std::to_string(kSchemaVersion))
            throw std::invalid_argument("config file: unsupported schema " + node.data());
          continue;
        }
        throw std::invalid_argument("config file: key outside a section: " + name);
      }
      for (const auto& [key, value] : node) {
        if (name == "run" && key == "scenario") {
          if (value.data() != scenario)
            throw std::invalid_argument("config file is for scenario '" + value.data() + "', not '" + scenario + "'");
          continue;
        }
        c.set(name + "." + key, value.data());
      }
    }
  }
  for (const auto& o : overrides) c.apply(o);
  return c;
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw std::invalid_argument("unknown config key: " + key);
  it->second = value;
}

void Config::apply(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("override must be section.key=value: " + assignment);
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::string Config::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw std::invalid_argument("unknown config key: " + key);
  return it->second;
}

double Config::number(const std::string& key) const { return parse_double(key, get(key)); }

std::int64_t Config::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw std::invalid_argument("config " + key + ": not an integer");
  return static_cast<std::int64_t>(v);
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : split(get(key), ',')) out.push_back(parse_double(key, s));
  return out;
}

Vec3 Config::vec3(const std::string& key) const {
  const auto v = numbers(key);
  if (v.size() != 3) throw std::invalid_argument("config " + key + ": expected three comma-separated values");
  return {v[0], v[1], v[2]};
}

std::uint64_t Config::seed() const {
  const auto s = integer("run.seed");
  if (s < 0) throw std::invalid_argument("config run.seed must be >= 0");
  return static_cast<std::uint64_t>(s);
}

PowerLawMedium Config::medium() const {
  return PowerLawMedium(number("medium.rho"), number("medium.c_p"), number("medium.c_s"), number("medium.nu_p"),
                        number("medium.nu_s"), number("medium.y"));
}

nlohmann::json Config::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario_;
  for (const auto& [key, value] : entries_) {
    const auto dot = key.find('.');
    j[key.substr(0, dot)][key.substr(dot + 1)] = value;
  }
  return j;
}

std::vector<std::pair<double, double>> parse_cases(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw std::invalid_argument("case must be y:nu_s, got '" + item + "'");
    out.emplace_back(parse_double("case", parts[0]), parse_double("case", parts[1]));
  }
  if (out.empty()) throw std::invalid_argument("no cases given");
  return out;
}

}  // namespace visco::harness
