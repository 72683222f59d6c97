#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nsg/expr.hpp"

namespace nsg {

inline constexpr const char* kEngineVersion = "0.1.0";

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Tolerance {
  double rel = 1e-8;
  double abs = 1e-10;
};

struct ConformalSpec {
  enum class Kind { None, Expression, Affine } kind = Kind::None;
  std::string expr;
  double M = 0.0, N = 0.0;
};

struct HHSpec {
  std::string theta = "0";
  std::string mu = "0";
  double Shat = 0.0;
};

struct ChartSpec {
  std::array<std::string, 4> D{"1", "0", "0", "1"};  // row major
  std::array<std::string, 4> E{"0", "0", "0", "0"};
  std::array<double, 4> origin{};
};

struct PointSpec {
  std::vector<Point> list;  // used when non-empty
  std::uint64_t seed = 0;
  int count = 0;
  std::array<double, 8> box{};  // (min, max) per coordinate
};

struct Scenario {
  std::string name;
  std::array<std::string, 3> metric{"0", "0", "0"};  // a, b, c
  ConformalSpec conformal;
  std::optional<HHSpec> hh;
  std::optional<ChartSpec> chart;
  std::string test_function = "u*v + x^2*y + sin(u + y)";
  PointSpec points;
  std::vector<std::string> checks;
  Tolerance tol;
};

Scenario parse_scenario(const std::string& json_text);
std::string scenario_to_json(const Scenario& s);

// splitmix64: state += 0x9E3779B97F4A7C15; z = (z ^ z >> 30) * 0xBF58476D1CE4E5B9;
// z = (z ^ z >> 27) * 0x94D049BB133111EB; z ^= z >> 31; uniform = (z >> 11) * 2^-53.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();

 private:
  std::uint64_t state_;
};

// Coordinates drawn in the order u, v, x, y per point; rejected points consume draws.
std::vector<Point> sample_points(std::uint64_t seed, int count, const std::array<double, 8>& box,
                                 const std::function<bool(const Point&)>& accept = {});

struct CheckInfo {
  std::string id;
  std::string description;
};
const std::vector<CheckInfo>& check_catalog();

std::vector<Scenario> catalog();
std::optional<Scenario> catalog_scenario(const std::string& name);

struct CheckOutcome {
  std::string check;
  int point = 0;
  std::vector<std::pair<std::string, double>> residuals;
  double scale = 1.0;
  bool pass = false;
  bool informational = false;
  std::string error;
};

struct HHFitSummary {
  bool present = false;
  std::string error;
  double max_hessian = 0.0;
  bool fitted = false;
  std::array<double, 2> eta{};
  double k = 0.0;
  double fit_rms = 0.0;
  double condition = 0.0;
};

struct Report {
  std::string scenario;
  Tolerance tol;
  std::vector<Point> points;
  std::vector<CheckOutcome> outcomes;  // ordered by point, then check
  HHFitSummary hh_fit;
  bool all_pass = false;
};

Report run_scenario(const Scenario& s, int jobs = 1);
std::string report_to_json(const Report& r);
std::string report_table(const Report& r);

std::string conventions_text();
std::uint64_t conventions_fingerprint();
std::string fingerprint_hex();

}  // namespace nsg
