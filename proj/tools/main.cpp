#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nsg/scenario.hpp"
#include "nsg/spinor.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for conformally Walker neutral geometries"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "run a scenario file (or a catalog name prefixed with '@')");
  std::string scenario_path, out_path;
  std::optional<double> tol_rel, tol_abs;
  int jobs = 1;
  bool as_json = false;
  check->add_option("scenario", scenario_path, "scenario JSON file")->required();
  check->add_option("--tol-rel", tol_rel, "relative tolerance");
  check->add_option("--tol-abs", tol_abs, "absolute tolerance");
  check->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  check->add_option("--out", out_path, "write the JSON report here");
  check->add_flag("--json", as_json, "print the JSON report instead of the table");

  auto* cat = app.add_subcommand("catalog", "list built-in scenarios and checks");
  std::string dump_name;
  cat->add_option("--dump", dump_name, "print the named scenario as JSON");

  auto* classify = app.add_subcommand("classify", "root multiplicities of a Psi-tilde quartic");
  std::vector<double> psit;
  classify->add_option("--psitilde", psit, "five components a,b,c,d,e")->delimiter(',')->expected(5)->required();

  app.add_subcommand("conventions", "print the conventions document");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      nsg::Scenario s;
      if (!scenario_path.empty() && scenario_path[0] == '@') {
        auto c = nsg::catalog_scenario(scenario_path.substr(1));
        if (!c) throw std::runtime_error("no catalog scenario named " + scenario_path.substr(1));
        s = *c;
      } else {
        s = nsg::parse_scenario(slurp(scenario_path));
      }
      if (tol_rel) s.tol.rel = *tol_rel;
      if (tol_abs) s.tol.abs = *tol_abs;
      nsg::Report r = nsg::run_scenario(s, jobs);
      std::string js = nsg::report_to_json(r);
      if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        out << js;
        if (!out) throw std::runtime_error("cannot write " + out_path);
      }
      std::cout << (as_json ? js : nsg::report_table(r));
      return r.all_pass ? 0 : 1;
    }
    if (cat->parsed()) {
      if (!dump_name.empty()) {
        auto c = nsg::catalog_scenario(dump_name);
        if (!c) throw std::runtime_error("no catalog scenario named " + dump_name);
        std::cout << nsg::scenario_to_json(*c) << "\n";
        return 0;
      }
      std::cout << "scenarios:\n";
      for (const auto& s : nsg::catalog()) {
        std::cout << "  " << s.name << " (" << s.checks.size() << " checks)\n";
      }
      std::cout << "checks:\n";
      for (const auto& c : nsg::check_catalog()) std::printf("  %-26s %s\n", c.id.c_str(), c.description.c_str());
      return 0;
    }
    if (classify->parsed()) {
      std::array<double, 5> q{};
      std::copy(psit.begin(), psit.end(), q.begin());
      nsg::QuarticClass qc = nsg::classify_quartic(q);
      std::cout << "type " << qc.type << "\n";
      for (const auto& r : qc.roots) {
        if (r.infinite)
          std::printf("  root at infinity, direction (0, 1), multiplicity %d\n", r.multiplicity);
        else if (r.real)
          std::printf("  root z = %.12g, multiplicity %d\n", r.z.real() + 0.0, r.multiplicity);
        else
          std::printf("  root z = %.12g %+.12gi, multiplicity %d\n", r.z.real(), r.z.imag(), r.multiplicity);
      }
      return 0;
    }
    std::cout << nsg::conventions_text() << "fingerprint " << nsg::fingerprint_hex() << "\n";
    return 0;
  } catch (const nsg::ScenarioError& e) {
    std::cerr << "schema error at " << (e.path().empty() ? "/" : e.path()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
