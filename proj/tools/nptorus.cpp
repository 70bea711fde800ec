#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nptorus/commands.hpp"
#include "nptorus/run_config.hpp"

namespace {

using nptorus::cli::RunConfig;

void add_common_options(CLI::App* sub, RunConfig& cfg,
                        std::string& config_file) {
  sub->add_option("--xi", cfg.xi, "Torus parameter(s) in [0.05, 0.99]")
      ->capture_default_str();
  sub->add_option("--kmax", cfg.k_max, "Largest toroidal index")
      ->capture_default_str();
  sub->add_option("--lmax", cfg.l_max, "Largest poloidal index")
      ->capture_default_str();
  sub->add_option("--L", cfg.L, "Galerkin truncation (basis l = -L..L)")
      ->capture_default_str();
  sub->add_option("--rel-tol", cfg.rel_tol, "Quadrature relative tolerance")
      ->capture_default_str();
  sub->add_option("--abs-tol", cfg.abs_tol, "Quadrature absolute tolerance")
      ->capture_default_str();
  sub->add_option("--jobs", cfg.jobs, "Worker threads")
      ->capture_default_str();
  sub->add_option("--out", cfg.out_dir, "Output directory")
      ->capture_default_str();
  sub->add_option("--cache", cfg.cache_dir,
                  "Cache directory (empty disables caching)");
  sub->add_option("--method", cfg.method,
                  "Numerical-range route: spectral|direct|polar|all")
      ->capture_default_str();
  sub->add_option("--config", config_file,
                  "Config file with flat key=value lines (keys match the "
                  "long flags); command-line flags win");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Applies key=value pairs from `path` to options of `sub` that were not
// given on the command line. Returns an error message, or "" on success.
std::string apply_config_file(const std::string& path, CLI::App* sub,
                              RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) return "cannot read config file: " + path;
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      return "config line " + std::to_string(lineno) + " is not key=value";
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }

  auto given = [&](const std::string& flag) {
    return sub->count("--" + flag) > 0;
  };
  auto parse_double = [](const std::string& v, double& out) {
    std::size_t pos = 0;
    out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
  };
  auto parse_int = [](const std::string& v, int& out) {
    std::size_t pos = 0;
    out = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
  };

  for (const auto& [key, value] : kv) {
    try {
      if (key == "xi") {
        if (given("xi")) continue;
        cfg.xi.clear();
        std::string item;
        std::istringstream ss(value);
        while (std::getline(ss, item, ',')) {
          double x = 0.0;
          parse_double(trim(item), x);
          cfg.xi.push_back(x);
        }
        if (cfg.xi.empty()) return "config: xi has no values";
      } else if (key == "kmax") {
        if (!given("kmax")) parse_int(value, cfg.k_max);
      } else if (key == "lmax") {
        if (!given("lmax")) parse_int(value, cfg.l_max);
      } else if (key == "L") {
        if (!given("L")) parse_int(value, cfg.L);
      } else if (key == "rel-tol") {
        if (!given("rel-tol")) parse_double(value, cfg.rel_tol);
      } else if (key == "abs-tol") {
        if (!given("abs-tol")) parse_double(value, cfg.abs_tol);
      } else if (key == "jobs") {
        if (!given("jobs")) parse_int(value, cfg.jobs);
      } else if (key == "out") {
        if (!given("out")) cfg.out_dir = value;
      } else if (key == "cache") {
        if (!given("cache")) cfg.cache_dir = value;
      } else if (key == "method") {
        if (!given("method")) cfg.method = value;
      } else {
        return "config: unknown key '" + key + "'";
      }
    } catch (const std::exception&) {
      return "config: bad value for '" + key + "': " + value;
    }
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nptorus: Neumann-Poincare spectra on tori via Fourier-mode "
      "decomposition"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_file;
  int (*handler)(const RunConfig&) = nullptr;

  struct SubSpec {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&);
  };
  const SubSpec subs[] = {
      {"geometry-check",
       "Verify coordinate-geometry identities on random surface points",
       nptorus::cli::cmd_geometry_check},
      {"numrange", "Numerical-range integrals I_{k,l} (numrange.csv)",
       nptorus::cli::cmd_numrange},
      {"spectrum",
       "Mode-block NP spectra (spectrum.csv, spectrum_summary.json)",
       nptorus::cli::cmd_spectrum},
      {"asymptotics",
       "Sign certification against stationary-phase leading terms",
       nptorus::cli::cmd_asymptotics},
      {"convergence", "Eigenvalue convergence in the truncation L",
       nptorus::cli::cmd_convergence},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common_options(sub, cfg, config_file);
    sub->callback([&handler, fn = s.fn] { handler = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    // Treat help/version (rc == 0) as success, anything else as bad config.
    return rc == 0 ? nptorus::cli::kExitOk : nptorus::cli::kExitConfig;
  }

  if (!config_file.empty()) {
    CLI::App* sub = app.get_subcommands().front();
    if (const std::string err = apply_config_file(config_file, sub, cfg);
        !err.empty()) {
      std::cerr << "config error: " << err << "\n";
      return nptorus::cli::kExitConfig;
    }
  }

  if (const char* env_cache = std::getenv("NPTORUS_CACHE"))
    cfg.cache_dir = env_cache;

  if (const std::string err = cfg.validate(); !err.empty()) {
    std::cerr << "config error: " << err << "\n";
    return nptorus::cli::kExitConfig;
  }

  try {
    return handler(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nptorus::cli::kExitNumerical;
  }
}
