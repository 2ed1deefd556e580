#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "domlab/errors.hpp"

namespace domlab {

// One flat section per module.  parse_config rejects unknown sections and
// unknown keys inside a section; ranges are validated at parse time.
struct RunConfig {
  std::string command = "analyze";
  std::string system_id = "cat2";
  std::map<std::string, double> system_params;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: DOMLAB_THREADS, then hardware
  std::string out_dir = ".";
  std::size_t orbit_cap = 1'000'000;

  struct Splitting {
    int dim_cu = 0;  // 0: catalog default
    int burn_in = 100;
    int iters = 200;
    double tolerance = 1e-9;
    int samples = 100;
    int fit_horizon = 30;
    double flag_threshold = 0.05;
  } splitting;

  struct Lyapunov {
    int horizon = 1000;
    int samples = 100;
    double margin_threshold = 0.05;
  } lyapunov;

  struct Inflatability {
    std::string side = "both";  // cs | cu | both
    std::vector<int> horizons = {10};
    int samples = 10000;
    int grid_resolution = 0;  // 0: 64 per axis for d <= 3, 16 for d = 4
  } inflatability;

  struct DiskGrowth {
    double r0 = 0.01;
    double resolution = 0.0005;
    int steps = 12;
    double delta = 0.05;
    double h = 0.5;
    std::size_t vertex_budget = 500'000;
    std::size_t vertex_cap = 10'000'000;
    int span_samples = 64;
    double span_cap = 0.4;
    int span_levels = 7;
  } diskgrowth;

  struct Hopf {
    int points = 500;
    long horizon = 100'000;
    double rho_c = 0.1;
    int pairs = 50;
    double t_scale = 1e-3;
    int horizon_conv = 60;
    double transfer_tolerance = 5e-2;
  } hopf;

  struct ProductStructure {
    int grid_resolution = 0;  // 0: 16 per axis for d <= 3, 8 for d = 4
    double k_span = 0.4;
    int trials = 1000;
    double separation = 0.0;  // 0: derived admissible separation
    double safety_margin = 0.01;
  } product_structure;

  struct Sweep {
    std::string param = "eps";
    std::vector<double> values = {0.0, 0.005, 0.01, 0.015, 0.02};
    std::string side = "cu";
    int horizon = 10;
    int samples = 2000;
  } sweep;

  // Path consumed by the report command.
  std::string report_in;
};

RunConfig parse_config(const nlohmann::ordered_json& doc);
nlohmann::ordered_json config_to_json(const RunConfig& config);
RunConfig load_config_file(const std::string& path);

int default_grid_resolution(int dim);
int default_cone_grid_resolution(int dim);

}  // namespace domlab
