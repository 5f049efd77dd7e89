#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "report.hpp"

namespace verify {

// bad flags, bad config file, values out of range: exit status 2
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<int> n;
  std::vector<int> k;
  int grid = 4096;
  double tol = 1e-12;
  double q = 3.0;
  std::string format = "json";
  std::string out;
  int jobs = 1;
  bool asymptotics = false;
  int kelvin_samples = 1000;
  std::string emit_grid;
  bool timings = false;
  unsigned long long seed = 20240601;
};

// "4", "4,6,8", "4..48" and mixtures such as "4..6,10"
std::vector<int> parse_int_list(const std::string& text);

// fills unset fields from a JSON config file; flags already given win
void apply_config_file(RunConfig& cfg, const std::string& path, const std::vector<std::string>& given);

void validate(const RunConfig& cfg);

ojson config_json(const RunConfig& cfg);

Report run_check_condition(RunConfig cfg);
Report run_spectrum(RunConfig cfg);
Report run_verify_integrals(RunConfig cfg);
Report run_bubble(RunConfig cfg);
Report run_all(RunConfig cfg);

}  // namespace verify
