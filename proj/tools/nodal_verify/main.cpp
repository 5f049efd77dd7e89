#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "campaigns.hpp"
#include "nodal/errors.hpp"

namespace {

using namespace verify;

struct Flags {
  std::string n, k, config;
};

void add_common(CLI::App* sub, RunConfig& cfg, Flags& f, bool with_k) {
  sub->add_option("--n", f.n, "dimensions: 4, 4,6,8 or 4..48");
  if (with_k) sub->add_option("--k", f.k, "bubble counts, same syntax as --n");
  sub->add_option("--tol", cfg.tol, "series tolerance");
  sub->add_option("--grid", cfg.grid, "condition grid size");
  sub->add_option("--format", cfg.format, "json or csv");
  sub->add_option("--out", cfg.out, "report path (default stdout)");
  sub->add_option("--jobs", cfg.jobs, "worker threads");
  sub->add_option("--config", f.config, "JSON config file");
  sub->add_flag("--timings", cfg.timings, "record runtime_ms per check");
}

std::vector<std::string> given_keys(CLI::App* sub) {
  std::vector<std::string> keys;
  for (const auto* opt : sub->get_options()) {
    if (opt->count() == 0) continue;
    std::string name = opt->get_name();
    while (!name.empty() && name.front() == '-') name.erase(0, 1);
    for (auto& c : name)
      if (c == '-') c = '_';
    keys.push_back(name);
  }
  return keys;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification campaigns for the nodal bubble-tower construction"};
  app.require_subcommand(1);
  RunConfig cfg;
  Flags flags;

  auto* cond = app.add_subcommand("check-condition", "sign condition on g for each n");
  add_common(cond, cfg, flags, false);
  auto* spec = app.add_subcommand("spectrum", "mode coefficients and ell_m signs");
  add_common(spec, cfg, flags, true);
  spec->add_flag("--asymptotics", cfg.asymptotics, "fit decay of lattice-sum deviations");
  auto* integ = app.add_subcommand("verify-integrals", "radial integral identities");
  add_common(integ, cfg, flags, false);
  auto* bub = app.add_subcommand("bubble", "approximate solution: symmetry, error field, norms");
  add_common(bub, cfg, flags, true);
  bub->add_option("--q", cfg.q, "norm exponent, n/2 < q < n");
  bub->add_option("--kelvin-samples", cfg.kelvin_samples, "random points for symmetry checks");
  bub->add_option("--emit-grid", cfg.emit_grid, "write U_* samples on a plane grid as CSV");
  auto* all = app.add_subcommand("all", "every campaign");
  add_common(all, cfg, flags, true);
  all->add_flag("--asymptotics", cfg.asymptotics, "fit decay of lattice-sum deviations");
  all->add_option("--q", cfg.q, "norm exponent, n/2 < q < n");
  all->add_option("--kelvin-samples", cfg.kelvin_samples, "random points for symmetry checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  Report rep;
  try {
    if (!flags.n.empty()) cfg.n = parse_int_list(flags.n);
    if (!flags.k.empty()) cfg.k = parse_int_list(flags.k);
    if (!flags.config.empty()) apply_config_file(cfg, flags.config, given_keys(sub));
    validate(cfg);
    if (sub == cond) rep = run_check_condition(cfg);
    else if (sub == spec) rep = run_spectrum(cfg);
    else if (sub == integ) rep = run_verify_integrals(cfg);
    else if (sub == bub) rep = run_bubble(cfg);
    else rep = run_all(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const nodal::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }

  std::ostringstream text;
  if (cfg.format == "csv")
    write_report_csv(text, rep);
  else
    write_report_json(text, rep);
  if (cfg.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream os(cfg.out, std::ios::binary);
    os << text.str();
    if (!os) {
      std::cerr << "error: cannot write " << cfg.out << '\n';
      return 3;
    }
  }
  std::cerr << rep.suite << ": " << rep.count("pass") << " pass, " << rep.count("fail") << " fail, "
            << rep.count("info") << " info\n";
  if (rep.numerical_errors() > 0) return 3;
  return rep.count("fail") > 0 ? 1 : 0;
}
