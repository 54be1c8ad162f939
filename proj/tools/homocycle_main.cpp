#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "homocycle/pipeline.hpp"

namespace {

struct CliOptions {
  std::string graph_file;
  std::string mode = "normalized";
  double tmax = 18.0;
  int alpha_radius = 3;
  int nmax = 0;
  int budget_mb = 2048;
  std::string out;
  double step_u = 0.05;
  double step_s = 0.025;
  int threads = 0;
};

void add_common(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("graph", o.graph_file, "graph document (JSON)")
      ->required();
  cmd->add_option("--mode", o.mode,
                  "constant convention: paper-literal | normalized");
  cmd->add_option("--tmax", o.tmax, "largest length threshold T");
  cmd->add_option("--alpha-radius", o.alpha_radius,
                  "report classes with |alpha_i| <= radius");
  cmd->add_option("--nmax", o.nmax,
                  "symbolic word-length cap (0 = derive from --tmax)");
  cmd->add_option("--budget-mb", o.budget_mb, "census memory budget in MiB");
  cmd->add_option("--out", o.out, "write output to this file (default stdout)");
  cmd->add_option("--step-u", o.step_u, "base finite-difference step in u");
  cmd->add_option("--step-s", o.step_s, "base finite-difference step in s");
  cmd->add_option("--threads", o.threads,
                  "census worker threads (0 = hardware)");
}

homocycle::AnalysisConfig make_config(const CliOptions& o) {
  homocycle::AnalysisConfig cfg;
  cfg.mode = homocycle::mode_from_name(o.mode);
  cfg.step_u = o.step_u;
  cfg.step_s = o.step_s;
  cfg.n_max = o.nmax;
  cfg.budget_mb = o.budget_mb;
  cfg.alpha_radius = o.alpha_radius;
  cfg.threads = o.threads;
  cfg.t_grid.clear();
  for (double t = 8.0; t <= o.tmax + 1e-9; t += 2.0) cfg.t_grid.push_back(t);
  if (cfg.t_grid.empty()) cfg.t_grid.push_back(o.tmax);
  homocycle::validate_config(cfg);
  return cfg;
}

void deliver(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw homocycle::ParseError("cannot open output file: " + out);
  f << text;
  if (text.empty() || text.back() != '\n') f << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "primitive-cycle statistics in homology classes of a weighted "
      "multigraph"};
  app.require_subcommand(1);

  CliOptions o;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "entropy, derivative tensors and expansion constants");
  CLI::App* census = app.add_subcommand(
      "census", "exact primitive-cycle counts per class (CSV)");
  CLI::App* verify = app.add_subcommand(
      "verify", "census vs. asymptotic prediction (CSV)");
  CLI::App* conditions = app.add_subcommand(
      "conditions", "length-spectrum diagnostics");
  CLI::App* oracle = app.add_subcommand(
      "oracle", "closed-form constants for special topologies");
  for (CLI::App* c : {analyze, census, verify, conditions, oracle})
    add_common(c, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    homocycle::MultiGraph g = homocycle::parse_graph_file(o.graph_file);
    homocycle::AnalysisConfig cfg = make_config(o);
    std::string text;
    if (analyze->parsed()) {
      text = homocycle::run_analyze(g, cfg).dump(2);
    } else if (census->parsed()) {
      text = homocycle::run_census_csv(g, cfg);
    } else if (verify->parsed()) {
      text = homocycle::run_verify_csv(g, cfg);
    } else if (conditions->parsed()) {
      text = homocycle::run_conditions(g, cfg).dump(2);
    } else {
      text = homocycle::run_oracle(g, cfg).dump(2);
    }
    deliver(text, o.out);
    return 0;
  } catch (const homocycle::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const homocycle::InadmissibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const homocycle::BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
}
