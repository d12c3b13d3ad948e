#include "pcula/cli.hpp"

#include "pcula/errors.hpp"
#include "pcula/experiments.hpp"
#include "pcula/metrics.hpp"
#include "pcula/sampler.hpp"
#include "pcula/trajectory_io.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pcula {

namespace {

Point to_point(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
}

std::optional<Point> to_point(const std::optional<std::vector<double>>& v) {
  if (!v) return std::nullopt;
  return to_point(*v);
}

Potential base_potential(const RunConfig& c) {
  if (c.potential) return c.potential->build();
  return Potential::quadratic(1.0);
}

ExperimentReport run_sample(const RunConfig& c, const ParallelOptions& par,
                            std::vector<std::pair<std::string, std::string>>& extra) {
  const ConvexDomain domain = c.domain->build();
  const PenalizedPotential f(base_potential(c), domain, *c.n, c.is_strict());
  const auto seeds = c.seed_list();
  std::vector<ChainConfig> cfgs;
  for (auto s : seeds)
    cfgs.push_back(ChainConfig{f, c.sigma.value_or(1.0), *c.h, *c.steps, s, 0,
                               to_point(c.initial), c.burn_in, c.thin.value_or(1)});
  for (const auto& cfg : cfgs) cfg.check();
  std::vector<Trajectory> runs(seeds.size());
  parallel_for(seeds.size(), par, [&](std::size_t i) { runs[i] = run_chain(cfgs[i]); });

  ExperimentReport rep;
  rep.name = "sample";
  rep.parameters["potential"] = to_json(f.base());
  rep.parameters["domain"] = to_json(domain);
  rep.parameters["n"] = *c.n;
  rep.parameters["sigma"] = cfgs[0].sigma;
  rep.parameters["h"] = *c.h;
  rep.parameters["steps"] = *c.steps;
  rep.parameters["burn_in"] = cfgs[0].effective_burn_in();
  rep.parameters["thin"] = cfgs[0].thin;
  rep.parameters["seeds"] = seeds;
  if (auto w = cfgs[0].stability_warning()) rep.warnings.push_back(*w);

  const Eigen::Index d = domain.dimension();
  std::vector<std::string> cols{"seed", "samples", "accuracy_in_domain"};
  for (Eigen::Index k = 0; k < d; ++k) cols.push_back("mean_x_" + std::to_string(k + 1));
  for (Eigen::Index k = 0; k < d; ++k) cols.push_back("final_x_" + std::to_string(k + 1));
  ResultTable chains{"chains", cols, {}};
  std::vector<double> acc;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const Trajectory& t = runs[i];
    std::vector<Json> row{seeds[i], t.size()};
    acc.push_back(accuracy_in_domain(t, domain));
    row.emplace_back(acc.back());
    const Point mean = t.samples.rowwise().mean();
    for (Eigen::Index k = 0; k < d; ++k) row.emplace_back(mean(k));
    for (Eigen::Index k = 0; k < d; ++k) row.emplace_back(t.final_state.position(k));
    chains.rows.push_back(std::move(row));

    const std::string stem =
        seeds.size() == 1 ? "trajectory" : "trajectory_seed" + std::to_string(seeds[i]);
    std::ostringstream csv;
    write_trajectory_csv(csv, t);
    extra.emplace_back(stem + ".csv", csv.str());
    if (c.binary.value_or(true)) extra.emplace_back(stem + ".bin", encode_trajectory_binary(t));
  }
  rep.tables.push_back(std::move(chains));
  rep.derived["median_accuracy_in_domain"] = median(acc);
  rep.derived["passed"] = true;
  return rep;
}

ExperimentReport run_density_grid(const RunConfig& c,
                                  std::vector<std::pair<std::string, std::string>>& extra) {
  const ConvexDomain domain = c.domain->build();
  const PenalizedPotential f(base_potential(c), domain, *c.n, c.is_strict());
  std::vector<GridAxis> axes;
  for (std::size_t k = 0; k < c.grid_lower->size(); ++k)
    axes.push_back(GridAxis{(*c.grid_lower)[k], (*c.grid_upper)[k], std::size_t((*c.grid_nodes)[k])});
  const double sigma = c.sigma.value_or(1.0);
  const GridDensity g = gibbs_density_grid(f, sigma, axes);

  ExperimentReport rep;
  rep.name = "density-grid";
  rep.parameters["potential"] = to_json(f.base());
  rep.parameters["domain"] = to_json(domain);
  rep.parameters["n"] = *c.n;
  rep.parameters["sigma"] = sigma;
  rep.parameters["lower"] = *c.grid_lower;
  rep.parameters["upper"] = *c.grid_upper;
  rep.parameters["nodes"] = *c.grid_nodes;
  rep.derived["integral"] = g.integral();
  rep.derived["tail_mass_bound"] = g.tail_mass_bound;
  rep.derived["mass_outside_domain"] = mass_outside(g, domain);
  rep.derived["passed"] = true;
  std::ostringstream csv;
  write_grid_csv(csv, g);
  extra.emplace_back("grid.csv", csv.str());
  return rep;
}

}  // namespace

RunConfig effective_config(const RunConfig& parsed, const CliOptions& opt) {
  RunConfig c = parsed;
  if (opt.strict) c.strict = true;
  if (opt.seed_override) {
    const std::size_t count = c.seed_list().size();
    if (count == 1 && !c.seeds) {
      c.seed = *opt.seed_override;
    } else {
      std::vector<std::uint64_t> s(count);
      for (std::size_t i = 0; i < count; ++i) s[i] = *opt.seed_override + i;
      c.seeds = std::move(s);
      c.seed.reset();
    }
  }
  auto errs = validate_config(c);
  if (!errs.empty()) throw ConfigError(std::move(errs));
  return c;
}

std::string config_echo(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.output_directory.reset();
  return to_config_text(c);
}

std::filesystem::path resolve_output_directory(const RunConfig& cfg, const CliOptions& opt) {
  if (opt.out) return *opt.out;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  if (cfg.output_directory) return *cfg.output_directory;
  return "pcula_out";
}

RunOutput execute(const RunConfig& c, unsigned threads) {
  const ParallelOptions par{threads};
  std::vector<std::pair<std::string, std::string>> extra;
  const auto t0 = std::chrono::steady_clock::now();
  const double sigma = c.sigma.value_or(1.0);
  const bool strict = c.is_strict();
  ExperimentReport rep;

  if (c.command == "sample") {
    rep = run_sample(c, par, extra);
  } else if (c.command == "density-grid") {
    rep = run_density_grid(c, extra);
  } else if (c.command == "contraction") {
    ContractionParams p{base_potential(c), c.domain->build()};
    p.n = c.n.value_or(0.0);
    p.sigma = sigma;
    p.h = *c.h;
    p.steps = *c.steps;
    p.initial_a = to_point(*c.initial_a);
    p.initial_b = to_point(*c.initial_b);
    p.seeds = c.seed_list();
    if (c.epsilon) p.epsilon = *c.epsilon;
    if (c.record_every) p.record_every = *c.record_every;
    p.strict = strict;
    rep = contraction_experiment(p, par);
  } else if (c.command == "penalty-sweep") {
    if (c.route.value_or("monte-carlo") == "quadrature") {
      QuadratureSweepParams p{base_potential(c), c.domain->build()};
      p.sigma = sigma;
      p.n_list = *c.n_list;
      if (c.dx) p.dx = *c.dx;
      if (c.quantile_points) p.quantile_points = *c.quantile_points;
      if (c.slope_ceiling) p.slope_ceiling = *c.slope_ceiling;
      rep = penalty_sweep_quadrature(p, par);
    } else {
      PenaltySweepParams p{base_potential(c), c.domain->build()};
      p.sigma = sigma;
      p.h = *c.h;
      p.steps = *c.steps;
      p.burn_in = c.burn_in;
      p.initial = to_point(c.initial);
      p.n_list = *c.n_list;
      p.seeds = c.seed_list();
      if (c.subsample) p.subsample = Eigen::Index(*c.subsample);
      p.strict = strict;
      rep = penalty_sweep(p, par);
    }
  } else if (c.command == "fig2") {
    Fig2Params p;
    if (c.potential) p.alpha = c.potential->alpha.value();
    p.sigma = sigma;
    if (c.h) p.h = *c.h;
    if (c.steps) p.steps = *c.steps;
    p.burn_in = c.burn_in;
    if (c.n_list) p.n_list = *c.n_list;
    if (c.seed || c.seeds) p.seeds = c.seed_list();
    p.initial = to_point(c.initial);
    if (c.accuracy_floor) p.accuracy_floor = *c.accuracy_floor;
    if (c.histogram_bins) p.histogram_bins = *c.histogram_bins;
    if (c.stationary_dx) p.stationary_dx = *c.stationary_dx;
    rep = fig2_reproduction(p, par);
  } else if (c.command == "step-bias") {
    StepBiasParams p{base_potential(c), c.domain->build()};
    p.n = *c.n;
    p.sigma = sigma;
    p.h_list = *c.h_list;
    p.steps = *c.steps;
    p.burn_in = c.burn_in;
    p.initial = to_point(c.initial);
    p.seeds = c.seed_list();
    if (c.dx) p.dx = *c.dx;
    if (c.resolve_ratio) p.resolve_ratio = *c.resolve_ratio;
    rep = step_size_bias(p, par);
  } else {
    throw ConfigError({"command: unknown command '" + c.command + "'"});
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunOutput out{rep, rep.files(config_echo(c))};
  for (auto& f : extra) out.files.push_back(std::move(f));
  return out;
}

int run_cli(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    std::ifstream in(opt.config_path, std::ios::binary);
    if (!in) {
      err << "error: cannot read config file " << opt.config_path.string() << "\n";
      return kExitValidation;
    }
    std::ostringstream text;
    text << in.rdbuf();
    cfg = effective_config(parse_config(text.str()), opt);
  } catch (const ConfigError& e) {
    for (const auto& m : e.messages()) err << "error: " << m << "\n";
    if (!opt.quiet) out << "validation failed: " << e.messages().size() << " error(s)\n";
    return kExitValidation;
  }

  const auto dir = resolve_output_directory(cfg, opt);
  try {
    RunOutput r = execute(cfg, opt.threads);
    write_outputs_atomic(dir, r.files);
    if (!opt.quiet) out << r.report.summary() << "\n  output = " << dir.string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    for (const auto& m : e.messages()) err << "error: " << m << "\n";
    if (!opt.quiet) out << "validation failed: " << e.messages().size() << " error(s)\n";
    return kExitValidation;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    if (!opt.quiet) out << "validation failed: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    if (!opt.quiet) out << "diverged at step " << e.step() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (!opt.quiet) out << "run failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace pcula
