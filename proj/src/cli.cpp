#include "topophase/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "topophase/bundled.hpp"
#include "topophase/config.hpp"
#include "topophase/errors.hpp"
#include "topophase/instance_gen.hpp"
#include "topophase/phase.hpp"
#include "topophase/text.hpp"

namespace topophase {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string load_config_text(const std::string& config_path) {
  if (config_path.empty()) return std::string(bundled_config("two-metro"));
  for (std::string_view name : bundled_config_names()) {
    if (config_path == name) return std::string(bundled_config(name));
  }
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open configuration file: " + config_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CapabilityFlags {
  std::optional<double> delta, gamma, rho, tau;

  bool any() const { return delta || gamma || rho || tau; }
  bool all() const { return delta && gamma && rho && tau; }
};

CapabilityVector resolve_capability(const CapabilityFlags& flags,
                                    const IndustryPreset* preset) {
  CapabilityVector c;
  if (preset != nullptr) {
    c = preset->current;
  } else if (!flags.all()) {
    throw UsageError("specify --preset or all of --delta --gamma --rho --tau");
  }
  if (flags.delta) c.delta = *flags.delta;
  if (flags.gamma) c.gamma = *flags.gamma;
  if (flags.rho) c.rho = *flags.rho;
  if (flags.tau) c.tau = *flags.tau;
  validate(c);
  return c;
}

CapabilityVector parse_capability_list(const std::string& text, const char* flag) {
  CapabilityVector c;
  char trailing = 0;
  int matched = std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf%c", &c.delta, &c.gamma,
                            &c.rho, &c.tau, &trailing);
  if (matched != 4) {
    throw UsageError(std::string(flag) + " expects \"delta,gamma,rho,tau\", got '" +
                     text + "'");
  }
  validate(c);
  return c;
}

// Routes a command's CSV either to --out or to the process stdout.
void write_csv(const std::string& out_path, std::ostream& fallback,
               const std::string& body) {
  if (out_path.empty()) {
    fallback << body;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file: " + out_path);
  file << body;
}

std::string facility_lookup(const Allocation& alloc, const std::string& demand_id) {
  for (const auto& [d, f] : alloc.assignment) {
    if (d == demand_id) return f;
  }
  return {};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"topophase: capability-driven manufacturing topology engine"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_name;
  std::string out_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 42;
  app.add_option("--config", config_path,
                 "Configuration document (path or bundled name: two-metro, mca-demo)");
  app.add_option("--preset", preset_name, "Industry preset supplying capability and thresholds");
  app.add_option("--out", out_path, "Write the CSV result to this file instead of stdout");
  app.add_option("--set", overrides, "Dotted-path configuration override KEY=VALUE")
      ->take_all();
  app.add_option("--seed", seed, "Seed for randomized harnesses");

  CapabilityFlags cap;
  auto add_capability_flags = [&cap](CLI::App* cmd) {
    cmd->add_option("--delta", cap.delta, "Dexterity index in [0,1]");
    cmd->add_option("--gamma", cap.gamma, "Generalization index in [0,1]");
    cmd->add_option("--rho", cap.rho, "Reliability index in [0,1]");
    cmd->add_option("--tau", cap.tau, "Tactile-vision fusion index in [0,1]");
  };

  double yield_rho = 0.0;
  int yield_n = 0;
  CLI::App* cmd_yield = app.add_subcommand("yield", "Line-level yield rho^n");
  cmd_yield->add_option("--rho", yield_rho, "Per-station reliability")->required();
  cmd_yield->add_option("--n", yield_n, "Number of stations")->required();

  CLI::App* cmd_mebs =
      app.add_subcommand("mebs", "Minimum economic batch size and regime");
  add_capability_flags(cmd_mebs);

  std::string mode = "classic";
  CLI::App* cmd_select = app.add_subcommand("select-site", "Rank candidate regions");
  add_capability_flags(cmd_select);
  cmd_select->add_option("--mode", mode, "classic or mca")
      ->check(CLI::IsMember({"classic", "mca"}));

  CLI::App* cmd_mca_rank =
      app.add_subcommand("mca-rank", "Rank regions by machine-climate adaptation");

  bool couple_phi = false;
  CLI::App* cmd_allocate =
      app.add_subcommand("allocate", "Optimize facility set and demand assignment");
  add_capability_flags(cmd_allocate);
  cmd_allocate->add_flag("--couple-phi", couple_phi,
                         "Degrade facility reliability by the local climate");

  int steps = 41;
  std::string from_spec = "0,0,0,0";
  std::string to_spec = "1,1,1,1";
  double jump_threshold = 0.1;
  double tol = 1e-4;
  std::string critical_out;
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "1-D capability path sweep");
  cmd_sweep->add_option("--steps", steps, "Samples along the path (>= 2)");
  cmd_sweep->add_option("--from", from_spec, "Path start delta,gamma,rho,tau");
  cmd_sweep->add_option("--to", to_spec, "Path end delta,gamma,rho,tau");
  cmd_sweep->add_option("--jump-threshold", jump_threshold, "Min |dMCI| flagged as a jump");
  cmd_sweep->add_option("--tol", tol, "Bisection tolerance on the path parameter");
  cmd_sweep->add_option("--critical-out", critical_out, "Write critical points CSV here");
  cmd_sweep->add_flag("--couple-phi", couple_phi,
                      "Degrade facility reliability by the local climate");

  int rows = 50;
  int cols = 50;
  double fixed_tau = 0.75;
  CLI::App* cmd_diagram =
      app.add_subcommand("phase-diagram", "2-D phase grid over (delta*rho, gamma)");
  cmd_diagram->add_option("--rows", rows, "Grid rows (delta*rho axis)");
  cmd_diagram->add_option("--cols", cols, "Grid columns (gamma axis)");
  cmd_diagram->add_option("--tau", fixed_tau, "Fixed tactile-vision fusion value");
  cmd_diagram->add_flag("--couple-phi", couple_phi,
                        "Degrade facility reliability by the local climate");

  CLI::App* cmd_presets = app.add_subcommand("presets", "List bundled industry presets");

  int instances = 100;
  int max_regions = 8;
  CLI::App* cmd_oracle =
      app.add_subcommand("oracle-check", "Compare allocate against the exhaustive oracle");
  cmd_oracle->add_option("--instances", instances, "Random instances to test");
  cmd_oracle->add_option("--max-regions", max_regions, "Region count upper bound (<= 15)");

  for (CLI::App* sub :
       {cmd_yield, cmd_mebs, cmd_select, cmd_mca_rank, cmd_allocate, cmd_sweep,
        cmd_diagram, cmd_presets, cmd_oracle}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 4;
  }

  try {
    Config cfg = load_config(load_config_text(config_path), overrides);

    const IndustryPreset* preset = nullptr;
    if (!preset_name.empty()) {
      preset = find_preset(cfg, preset_name);
      if (preset == nullptr) throw ConfigError("unknown preset: " + preset_name);
    }
    SurfaceThresholds thresholds =
        preset != nullptr ? preset->thresholds : default_thresholds();

    ModelBundle bundle;
    bundle.weights = cfg.weights;
    bundle.cost_constants = cfg.cost_constants;
    bundle.product = cfg.product;
    bundle.mca_model = cfg.mca_model;
    bundle.thresholds = thresholds;
    bundle.alloc_options.couple_phi = couple_phi;

    std::ostringstream csv;

    if (cmd_yield->parsed()) {
      csv << "rho,n,yield\n"
          << format_fixed(yield_rho) << "," << yield_n << ","
          << format_fixed(line_yield(yield_rho, yield_n)) << "\n";

    } else if (cmd_mebs->parsed()) {
      CapabilityVector c = resolve_capability(cap, preset);
      double batch = mebs(c, cfg.cost_constants, cfg.product);
      double n_star = resolve_n_star(cfg.product, cfg.world);
      RegimeResult rr = regime(batch, n_star);
      csv << "mebs,n_star,regime,boundary,c_facility,c_equip,c_switch,c_labor,margin\n"
          << format_fixed(batch) << "," << format_fixed(n_star) << ","
          << to_string(rr.regime) << "," << (rr.on_boundary ? 1 : 0) << ","
          << format_fixed(cfg.product.facility_fixed) << ","
          << format_fixed(cfg.product.equipment_fixed) << ","
          << format_fixed(switching_cost(c.gamma, cfg.cost_constants)) << ","
          << format_fixed(labor_cost(c, cfg.cost_constants)) << ","
          << format_fixed(cfg.product.price - cfg.product.variable_cost) << "\n";

    } else if (cmd_select->parsed()) {
      CapabilityVector c = resolve_capability(cap, preset);
      SiteMode site_mode = mode == "mca" ? SiteMode::Mca : SiteMode::Classic;
      std::vector<SiteRanking> ranking =
          select_site(cfg.world, c, cfg.weights, site_mode, &cfg.mca_model);
      csv << (site_mode == SiteMode::Mca ? "rank,region_id,score,phi\n"
                                         : "rank,region_id,score\n");
      int rank = 1;
      for (const SiteRanking& entry : ranking) {
        csv << rank << "," << csv_field(entry.region_id) << ","
            << format_fixed(entry.score);
        if (site_mode == SiteMode::Mca) csv << "," << format_fixed(entry.phi);
        csv << "\n";
        ++rank;
      }

    } else if (cmd_mca_rank->parsed()) {
      std::vector<McaRankEntry> ranking = mca_rank(cfg.world, cfg.mca_model);
      csv << "rank,region_id,phi,humidity,dust,thermal_cycling,irradiance,"
             "precipitation_days\n";
      int rank = 1;
      for (const McaRankEntry& entry : ranking) {
        csv << rank << "," << csv_field(entry.region_id) << ","
            << format_fixed(entry.phi);
        for (double response : entry.responses) csv << "," << format_fixed(response);
        csv << "\n";
        ++rank;
      }

    } else if (cmd_allocate->parsed()) {
      CapabilityVector c = resolve_capability(cap, preset);
      Allocation alloc =
          allocate(cfg.world, c, cfg.cost_constants, cfg.product, cfg.weights,
                   thresholds, cfg.mca_model, bundle.alloc_options);
      csv << "region_id,is_facility,volume,assigned_to,distance_km\n";
      for (const Region& r : cfg.world.regions) {
        bool is_facility = false;
        for (const FacilityLoad& f : alloc.facilities) {
          if (f.region_id == r.id) is_facility = true;
        }
        size_t index = static_cast<size_t>(&r - cfg.world.regions.data());
        csv << csv_field(r.id) << "," << (is_facility ? 1 : 0) << ","
            << format_fixed(alloc.outputs[index]) << ",";
        if (r.demand > 0.0) {
          std::string facility = facility_lookup(alloc, r.id);
          csv << csv_field(facility) << ","
              << format_fixed(distance(r, *cfg.world.find(facility)));
        } else {
          csv << ",";
        }
        csv << "\n";
      }
      err << "summary: total_cost=" << format_fixed(alloc.total_cost)
          << " mci=" << format_fixed(mci(alloc.outputs))
          << " facilities=" << alloc.facilities.size() << "\n";

    } else if (cmd_sweep->parsed()) {
      CapabilityPath path = linear_path(parse_capability_list(from_spec, "--from"),
                                        parse_capability_list(to_spec, "--to"));
      SweepOptions sweep_options;
      sweep_options.jump_threshold = jump_threshold;
      sweep_options.tol = tol;
      SweepResult result = sweep_1d(path, steps, cfg.world, bundle, sweep_options);
      csv << "t,mci,phase,facilities\n";
      for (const SweepSample& s : result.samples) {
        csv << format_fixed(s.t) << "," << format_fixed(s.mci) << ","
            << to_string(s.phase) << "," << s.facilities << "\n";
      }
      for (const CriticalPoint& cp : result.critical_points) {
        err << "critical: t=" << format_fixed(cp.t) << " kind=" << to_string(cp.kind)
            << " magnitude=" << format_fixed(cp.magnitude) << "\n";
      }
      if (!critical_out.empty()) {
        std::string critical_csv = "t,kind,magnitude\n";
        for (const CriticalPoint& cp : result.critical_points) {
          critical_csv += format_fixed(cp.t);
          critical_csv += ",";
          critical_csv += to_string(cp.kind);
          critical_csv += ",";
          critical_csv += format_fixed(cp.magnitude);
          critical_csv += "\n";
        }
        write_csv(critical_out, out, critical_csv);
      }

    } else if (cmd_diagram->parsed()) {
      PhaseDiagram grid = sweep_2d(fixed_tau, rows, cols, cfg.world, bundle);
      csv << "a,gamma,phase,mci\n";
      for (int i = 0; i < grid.rows; ++i) {
        for (int j = 0; j < grid.cols; ++j) {
          const PhaseCell& cell = grid.at(i, j);
          csv << format_fixed(grid.a_axis[static_cast<size_t>(i)]) << ","
              << format_fixed(grid.gamma_axis[static_cast<size_t>(j)]) << ","
              << to_string(cell.phase) << ","
              << (cell.feasible ? format_fixed(cell.mci) : std::string()) << "\n";
        }
      }

    } else if (cmd_presets->parsed()) {
      csv << "name,delta,gamma,rho,tau,sigma_w_delta_min,sigma_w_gamma_min,"
             "sigma_w_rho_min,sigma_n_delta_min,sigma_n_gamma_min,sigma_n_rho_min,"
             "sigma_h_theta_h,sigma_h_theta_g,sigma_h_tau_min,metadata\n";
      for (const IndustryPreset& p : cfg.presets) {
        csv << csv_field(p.name) << "," << format_fixed(p.current.delta) << ","
            << format_fixed(p.current.gamma) << "," << format_fixed(p.current.rho)
            << "," << format_fixed(p.current.tau) << ","
            << format_fixed(p.thresholds.sigma_w.delta_min) << ","
            << format_fixed(p.thresholds.sigma_w.gamma_min) << ","
            << format_fixed(p.thresholds.sigma_w.rho_min) << ","
            << format_fixed(p.thresholds.sigma_n.delta_min) << ","
            << format_fixed(p.thresholds.sigma_n.gamma_min) << ","
            << format_fixed(p.thresholds.sigma_n.rho_min) << ","
            << format_fixed(p.thresholds.sigma_h.theta_h) << ","
            << format_fixed(p.thresholds.sigma_h.theta_g) << ","
            << format_fixed(p.thresholds.sigma_h.tau_min) << ","
            << csv_field(p.metadata) << "\n";
      }

    } else if (cmd_oracle->parsed()) {
      if (max_regions < 2 || max_regions > 15) {
        throw UsageError("--max-regions must lie in [2, 15]");
      }
      if (instances < 1) throw UsageError("--instances must be >= 1");
      OracleCheckResult result = oracle_check(seed, instances, max_regions, bundle);
      csv << "instances,identical,within_2pct,oracle_never_higher,max_rel_gap\n"
          << result.instances << "," << result.identical << "," << result.within_2pct
          << "," << (result.oracle_never_higher ? 1 : 0) << ","
          << format_fixed(result.max_rel_gap, 9) << "\n";
    }

    write_csv(out_path, out, csv.str());
    return 0;

  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 4;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace topophase
