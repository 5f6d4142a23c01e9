#include "dicke/cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dicke/bernstein.hpp"
#include "dicke/bipartite.hpp"
#include "dicke/cli/output.hpp"
#include "dicke/dicke_core.hpp"
#include "dicke/expm.hpp"
#include "dicke/hausdorff.hpp"
#include "dicke/leading_order.hpp"
#include "dicke/parallel.hpp"
#include "dicke/reconstruct.hpp"

namespace dicke::cli {
namespace {

std::string indexed(const std::string& base, std::size_t k) {
  return base + "_" + std::to_string(k);
}

Trajectory trajectory(const RunConfig& cfg, std::ostream& err) {
  std::optional<std::string> warning;
  const PopulationVector p0 = load_initial(cfg.initial, cfg.n, &warning);
  if (warning) err << "warning: " << *warning << "\n";
  return evolve_trajectory(p0, grid_points(cfg.time_grid));
}

// Runs body(i, rows_i) per time point in parallel and concatenates rows in
// grid order.
Table per_time(const Trajectory& traj,
               const std::function<void(std::size_t, Table&)>& body) {
  std::vector<Table> parts(traj.times.size());
  parallel_for(traj.times.size(), [&](std::size_t i) { body(i, parts[i]); });
  Table t = Table::long_format();
  for (Table& part : parts) {
    for (auto& row : part.rows) t.rows.push_back(std::move(row));
  }
  return t;
}

Table simulate(const RunConfig& cfg, std::ostream& err) {
  const Trajectory traj = trajectory(cfg, err);
  return per_time(traj, [&](std::size_t i, Table& t) {
    const double time = traj.times[i];
    const PopulationVector& p = traj.states[i];
    for (std::size_t k = 0; k < p.size(); ++k) t.add(time, indexed("p", k), p[k]);
    t.add(time, "intensity", intensity(p));
  });
}

Table moments(const RunConfig& cfg, std::ostream& err) {
  const Trajectory traj = trajectory(cfg, err);
  const MomentVector m0 = populations_to_moments(traj.states.front());
  // states.front() sits at times[0]; propagate the generator from there.
  const MomentGenerator gen = moment_generator(cfg.n);
  Eigen::VectorXd m0v(cfg.n + 1);
  for (int k = 0; k <= cfg.n; ++k) m0v[k] = static_cast<double>(m0[static_cast<std::size_t>(k)]);
  if (m0.ill_conditioned()) err << "warning: moment transform is ill-conditioned for N=" << cfg.n << "\n";
  return per_time(traj, [&](std::size_t i, Table& t) {
    const double time = traj.times[i];
    const MomentVector mt = populations_to_moments(traj.states[i]);
    const Eigen::VectorXd mg = expm(gen.Mbar * (time - traj.times.front())) * m0v;
    double worst = 0.0;
    for (int k = 0; k <= cfg.n; ++k) {
      const double a = static_cast<double>(mt[static_cast<std::size_t>(k)]);
      const std::size_t sk = static_cast<std::size_t>(k);
      t.add(time, indexed("m", sk) + "_transform", a);
      t.add(time, indexed("m", sk) + "_generator", mg[k]);
      worst = std::max(worst, std::abs(a - mg[k]));
    }
    t.add(time, "max_discrepancy", worst);
  });
}

Table check(const RunConfig& cfg, std::ostream& err) {
  const Trajectory traj = trajectory(cfg, err);
  const double tol = cfg.tolerances.tol_psd;
  return per_time(traj, [&](std::size_t i, Table& t) {
    const double time = traj.times[i];
    const MomentVector m = populations_to_moments(traj.states[i]);
    const SeparabilityVerdict v = validate_moments(m, tol);
    t.add(time, "valid", v.valid ? 1.0 : 0.0);
    t.add(time, "boundary", v.boundary ? 1.0 : 0.0);
    t.add(time, "minor_test_valid", v.minor_test_valid ? 1.0 : 0.0);
    t.add(time, "min_eig_H", v.min_eig_H);
    t.add(time, "min_eig_Hbar", v.min_eig_Hbar);
    if (v.min_eig_Hx) t.add(time, "min_eig_Hx", *v.min_eig_Hx);
    t.add(time, "hankel_negativity", hankel_negativity(m, tol));
  });
}

Table reconstruct(const RunConfig& cfg, std::ostream& err) {
  const Trajectory traj = trajectory(cfg, err);
  ReconstructOptions opt;
  opt.rank_tol = cfg.tolerances.rank_tol;
  opt.merge_tol = cfg.tolerances.merge_tol;
  opt.tol_psd = cfg.tolerances.tol_psd;
  return per_time(traj, [&](std::size_t i, Table& t) {
    const double time = traj.times[i];
    const PopulationVector& p = traj.states[i];
    const MomentVector m = populations_to_moments(p);
    Decomposition d = [&] {
      try {
        return reconstruct_decomposition(m, opt).sorted_by_eps_descending();
      } catch (const InfeasibleError& e) {
        std::ostringstream os;
        os << e.what() << " (at t=" << format_double(time) << ")";
        throw InfeasibleError(os.str());
      }
    }();
    t.add(time, "atoms", static_cast<double>(d.size()));
    for (std::size_t a = 0; a < d.size(); ++a) {
      t.add(time, indexed("w", a + 1), d.atoms()[a].weight);
      t.add(time, indexed("eps", a + 1), d.atoms()[a].eps);
    }
    const PopulationVector rec = decomposition_populations(d);
    for (std::size_t k = 0; k < p.size(); ++k) {
      t.add(time, indexed("p", k), p[k]);
      t.add(time, indexed("p_rec", k), rec[k]);
    }
    t.add(time, "residual_population", decomposition_residual(p, d));
    t.add(time, "residual_moment", moment_residual(m, d));
    t.add(time, "intensity", intensity(p));
    t.add(time, "intensity_mixture", intensity_from_decomposition(cfg.n, d));
  });
}

Table negativity2(const RunConfig& cfg, std::ostream& err) {
  if (cfg.n < 2) throw Error("negativity2 needs N >= 2");
  const Trajectory traj = trajectory(cfg, err);
  return per_time(traj, [&](std::size_t i, Table& t) {
    const double time = traj.times[i];
    const TwoSpinState s = two_spin_state(traj.states[i]);
    t.add(time, "A", s.A);
    t.add(time, "B", s.B);
    t.add(time, "D", s.D);
    t.add(time, "negativity", two_spin_negativity(s));
    t.add(time, "delta", delta_witness(s));
  });
}

Table bipartite(const RunConfig& cfg, std::ostream& err) {
  if (cfg.splits.empty()) throw Error("bipartite needs at least one --split n:n1");
  const Trajectory traj = trajectory(cfg, err);
  return per_time(traj, [&](std::size_t i, Table& t) {
    const double time = traj.times[i];
    for (const auto& [n, n1] : cfg.splits) {
      const ReducedDickeMixture q = reduced_dicke_mixture(traj.states[i], n);
      t.add(time, "negativity_n" + std::to_string(n) + "_n1_" + std::to_string(n1),
            bipartition_negativity(q, n1, cfg.tolerances.tol_psd));
    }
  });
}

Table verify_kr(const RunConfig& cfg, std::ostream&) {
  struct Cell_ {
    int n, r;
    MinorKind kind;
    double x;
  };
  std::vector<Cell_> cells;
  for (int r : cfg.kr.r) {
    const std::vector<int> ns = cfg.kr.n.empty() ? std::vector<int>{2 * r} : cfg.kr.n;
    for (const std::string& k : cfg.kr.kind) {
      for (int n : ns) {
        for (double x : cfg.kr.x) cells.push_back({n, r, parse_minor_kind(k), x});
      }
    }
  }
  PrecisionContext ctx;
  ctx.digits = cfg.precision_digits;
  std::vector<std::optional<LeadingOrderReport>> reports(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    const Cell_& c = cells[i];
    reports[i] = leading_coefficient_extract(c.n, c.r, c.kind, c.x, ctx);
  });
  Table t{{"N", "r", "kind", "x", "estimated_K", "expected_K", "relative_error",
           "fitted_exponent", "expected_exponent", "fit_residual"},
          {}};
  for (const auto& rep : reports) {
    t.rows.push_back({static_cast<long long>(rep->emitters), static_cast<long long>(rep->r),
                      to_string(rep->kind), rep->x, rep->estimated_K, rep->expected_K,
                      rep->relative_error, rep->fitted_exponent, rep->expected_exponent,
                      rep->fit_residual});
  }
  return t;
}

struct Raw {
  std::string initial = "fully-excited";
  std::string grid = "0:1:11";
  std::vector<std::string> splits;
};

void add_output(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--out", cfg.output.path, "Output file (default: stdout)");
  sub->add_option("--format", cfg.output.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

void add_trajectory_options(CLI::App* sub, RunConfig& cfg, Raw& raw) {
  sub->add_option("--n", cfg.n, "Number of emitters N")->required();
  sub->add_option("--initial", raw.initial,
                  "fully-excited | dicke:K | coherent:EPS | file:PATH");
  sub->add_option("--t", raw.grid, "Time grid start:stop:count[:log]");
  sub->add_option("--tol-psd", cfg.tolerances.tol_psd, "PSD eigenvalue tolerance");
  sub->add_option("--rank-tol", cfg.tolerances.rank_tol, "Hankel rank threshold");
  sub->add_option("--merge-tol", cfg.tolerances.merge_tol, "Atom merge distance");
  sub->add_option("--digits", cfg.precision_digits, "Extended precision digits");
  add_output(sub, cfg);
}

}  // namespace

nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["command"] = cfg.command;
  if (cfg.command == "verify-kr") {
    j["r"] = cfg.kr.r;
    j["kind"] = cfg.kr.kind;
    j["x"] = cfg.kr.x;
    j["n"] = cfg.kr.n;
  } else {
    j["N"] = cfg.n;
    j["initial"] = cfg.initial.spec;
    j["time_grid"] = {{"start", cfg.time_grid.start},
                      {"stop", cfg.time_grid.stop},
                      {"count", cfg.time_grid.count},
                      {"spacing", cfg.time_grid.log ? "log" : "linear"}};
    j["tolerances"] = {{"tol_psd", cfg.tolerances.tol_psd},
                       {"rank_tol", cfg.tolerances.rank_tol},
                       {"merge_tol", cfg.tolerances.merge_tol}};
    if (!cfg.splits.empty()) {
      nlohmann::ordered_json s = nlohmann::ordered_json::array();
      for (const auto& [n, n1] : cfg.splits) s.push_back({n, n1});
      j["splits"] = std::move(s);
    }
  }
  j["precision_digits"] = cfg.precision_digits;
  j["output"] = {{"path", cfg.output.path}, {"format", cfg.output.format}};
  j["time_units"] = "1/Gamma";
  return j;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    Table t;
    if (cfg.command == "simulate") {
      t = simulate(cfg, err);
    } else if (cfg.command == "moments") {
      t = moments(cfg, err);
    } else if (cfg.command == "check") {
      t = check(cfg, err);
    } else if (cfg.command == "reconstruct") {
      t = reconstruct(cfg, err);
    } else if (cfg.command == "negativity2") {
      t = negativity2(cfg, err);
    } else if (cfg.command == "bipartite") {
      t = bipartite(cfg, err);
    } else if (cfg.command == "verify-kr") {
      t = verify_kr(cfg, err);
    } else {
      err << "unknown subcommand '" << cfg.command << "'\n";
      return kUsage;
    }
    write_table(t, cfg.output.path, cfg.output.format, out);
    if (!cfg.output.path.empty()) write_sidecar(cfg.output.path, config_json(cfg));
    return kOk;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dicke superradiance: separability via truncated Hausdorff moments", "dicke_moments"};
  app.require_subcommand(1);
  RunConfig cfg;
  Raw raw;

  const std::vector<std::pair<std::string, std::string>> traj_cmds = {
      {"simulate", "Populations p_k(t) and intensity"},
      {"moments", "Moments via B p(t) and exp(Mbar t) m(0)"},
      {"check", "Separability verdict and Hankel negativity"},
      {"reconstruct", "Spin-coherent decomposition per time"},
      {"negativity2", "Two-spin negativity and Delta witness"},
      {"bipartite", "Bipartition negativity for --split n:n1"},
  };
  for (const auto& [name, help] : traj_cmds) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_trajectory_options(sub, cfg, raw);
    if (name == "bipartite") {
      sub->add_option("--split", raw.splits, "Reduced size and split, n:n1 (repeatable)")
          ->required();
    }
  }
  CLI::App* kr = app.add_subcommand("verify-kr", "Leading-order Hankel minor coefficients");
  kr->add_option("--r", cfg.kr.r, "Minor orders");
  kr->add_option("--kind", cfg.kr.kind, "plain and/or shifted")
      ->check(CLI::IsMember({"plain", "shifted"}));
  kr->add_option("--x", cfg.kr.x, "Evaluation points in (0,1)");
  kr->add_option("--n", cfg.kr.n, "System sizes (default 2r)");
  kr->add_option("--digits", cfg.precision_digits, "Extended precision digits");
  add_output(kr, cfg);

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
  try {
    if (cfg.command != "verify-kr") {
      cfg.initial = parse_initial(raw.initial);
      cfg.time_grid = parse_time_grid(raw.grid);
      for (const std::string& s : raw.splits) cfg.splits.push_back(parse_split(s));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return execute(cfg, out, err);
}

}  // namespace dicke::cli
