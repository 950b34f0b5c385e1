#include "dimwitness/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dimwitness/certify.hpp"
#include "dimwitness/classical.hpp"
#include "dimwitness/quantum_opt.hpp"
#include "dimwitness/report.hpp"
#include "dimwitness/settings.hpp"
#include "dimwitness/simulate.hpp"

namespace dimwitness::cli {

namespace {

using nlohmann::json;

// Human-readable numbers carry 6 significant digits; JSON and CSV keep the
// shortest exact representation.
std::string human(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const std::string& path) {
  const auto text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

// Catalog name, or a path to a witness JSON file.
CatalogEntry resolve_witness(const std::string& spec) {
  const auto names = catalog_names();
  if (std::find(names.begin(), names.end(), spec) != names.end()) return catalog(spec);
  if (std::filesystem::exists(spec)) return witness_from_json(read_json(spec));
  throw NotFound("unknown witness '" + spec + "': not a catalog name (i3, i4) or an existing JSON file");
}

json classical_to_json(const ClassicalStrategy& s) {
  return {{"d", s.d()}, {"labels", s.labels()}, {"responses", s.responses()}};
}

struct Globals {
  std::uint64_t seed = 42;
  bool json_output = false;
};

struct BoundsOpts {
  std::string witness;
  std::string model;
  int dim = 2;
  double guard = kDefaultEnumerationGuard;
  SeesawConfig seesaw;
  std::string strategy_out;
};

int cmd_bounds(const BoundsOpts& o, const Globals& g, std::ostream& out) {
  const auto entry = resolve_witness(o.witness);
  const auto model = model_from_string(o.model);
  json result{{"witness", entry.witness.name()}, {"model", to_string(model)}, {"dim", o.dim}};
  std::ostringstream text;
  json strategy;
  if (model == Model::Classical) {
    const auto r = classical_bound(entry.witness, o.dim, o.guard);
    result["value"] = r.value;
    result["strategies_checked"] = r.strategies_checked;
    strategy = classical_to_json(r.strategy);
    text << human(r.value) << "\n";
  } else {
    auto cfg = o.seesaw;
    cfg.seed = g.seed;
    const auto r = optimize(entry.witness, o.dim, cfg);
    const auto hits = std::count_if(r.per_restart_values.begin(), r.per_restart_values.end(),
                                    [&](double v) { return v > r.best_value - 1e-6; });
    const auto max_iters = *std::max_element(r.iterations_used.begin(), r.iterations_used.end());
    result["value"] = r.best_value;
    result["restarts"] = r.per_restart_values.size();
    result["restarts_at_best"] = hits;
    result["per_restart_values"] = r.per_restart_values;
    result["iterations_used"] = r.iterations_used;
    result["seed"] = g.seed;
    strategy = to_json(r.best_strategy);
    text << human(r.best_value) << "\n"
         << "# see-saw lower bound; " << hits << "/" << r.per_restart_values.size()
         << " restarts within 1e-6 of best; max sweeps " << max_iters << "; seed " << g.seed << "\n";
  }
  if (!o.strategy_out.empty()) write_file(o.strategy_out, strategy.dump(2) + "\n");
  if (g.json_output) {
    result["strategy"] = strategy;
    out << result.dump(2) << "\n";
  } else {
    out << text.str();
  }
  return kExitOk;
}

struct OptimizeOpts {
  std::string witness;
  int dim = 2;
  SeesawConfig seesaw;
  int zero_tie = 1;
  std::string init;
  std::string out_path;
};

int cmd_optimize(const OptimizeOpts& o, const Globals& g, std::ostream& out) {
  const auto entry = resolve_witness(o.witness);
  auto cfg = o.seesaw;
  cfg.seed = g.seed;
  cfg.zero_tie = o.zero_tie < 0 ? Sign::Minus : Sign::Plus;
  const auto r = o.init.empty() ? optimize(entry.witness, o.dim, cfg)
                                : optimize_from(entry.witness, strategy_from_json(read_json(o.init)), cfg);
  const auto strategy = to_json(r.best_strategy);
  if (!o.out_path.empty()) write_file(o.out_path, strategy.dump(2) + "\n");
  if (g.json_output) {
    out << json{{"witness", entry.witness.name()},
                {"dim", r.best_strategy.d()},
                {"best_value", r.best_value},
                {"per_restart_values", r.per_restart_values},
                {"iterations_used", r.iterations_used},
                {"seed", g.seed},
                {"strategy", strategy}}
               .dump(2)
        << "\n";
  } else {
    out << "best value " << human(r.best_value) << " over " << r.per_restart_values.size() << " start(s), seed "
        << g.seed << "\n";
    for (std::size_t i = 0; i < r.per_restart_values.size(); ++i) {
      out << "  restart " << i << ": " << human(r.per_restart_values[i]) << " after " << r.iterations_used[i]
          << " sweeps\n";
    }
  }
  return kExitOk;
}

struct SimulateOpts {
  std::string experiment;
  std::string strategy;
  std::string witness;
  std::string label;
  RunConfig run;
  std::string out_path;
  std::string estimate_out;
};

int cmd_simulate(const SimulateOpts& o, const Globals& g, std::ostream& out, std::ostream& err) {
  RunConfig cfg = o.run;
  cfg.seed = g.seed;
  std::string witness_name;
  std::string label = o.label;
  double theory = 0.0;
  std::vector<CountRecord> counts;
  Witness w("placeholder", {{1}}, false);
  if (!o.experiment.empty()) {
    const auto spec = experiment(o.experiment);
    w = catalog(spec.witness_name).witness;
    witness_name = spec.witness_name;
    theory = spec.expected_value;
    if (label.empty()) label = spec.label;
    counts = simulate_counts(w, expectations(spec), cfg);
  } else {
    if (o.strategy.empty() || o.witness.empty()) {
      throw ParseError("simulate: give --experiment, or --strategy together with --witness");
    }
    const auto entry = resolve_witness(o.witness);
    w = entry.witness;
    witness_name = w.name();
    const auto strategy = strategy_from_json(read_json(o.strategy));
    theory = quantum_value(strategy, w);
    if (label.empty()) label = o.strategy;
    counts = simulate_counts(w, quantum_expectations(strategy), cfg);
  }
  const auto est = estimate(w, counts);
  if (!o.out_path.empty()) write_file(o.out_path, counts_to_json(witness_name, counts).dump(2) + "\n");
  const json estimate_json{{"label", label},
                           {"experiment", o.experiment},
                           {"witness", witness_name},
                           {"value", est.value},
                           {"sigma", est.sigma},
                           {"theory", theory},
                           {"degenerate_variance", est.degenerate_variance},
                           {"rate", cfg.rate},
                           {"duration", cfg.duration},
                           {"seed", cfg.seed}};
  if (!o.estimate_out.empty()) write_file(o.estimate_out, estimate_json.dump(2) + "\n");
  if (est.degenerate_variance) {
    err << "warning: degenerate-variance: some settings recorded a single outcome; sigma underestimates the error\n";
  }
  if (g.json_output) {
    out << estimate_json.dump(2) << "\n";
  } else {
    out << label << ": " << witness_name << " = " << human(est.value) << " +/- " << human(est.sigma) << " (theory "
        << human(theory) << ")\n";
  }
  return kExitOk;
}

struct CertifyOpts {
  std::string counts;
  double k = kDefaultConfidenceSigmas;
  bool merge = false;
  std::string witness_file;
};

int cmd_certify(const CertifyOpts& o, std::ostream& out, std::ostream& err) {
  const auto file = load_counts(o.counts, o.merge);
  const auto entry = o.witness_file.empty() ? resolve_witness(file.witness) : witness_from_json(read_json(o.witness_file));
  if (entry.witness.name() != file.witness) {
    throw ParseError("certify: counts are for witness '" + file.witness + "' but the witness file defines '" +
                     entry.witness.name() + "'");
  }
  const auto est = estimate(entry.witness, file.records);
  const auto cert = certify(entry.witness, entry.bounds, est, o.k);
  for (const auto& w : cert.warnings) err << "warning: " << w << "\n";
  out << to_json(cert).dump(2) << "\n";
  if (!cert.nontrivial()) {
    err << "no nontrivial certificate: no bound is exceeded at " << human(o.k) << " sigma\n";
    return kExitNoViolation;
  }
  return kExitOk;
}

struct ReportOpts {
  std::vector<std::string> inputs;
  std::string svg = "report.svg";
  std::string csv = "report.csv";
};

int cmd_report(const ReportOpts& o, std::ostream& out) {
  std::vector<ReportRow> rows;
  for (const auto& path : o.inputs) rows.push_back(row_from_json(read_json(path)));
  const auto svg = render_svg(rows);
  write_file(o.svg, svg);
  write_file(o.csv, render_csv(rows));
  out << "wrote " << o.svg << " and " << o.csv << " (" << rows.size() << " rows)\n";
  return kExitOk;
}

int cmd_settings_export(const std::string& id, const std::string& out_path, std::ostream& out) {
  const auto spec = experiment(id);
  auto j = to_json(as_quantum(spec));
  const auto text = j.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
  }
  return kExitOk;
}

void add_seesaw_options(CLI::App* cmd, SeesawConfig& cfg) {
  cmd->add_option("--restarts", cfg.restarts, "See-saw restarts")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", cfg.max_iters, "Sweeps per restart")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--tol", cfg.conv_tol, "Stop when a sweep gains less than this")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Device-independent dimension witnesses: bounds, see-saw optimization, simulated photon counting "
               "and dimension certification."};
  app.name("dimwitness");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every randomized command")->capture_default_str();
  app.add_flag("--json", g.json_output, "Machine-readable output");

  BoundsOpts bounds;
  auto* c_bounds = app.add_subcommand("bounds", "Classical (exact) or quantum (see-saw) bound of a witness");
  c_bounds->add_option("--witness", bounds.witness, "Catalog name (i3, i4) or witness JSON path")->required();
  c_bounds->add_option("--model", bounds.model, "classical or quantum")
      ->required()
      ->check(CLI::IsMember({"classical", "quantum"}));
  c_bounds->add_option("--dim", bounds.dim, "System dimension")->required();
  c_bounds->add_option("--guard", bounds.guard, "Largest classical enumeration allowed")->capture_default_str();
  c_bounds->add_option("--strategy-out", bounds.strategy_out, "Write the optimal strategy as JSON");
  add_seesaw_options(c_bounds, bounds.seesaw);

  OptimizeOpts opt;
  auto* c_opt = app.add_subcommand("optimize", "Multi-restart see-saw maximization with diagnostics");
  c_opt->add_option("--witness", opt.witness, "Catalog name or witness JSON path")->required();
  c_opt->add_option("--dim", opt.dim, "Hilbert-space dimension (2-4)");
  c_opt->add_option("--zero-tie", opt.zero_tie, "Sign given to zero eigenvalues (+1 or -1)")
      ->check(CLI::IsMember({-1, 1}));
  c_opt->add_option("--init", opt.init, "Start from this strategy JSON instead of random restarts");
  c_opt->add_option("--out", opt.out_path, "Write the best strategy as JSON");
  add_seesaw_options(c_opt, opt.seesaw);

  SimulateOpts sim;
  auto* c_sim = app.add_subcommand("simulate", "Simulate Poissonian photon counts for one experiment");
  c_sim->add_option("--experiment", sim.experiment, "Catalog experiment id");
  c_sim->add_option("--strategy", sim.strategy, "Strategy JSON to simulate instead of a catalog experiment");
  c_sim->add_option("--witness", sim.witness, "Witness for --strategy");
  c_sim->add_option("--label", sim.label, "Row label for reports");
  c_sim->add_option("--rate", sim.run.rate, "Detected photons per second")->capture_default_str();
  c_sim->add_option("--duration", sim.run.duration, "Seconds per setting")->capture_default_str();
  c_sim->add_option("--out", sim.out_path, "Write counts JSON");
  c_sim->add_option("--estimate-out", sim.estimate_out, "Write the estimate JSON used by 'report'");

  CertifyOpts cert;
  auto* c_cert = app.add_subcommand("certify", "Dimension certificate from a counts file");
  c_cert->add_option("counts,--counts", cert.counts, "Counts JSON")->required();
  c_cert->add_option("-k,--k", cert.k, "Confidence in sigmas")->capture_default_str()->check(CLI::PositiveNumber);
  c_cert->add_flag("--merge", cert.merge, "Sum duplicate (x, y) records instead of rejecting them");
  c_cert->add_option("--witness-file", cert.witness_file, "Custom witness JSON with a bounds table");

  ReportOpts rep;
  auto* c_rep = app.add_subcommand("report", "SVG bar chart and CSV from estimate files");
  c_rep->add_option("estimates", rep.inputs, "Estimate JSON files written by 'simulate --estimate-out'")
      ->required();
  c_rep->add_option("--svg", rep.svg, "SVG output path")->capture_default_str();
  c_rep->add_option("--csv", rep.csv, "CSV output path")->capture_default_str();

  std::string export_id;
  std::string export_out;
  auto* c_settings = app.add_subcommand("settings", "Experiment catalog");
  c_settings->require_subcommand(1);
  auto* c_export = c_settings->add_subcommand("export", "Emit an experiment's strategy as JSON");
  c_export->add_option("--id", export_id, "Experiment id")->required();
  c_export->add_option("--out", export_out, "Output path (default stdout)");
  auto* c_list = c_settings->add_subcommand("list", "List experiment ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_bounds->parsed()) return cmd_bounds(bounds, g, out);
    if (c_opt->parsed()) return cmd_optimize(opt, g, out);
    if (c_sim->parsed()) return cmd_simulate(sim, g, out, err);
    if (c_cert->parsed()) return cmd_certify(cert, out, err);
    if (c_rep->parsed()) return cmd_report(rep, out);
    if (c_export->parsed()) return cmd_settings_export(export_id, export_out, out);
    if (c_list->parsed()) {
      for (const auto& id : experiment_ids()) out << id << "  " << experiment(id).label << "\n";
      return kExitOk;
    }
  } catch (const TooLarge& e) {
    err << "error: " << e.what() << "\nhint: lower --dim or raise --guard\n";
    return kExitTooLarge;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace dimwitness::cli
