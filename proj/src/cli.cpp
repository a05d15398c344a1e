#include "shockamr/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <boost/algorithm/string/trim.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "shockamr/io.hpp"

namespace shockamr {

namespace {

template <class T>
void read_key(const boost::property_tree::ptree& pt, const std::string& key, T& dst) {
  if (auto v = pt.get_optional<std::string>(key)) {
    try {
      dst = boost::lexical_cast<T>(boost::trim_copy(*v));
    } catch (const boost::bad_lexical_cast&) {
      throw ConfigError("bad value for " + key + ": '" + *v + "'");
    }
  }
}

template <class T>
void read_key(const boost::property_tree::ptree& pt, const std::string& key, std::optional<T>& dst) {
  T v{};
  if (pt.get_optional<std::string>(key)) {
    read_key(pt, key, v);
    dst = v;
  }
}

void check_choice(const std::string& what, const std::string& v, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return;
  throw ConfigError("invalid " + what + " '" + v + "'");
}

}  // namespace

std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw ConfigError("range must look like A..B: '" + s + "'");
  try {
    std::size_t p1 = 0, p2 = 0;
    const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
    const int lo = std::stoi(a, &p1), hi = std::stoi(b, &p2);
    if (p1 != a.size() || p2 != b.size() || lo <= 0 || hi < lo) throw std::invalid_argument(s);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ConfigError("invalid range '" + s + "'");
  }
}

void load_config(const std::string& path, RunConfig& cfg) {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::ini_parser::read_ini(path, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  static const std::set<std::string> known = {
      "run.case", "run.scheme", "run.variant", "run.q", "run.indicator", "run.max_cells", "run.max_steps",
      "run.uniform", "run.out", "run.seed", "run.snapshots", "solver.tol1", "solver.tol2", "solver.dU_tol",
      "solver.max_iters", "solver.linear", "stabilization.sigma", "stabilization.eps", "stabilization.zeta"};
  for (const auto& [section, body] : pt) {
    if (body.empty()) throw ConfigError("key '" + section + "' outside a section");
    for (const auto& kv : body)
      if (!known.count(section + "." + kv.first)) throw ConfigError("unknown key " + section + "." + kv.first);
  }
  read_key(pt, "run.case", cfg.case_name);
  read_key(pt, "run.scheme", cfg.scheme);
  read_key(pt, "run.variant", cfg.variant);
  read_key(pt, "run.q", cfg.q);
  read_key(pt, "run.indicator", cfg.indicator);
  read_key(pt, "run.max_cells", cfg.max_cells);
  read_key(pt, "run.max_steps", cfg.max_steps);
  if (auto u = pt.get_optional<std::string>("run.uniform")) cfg.uniform = parse_range(boost::trim_copy(*u));
  read_key(pt, "run.out", cfg.out);
  read_key(pt, "run.seed", cfg.seed);
  read_key(pt, "run.snapshots", cfg.snapshots);
  read_key(pt, "solver.tol1", cfg.tol1);
  read_key(pt, "solver.tol2", cfg.tol2);
  read_key(pt, "solver.dU_tol", cfg.dU_tol);
  read_key(pt, "solver.max_iters", cfg.max_iters);
  read_key(pt, "solver.linear", cfg.linear);
  read_key(pt, "stabilization.sigma", cfg.sigma);
  read_key(pt, "stabilization.eps", cfg.eps);
  read_key(pt, "stabilization.zeta", cfg.zeta);
}

CaseDefinition configure_case(const RunConfig& cfg) {
  if (cfg.case_name.empty()) throw ConfigError("no case given");
  check_choice("scheme", cfg.scheme, {"low", "high"});
  check_choice("variant", cfg.variant, {"sharp", "smooth"});
  check_choice("indicator", cfg.indicator, {"kelly", "graph"});
  check_choice("snapshots", cfg.snapshots, {"none", "final", "all"});
  if (!(cfg.q >= 1.0)) throw ConfigError("q must be >= 1");
  if (cfg.max_steps < 0) throw ConfigError("max_steps must be >= 0");
  CaseDefinition c = make_case(cfg.case_name);
  c.stab.low_order = cfg.scheme == "low";
  c.stab.variant = cfg.variant == "sharp" ? Variant::Sharp : Variant::Smooth;
  c.stab.q = cfg.q;
  if (cfg.sigma) c.stab.sigma = *cfg.sigma;
  if (cfg.eps) c.stab.eps = *cfg.eps;
  if (cfg.zeta) c.stab.zeta = *cfg.zeta;
  if (cfg.tol1) c.solver.tol1 = *cfg.tol1;
  if (cfg.tol2) c.solver.tol2 = *cfg.tol2;
  if (cfg.dU_tol) c.solver.dU_tol = *cfg.dU_tol;
  if (cfg.max_iters) c.solver.max_iters = *cfg.max_iters;
  if (cfg.linear) {
    check_choice("linear solver", *cfg.linear, {"direct", "iterative"});
    c.solver.linear.kind = *cfg.linear == "direct" ? LinearSolverKind::Direct : LinearSolverKind::Iterative;
  }
  if (!(c.solver.tol1 > c.solver.tol2 && c.solver.tol2 > 0.0)) throw ConfigError("need tol1 > tol2 > 0");
  c.amr.indicator = cfg.indicator == "kelly" ? IndicatorKind::Kelly : IndicatorKind::Graph;
  c.amr.max_steps = cfg.max_steps;
  if (c.stab.low_order) c.amr.max_cells = c.low_order_max_cells;
  if (cfg.max_cells) c.amr.max_cells = *cfg.max_cells;
  if (cfg.uniform) c.uniform_default = cfg.uniform;
  return c;
}

int run(const RunConfig& cfg, std::ostream& log) {
  const CaseDefinition c = configure_case(cfg);
  std::filesystem::create_directories(cfg.out);
  const std::string stem = (std::filesystem::path(cfg.out) / c.name).string();
  const int m = c.model.m();
  const std::vector<std::string> names =
      m == 1 ? std::vector<std::string>{"u"} : std::vector<std::string>{"rho", "mx", "my", "E"};
  std::vector<StepRecord> records;
  bool failed = false;
  auto snapshot = [&](const std::string& path, const AmrState& st) {
    const GroupOperators ops = assemble_operators(*st.space);
    NonlinearProblem p(*st.space, ops, c.model, c.boundary(*st.space), c.stab);
    p.update_wave_speed(st.U);
    const DetectorField alpha = p.detector(st.U);
    VtkFields f;
    f.alpha = &alpha;
    f.indicator = st.indicator.empty() ? nullptr : &st.indicator;
    f.component_names = names;
    write_vtk(path, *st.space, st.U, m, f);
  };
  auto on_step = [&](const StepRecord& r, const AmrState& st) {
    records.push_back(r);
    failed = failed || !r.converged;
    write_csv(stem + ".csv", records);
    log << "step " << r.step << "  cells " << r.cells << "  dofs " << r.dofs << "  l1 " << r.l1_error
        << "  iters " << r.nl_iters << " (" << r.report.picard_iters << "P+" << r.report.newton_iters << "N)" << (r.converged ? "" : "  NOT CONVERGED (" + r.report.stop_reason + ")")
        << "  wall " << std::fixed << std::setprecision(2) << r.wall_s << "s" << std::defaultfloat
        << std::setprecision(6) << '\n';
    if (cfg.snapshots == "all") {
      std::ostringstream name;
      name << stem << "_step" << std::setw(3) << std::setfill('0') << r.step << ".vtk";
      snapshot(name.str(), st);
    }
  };
  AmrState final_state;
  if (c.uniform_default) {
    const auto [a, b] = *c.uniform_default;
    uniform_sweep(c, a, b, on_step, &final_state);
    log << "N,l1_error,rate\n";
    std::vector<double> ns, errs;
    for (std::size_t k = 0; k < records.size(); ++k) {
      const double n = a * std::pow(2.0, static_cast<double>(k));
      log << n << ',' << records[k].l1_error << ',';
      if (k > 0) log << std::log2(records[k - 1].l1_error / records[k].l1_error);
      log << '\n';
      ns.push_back(n);
      errs.push_back(records[k].l1_error);
    }
    if (records.size() >= 2 && std::isfinite(errs.back())) log << "fitted rate " << fitted_rate(ns, errs) << '\n';
  } else {
    amr_loop(c, c.amr, on_step, &final_state);
  }
  if (cfg.snapshots != "none" && final_state.space) snapshot(stem + "_final.vtk", final_state);
  return failed ? 1 : 0;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive monotonicity-preserving FE solver for transport and Euler benchmarks", "shockamr"};
  app.require_subcommand(1);
  CLI::App* sub = app.add_subcommand("run", "Run a benchmark case");
  RunConfig flags;
  std::string config, uniform, max_cells;
  sub->add_option("--config", config, "INI configuration file");
  auto* o_case = sub->add_option("--case", flags.case_name, "Case name");
  auto* o_scheme = sub->add_option("--scheme", flags.scheme, "low | high");
  auto* o_variant = sub->add_option("--variant", flags.variant, "sharp | smooth");
  auto* o_q = sub->add_option("--q", flags.q, "Detector exponent");
  auto* o_ind = sub->add_option("--indicator", flags.indicator, "kelly | graph");
  auto* o_max = sub->add_option("--max-cells", max_cells, "Cell cap");
  auto* o_steps = sub->add_option("--max-steps", flags.max_steps, "Maximum adaptation steps");
  auto* o_uni = sub->add_option("--uniform", uniform, "Uniform sweep A..B (cells per side)");
  auto* o_out = sub->add_option("--out", flags.out, "Output directory");
  auto* o_seed = sub->add_option("--seed", flags.seed, "Seed (reserved)");
  auto* o_snap = sub->add_option("--snapshots", flags.snapshots, "none | final | all");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  RunConfig cfg;
  try {
    if (!config.empty()) load_config(config, cfg);
    if (o_case->count()) cfg.case_name = flags.case_name;
    if (o_scheme->count()) cfg.scheme = flags.scheme;
    if (o_variant->count()) cfg.variant = flags.variant;
    if (o_q->count()) cfg.q = flags.q;
    if (o_ind->count()) cfg.indicator = flags.indicator;
    if (o_max->count()) {
      try {
        const double v = std::stod(max_cells);
        if (!(v >= 1.0)) throw std::invalid_argument(max_cells);
        cfg.max_cells = static_cast<std::size_t>(v);
      } catch (const std::logic_error&) {
        throw ConfigError("invalid --max-cells '" + max_cells + "'");
      }
    }
    if (o_steps->count()) cfg.max_steps = flags.max_steps;
    if (o_uni->count()) cfg.uniform = parse_range(uniform);
    if (o_out->count()) cfg.out = flags.out;
    if (o_seed->count()) cfg.seed = flags.seed;
    if (o_snap->count()) cfg.snapshots = flags.snapshots;
    configure_case(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }
  try {
    return run(cfg, out);
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace shockamr
