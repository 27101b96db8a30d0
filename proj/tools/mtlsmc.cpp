// Command-line front end: exact evaluation on traces, Monte Carlo estimates,
// convergence sweeps, and the canned experiments.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "mtlsmc.hpp"

using namespace mtlsmc;

namespace {

struct Common {
  std::string formula;
  std::string atoms_file;
  std::vector<std::string> atom_defs;
};

AtomMap load_atoms(const Common& c) {
  AtomMap atoms;
  if (!c.atoms_file.empty()) atoms = read_file(c.atoms_file, [](std::istream& in) { return read_atom_map(in); });
  for (const std::string& def : c.atom_defs) {
    const AtomMap one = parse_atom_map(def);
    for (const auto& [name, region] : one.regions()) atoms.set(name, region);
  }
  return atoms;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("-f,--formula", c.formula, "Formula in concrete syntax")->required();
  app->add_option("-a,--atoms", c.atoms_file, "Atom map file (lines 'name = region')");
  app->add_option("--atom", c.atom_defs, "Inline atom definition, e.g. 'p = [1,inf)'");
}

bool is_grid_file(const std::string& path) {
  std::ifstream in(path);
  std::string first;
  while (std::getline(in, first)) {
    const auto t = detail::trim(first);
    if (!t.empty() && t.front() != '#') return t.rfind("n,", 0) == 0;
  }
  return false;
}

void emit(const std::vector<Estimate>& rows, const std::string& out, const std::string& json_path) {
  if (out.empty() || out == "-") {
    write_csv(std::cout, rows);
  } else {
    std::ofstream f(out);
    if (!f) throw Error("cannot write '" + out + "'");
    write_csv(f, rows);
  }
  if (!json_path.empty()) {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (const Estimate& e : rows) j["rows"].push_back(to_json(e));
    std::ofstream f(json_path);
    if (!f) throw Error("cannot write '" + json_path + "'");
    f << j.dump(2) << '\n';
  }
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistical model checking of MTL over continuous and discrete time"};
  app.require_subcommand(1);

  // eval
  Common ev;
  std::string ev_trace;
  std::optional<double> ev_at;
  std::optional<double> ev_horizon;
  auto* eval = app.add_subcommand("eval", "Continuous semantics on a piecewise-linear trace");
  add_common(eval, ev);
  eval->add_option("-t,--trace", ev_trace, "PL trace CSV (header t,x)")->required()->check(CLI::ExistingFile);
  eval->add_option("--at", ev_at, "Report truth at this time instead of the time set");
  eval->add_option("--horizon", ev_horizon, "Time set horizon (default: as far as the trace allows)");

  // eval-discrete
  Common ed;
  std::string ed_trace;
  std::optional<std::int64_t> ed_n;
  std::optional<double> ed_at;
  auto* evald = app.add_subcommand("eval-discrete", "Discrete semantics on the grid N/n");
  add_common(evald, ed);
  evald->add_option("-t,--trace", ed_trace, "Grid trace CSV, or a PL trace to sample at --n")
      ->required()
      ->check(CLI::ExistingFile);
  evald->add_option("-n,--n", ed_n, "Grid resolution (required for PL input)")->check(CLI::PositiveNumber);
  evald->add_option("--at", ed_at, "Report truth at this grid time instead of every index");

  // mc
  Common mc;
  std::string mc_semantics = "discrete";
  std::string mc_sampler = "bm";
  double mc_x0 = 0.0;
  double mc_at = 0.0;
  std::int64_t mc_n = 16;
  McOptions mc_opt;
  mc_opt.workers = default_workers();
  std::string mc_out;
  std::string mc_json;
  auto* mcc = app.add_subcommand("mc", "Monte Carlo estimate of a satisfaction probability");
  add_common(mcc, mc);
  mcc->add_option("--semantics", mc_semantics, "discrete or continuous-pl")
      ->check(CLI::IsMember({"discrete", "continuous-pl"}));
  mcc->add_option("--sampler", mc_sampler, "bm, ou(theta), const-sigma(c), drift(mu)");
  mcc->add_option("--x0", mc_x0, "Initial state");
  mcc->add_option("--at", mc_at, "Evaluation time (projected to the grid for discrete)");
  mcc->add_option("-n,--n", mc_n, "Grid resolution (fine resolution m for continuous-pl)")->check(CLI::PositiveNumber);
  mcc->add_option("--trials", mc_opt.trials, "Number of sample paths")->check(CLI::PositiveNumber);
  mcc->add_option("--seed", mc_opt.seed, "Master seed");
  mcc->add_option("--workers", mc_opt.workers, "Worker threads")->check(CLI::PositiveNumber);
  mcc->add_option("--confidence", mc_opt.confidence, "Confidence level of the Wilson interval");
  mcc->add_option("-o,--out", mc_out, "CSV output path (default stdout)");
  mcc->add_option("--json", mc_json, "JSON summary path");

  // sweep
  Common sw;
  std::string sw_sampler = "bm";
  double sw_x0 = 0.0;
  double sw_at = 0.0;
  std::vector<std::int64_t> sw_ns;
  std::optional<std::int64_t> sw_ref;
  McOptions sw_opt;
  sw_opt.workers = default_workers();
  std::string sw_out;
  std::string sw_json;
  auto* sweep = app.add_subcommand("sweep", "Discrete estimates across resolutions with common random numbers");
  add_common(sweep, sw);
  sweep->add_option("--ns", sw_ns, "Resolutions, e.g. 2,4,8")->delimiter(',')->required();
  sweep->add_option("--reference-m", sw_ref, "Add a continuous-PL reference row at this resolution");
  sweep->add_option("--sampler", sw_sampler, "bm, ou(theta), const-sigma(c), drift(mu)");
  sweep->add_option("--x0", sw_x0, "Initial state");
  sweep->add_option("--at", sw_at, "Evaluation time");
  sweep->add_option("--trials", sw_opt.trials, "Number of sample paths")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sw_opt.seed, "Master seed");
  sweep->add_option("--workers", sw_opt.workers, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("-o,--out", sw_out, "CSV output path (default stdout)");
  sweep->add_option("--json", sw_json, "JSON summary path");

  // repro
  std::string rp_name;
  ExperimentOptions rp_opt;
  rp_opt.workers = default_workers();
  std::string rp_out = "results";
  auto* repro = app.add_subcommand("repro", "Run a canned experiment and write <out>/<name>.csv and .json");
  repro->add_option("experiment", rp_name, "counterexample, flat-zero, or flat-diamond")
      ->required()
      ->check(CLI::IsMember({"counterexample", "flat-zero", "flat-diamond"}));
  repro->add_option("--trials", rp_opt.trials, "Number of sample paths (default per experiment)")
      ->check(CLI::PositiveNumber);
  repro->add_option("--seed", rp_opt.seed, "Master seed");
  repro->add_option("--workers", rp_opt.workers, "Worker threads")->check(CLI::PositiveNumber);
  repro->add_option("--out", rp_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval) {
      const Formula f = parse(ev.formula);
      const AtomMap atoms = load_atoms(ev);
      const PLTrace tr = read_file(ev_trace, [](std::istream& in) { return read_pl_trace(in); });
      if (ev_at) {
        std::cout << (holds_at(f, tr, atoms, *ev_at) ? "true" : "false") << '\n';
      } else {
        const double h = ev_horizon ? *ev_horizon : tr.horizon() - temporal_reach(f);
        if (h < 0.0) throw HorizonExceeded("trace is shorter than the formula's reach");
        std::cout << to_string(eval_timeset(f, tr, atoms, h)) << '\n';
      }
      return 0;
    }
    if (*evald) {
      const Formula f = parse(ed.formula);
      const AtomMap atoms = load_atoms(ed);
      GridTrace g = is_grid_file(ed_trace)
                        ? read_file(ed_trace, [](std::istream& in) { return read_grid_trace(in); })
                        : [&] {
                            if (!ed_n) throw Error("--n is required for a PL trace");
                            return grid_project(read_file(ed_trace, [](std::istream& in) { return read_pl_trace(in); }),
                                                *ed_n);
                          }();
      if (ed_n && *ed_n != g.resolution()) throw Error("--n does not match the grid trace resolution");
      if (ed_at) {
        std::cout << (eval_holds(f, g, atoms, *ed_at) ? "true" : "false") << '\n';
      } else {
        std::cout << "k,t,value\n";
        const auto all = eval_all(f, g, atoms);
        for (std::size_t k = 0; k < all.size(); ++k) {
          const char* v = all[k] == Truth::True ? "true" : all[k] == Truth::False ? "false" : "undefined";
          std::cout << k << ',' << format_number(static_cast<double>(k) / static_cast<double>(g.resolution())) << ','
                    << v << '\n';
        }
      }
      return 0;
    }
    if (*mcc) {
      const Formula f = parse(mc.formula);
      const AtomMap atoms = load_atoms(mc);
      const Sampler s = Sampler::parse(mc_sampler, mc_x0);
      const Estimate e = mc_semantics == "discrete" ? estimate_discrete(f, s, atoms, mc_at, mc_n, mc_opt)
                                                    : estimate_continuous_pl(f, s, atoms, mc_at, mc_n, mc_opt);
      emit({e}, mc_out, mc_json);
      return 0;
    }
    if (*sweep) {
      const Formula f = parse(sw.formula);
      const AtomMap atoms = load_atoms(sw);
      const Sampler s = Sampler::parse(sw_sampler, sw_x0);
      const SweepResult res = convergence_sweep(f, s, atoms, sw_at, sw_ns, sw_opt, sw_ref);
      std::vector<Estimate> rows = res.rows;
      if (res.reference) rows.push_back(*res.reference);
      emit(rows, sw_out, sw_json);
      if (res.nested) {
        std::cerr << "nested grids: " << res.monotonicity_violations << " paths lose a witness under refinement\n";
      }
      return 0;
    }
    if (*repro) {
      const ExperimentReport r = run_experiment(rp_name, rp_opt);
      write_report(r, rp_out);
      write_csv(std::cout, r.rows);
      for (const Check& c : r.checks) std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
      std::cout << "verdict: " << r.verdict << '\n';
      return r.pass ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
