#include "ifslab/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ifslab/drivers.hpp"
#include "ifslab/kaczmarz.hpp"
#include "ifslab/omega.hpp"
#include "ifslab/scenario.hpp"
#include "ifslab/serialize.hpp"

namespace ifslab {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

// Writes to `file` when given, otherwise to `out`.
void emit(const std::string& file, std::ostream& out, const std::string& text) {
  if (file.empty()) {
    out << text;
    return;
  }
  std::ofstream os(file);
  if (!os) throw Error("cannot write " + file);
  os << text;
}

DriverSpec driver_from_flags(const std::string& kind, int alphabet, std::uint64_t seed,
                             const std::vector<int>& perm, const std::vector<double>& weights) {
  if (kind == "cyclic") return perm.empty() ? DriverSpec::cyclic_identity(alphabet) : DriverSpec::cyclic(perm);
  if (kind == "iid" || kind == "random") {
    return weights.empty() ? DriverSpec::iid_uniform(seed, alphabet) : DriverSpec::iid(seed, weights);
  }
  if (kind == "disjunctive") return DriverSpec::disjunctive(alphabet);
  throw ValidationError("unknown driver kind '" + kind + "' (expected cyclic, iid, disjunctive)");
}

struct Options {
  // run
  std::string config;
  std::string out_dir = ".";
  bool no_svg = false;
  // omega
  std::string orbit_csv;
  std::size_t burn_in = 0;
  double eps = 1e-6;
  // driver
  std::string kind = "disjunctive";
  std::size_t n = 0;
  int alphabet = 2;
  std::uint64_t seed = 0;
  std::vector<int> perm;
  std::vector<double> weights;
  std::string format = "space";
  std::string seq_file;
  int window = 2;
  std::optional<int> audit_alphabet;
  // kaczmarz
  std::string system_csv;
  std::string driver_kind = "cyclic";
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  std::vector<double> x0;
  // presets
  std::string preset;
  // shared
  std::string out_file;
};

int cmd_run(const Options& o, std::ostream& out) {
  Scenario s = load_scenario(o.config);
  if (o.no_svg) s.svg = false;
  const ScenarioResult r = run_scenario(s);
  const auto files = write_scenario_outputs(s, r, o.out_dir);
  out << "scenario " << s.name << ": omega has " << r.omega.representatives.size() << " representative(s)\n";
  for (const auto& c : r.report["checks"]) {
    out << "  " << c["verdict"].get<std::string>() << "  " << c["kind"].get<std::string>() << '\n';
  }
  for (const auto& f : files) out << "wrote " << f.string() << '\n';
  if (!r.passed) {
    for (const auto& f : r.failed_checks) out << "FAILED " << f << '\n';
    return kExitCheckFailed;
  }
  return kExitPass;
}

int cmd_omega(const Options& o, std::ostream& out) {
  auto in = open_input(o.orbit_csv);
  const Orbit orbit = read_orbit_csv(in);
  const OmegaEstimate est = estimate_omega(orbit, o.burn_in, o.eps);
  emit(o.out_file, out, to_json(est).dump(2) + "\n");
  return kExitPass;
}

int cmd_driver_gen(const Options& o, std::ostream& out) {
  const DriverSpec spec = driver_from_flags(o.kind, o.alphabet, o.seed, o.perm, o.weights);
  const auto seq = generate(spec, o.n);
  std::ostringstream os;
  if (o.format == "lines") {
    write_sequence(os, seq);
  } else {
    const char sep = o.format == "csv" ? ',' : ' ';
    for (std::size_t i = 0; i < seq.size(); ++i) os << (i ? std::string(1, sep) : "") << seq[i];
    os << '\n';
  }
  emit(o.out_file, out, os.str());
  return kExitPass;
}

int cmd_driver_audit(const Options& o, std::ostream& out) {
  auto in = open_input(o.seq_file);
  const auto seq = read_sequence(in);
  const DisjunctivityReport rep =
      o.audit_alphabet ? check_disjunctive(seq, o.window, *o.audit_alphabet) : check_disjunctive(seq, o.window);
  Json j = to_json(rep);
  j["repetitive"] = to_json(check_repetitive(seq, rep.alphabet));
  emit(o.out_file, out, j.dump(2) + "\n");
  return rep.complete() ? kExitPass : kExitCheckFailed;
}

int cmd_kaczmarz(const Options& o, std::ostream& out) {
  auto in = open_input(o.system_csv);
  const LinearSystem sys = read_system_csv(in);
  const DriverSpec spec = driver_from_flags(o.driver_kind, static_cast<int>(sys.size()), o.seed, o.perm, o.weights);
  if (spec.alphabet() != static_cast<int>(sys.size())) {
    throw ValidationError("driver alphabet must equal the number of rows (" + std::to_string(sys.size()) + ")");
  }
  SolveOptions opts;
  opts.tol = o.tol;
  opts.max_iter = o.max_iter;
  if (!o.x0.empty()) opts.x0 = Vector(o.x0);
  const SolveReport rep = solve(sys, spec, opts);
  Json j = to_json(rep);
  j["driver"] = to_json(spec);
  j["tol"] = o.tol;
  j["max_iter"] = o.max_iter;
  emit(o.out_file, out, j.dump(2) + "\n");
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterate nonexpansive function systems, estimate omega-limit sets, run Kaczmarz sweeps"};
  app.name("ifslab");
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Run a scenario config and write orbit CSV, omega/report JSON, SVG");
  run->add_option("config", o.config, "Scenario JSON file")->required();
  run->add_option("--out-dir", o.out_dir, "Directory for emitted files");
  run->add_flag("--no-svg", o.no_svg, "Skip the SVG plot");

  auto* omega = app.add_subcommand("omega", "Re-cluster an orbit CSV into an omega estimate");
  omega->add_option("orbit", o.orbit_csv, "Orbit CSV (n,symbol,x1,...,xd)")->required();
  omega->add_option("--burn-in", o.burn_in, "Points discarded before clustering")->required();
  omega->add_option("--eps", o.eps, "Cluster radius")->required();
  omega->add_option("--out", o.out_file, "Write JSON here instead of stdout");

  auto* drv = app.add_subcommand("driver", "Generate or audit driving sequences");
  drv->require_subcommand(1);
  auto* gen = drv->add_subcommand("gen", "Generate a driving sequence");
  gen->add_option("--kind", o.kind, "cyclic | iid | disjunctive")->required();
  gen->add_option("--n", o.n, "Number of symbols")->required();
  gen->add_option("--alphabet,-N", o.alphabet, "Alphabet size N (default 2)");
  gen->add_option("--seed", o.seed, "Seed for iid drivers");
  gen->add_option("--perm", o.perm, "Cyclic permutation, comma separated")->delimiter(',');
  gen->add_option("--weights", o.weights, "iid weights, comma separated")->delimiter(',');
  gen->add_option("--format", o.format, "space | lines | csv")->check(CLI::IsMember({"space", "lines", "csv"}));
  gen->add_option("--out", o.out_file, "Write here instead of stdout");
  auto* audit = drv->add_subcommand("audit", "Audit a sequence file for disjunctivity and repetitiveness");
  audit->add_option("sequence", o.seq_file, "One symbol per line")->required();
  audit->add_option("--m", o.window, "Window length")->required();
  audit->add_option("--alphabet,-N", o.audit_alphabet, "Alphabet size (default: largest symbol)");
  audit->add_option("--out", o.out_file, "Write JSON here instead of stdout");

  auto* kac = app.add_subcommand("kaczmarz", "Solve a linear system by row projections");
  kac->add_option("system", o.system_csv, "System CSV (a1,...,ad,b per row)")->required();
  kac->add_option("--driver", o.driver_kind, "cyclic | iid | disjunctive");
  kac->add_option("--seed", o.seed, "Seed for iid drivers");
  kac->add_option("--perm", o.perm, "Cyclic permutation, comma separated")->delimiter(',');
  kac->add_option("--weights", o.weights, "iid weights, comma separated")->delimiter(',');
  kac->add_option("--tol", o.tol, "Residual tolerance");
  kac->add_option("--max-iter", o.max_iter, "Projection budget");
  kac->add_option("--x0", o.x0, "Start point, comma separated")->delimiter(',');
  kac->add_option("--out", o.out_file, "Write JSON here instead of stdout");

  auto* presets = app.add_subcommand("presets", "List or write the built-in scenarios");
  presets->require_subcommand(1);
  auto* plist = presets->add_subcommand("list", "List preset names");
  auto* pwrite = presets->add_subcommand("write", "Print a preset config");
  pwrite->add_option("name", o.preset, "Preset name")->required();
  pwrite->add_option("--out", o.out_file, "Write here instead of stdout");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("ifslab");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInvalid;
  }

  try {
    if (*run) return cmd_run(o, out);
    if (*omega) return cmd_omega(o, out);
    if (*gen) return cmd_driver_gen(o, out);
    if (*audit) return cmd_driver_audit(o, out);
    if (*kac) return cmd_kaczmarz(o, out);
    if (*plist) {
      for (const auto& n : preset_names()) out << n << '\n';
      return kExitPass;
    }
    if (*pwrite) {
      emit(o.out_file, out, preset_text(o.preset));
      return kExitPass;
    }
  } catch (const DriverExhausted& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  err << app.help();
  return kExitInvalid;
}

}  // namespace ifslab
