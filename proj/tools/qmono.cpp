// Command-line front end: campaigns, tables and one-off computations.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "qmono/qmono.hpp"

using namespace qmono;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolations = 2;

/// Writes to the file at `path`, or stdout when empty.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct VerifyArgs {
  std::string config_path;
  std::string inequality;
  std::string dims;
  long trials = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::string out;
  std::string measure;
  int rank = 0;
  int threads = 0;
  bool no_states = false;
};

int run_verify(const VerifyArgs& a, CLI::App& cmd) {
  CampaignConfig c = a.config_path.empty() ? CampaignConfig{} : CampaignConfig::from_file(a.config_path);
  if (cmd.count("inequality")) c.inequality = a.inequality;
  if (cmd.count("--dims")) c.dims = parse_dims(a.dims);
  if (cmd.count("--trials")) c.trials = a.trials;
  if (cmd.count("--seed")) c.master_seed = a.seed;
  if (cmd.count("--tol")) c.tol = a.tol;
  if (cmd.count("--out")) c.output_path = a.out;
  if (cmd.count("--measure")) c.measure = a.measure;
  if (cmd.count("--rank")) c.rank = a.rank;
  if (cmd.count("--threads")) c.threads = a.threads;
  if (a.no_states) c.emit_states_on_violation = false;

  const CampaignSummary s = run_campaign(c, &std::cerr);
  nlohmann::json j = c.to_json();
  j["reports"] = s.reports;
  j["violations"] = s.violations;
  j["approximate"] = s.approximate;
  j["out_of_domain"] = s.out_of_domain;
  j["min_slack"] = s.min_slack;
  j["runtime_s"] = s.runtime_s;
  std::cout << j.dump() << '\n';
  return s.violations > 0 ? kExitViolations : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monogamy relations between local resources and entanglement"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Monte Carlo check of one inequality over random states");
  verify->add_option("inequality", va.inequality, "resource | entanglement | negativity-g | usual | n-party");
  verify->add_option("--config", va.config_path, "JSON file with campaign fields; flags override it");
  verify->add_option("--dims", va.dims, "Subsystem dimensions, e.g. 4x4 or 2x2x3");
  verify->add_option("--trials", va.trials, "Number of random states");
  verify->add_option("--seed", va.seed, "Master seed");
  verify->add_option("--tol", va.tol, "Violation tolerance");
  verify->add_option("--out", va.out, "JSON-lines report file");
  verify->add_option("--measure", va.measure, "Resource measure for the resource inequality");
  verify->add_option("--rank", va.rank, "0 for pure states, r for rank-r mixed states");
  verify->add_option("--threads", va.threads, "Worker threads (0 = hardware)");
  verify->add_flag("--no-states", va.no_states, "Omit state data from violation records");

  std::string pgrid = "0:1:0.01", thetas = "0,pi/8,pi/6,pi/4", fig_out;
  bool nats = false;
  auto* fig = app.add_subcommand("figure1", "Long-time coherence of a dephased qubit versus the bound");
  fig->add_option("--pgrid", pgrid, "start:stop:step")->capture_default_str();
  fig->add_option("--thetas", thetas, "Comma-separated basis angles")->capture_default_str();
  fig->add_option("--out", fig_out, "CSV path (stdout if omitted)");
  fig->add_flag("--nats", nats, "Report nats instead of bits");

  int dstar = 4, grid = 2001, sweep = 0;
  std::string gb_out;
  auto* gb = app.add_subcommand("gbound", "h, co(h) and g on a y-grid");
  gb->add_option("--dstar", dstar, "2, 3 or 4")->capture_default_str();
  gb->add_option("--grid", grid, "Number of y points")->capture_default_str();
  gb->add_option("--sweep", sweep, "Quasi-random points per y (0 = default)");
  gb->add_option("--out", gb_out, "CSV path (stdout if omitted)");

  auto* cross = app.add_subcommand("crossover", "E2 where the two three-qubit bounds meet");

  std::string cr_dims = "2x2";
  long cr_trials = 10;
  int cr_restarts = 16, cr_ensemble = 0;
  std::uint64_t cr_seed = 1;
  auto* cr = app.add_subcommand("convexroof", "Convex-roof entanglement of random mixed states");
  cr->add_option("--dims", cr_dims, "d_A x d_B")->capture_default_str();
  cr->add_option("--trials", cr_trials, "Number of states")->capture_default_str();
  cr->add_option("--restarts", cr_restarts, "Restarts per state")->capture_default_str();
  cr->add_option("--ensemble", cr_ensemble, "Ensemble size (0 = rank^2)");
  cr->add_option("--seed", cr_seed, "Master seed")->capture_default_str();

  int scan_grid = 9;
  std::string scan_out;
  auto* scan = app.add_subcommand("scan-symmetric", "E1, E2 and both bounds on symmetric three-qubit states");
  scan->add_option("--grid", scan_grid, "Points per hyperspherical angle")->capture_default_str();
  scan->add_option("--out", scan_out, "CSV path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*verify) return run_verify(va, *verify);

    if (*fig) {
      Sink sink(fig_out);
      write_figure1_csv(sink.out(), figure1_data(parse_grid(pgrid), parse_angle_list(thetas)), !nats);
      return kExitOk;
    }

    if (*gb) {
      GNumericConfig cfg;
      cfg.grid_points = grid;
      if (sweep > 0) cfg.h.sweep_points = sweep;
      const NumericG g(dstar, cfg);
      Sink sink(gb_out);
      write_gbound_csv(sink.out(), g);
      const auto [y0, a] = g.envelope().final_segment();
      std::fprintf(stderr, "final hull segment: y0=%.6f slope=%.6f\n", y0, a);
      return kExitOk;
    }

    if (*cross) {
      const double e = find_crossover();
      const auto b = three_qubit_bounds(e);
      std::printf("crossover E2=%.9f uem=%.9f mei=%.9f\n", e, b.uem, b.mei);
      return kExitOk;
    }

    if (*cr) {
      const auto d = parse_dims(cr_dims);
      if (d.size() != 2) throw Error(ErrorCode::BadConfig, "convexroof takes two dimensions");
      const BipartiteSplit split{d[0], d[1]};
      RoofConfig rc;
      rc.restarts = cr_restarts;
      rc.ensemble_size = cr_ensemble;
      auto svn = [](const Spectrum& s) { return entropy(s, EntropyKind::von_neumann()); };
      std::printf("trial,rank,estimate,upper_bound,reference\n");
      for (long t = 0; t < cr_trials; ++t) {
        Rng rng(derive_seed(cr_seed, static_cast<std::uint64_t>(t)));
        const int rank = 1 + static_cast<int>(t % std::min(4, split.dim()));
        const DensityMatrix rho = random_density_matrix(split.dim(), rank, rng, {split.d_a, split.d_b});
        rc.seed = derive_seed(cr_seed ^ 0x5eedULL, static_cast<std::uint64_t>(t));
        const auto res = estimate_convex_roof(rho, split, svn, rc);
        const double upper = von_neumann_entropy(partial_trace(rho, split, Side::A));
        const std::string ref = split.d_a == 2 && split.d_b == 2 ? format_g12(eof_wootters(rho)) : "";
        std::printf("%ld,%d,%s,%s,%s\n", t, rank, format_g12(res.value).c_str(), format_g12(upper).c_str(), ref.c_str());
      }
      return kExitOk;
    }

    if (*scan) {
      Sink sink(scan_out);
      std::ostream& os = sink.out();
      os << "a0,a1,a2,a3,E1,E2,uem,mei,tighter,satisfied\n";
      long bad = 0;
      for (const auto& r : symmetric_family_scan(scan_grid)) {
        for (const auto& c : r.coeffs) os << format_g12(c.real()) << ',';
        os << format_g12(r.e1) << ',' << format_g12(r.e2) << ',' << format_g12(r.bounds.uem) << ','
           << format_g12(r.bounds.mei) << ',' << (r.mei_tighter ? "mei" : "uem") << ',' << (r.satisfied ? 1 : 0) << '\n';
        bad += !r.satisfied;
      }
      return bad > 0 ? kExitViolations : kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
