#pragma once

// Dephasing example, Figure-1 style tables, the gbound table and seeded
// Monte Carlo campaigns with JSON-lines output.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "qmono/monogamy.hpp"

namespace qmono {

// ---------------------------------------------------------------------------
// Pure dephasing of a qubit

struct DephasingParams {
  double p = 0.5;
  /// <0~|1~>; 1 at the initial time, 0 in the long-time limit.
  cplx overlap = 0.0;
  int env_dim = 2;
  double theta = 0.0;
};

/// sqrt(p)|0>|0~> + sqrt(1-p)|1>|1~> with |0~> = |0>,
/// |1~> = overlap|0> + sqrt(1 - |overlap|^2)|1>.
inline DensityMatrix dephasing_state(const DephasingParams& params) {
  if (!(params.p >= 0.0 && params.p <= 1.0)) throw Error(ErrorCode::OutOfRange, "p must lie in [0, 1]");
  if (!(std::abs(params.overlap) <= 1.0 + 1e-12)) throw Error(ErrorCode::BadOverlap, "|overlap| exceeds 1");
  if (params.env_dim < 2) throw Error(ErrorCode::DimensionMismatch, "environment needs at least two levels");
  const int e = params.env_dim;
  Vector env0 = Vector::Zero(e), env1 = Vector::Zero(e);
  env0(0) = 1.0;
  env1(0) = params.overlap;
  env1(1) = std::sqrt(std::max(0.0, 1.0 - std::norm(params.overlap)));
  Vector sys0 = Vector::Zero(2), sys1 = Vector::Zero(2);
  sys0(0) = 1.0;
  sys1(1) = 1.0;
  const Vector psi = std::sqrt(params.p) * kron(sys0, env0) + std::sqrt(1.0 - params.p) * kron(sys1, env1);
  return DensityMatrix::from_pure(psi / psi.norm(), {2, e});
}

/// Columns cos t|0> + sin t|1> and sin t|0> - cos t|1>.
inline Matrix rotated_basis(double theta) {
  Matrix u(2, 2);
  u << std::cos(theta), std::sin(theta), std::sin(theta), -std::cos(theta);
  return u;
}

struct Figure1Row {
  double p = 0.0;
  double theta = 0.0;
  double coherence = 0.0;
  double bound = 0.0;
};

/// Long-time coherence of the dephased qubit in each rotated basis,
/// alongside the bound ln 2 - h(p). Values in nats.
inline std::vector<Figure1Row> figure1_data(const std::vector<double>& p_grid, const std::vector<double>& thetas) {
  std::vector<Figure1Row> rows;
  rows.reserve(p_grid.size() * thetas.size());
  for (double theta : thetas) {
    const Matrix basis = rotated_basis(theta);
    for (double p : p_grid) {
      const DensityMatrix rho = dephasing_state({p, 0.0, 2, theta});
      const DensityMatrix rho_a = partial_trace(rho, {2, 2}, Side::A);
      rows.push_back({p, theta, rel_ent_coherence(rho_a, basis), kLn2 - binary_entropy(p)});
    }
  }
  return rows;
}

inline std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void write_figure1_csv(std::ostream& os, const std::vector<Figure1Row>& rows, bool bits = true) {
  const double scale = bits ? 1.0 / kLn2 : 1.0;
  os << "p,theta,coherence,bound\n";
  for (const auto& r : rows)
    os << format_g12(r.p) << ',' << format_g12(r.theta) << ',' << format_g12(r.coherence * scale) << ','
       << format_g12(r.bound * scale) << '\n';
}

// ---------------------------------------------------------------------------
// h, co(h) and g on the y-grid

inline void write_gbound_csv(std::ostream& os, const NumericG& g) {
  const auto& env = g.envelope();
  os << "y,x,h,co_h,g_numeric,g_analytic\n";
  for (std::size_t i = 0; i < env.xs.size(); ++i) {
    const double y = env.xs[i];
    const double x = std::clamp((y - 1.0) / 2.0, 0.0, g_domain_max(g.d_star()));
    os << format_g12(y) << ',' << format_g12(x) << ',' << format_g12(env.ys[i]) << ',' << format_g12(env.hull_ys[i])
       << ',' << format_g12(g(x)) << ',' << format_g12(g_analytic(g.d_star(), x)) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Small text parsers used by the CLI

/// Accepts a number, "pi", "pi/k", "k*pi" or "k*pi/m".
inline double parse_angle(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw Error(ErrorCode::BadConfig, "cannot parse angle '" + s + "'");
    return v;
  }
  double factor = 1.0;
  const std::string before = s.substr(0, pi_pos);
  if (!before.empty()) {
    if (before.back() != '*') throw Error(ErrorCode::BadConfig, "cannot parse angle '" + s + "'");
    factor = std::stod(before.substr(0, before.size() - 1));
  }
  const std::string after = s.substr(pi_pos + 2);
  if (!after.empty()) {
    if (after.front() != '/') throw Error(ErrorCode::BadConfig, "cannot parse angle '" + s + "'");
    factor /= std::stod(after.substr(1));
  }
  return factor * std::numbers::pi;
}

inline std::vector<double> parse_angle_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_angle(item));
  if (out.empty()) throw Error(ErrorCode::BadConfig, "empty angle list");
  return out;
}

/// "start:stop:step", inclusive of stop up to rounding.
inline std::vector<double> parse_grid(const std::string& s) {
  double a = 0, b = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::stringstream ss(s);
  if (!(ss >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) || b < a)
    throw Error(ErrorCode::BadConfig, "grid must read start:stop:step");
  const long n = std::lround(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (long i = 0; i < n; ++i) out[i] = std::min(b, a + step * static_cast<double>(i));
  return out;
}

/// "4x4" or "2x2x3".
inline std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, 'x')) {
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size() || v < 1) throw Error(ErrorCode::BadConfig, "bad dimension list '" + s + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::BadConfig, "empty dimension list");
  return out;
}

/// "coherence", "coherence:computational", "nonuniformity:vn",
/// "nonuniformity:renyi:A", "nonuniformity:tsallis:Q".
struct MeasureSpec {
  std::string text = "coherence";

  bool random_basis() const { return text == "coherence"; }

  MeasureDescriptor make(int d, const Matrix* basis = nullptr) const {
    if (text == "coherence") {
      if (!basis) throw Error(ErrorCode::BadConfig, "random-basis coherence needs a basis");
      return MeasureDescriptor::coherence(*basis);
    }
    if (text == "coherence:computational") return MeasureDescriptor::coherence_computational(d);
    if (text == "nonuniformity:vn") return MeasureDescriptor::nonuniformity_vn(d);
    const std::string renyi = "nonuniformity:renyi:", tsallis = "nonuniformity:tsallis:";
    try {
      if (text.rfind(renyi, 0) == 0) return MeasureDescriptor::nonuniformity_renyi(d, std::stod(text.substr(renyi.size())));
      if (text.rfind(tsallis, 0) == 0)
        return MeasureDescriptor::nonuniformity_tsallis(d, std::stod(text.substr(tsallis.size())));
    } catch (const std::invalid_argument&) {
    }
    throw Error(ErrorCode::BadConfig, "unknown measure '" + text + "'");
  }
};

// ---------------------------------------------------------------------------
// Campaigns

struct CampaignConfig {
  /// resource | entanglement | negativity-g | usual | n-party
  std::string inequality = "resource";
  std::vector<int> dims{2, 2};
  long trials = 1000;
  std::uint64_t master_seed = 42;
  double tol = kClosedFormTol;
  std::string output_path;
  bool emit_states_on_violation = true;
  /// Only used by the resource inequality.
  std::string measure = "coherence";
  /// 0 draws Haar pure states; r > 0 draws rank-r Hilbert-Schmidt states.
  int rank = 0;
  /// 0 uses the hardware concurrency.
  int threads = 0;

  void validate() const {
    if (trials < 1) throw Error(ErrorCode::BadConfig, "trials must be at least 1");
    if (!(tol > 0.0)) throw Error(ErrorCode::BadConfig, "tol must be positive");
    if (threads < 0) throw Error(ErrorCode::BadConfig, "threads must be non-negative");
    if (rank < 0) throw Error(ErrorCode::BadConfig, "rank must be non-negative");
    for (int d : dims)
      if (d < 1) throw Error(ErrorCode::BadConfig, "dimensions must be positive");
  }

  /// Fields present in `j` override the current values.
  void merge_json(const nlohmann::json& j) {
    try {
      if (j.contains("inequality")) inequality = j.at("inequality").get<std::string>();
      if (j.contains("dims")) dims = j.at("dims").get<std::vector<int>>();
      if (j.contains("trials")) trials = j.at("trials").get<long>();
      if (j.contains("master_seed")) master_seed = j.at("master_seed").get<std::uint64_t>();
      if (j.contains("tol")) tol = j.at("tol").get<double>();
      if (j.contains("output_path")) output_path = j.at("output_path").get<std::string>();
      if (j.contains("emit_states_on_violation")) emit_states_on_violation = j.at("emit_states_on_violation").get<bool>();
      if (j.contains("measure")) measure = j.at("measure").get<std::string>();
      if (j.contains("rank")) rank = j.at("rank").get<int>();
      if (j.contains("threads")) threads = j.at("threads").get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::BadConfig, e.what());
    }
  }

  static CampaignConfig from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::BadConfig, e.what());
    }
    CampaignConfig c;
    c.merge_json(j);
    return c;
  }

  nlohmann::json to_json() const {
    return {{"inequality", inequality}, {"dims", dims},   {"trials", trials},   {"master_seed", master_seed},
            {"tol", tol},               {"measure", measure}, {"rank", rank}, {"emit_states_on_violation", emit_states_on_violation}};
  }
};

struct CampaignSummary {
  long trials = 0;
  long reports = 0;
  long violations = 0;
  long approximate = 0;
  long out_of_domain = 0;
  double min_slack = kInf;
  double runtime_s = 0.0;
};

/// Everything a trial draws from its generator.
struct TrialInput {
  DensityMatrix state;
  std::optional<Matrix> basis;
};

namespace detail {

inline void require_dims(const CampaignConfig& c, std::size_t n, const char* what) {
  if (c.dims.size() != n) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " needs " + std::to_string(n) + " dimensions");
}

inline int dims_product(const std::vector<int>& d) {
  int p = 1;
  for (int v : d) p *= v;
  return p;
}

inline bool known_inequality(const std::string& id) {
  return id == "resource" || id == "entanglement" || id == "negativity-g" || id == "usual" || id == "n-party";
}

}  // namespace detail

/// Regenerates the state (and random basis, if any) of trial `index`.
inline TrialInput campaign_trial_input(const CampaignConfig& c, long index) {
  Rng rng(derive_seed(c.master_seed, static_cast<std::uint64_t>(index)));
  const int dim = detail::dims_product(c.dims);
  TrialInput in;
  in.state = c.rank == 0 ? random_pure_state(dim, rng, c.dims) : random_density_matrix(dim, c.rank, rng, c.dims);
  if (c.inequality == "resource" && MeasureSpec{c.measure}.random_basis()) in.basis = random_unitary(c.dims[0], rng);
  return in;
}

inline std::vector<MonogamyReport> run_trial(const CampaignConfig& c, long index) {
  const TrialInput in = campaign_trial_input(c, index);
  const std::uint64_t seed = derive_seed(c.master_seed, static_cast<std::uint64_t>(index));
  std::vector<MonogamyReport> out;
  if (c.inequality == "resource") {
    const BipartiteSplit split{c.dims[0], c.dims[1]};
    const MeasureDescriptor m = MeasureSpec{c.measure}.make(split.d_a, in.basis ? &*in.basis : nullptr);
    RoofConfig roof;
    roof.seed = seed;
    out.push_back(check_resource_monogamy(in.state.with_factors({split.d_a, split.d_b}), split, m,
                                          EntanglementEvaluator(m, roof), c.tol));
  } else if (c.inequality == "entanglement") {
    RoofConfig roof;
    roof.seed = seed;
    out.push_back(check_entanglement_monogamy(in.state, {c.dims[0], c.dims[1], c.dims[2]}, c.tol, roof));
  } else if (c.inequality == "negativity-g") {
    out.push_back(check_negativity_g(in.state, {c.dims[0], c.dims[1], c.dims[2]}, c.tol));
  } else if (c.inequality == "usual") {
    out.push_back(check_usual_monogamy(in.state, c.tol));
  } else {
    const auto pair = check_combined_n_party(in.state, 3, c.dims[3], c.tol);
    out.assign(pair.begin(), pair.end());
  }
  for (auto& r : out) r.seed = seed;
  return out;
}

inline nlohmann::json report_to_json(const CampaignConfig& c, long index, const MonogamyReport& r) {
  char fp[20];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(r.state_fingerprint));
  nlohmann::json terms = nlohmann::json::object();
  for (const auto& [k, v] : r.terms) terms[k] = v;
  nlohmann::json j{{"trial", index},
                   {"inequality", std::string(to_string(r.id))},
                   {"dims", c.dims},
                   {"seed", r.seed},
                   {"master_seed", c.master_seed},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"slack", r.slack},
                   {"tol", r.tol},
                   {"violated", r.violated},
                   {"approximate", r.approximate},
                   {"out_of_domain", r.out_of_domain},
                   {"evaluator", r.evaluator},
                   {"fingerprint", fp},
                   {"terms", terms}};
  if (c.inequality == "resource") j["measure"] = c.measure;
  if (r.violated && c.emit_states_on_violation) {
    const TrialInput in = campaign_trial_input(c, index);
    std::vector<double> re, im;
    const Matrix& m = in.state.data();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index k = 0; k < m.cols(); ++k) {
        re.push_back(m(i, k).real());
        im.push_back(m(i, k).imag());
      }
    j["state"] = {{"re", re}, {"im", im}};
  }
  return j;
}

/// Runs all trials on a worker pool; records are written in trial order, so
/// the output depends only on the configuration.
inline CampaignSummary run_campaign(const CampaignConfig& c, std::ostream* log = nullptr) {
  c.validate();
  if (!detail::known_inequality(c.inequality)) throw Error(ErrorCode::UnknownInequality, "unknown inequality '" + c.inequality + "'");
  if (c.inequality == "resource") detail::require_dims(c, 2, "resource");
  if (c.inequality == "entanglement" || c.inequality == "negativity-g") detail::require_dims(c, 3, c.inequality.c_str());
  if (c.inequality == "usual") detail::require_dims(c, 3, "usual");
  if (c.inequality == "n-party") detail::require_dims(c, 4, "n-party");

  std::ofstream file;
  if (!c.output_path.empty()) {
    file.open(c.output_path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::IoError, "cannot open '" + c.output_path + "' for writing");
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<MonogamyReport>> results(static_cast<std::size_t>(c.trials));
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (long i = next++; i < c.trials; i = next++) {
      try {
        results[static_cast<std::size_t>(i)] = run_trial(c, i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = c.trials;
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_threads = std::min<unsigned>(c.threads > 0 ? c.threads : hw, static_cast<unsigned>(c.trials));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  CampaignSummary s;
  s.trials = c.trials;
  for (long i = 0; i < c.trials; ++i) {
    for (const auto& r : results[static_cast<std::size_t>(i)]) {
      ++s.reports;
      s.violations += r.violated;
      s.approximate += r.approximate;
      s.out_of_domain += r.out_of_domain;
      s.min_slack = std::min(s.min_slack, r.slack);
      if (file) file << report_to_json(c, i, r).dump() << '\n';
      if (log && r.violated) *log << "violation: trial " << i << " slack " << format_g12(r.slack) << '\n';
    }
  }
  if (file) {
    file.flush();
    if (!file) throw Error(ErrorCode::IoError, "write to '" + c.output_path + "' failed");
  }
  s.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

}  // namespace qmono
