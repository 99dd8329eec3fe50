#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracspec/fracspec.hpp"

namespace {

using namespace fracspec;

struct CliState {
  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  double r0 = 1.0;
  std::size_t nmax = 8;
  std::size_t depth = 6;
  std::uint64_t seed = 12345;
  std::int64_t z_range = 10;
  CLI::Option* opt_r0 = nullptr;
  CLI::Option* opt_nmax = nullptr;
  CLI::Option* opt_depth = nullptr;
  CLI::Option* opt_seed = nullptr;
  CLI::Option* opt_zrange = nullptr;

  std::string measure = "mu";
  std::size_t level = 0;
  bool level_set = false;
  std::string point_str;
  std::size_t membership_n = 1;
  std::size_t pq_n = 3;
};

RunConfig make_config(const CliState& st, bool need_system) {
  if (!st.config_path.empty() && !st.preset_name.empty())
    throw ConfigError("pass either --config or --preset, not both");
  RunConfig cfg;
  if (!st.preset_name.empty())
    cfg = preset(st.preset_name);
  else if (!st.config_path.empty())
    cfg = load_config_file(st.config_path);
  else if (need_system)
    throw ConfigError("no system configured; pass --preset or --config");
  if (st.opt_r0->count()) cfg.r0 = st.r0;
  if (st.opt_nmax->count()) cfg.n_max = st.nmax;
  if (st.opt_depth->count()) cfg.depth = st.depth;
  if (st.opt_seed->count()) cfg.seed = st.seed;
  if (st.opt_zrange->count()) cfg.z_range = st.z_range;
  if (need_system) validate(cfg.system);
  return cfg;
}

SvdOptions svd_of(const RunConfig& cfg) {
  SvdOptions opt;
  opt.seed = cfg.seed;
  return opt;
}

// Report sink: stdout by default; with --out <dir>, the primary report goes
// to <dir>/<name> and the scalar results to <dir>/summary.json. All floats
// pass through format_double so reruns are byte-identical.
class Reporter {
 public:
  Reporter(const std::string& out_dir, const std::string& report_name) : dir_(out_dir) {
    if (!dir_.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(dir_, ec);
      if (ec) throw ConfigError("cannot create output directory '" + dir_ + "'");
      const auto path = std::filesystem::path(dir_) / report_name;
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file '" + path.string() + "'");
    }
  }

  std::ostream& report() { return file_.is_open() ? file_ : std::cout; }

  void finish(const nlohmann::json& summary) {
    if (dir_.empty()) return;
    const auto path = std::filesystem::path(dir_) / "summary.json";
    std::ofstream js(path, std::ios::binary);
    if (!js) throw ConfigError("cannot open output file '" + path.string() + "'");
    js << summary.dump(2) << "\n";
  }

 private:
  std::string dir_;
  std::ofstream file_;
};

RatPoint parse_point(const std::string& s, std::size_t dim) {
  std::istringstream is(s);
  RatPoint p;
  std::string tok;
  while (is >> tok) p.c.push_back(parse_rat(tok));
  if (p.dim() != dim)
    throw ConfigError("point has " + std::to_string(p.dim()) + " coordinates, expected " +
                      std::to_string(dim));
  return p;
}

int cmd_check_hadamard(const CliState& st) {
  const RunConfig cfg = make_config(st, true);
  const HadamardCheck chk = check_hadamard(pair_of(cfg));
  Reporter rep(st.out_dir, "check-hadamard.txt");
  rep.report() << "deviation=" << format_double(chk.deviation) << "\n"
               << "accepted=" << (chk.accepted ? "true" : "false") << "\n";
  rep.finish({{"command", "check-hadamard"},
              {"deviation", format_double(chk.deviation)},
              {"accepted", chk.accepted}});
  return chk.accepted ? 0 : 1;
}

int cmd_dual_lattice(const CliState& st) {
  const RunConfig cfg = make_config(st, true);
  const Lattice lat = dual_lattice(cfg.system.digits, cfg.system.dim);
  Reporter rep(st.out_dir, "dual-lattice.txt");
  rep.report() << "dim=" << lat.dim << "\n";
  nlohmann::json basis = nlohmann::json::array();
  for (std::size_t j = 0; j < lat.dim; ++j) {
    rep.report() << "basis " << j << ":";
    nlohmann::json col = nlohmann::json::array();
    for (std::size_t i = 0; i < lat.dim; ++i) {
      rep.report() << " " << format_rat(lat.basis(i, j));
      col.push_back(format_rat(lat.basis(i, j)));
    }
    rep.report() << "\n";
    basis.push_back(col);
  }
  rep.finish({{"command", "dual-lattice"}, {"dim", lat.dim}, {"basis", basis}});
  return 0;
}

int cmd_cycles(const CliState& st) {
  const RunConfig cfg = make_config(st, true);
  const std::vector<Cycle> cycles = find_extreme_cycles(pair_of(cfg));
  Reporter rep(st.out_dir, "cycles.txt");
  rep.report() << "cycles=" << cycles.size() << "\n";
  std::size_t extreme = 0;
  for (std::size_t k = 0; k < cycles.size(); ++k) {
    const Cycle& c = cycles[k];
    extreme += c.extreme ? 1 : 0;
    rep.report() << "cycle " << k << ": extreme=" << (c.extreme ? "true" : "false")
                 << " min_mask=" << format_double(c.min_mask) << " points=";
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      if (i) rep.report() << "; ";
      rep.report() << format_point(c.points[i]);
    }
    rep.report() << " digits=";
    for (std::size_t i = 0; i < c.digits.size(); ++i) {
      if (i) rep.report() << ",";
      rep.report() << c.digits[i];
    }
    rep.report() << "\n";
  }
  rep.finish({{"command", "cycles"}, {"cycles", cycles.size()}, {"extreme", extreme}});
  return 0;
}

int cmd_spectrum(const CliState& st) {
  const RunConfig cfg = make_config(st, true);
  const SpectrumSet lam = resolve_lambda(cfg);
  Reporter rep(st.out_dir, "spectrum.txt");
  write_spectrum(rep.report(), lam);
  rep.finish({{"command", "spectrum"},
              {"points", lam.points.size()},
              {"depth", lam.depth},
              {"provenance", provenance_name(lam.provenance)}});
  return 0;
}

int cmd_membership(const CliState& st) {
  const RunConfig cfg = make_config(st, true);
  const HadamardPair pair = pair_of(cfg);
  const RatPoint x = parse_point(st.point_str, cfg.system.dim);
  const Lattice lat = dual_lattice(cfg.system.digits, cfg.system.dim);
  const bool member = s_chain_membership(x, pair, lat, st.membership_n);
  Reporter rep(st.out_dir, "membership.txt");
  rep.report() << "member=" << (member ? "true" : "false") << "\n";
  rep.finish({{"command", "membership"},
              {"point", format_point(x)},
              {"n", st.membership_n},
              {"member", member}});
  return member ? 0 : 1;
}

nlohmann::json series_json(const BoundSeries& series) {
  nlohmann::json arr = nlohmann::json::array();
  for (const BoundRecord& r : series.records)
    arr.push_back({{"n", r.n},
                   {"rows", r.rows},
                   {"cols", r.cols},
                   {"sigma_max", format_double(r.sigma_max)},
                   {"sigma_min", format_double(r.sigma_min)}});
  return arr;
}

int cmd_bessel_scan(const CliState& st) {
  const RunConfig cfg = make_config(st, true);
  const SpectrumSet lam = resolve_lambda(cfg);
  const BoundSeries series =
      bessel_scan(cfg.system, lam, cfg.r0, cfg.n_max, cfg.word_cap, svd_of(cfg));
  Reporter rep(st.out_dir, "bessel-scan.csv");
  write_bound_series_csv(rep.report(), series);
  rep.finish({{"command", "bessel-scan"},
              {"frequencies", lam.points.size()},
              {"r0", format_double(cfg.r0)},
              {"records", series_json(series)}});
  return 0;
}

int cmd_frame_cert(const CliState& st) {
  const RunConfig cfg = make_config(st, true);
  const SpectrumSet lam = resolve_lambda(cfg);
  const FrameCertificate cert = frame_certificate(cfg.system, lam, cfg.r0, cfg.n_max,
                                                  cfg.grid_step, cfg.tail_tolerance,
                                                  cfg.word_cap, svd_of(cfg));
  Reporter rep(st.out_dir, "frame-cert.txt");
  write_certificate(rep.report(), cert);
  rep.finish({{"command", "frame-cert"},
              {"r0", format_double(cert.r0)},
              {"grid_step", format_double(cert.grid_step)},
              {"n_max", cert.n_max},
              {"delta", format_double(cert.delta)},
              {"m_hat", format_double(cert.m_hat)},
              {"M_hat", format_double(cert.M_hat)},
              {"frame_evidence", cert.frame_evidence}});
  return cert.frame_evidence ? 0 : 1;
}

template <class Fn>
int with_gram_evaluator(const RunConfig& cfg, const std::string& measure, std::size_t level,
                        Fn&& fn) {
  if (measure == "mu") {
    const MuHatEvaluator ev(cfg.system, cfg.tail_tolerance);
    return fn(ev);
  }
  if (measure == "nu") {
    const NuHatEvaluator ev(cfg.system, level);
    return fn(ev);
  }
  if (measure == "atomic") {
    const AtomicHatEvaluator ev(cfg.system, level);
    return fn(ev);
  }
  throw ConfigError("unknown measure '" + measure + "' (use mu, nu, or atomic)");
}

int cmd_gram(const CliState& st) {
  const RunConfig cfg = make_config(st, true);
  const SpectrumSet lam = resolve_lambda(cfg);
  const std::size_t level = st.level_set ? st.level : cfg.depth;
  return with_gram_evaluator(cfg, st.measure, level, [&](const auto& ev) {
    const ComplexMatrix g = gram_matrix(ev, lam.points);
    const auto [lmax, lmin] = hermitian_extremes(g);
    Reporter rep(st.out_dir, "gram.txt");
    rep.report() << "size=" << g.rows << "\n"
                 << "lambda_max=" << format_double(lmax) << "\n"
                 << "lambda_min=" << format_double(lmin) << "\n";
    rep.finish({{"command", "gram"},
                {"measure", st.measure},
                {"size", g.rows},
                {"lambda_max", format_double(lmax)},
                {"lambda_min", format_double(lmin)}});
    return 0;
  });
}

int cmd_schur(const CliState& st) {
  const RunConfig cfg = make_config(st, true);
  const SpectrumSet lam = resolve_lambda(cfg);
  const std::size_t level = st.level_set ? st.level : cfg.depth;
  return with_gram_evaluator(cfg, st.measure, level, [&](const auto& ev) {
    const double bound = schur_bound(ev, lam.points);
    Reporter rep(st.out_dir, "schur.txt");
    rep.report() << "schur_bound=" << format_double(bound) << "\n";
    rep.finish(
        {{"command", "schur"}, {"measure", st.measure}, {"schur_bound", format_double(bound)}});
    return 0;
  });
}

int cmd_cantor_demo(const CliState& st) {
  const RunConfig cfg = make_config(st, false);
  const std::size_t nmax = st.opt_nmax->count() ? st.nmax : 5;
  const auto recs = cantor::riesz_series(nmax, cfg.z_range);
  Reporter rep(st.out_dir, "cantor-demo.csv");
  write_riesz_csv(rep.report(), recs);
  bool all = true;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : recs) {
    all = all && r.pass;
    arr.push_back({{"n", r.n},
                   {"size", r.size},
                   {"lower_est", format_double(r.lower_est)},
                   {"upper_est", format_double(r.upper_est)},
                   {"pass", r.pass}});
  }
  rep.finish({{"command", "cantor-demo"},
              {"z_range", cfg.z_range},
              {"all_pass", all},
              {"records", arr}});
  return all ? 0 : 1;
}

int cmd_pq_matrix(const CliState& st) {
  const RunConfig cfg = make_config(st, false);
  const cantor::PQReport pq = cantor::pq_matrix(cantor::pq_config(st.pq_n), svd_of(cfg));
  Reporter rep(st.out_dir, "pq-matrix.txt");
  rep.report() << "n=" << st.pq_n << "\n"
               << "rows=" << pq.matrix.rows << "\n"
               << "cols=" << pq.matrix.cols << "\n"
               << "norm=" << format_double(pq.norm) << "\n"
               << "L=" << format_double(pq.L) << "\n"
               << "bessel_bound=" << format_double(pq.bessel_bound) << "\n";
  rep.finish({{"command", "pq-matrix"},
              {"n", st.pq_n},
              {"rows", pq.matrix.rows},
              {"cols", pq.matrix.cols},
              {"norm", format_double(pq.norm)},
              {"L", format_double(pq.L)},
              {"bessel_bound", format_double(pq.bessel_bound)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CliState st;
  CLI::App app{"finite-matrix diagnostics for exponential families on fractal measures"};
  app.require_subcommand(1);

  app.add_option("--config", st.config_path, "JSON run configuration");
  app.add_option("--preset", st.preset_name,
                 "named preset: quarter-cantor, cantor3, remark18, cantor3-lacunary");
  app.add_option("--out", st.out_dir, "directory for the report and summary.json");
  st.opt_r0 = app.add_option("--r0", st.r0, "frequency filter radius");
  st.opt_nmax = app.add_option("--nmax", st.nmax, "largest matrix level");
  st.opt_depth = app.add_option("--depth", st.depth, "spectrum growth depth");
  st.opt_seed = app.add_option("--seed", st.seed, "iteration seed for large matrices");
  st.opt_zrange =
      app.add_option("--zrange", st.z_range, "translation range for the interval scan");

  auto* c_had = app.add_subcommand("check-hadamard", "verify the pair matrix is unitary");
  auto* c_lat = app.add_subcommand("dual-lattice", "print the invariant lattice of the digits");
  auto* c_cyc = app.add_subcommand("cycles", "enumerate extreme cycles of the dual system");
  auto* c_spec = app.add_subcommand("spectrum", "grow and print the frequency set");
  auto* c_mem = app.add_subcommand("membership", "test a point against the iterated chain");
  c_mem->add_option("--point", st.point_str, "coordinates, space separated rationals")
      ->required();
  c_mem->add_option("--n", st.membership_n, "chain depth");
  auto* c_scan =
      app.add_subcommand("bessel-scan", "extremal singular values of the level matrices");
  auto* c_cert = app.add_subcommand("frame-cert", "two-sided bound evidence over the scan range");
  auto* c_gram = app.add_subcommand("gram", "eigenvalue range of the exponential Gram matrix");
  c_gram->add_option("--measure", st.measure, "mu, nu, or atomic");
  auto* gram_level = c_gram->add_option("--level", st.level, "approximation level for nu/atomic");
  auto* c_schur = app.add_subcommand("schur", "row-sum bound for the Gram matrix");
  c_schur->add_option("--measure", st.measure, "mu, nu, or atomic");
  auto* schur_level =
      c_schur->add_option("--level", st.level, "approximation level for nu/atomic");
  auto* c_demo = app.add_subcommand("cantor-demo", "interval-approximant Riesz constant scan");
  auto* c_pq = app.add_subcommand("pq-matrix", "endpoint/residue phase matrix and its norm");
  c_pq->add_option("--n", st.pq_n, "level");

  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  st.level_set = gram_level->count() > 0 || schur_level->count() > 0;

  try {
    if (*c_had) return cmd_check_hadamard(st);
    if (*c_lat) return cmd_dual_lattice(st);
    if (*c_cyc) return cmd_cycles(st);
    if (*c_spec) return cmd_spectrum(st);
    if (*c_mem) return cmd_membership(st);
    if (*c_scan) return cmd_bessel_scan(st);
    if (*c_cert) return cmd_frame_cert(st);
    if (*c_gram) return cmd_gram(st);
    if (*c_schur) return cmd_schur(st);
    if (*c_demo) return cmd_cantor_demo(st);
    if (*c_pq) return cmd_pq_matrix(st);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
