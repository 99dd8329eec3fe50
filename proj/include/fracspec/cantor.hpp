#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "fracspec/bounds.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/exact.hpp"
#include "fracspec/ifs.hpp"
#include "fracspec/linalg.hpp"
#include "fracspec/spectra.hpp"

// The scale-3 two-digit system and its piecewise-linear approximants:
// nu_n is (3/2)^n times Lebesgue measure on the n-th prefractal Omega_n.
namespace fracspec::cantor {

inline Ifs cantor3_ifs() {
  Ifs f;
  f.dim = 1;
  f.R = IntMat(1, 1);
  f.R(0, 0) = 3;
  f.digits = {{0}, {2}};
  return f;
}

struct Interval {
  Rat a;
  Rat b;
};

// the 2^n closed intervals of Omega_n, each of length 3^{-n}, sorted
inline std::vector<Interval> omega_intervals(std::size_t n,
                                             std::uint64_t cap = std::uint64_t{1} << 20) {
  std::vector<Interval> cur{Interval{Rat(0), Rat(1)}};
  for (std::size_t k = 0; k < n; ++k) {
    if (cur.size() * 2 > cap) throw SizeOverflowError("omega_intervals: interval cap exceeded");
    std::vector<Interval> next;
    next.reserve(cur.size() * 2);
    for (const Interval& iv : cur) next.push_back(Interval{iv.a / 3, iv.b / 3});
    for (const Interval& iv : cur)
      next.push_back(Interval{(iv.a + 2) / 3, (iv.b + 2) / 3});
    std::sort(next.begin(), next.end(),
              [](const Interval& u, const Interval& v) { return u.a < v.a; });
    cur = std::move(next);
  }
  return cur;
}

// P_n: the left endpoints of Omega_n scaled by 3^n; equivalently all sums
// of distinct powers 2*3^k, k < n. Satisfies P_n = P_{n-1} u (P_{n-1} + 2*3^{n-1}).
inline std::vector<BigInt> p_set(std::size_t n, std::uint64_t cap = std::uint64_t{1} << 20) {
  std::vector<BigInt> cur{BigInt(0)};
  BigInt pow(1);
  for (std::size_t k = 0; k < n; ++k) {
    if (cur.size() * 2 > cap) throw SizeOverflowError("p_set: size cap exceeded");
    std::vector<BigInt> next = cur;
    next.reserve(cur.size() * 2);
    for (const BigInt& p : cur) next.push_back(p + 2 * pow);
    std::sort(next.begin(), next.end());
    cur = std::move(next);
    pow *= 3;
  }
  return cur;
}

// residues of the depth-n spectrum iterates: all sums of powers 3^k, k < n
inline SpectrumSet gamma_n(std::size_t n, std::uint64_t cap = std::uint64_t{1} << 20) {
  std::vector<BigInt> cur{BigInt(0)};
  BigInt pow(1);
  for (std::size_t k = 0; k < n; ++k) {
    if (cur.size() * 2 > cap) throw SizeOverflowError("gamma_n: size cap exceeded");
    std::vector<BigInt> next = cur;
    next.reserve(cur.size() * 2);
    for (const BigInt& q : cur) next.push_back(q + pow);
    std::sort(next.begin(), next.end());
    cur = std::move(next);
    pow *= 3;
  }
  SpectrumSet out;
  out.dim = 1;
  out.provenance = Provenance::gamma_n;
  out.depth = n;
  out.points.reserve(cur.size());
  for (const BigInt& q : cur) {
    RatPoint p;
    p.c.push_back(Rat(q));
    out.points.push_back(std::move(p));
  }
  return out;
}

struct PQConfig {
  std::size_t n = 0;
  std::vector<BigInt> P;  // rows
  std::vector<BigInt> Q;  // columns, residues mod 3^n
};

inline PQConfig pq_config(std::size_t n) {
  PQConfig cfg;
  cfg.n = n;
  cfg.P = p_set(n);
  const SpectrumSet g = gamma_n(n);
  cfg.Q.reserve(g.points.size());
  for (const RatPoint& p : g.points) cfg.Q.push_back(numerator(p.c[0]));
  return cfg;
}

// M(p, q) = e^{2 pi i p q / 3^n}. Norm factors as 2^{n/2} * L, and L^2 is
// the optimal Bessel bound of the exponentials e_q over the normalized
// counting measure on P_n / 3^n.
struct PQReport {
  ComplexMatrix matrix;
  double norm = 0.0;
  double L = 0.0;
  double bessel_bound = 0.0;
};

inline PQReport pq_matrix(const PQConfig& cfg, const SvdOptions& svd = {}) {
  if (cfg.P.empty() || cfg.Q.empty()) throw SizeMismatchError("pq_matrix: empty index set");
  BigInt mod(1);
  for (std::size_t k = 0; k < cfg.n; ++k) mod *= 3;
  for (const BigInt& q : cfg.Q)
    if (q < 0 || q >= mod) throw ConfigError("pq_matrix: column index outside residue range");
  PQReport rep;
  rep.matrix = ComplexMatrix(cfg.P.size(), cfg.Q.size());
  for (std::size_t i = 0; i < cfg.P.size(); ++i)
    for (std::size_t j = 0; j < cfg.Q.size(); ++j) {
      const BigInt r = ((cfg.P[i] * cfg.Q[j]) % mod + mod) % mod;
      const double frac = to_double(Rat(r, mod));
      rep.matrix(i, j) = std::polar(1.0, 2.0 * std::numbers::pi * frac);
    }
  rep.norm = operator_norm(rep.matrix, svd);
  rep.L = rep.norm / std::pow(2.0, static_cast<double>(cfg.n) / 2.0);
  rep.bessel_bound = rep.L * rep.L;
  return rep;
}

// Riesz-constant scan: exponentials indexed by q + 3^n z, q in Gamma_n,
// |z| <= z_range, measured against nu_n. The Gram spectrum must stay inside
// [(1/2)^n, (3/2)^n].
struct RieszRecord {
  std::size_t n = 0;
  std::size_t size = 0;
  double lower_est = 0.0;
  double upper_est = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool pass = false;
};

inline std::vector<RieszRecord> riesz_series(std::size_t n_max, std::int64_t z_range,
                                             double slack = 1e-6) {
  if (z_range < 0) throw ConfigError("riesz_series: z_range must be nonnegative");
  const Ifs f = cantor3_ifs();
  std::vector<RieszRecord> out;
  BigInt pow(1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const SpectrumSet g = gamma_n(n);
    std::vector<RatPoint> freqs;
    freqs.reserve(g.points.size() * static_cast<std::size_t>(2 * z_range + 1));
    for (std::int64_t z = -z_range; z <= z_range; ++z)
      for (const RatPoint& q : g.points) {
        RatPoint p;
        p.c.push_back(q.c[0] + Rat(pow) * z);
        freqs.push_back(std::move(p));
      }
    const NuHatEvaluator ev(f, n);
    const ComplexMatrix gram = gram_matrix(ev, freqs);
    const auto [lmax, lmin] = hermitian_extremes(gram);
    RieszRecord rec;
    rec.n = n;
    rec.size = freqs.size();
    rec.lower_est = std::sqrt(std::max(lmin, 0.0));
    rec.upper_est = std::sqrt(std::max(lmax, 0.0));
    rec.lower_bound = std::pow(0.5, static_cast<double>(n) / 2.0);
    rec.upper_bound = std::pow(1.5, static_cast<double>(n) / 2.0);
    rec.pass = rec.lower_est >= rec.lower_bound - slack && rec.upper_est <= rec.upper_bound + slack;
    out.push_back(rec);
    pow *= 3;
  }
  return out;
}

}  // namespace fracspec::cantor
