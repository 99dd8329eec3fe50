#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "fracspec/errors.hpp"
#include "fracspec/exact.hpp"
#include "fracspec/ifs.hpp"
#include "fracspec/linalg.hpp"
#include "fracspec/spectra.hpp"

namespace fracspec {

// A_n = scale * (e^{-2 pi i lambda . tau_k(0)}), rows over the filtered
// frequencies, columns over level-n words in lexicographic order.
struct AnalysisMatrix {
  ComplexMatrix matrix;
  SpectrumSet row_freqs;
  std::size_t level = 0;
  double r0 = 0.0;
  double scale = 1.0;
};

inline AnalysisMatrix build_An(const Ifs& f, const SpectrumSet& freqs, std::size_t n, double r0,
                               std::uint64_t word_cap = std::uint64_t{1} << 16) {
  if (freqs.dim != f.dim) throw SizeMismatchError("build_An: dimension mismatch");
  AnalysisMatrix out;
  out.level = n;
  out.r0 = r0;
  out.row_freqs = lambda_n_filter(freqs, f.R, n, r0);
  const AtomicMeasure atoms = atomic_measure(f, n, word_cap);
  const std::size_t rows = out.row_freqs.points.size();
  const std::size_t cols = atoms.support.size();
  out.scale = 1.0 / std::sqrt(static_cast<double>(cols));
  out.matrix = ComplexMatrix(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const RatPoint& lam = out.row_freqs.points[i];
    for (std::size_t k = 0; k < cols; ++k) {
      // exact mod-1 phase: large frequencies lose no precision
      const Rat ph = mod1(dot(lam, atoms.support[k]));
      out.matrix(i, k) =
          out.scale * std::polar(1.0, -2.0 * std::numbers::pi * to_double(ph));
    }
  }
  return out;
}

struct BoundRecord {
  std::size_t n = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
};

struct BoundSeries {
  std::vector<BoundRecord> records;  // n strictly increasing
};

// extremal singular values of A_1..A_{n_max}; an empty row set records zeros
inline BoundSeries bessel_scan(const Ifs& f, const SpectrumSet& freqs, double r0,
                               std::size_t n_max,
                               std::uint64_t word_cap = std::uint64_t{1} << 16,
                               const SvdOptions& svd = {}) {
  if (n_max == 0) throw ConfigError("bessel_scan: n_max must be positive");
  BoundSeries out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const AnalysisMatrix an = build_An(f, freqs, n, r0, word_cap);
    BoundRecord rec;
    rec.n = n;
    rec.rows = an.matrix.rows;
    rec.cols = an.matrix.cols;
    if (an.matrix.rows > 0) {
      const SingularExtremes se = singular_extremes(an.matrix, svd);
      rec.sigma_max = se.sigma_max;
      rec.sigma_min = se.sigma_min;
    }
    out.records.push_back(rec);
  }
  return out;
}

// Grid minimum of |mu_hat| near 0 plus uniform two-sided singular-value
// bounds over the scan range. Evidence only: finite matrices bound nothing
// about the infinite family by themselves.
struct FrameCertificate {
  double r0 = 0.0;
  double grid_step = 0.0;
  std::size_t n_max = 0;
  double delta = 0.0;  // min |mu_hat| over the grid ball
  double m_hat = 0.0;  // min sigma_min^2
  double M_hat = 0.0;  // max sigma_max^2
  bool frame_evidence = false;
};

inline FrameCertificate frame_certificate(const Ifs& f, const SpectrumSet& freqs, double r0,
                                          std::size_t n_max, double grid_step = 0.0,
                                          double tail_tolerance = 1e-12,
                                          std::uint64_t word_cap = std::uint64_t{1} << 16,
                                          const SvdOptions& svd = {}) {
  if (!(r0 > 0.0)) throw ConfigError("frame_certificate: r0 must be positive");
  if (grid_step == 0.0) grid_step = r0 / 128.0;
  if (!(grid_step > 0.0) || grid_step > r0 / 100.0)
    throw ConfigError("frame_certificate: grid_step must lie in (0, r0/100]");
  FrameCertificate cert;
  cert.r0 = r0;
  cert.grid_step = grid_step;
  cert.n_max = n_max;
  const std::size_t per_axis = 2 * static_cast<std::size_t>(std::floor(r0 / grid_step)) + 1;
  double total = 1.0;
  for (std::size_t i = 0; i < f.dim; ++i) total *= static_cast<double>(per_axis);
  if (total > 1e7) throw SizeOverflowError("frame_certificate: grid too large");
  const MuHatEvaluator ev(f, tail_tolerance);
  const auto half = static_cast<std::int64_t>(std::floor(r0 / grid_step));
  std::vector<std::int64_t> idx(f.dim, -half);
  double delta = std::numeric_limits<double>::infinity();
  std::vector<double> x(f.dim);
  while (true) {
    double nrm2 = 0.0;
    for (std::size_t i = 0; i < f.dim; ++i) {
      x[i] = static_cast<double>(idx[i]) * grid_step;
      nrm2 += x[i] * x[i];
    }
    if (nrm2 <= r0 * r0) delta = std::min(delta, std::abs(ev(x)));
    std::size_t k = 0;
    while (k < f.dim && idx[k] == half) {
      idx[k] = -half;
      ++k;
    }
    if (k == f.dim) break;
    ++idx[k];
  }
  cert.delta = delta;
  const BoundSeries series = bessel_scan(f, freqs, r0, n_max, word_cap, svd);
  double m_hat = std::numeric_limits<double>::infinity(), big = 0.0;
  for (const BoundRecord& rec : series.records) {
    if (rec.rows < rec.cols)
      throw NoLowerBoundError("frame_certificate: A_" + std::to_string(rec.n) + " has " +
                              std::to_string(rec.rows) + " rows against " +
                              std::to_string(rec.cols) +
                              " columns; no lower singular bound is possible");
    m_hat = std::min(m_hat, rec.sigma_min * rec.sigma_min);
    big = std::max(big, rec.sigma_max * rec.sigma_max);
  }
  cert.m_hat = m_hat;
  cert.M_hat = big;
  cert.frame_evidence = cert.delta > 0.0 && cert.m_hat > 0.0;
  return cert;
}

// Hermitian Gram matrix of the exponential family: entries
// transform(lambda_i - lambda_j), differences exact, unit diagonal.
template <class Evaluator>
inline ComplexMatrix gram_matrix(const Evaluator& ev, const std::vector<RatPoint>& freqs,
                                 std::size_t size_cap = 4096) {
  const std::size_t n = freqs.size();
  if (n == 0) throw SizeMismatchError("gram_matrix: empty frequency set");
  if (n > size_cap) throw SizeOverflowError("gram_matrix: size exceeds cap");
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      RatPoint d = freqs[i];
      for (std::size_t k = 0; k < d.dim(); ++k) d.c[k] -= freqs[j].c[k];
      const Cplx v = ev(d);
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  }
  return g;
}

// Schur test: max absolute row sum of the Gram; upper bound for its norm
template <class Evaluator>
inline double schur_bound(const Evaluator& ev, const std::vector<RatPoint>& freqs,
                          std::size_t size_cap = 4096) {
  const std::size_t n = freqs.size();
  if (n == 0) throw SizeMismatchError("schur_bound: empty frequency set");
  if (n > size_cap) throw SizeOverflowError("schur_bound: size exceeds cap");
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 1.0;  // diagonal entry
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      RatPoint d = freqs[i];
      for (std::size_t k = 0; k < d.dim(); ++k) d.c[k] -= freqs[j].c[k];
      row += std::abs(ev(d));
    }
    worst = std::max(worst, row);
  }
  return worst;
}

// Optimal Bessel bound of the exponentials over a finite atomic measure:
// squared norm of (1/sqrt(#atoms)) (e^{2 pi i f . g}).
inline double bessel_bound_atomic(const AtomicMeasure& atoms, const SpectrumSet& freqs,
                                  const SvdOptions& svd = {}) {
  if (atoms.support.empty()) throw SizeMismatchError("bessel_bound_atomic: empty support");
  if (freqs.points.empty()) throw SizeMismatchError("bessel_bound_atomic: empty frequency set");
  const std::size_t rows = atoms.support.size();
  const std::size_t cols = freqs.points.size();
  ComplexMatrix m(rows, cols);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const Rat ph = mod1(dot(atoms.support[i], freqs.points[j]));
      m(i, j) = scale * std::polar(1.0, 2.0 * std::numbers::pi * to_double(ph));
    }
  const double nrm = operator_norm(m, svd);
  return nrm * nrm;
}

// Verdict over a series of (lower, upper) estimates: does the lower edge stay
// above tol and the upper edge below cap?
struct RieszSummary {
  double inf_lower = 0.0;
  double sup_upper = 0.0;
  bool limit_positive = false;
  bool limit_finite = false;
};

inline RieszSummary riesz_limit_monitor(const std::vector<std::pair<double, double>>& estimates,
                                        double tol = 1e-9, double cap = 1e12) {
  if (estimates.empty()) throw SizeMismatchError("riesz_limit_monitor: empty series");
  RieszSummary s;
  s.inf_lower = std::numeric_limits<double>::infinity();
  s.sup_upper = 0.0;
  for (const auto& [lo, hi] : estimates) {
    s.inf_lower = std::min(s.inf_lower, lo);
    s.sup_upper = std::max(s.sup_upper, hi);
  }
  s.limit_positive = s.inf_lower > tol;
  s.limit_finite = s.sup_upper < cap;
  return s;
}

}  // namespace fracspec
