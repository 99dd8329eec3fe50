#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "fracspec/errors.hpp"
#include "fracspec/exact.hpp"
#include "fracspec/ifs.hpp"
#include "fracspec/linalg.hpp"

namespace fracspec {

// Primal digit system plus the dual digit set L driving spectrum construction.
struct HadamardPair {
  Ifs system;
  std::vector<std::vector<std::int64_t>> L;
};

// dual maps x -> (R^T)^{-1}(x + l) form their own affine system
inline Ifs dual_ifs(const HadamardPair& p) {
  Ifs d;
  d.dim = p.system.dim;
  d.R = transpose(p.system.R);
  d.digits = p.L;
  return d;
}

inline void validate_pair(const HadamardPair& p) {
  validate(p.system);
  if (p.L.size() != n_digits(p.system))
    throw SizeMismatchError("pair: L must have as many elements as B");
  bool has_zero = false;
  std::set<std::vector<std::int64_t>> seen;
  for (const auto& l : p.L) {
    if (l.size() != p.system.dim) throw SizeMismatchError("pair: L digit dimension mismatch");
    if (!seen.insert(l).second) throw DuplicateDigitError("pair: duplicate element in L");
    if (std::all_of(l.begin(), l.end(), [](std::int64_t v) { return v == 0; })) has_zero = true;
  }
  if (!has_zero) throw MissingZeroDigitError("pair: L must contain 0");
}

struct HadamardCheck {
  double deviation = 0.0;  // max entrywise |M*M - I|
  bool accepted = false;
  ComplexMatrix matrix;  // (1/sqrt N)(e^{2 pi i (R^{-1} b) . l})
};

// Unitarity test of the normalized exponential matrix. Phases (R^{-1}b).l are
// reduced mod 1 exactly, so the deviation is either ~1e-16 or macroscopic.
inline HadamardCheck check_hadamard(const HadamardPair& p, double tol = 1e-10) {
  validate_pair(p);
  const std::size_t N = n_digits(p.system);
  const RatMat rinv = detail::r_inverse_exact(p.system);
  HadamardCheck out;
  out.matrix = ComplexMatrix(N, N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  for (std::size_t i = 0; i < N; ++i) {
    RatPoint b;
    b.c.assign(p.system.digits[i].begin(), p.system.digits[i].end());
    const RatPoint rb = matvec(rinv, b);
    for (std::size_t j = 0; j < N; ++j) {
      const Rat ph = mod1(dot(p.L[j], rb));
      out.matrix(i, j) = scale * std::polar(1.0, 2.0 * std::numbers::pi * to_double(ph));
    }
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      Cplx s = 0.0;
      for (std::size_t k = 0; k < N; ++k)
        s += std::conj(out.matrix(k, i)) * out.matrix(k, j);
      if (i == j) s -= 1.0;
      dev = std::max(dev, std::abs(s));
    }
  out.deviation = dev;
  out.accepted = dev <= tol;
  return out;
}

// Lattice of points with integral pairing against every digit: columns of
// basis generate it; basis_inv maps lattice members to integer vectors.
struct Lattice {
  std::size_t dim = 1;
  RatMat basis;
  RatMat basis_inv;
};

inline Lattice dual_lattice(const std::vector<std::vector<std::int64_t>>& digits,
                            std::size_t dim) {
  const Mat<BigInt> h = hnf_basis(digits, dim);
  RatMat ht(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) ht(i, j) = Rat(h(j, i));
  Lattice lat;
  lat.dim = dim;
  lat.basis_inv = ht;  // H^T, integral by construction
  lat.basis = rat_inverse(ht);
  return lat;
}

inline Lattice dual_lattice(const Ifs& f) { return dual_lattice(f.digits, f.dim); }

inline bool lattice_contains(const Lattice& lat, const RatPoint& x) {
  if (x.dim() != lat.dim) throw SizeMismatchError("lattice_contains: dimension mismatch");
  const RatPoint z = matvec(lat.basis_inv, x);
  return std::all_of(z.c.begin(), z.c.end(),
                     [](const Rat& v) { return denominator(v) == 1; });
}

// transfer operator applied to the constant function 1:
// sum_l |m_B((R^T)^{-1}(x + l))|^2; identically 1 exactly on Hadamard pairs
inline double transfer_one(const HadamardPair& p, const std::vector<double>& x) {
  if (x.size() != p.system.dim) throw SizeMismatchError("transfer_one: dimension mismatch");
  const Eigen::MatrixXd ct =
      detail::int_mat_to_eigen(transpose(p.system.R)).inverse();
  double total = 0.0;
  std::vector<double> y(x.size());
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.size()));
  for (const auto& l : p.L) {
    for (std::size_t i = 0; i < x.size(); ++i)
      v(static_cast<Eigen::Index>(i)) = x[i] + static_cast<double>(l[i]);
    const Eigen::VectorXd u = ct * v;
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = u(static_cast<Eigen::Index>(i));
    total += std::norm(mask_m(p.system, y));
  }
  return total;
}

// partial sum of |transform(x + lambda)|^2 over the supplied frequencies;
// never extrapolated to the infinite sum
template <class Evaluator>
inline double h_function(const Evaluator& ev, const std::vector<RatPoint>& freqs,
                         const std::vector<double>& x) {
  double total = 0.0;
  std::vector<double> arg(x.size());
  for (const RatPoint& lam : freqs) {
    if (lam.dim() != x.size()) throw SizeMismatchError("h_function: dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) arg[i] = x[i] + to_double(lam.c[i]);
    total += std::norm(ev(arg));
  }
  return total;
}

// max |transform(lambda - lambda')| over distinct pairs, differences exact
template <class Evaluator>
inline double orthogonality_deviation(const Evaluator& ev, const std::vector<RatPoint>& freqs,
                                      std::uint64_t pair_cap = std::uint64_t{1} << 22) {
  const std::size_t n = freqs.size();
  if (n > 1 && static_cast<std::uint64_t>(n) * (n - 1) / 2 > pair_cap)
    throw SizeOverflowError("orthogonality_deviation: pair count exceeds cap");
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      RatPoint d = freqs[i];
      for (std::size_t k = 0; k < d.dim(); ++k) d.c[k] -= freqs[j].c[k];
      worst = std::max(worst, std::abs(ev(d)));
    }
  return worst;
}

}  // namespace fracspec
