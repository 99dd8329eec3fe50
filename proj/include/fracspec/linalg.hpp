#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>

#include "fracspec/errors.hpp"
#include "fracspec/exact.hpp"

namespace fracspec {

using Cplx = std::complex<double>;
using ComplexMatrix = Mat<Cplx>;

struct SingularExtremes {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  std::size_t iterations = 0;  // 0 for the exact path
  double residual = 0.0;       // relative residual of the final iterate
};

struct SvdOptions {
  std::size_t exact_max_dim = 4096;  // larger matrices switch to power iteration
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

namespace detail {

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd e(static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return e;
}

inline void require_finite(const ComplexMatrix& m) {
  if (m.rows == 0 || m.cols == 0) throw SizeMismatchError("matrix must be nonempty");
  for (const Cplx& z : m.a)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw NonFiniteError("matrix has a non-finite entry");
}

inline Eigen::VectorXd exact_singular_values(const Eigen::MatrixXcd& e) {
  // Jacobi is more accurate on small problems, BDC scales better
  if (std::min(e.rows(), e.cols()) <= 16)
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(e).singularValues();
  return Eigen::BDCSVD<Eigen::MatrixXcd>(e).singularValues();
}

// largest eigenvalue of the PSD operator v -> apply(v) by power iteration
template <class Apply>
inline double power_largest(const Apply& apply, Eigen::Index dim, const SvdOptions& opt,
                            std::size_t& iterations, double& residual) {
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Cplx(gauss(rng), gauss(rng));
  v.normalize();
  double lambda = 0.0;
  residual = 0.0;
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    Eigen::VectorXcd w = apply(v);
    lambda = std::real(v.dot(w));
    const double r = (w - lambda * v).norm();
    ++iterations;
    if (lambda <= 0.0) {
      residual = 0.0;
      return 0.0;  // PSD operator vanished on the iterate: spectrum is 0
    }
    residual = r / lambda;
    if (r <= opt.tol * lambda) return lambda;
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
  }
  if (residual > 1e-6)
    throw TruncationFailureError("power iteration did not converge within the iteration cap");
  return lambda;
}

inline SingularExtremes power_extremes(const Eigen::MatrixXcd& e, const SvdOptions& opt,
                                       bool need_min) {
  // run on the smaller Gram side so both extremes refer to min(rows, cols)
  const bool tall = e.rows() >= e.cols();
  const Eigen::Index dim = tall ? e.cols() : e.rows();
  auto gram = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    if (tall) return e.adjoint() * (e * v);
    return e * (e.adjoint() * v);
  };
  SingularExtremes out;
  double res1 = 0.0;
  const double lmax = power_largest(gram, dim, opt, out.iterations, res1);
  out.sigma_max = std::sqrt(std::max(lmax, 0.0));
  out.residual = res1;
  if (!need_min) return out;
  const double shift = lmax * (1.0 + 1e-3) + 1e-30;
  auto shifted = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    return shift * v - gram(v);
  };
  double res2 = 0.0;
  const double nu = power_largest(shifted, dim, opt, out.iterations, res2);
  out.sigma_min = std::sqrt(std::max(shift - nu, 0.0));
  out.residual = std::max(res1, res2);
  return out;
}

}  // namespace detail

// largest singular value (operator norm); exact SVD up to
// exact_max_dim, seeded power iteration beyond it
inline double operator_norm(const ComplexMatrix& m, const SvdOptions& opt = {}) {
  detail::require_finite(m);
  const Eigen::MatrixXcd e = detail::to_eigen(m);
  if (std::max(m.rows, m.cols) <= opt.exact_max_dim)
    return detail::exact_singular_values(e)(0);
  return detail::power_extremes(e, opt, false).sigma_max;
}

// both extremal singular values; sigma_min is the min(rows, cols)-th value
inline SingularExtremes singular_extremes(const ComplexMatrix& m, const SvdOptions& opt = {}) {
  detail::require_finite(m);
  const Eigen::MatrixXcd e = detail::to_eigen(m);
  if (std::max(m.rows, m.cols) <= opt.exact_max_dim) {
    const Eigen::VectorXd sv = detail::exact_singular_values(e);
    SingularExtremes out;
    out.sigma_max = sv(0);
    out.sigma_min = sv(sv.size() - 1);
    return out;
  }
  return detail::power_extremes(e, opt, true);
}

// (largest, smallest) eigenvalue of a Hermitian matrix; the input must be
// Hermitian entrywise within herm_tol
inline std::pair<double, double> hermitian_extremes(const ComplexMatrix& m,
                                                    double herm_tol = 1e-12) {
  detail::require_finite(m);
  if (m.rows != m.cols) throw SizeMismatchError("hermitian_extremes: square matrix required");
  double dev = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = i; j < m.cols; ++j)
      dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
  if (dev > herm_tol)
    throw NotHermitianError("hermitian_extremes: matrix deviates from Hermitian by " +
                            std::to_string(dev));
  Eigen::MatrixXcd e = detail::to_eigen(m);
  e = ((e + e.adjoint()) * 0.5).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev(ev.size() - 1), ev(0)};
}

}  // namespace fracspec
