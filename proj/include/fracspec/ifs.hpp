#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <set>
#include <vector>

#include "fracspec/errors.hpp"
#include "fracspec/exact.hpp"
#include "fracspec/linalg.hpp"

namespace fracspec {

// Affine system x -> R^{-1}(x + b) over the digit set B. R is an expansive
// integer matrix, digits are integer vectors containing 0.
struct Ifs {
  std::size_t dim = 1;
  IntMat R;
  std::vector<std::vector<std::int64_t>> digits;
};

inline std::size_t n_digits(const Ifs& f) { return f.digits.size(); }

namespace detail {

inline Eigen::MatrixXd int_mat_to_eigen(const IntMat& m) {
  Eigen::MatrixXd e(static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          static_cast<double>(m(i, j));
  return e;
}

inline double spectral_norm(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

// Geometric tail machinery for iterating a contraction C: the smallest
// m <= 64 with ||C^m|| < 1 gives sum_{i>=1} ||C^i y|| <= coeff * ||y||
// with coeff = kappa * ((m-1) + m*theta/(1-theta)).
struct ContractionTail {
  Eigen::MatrixXd C;
  double coeff = 0.0;

  explicit ContractionTail(const Eigen::MatrixXd& c) : C(c) {
    double kappa = 1.0;
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(c.rows(), c.cols());
    for (int m = 1; m <= 64; ++m) {
      p = (p * c).eval();
      const double theta = spectral_norm(p);
      if (theta < 1.0) {
        coeff = kappa * ((m - 1) + m * theta / (1.0 - theta));
        return;
      }
      kappa = std::max(kappa, theta);
    }
    throw NotExpansiveError("no power of the inverse matrix is a contraction");
  }
};

inline RatMat rt_inverse_exact(const Ifs& f) { return rat_inverse(rat_mat(transpose(f.R))); }
inline RatMat r_inverse_exact(const Ifs& f) { return rat_inverse(rat_mat(f.R)); }

inline double max_digit_norm(const Ifs& f) {
  double m = 0.0;
  for (const auto& b : f.digits) {
    double s = 0.0;
    for (auto v : b) s += static_cast<double>(v) * static_cast<double>(v);
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

}  // namespace detail

// Full structural check. Throws the specific error for the first violation;
// returns normally on a usable system.
inline void validate(const Ifs& f) {
  if (f.dim == 0) throw ConfigError("ifs: dimension must be positive");
  if (f.R.rows != f.dim || f.R.cols != f.dim)
    throw SizeMismatchError("ifs: R must be dim x dim");
  if (f.digits.size() < 2) throw ConfigError("ifs: at least two digits required");
  bool has_zero = false;
  std::set<std::vector<std::int64_t>> seen;
  for (const auto& b : f.digits) {
    if (b.size() != f.dim) throw SizeMismatchError("ifs: digit dimension mismatch");
    if (!seen.insert(b).second) throw DuplicateDigitError("ifs: duplicate digit");
    if (std::all_of(b.begin(), b.end(), [](std::int64_t v) { return v == 0; }))
      has_zero = true;
  }
  if (!has_zero) throw MissingZeroDigitError("ifs: digit set must contain 0");
  const Eigen::MatrixXd r = detail::int_mat_to_eigen(f.R);
  if (std::abs(r.determinant()) < 0.5)  // integer matrix: |det| >= 1 unless singular
    throw NotExpansiveError("ifs: R is singular");
  const auto eig = Eigen::EigenSolver<Eigen::MatrixXd>(r, false).eigenvalues();
  double min_mod = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eig.size(); ++i) min_mod = std::min(min_mod, std::abs(eig(i)));
  // spectral_radius(R^{-1}) = 1/min|eig(R)| must stay below 1 - 1e-9
  if (1.0 / min_mod >= 1.0 - 1e-9)
    throw NotExpansiveError("ifs: R is not expansive");
}

using Word = std::vector<std::uint32_t>;

// tau_{k_n} o ... o tau_{k_1} applied to 0, exact
inline RatPoint word_point(const Ifs& f, const Word& w) {
  const RatMat rinv = detail::r_inverse_exact(f);
  RatPoint x = rat_point_zero(f.dim);
  for (auto k : w) {
    if (k >= f.digits.size()) throw ConfigError("word_point: digit index out of range");
    for (std::size_t i = 0; i < f.dim; ++i) x.c[i] += f.digits[k][i];
    x = matvec(rinv, x);
  }
  return x;
}

// Uniform measure on the level-n word points. support[i] corresponds to the
// word whose digits are i written base N, most significant first (so the
// support runs in lexicographic word order, and matches analysis-matrix
// column order).
struct AtomicMeasure {
  std::size_t level = 0;
  double weight = 1.0;
  std::vector<RatPoint> support;
};

inline AtomicMeasure atomic_measure(const Ifs& f, std::size_t n,
                                    std::uint64_t word_cap = std::uint64_t{1} << 20) {
  const std::size_t N = n_digits(f);
  double count = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    count *= static_cast<double>(N);
    if (count > static_cast<double>(word_cap))
      throw SizeOverflowError("atomic_measure: N^n exceeds the word cap");
  }
  const RatMat rinv = detail::r_inverse_exact(f);
  AtomicMeasure out;
  out.level = n;
  out.support.reserve(static_cast<std::size_t>(count));
  // depth-first over word positions; each edge applies one exact map
  std::vector<RatPoint> stack(n + 1, rat_point_zero(f.dim));
  std::vector<std::size_t> digit(n, 0);
  if (n == 0) {
    out.support.push_back(stack[0]);
    out.weight = 1.0;
    return out;
  }
  std::size_t depth = 0;
  while (true) {
    if (depth == n) {
      out.support.push_back(stack[n]);
      while (depth > 0 && digit[depth - 1] + 1 == N) {
        digit[depth - 1] = 0;
        --depth;
      }
      if (depth == 0) break;
      ++digit[depth - 1];
      --depth;  // re-enter the edge so the new digit is applied
    } else {
      RatPoint x = stack[depth];
      for (std::size_t i = 0; i < f.dim; ++i)
        x.c[i] += f.digits[digit[depth]][i];
      stack[depth + 1] = matvec(rinv, x);
      ++depth;
    }
  }
  out.weight = 1.0 / out.support.size();
  return out;
}

// mask (1/N) sum_b e^{2 pi i b.x}
inline Cplx mask_m(const Ifs& f, const std::vector<double>& x) {
  if (x.size() != f.dim) throw SizeMismatchError("mask_m: dimension mismatch");
  Cplx s = 0.0;
  for (const auto& b : f.digits) {
    double ph = 0.0;
    for (std::size_t i = 0; i < f.dim; ++i) ph += static_cast<double>(b[i]) * x[i];
    s += std::polar(1.0, 2.0 * std::numbers::pi * ph);
  }
  return s / static_cast<double>(n_digits(f));
}

// exact-argument mask: phases are reduced mod 1 in rational arithmetic first,
// so arbitrarily large frequencies keep full double precision
inline Cplx mask_m(const Ifs& f, const RatPoint& x) {
  if (x.dim() != f.dim) throw SizeMismatchError("mask_m: dimension mismatch");
  Cplx s = 0.0;
  for (const auto& b : f.digits) {
    const Rat ph = mod1(dot(b, x));
    s += std::polar(1.0, 2.0 * std::numbers::pi * to_double(ph));
  }
  return s / static_cast<double>(n_digits(f));
}

// Infinite-product transform of the invariant measure, truncated once the
// certified geometric tail drops below tail_tolerance.
class MuHatEvaluator {
 public:
  MuHatEvaluator(Ifs f, double tail_tolerance = 1e-12, std::size_t max_factors = 200)
      : ifs_(std::move(f)),
        tol_(tail_tolerance),
        max_factors_(max_factors),
        ct_rat_(detail::rt_inverse_exact(ifs_)),
        tail_(detail::int_mat_to_eigen(transpose(ifs_.R)).inverse()) {
    if (!(tail_tolerance > 0.0)) throw ConfigError("mu_hat: tail_tolerance must be positive");
    if (max_factors == 0) throw ConfigError("mu_hat: max_factors must be positive");
    lip_ = 2.0 * std::numbers::pi * detail::max_digit_norm(ifs_);
  }

  const Ifs& ifs() const { return ifs_; }

  Cplx operator()(const std::vector<double>& x) const {
    if (x.size() != ifs_.dim) throw SizeMismatchError("mu_hat: dimension mismatch");
    Eigen::VectorXd y(static_cast<Eigen::Index>(x.size()));
    bool zero = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      y(static_cast<Eigen::Index>(i)) = x[i];
      zero = zero && x[i] == 0.0;
    }
    if (zero) return 1.0;
    Cplx prod = 1.0;
    std::vector<double> yv(x.size());
    for (std::size_t j = 1; j <= max_factors_; ++j) {
      y = (tail_.C * y).eval();
      for (std::size_t i = 0; i < x.size(); ++i) yv[i] = y(static_cast<Eigen::Index>(i));
      prod *= mask_m(ifs_, yv);
      if (lip_ * tail_.coeff * y.norm() <= tol_) return prod;
    }
    throw TruncationFailureError("mu_hat: tail tolerance not reached within max_factors");
  }

  Cplx operator()(const RatPoint& x) const {
    if (x.dim() != ifs_.dim) throw SizeMismatchError("mu_hat: dimension mismatch");
    if (std::all_of(x.c.begin(), x.c.end(), [](const Rat& v) { return v == 0; })) return 1.0;
    Cplx prod = 1.0;
    RatPoint y = x;
    for (std::size_t j = 1; j <= max_factors_; ++j) {
      y = matvec(ct_rat_, y);
      prod *= mask_m(ifs_, y);
      double nrm2 = 0.0;
      for (const Rat& v : y.c) {
        const double d = to_double(v);
        nrm2 += d * d;
      }
      if (lip_ * tail_.coeff * std::sqrt(nrm2) <= tol_) return prod;
    }
    throw TruncationFailureError("mu_hat: tail tolerance not reached within max_factors");
  }

 private:
  Ifs ifs_;
  double tol_;
  std::size_t max_factors_;
  RatMat ct_rat_;
  detail::ContractionTail tail_;
  double lip_ = 0.0;
};

inline Cplx mu_hat(const Ifs& f, const std::vector<double>& x, double tail_tolerance = 1e-12,
                   std::size_t max_factors = 200) {
  return MuHatEvaluator(f, tail_tolerance, max_factors)(x);
}

namespace detail {

// e^{i pi t} sin(pi t)/(pi t) per coordinate (transform of Lebesgue on [0,1]^d)
inline Cplx cube_hat_factor(double t) {
  if (t == 0.0) return 1.0;
  return std::polar(1.0, std::numbers::pi * t) * std::sin(std::numbers::pi * t) /
         (std::numbers::pi * t);
}

// same value with the oscillatory part reduced exactly: for f = frac(t),
// e^{i pi t} sin(pi t) = e^{i pi f} sin(pi f) (the two sign flips cancel)
inline Cplx cube_hat_factor(const Rat& t) {
  if (t == 0) return 1.0;
  const double f = to_double(mod1(t));
  return std::polar(1.0, std::numbers::pi * f) * std::sin(std::numbers::pi * f) /
         (std::numbers::pi * to_double(t));
}

}  // namespace detail

// Transform of the n-th averaging iterate applied to Lebesgue on the unit
// cube: the first n mask factors times the cube transform at scale n.
class NuHatEvaluator {
 public:
  NuHatEvaluator(Ifs f, std::size_t level)
      : ifs_(std::move(f)), level_(level), ct_rat_(detail::rt_inverse_exact(ifs_)) {
    ct_ = detail::int_mat_to_eigen(transpose(ifs_.R)).inverse();
  }

  std::size_t level() const { return level_; }
  const Ifs& ifs() const { return ifs_; }

  Cplx operator()(const std::vector<double>& x) const {
    if (x.size() != ifs_.dim) throw SizeMismatchError("nu_hat: dimension mismatch");
    Eigen::VectorXd y(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) y(static_cast<Eigen::Index>(i)) = x[i];
    Cplx prod = 1.0;
    std::vector<double> yv(x.size());
    for (std::size_t j = 0; j < level_; ++j) {
      y = (ct_ * y).eval();
      for (std::size_t i = 0; i < x.size(); ++i) yv[i] = y(static_cast<Eigen::Index>(i));
      prod *= mask_m(ifs_, yv);
    }
    for (Eigen::Index i = 0; i < y.size(); ++i) prod *= detail::cube_hat_factor(y(i));
    return prod;
  }

  Cplx operator()(const RatPoint& x) const {
    if (x.dim() != ifs_.dim) throw SizeMismatchError("nu_hat: dimension mismatch");
    RatPoint y = x;
    Cplx prod = 1.0;
    for (std::size_t j = 0; j < level_; ++j) {
      y = matvec(ct_rat_, y);
      prod *= mask_m(ifs_, y);
    }
    for (const Rat& t : y.c) prod *= detail::cube_hat_factor(t);
    return prod;
  }

 private:
  Ifs ifs_;
  std::size_t level_;
  RatMat ct_rat_;
  Eigen::MatrixXd ct_;
};

inline Cplx nu_hat(const Ifs& f, std::size_t level, const std::vector<double>& x) {
  return NuHatEvaluator(f, level)(x);
}

// Transform of the level-n uniform atomic measure: the finite mask product.
class AtomicHatEvaluator {
 public:
  AtomicHatEvaluator(Ifs f, std::size_t level)
      : ifs_(std::move(f)), level_(level), ct_rat_(detail::rt_inverse_exact(ifs_)) {
    ct_ = detail::int_mat_to_eigen(transpose(ifs_.R)).inverse();
  }

  std::size_t level() const { return level_; }

  Cplx operator()(const std::vector<double>& x) const {
    if (x.size() != ifs_.dim) throw SizeMismatchError("atomic transform: dimension mismatch");
    Eigen::VectorXd y(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) y(static_cast<Eigen::Index>(i)) = x[i];
    Cplx prod = 1.0;
    std::vector<double> yv(x.size());
    for (std::size_t j = 0; j < level_; ++j) {
      y = (ct_ * y).eval();
      for (std::size_t i = 0; i < x.size(); ++i) yv[i] = y(static_cast<Eigen::Index>(i));
      prod *= mask_m(ifs_, yv);
    }
    return prod;
  }

  Cplx operator()(const RatPoint& x) const {
    if (x.dim() != ifs_.dim) throw SizeMismatchError("atomic transform: dimension mismatch");
    RatPoint y = x;
    Cplx prod = 1.0;
    for (std::size_t j = 0; j < level_; ++j) {
      y = matvec(ct_rat_, y);
      prod *= mask_m(ifs_, y);
    }
    return prod;
  }

 private:
  Ifs ifs_;
  std::size_t level_;
  RatMat ct_rat_;
  Eigen::MatrixXd ct_;
};

struct Box {
  std::vector<double> lo, hi;
};

// Certified outer bounding box of the attractor, symmetric about 0 and
// inflated by 1e-9. Componentwise half-width sum_j max_b |(R^{-j} b)_i| plus
// a geometric tail bound.
inline Box attractor_box(const Ifs& f) {
  const Eigen::MatrixXd rinv = detail::int_mat_to_eigen(f.R).inverse();
  detail::ContractionTail tail(rinv);
  const std::size_t N = n_digits(f);
  Eigen::MatrixXd v(static_cast<Eigen::Index>(f.dim), static_cast<Eigen::Index>(N));
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t i = 0; i < f.dim; ++i)
      v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          static_cast<double>(f.digits[j][i]);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.dim));
  for (std::size_t j = 1; j <= 10000; ++j) {
    v = (rinv * v).eval();
    w += v.cwiseAbs().rowwise().maxCoeff();
    const double colmax = v.colwise().norm().maxCoeff();
    const double rest = tail.coeff * colmax;
    if (rest <= 1e-12) {
      Box box;
      box.lo.resize(f.dim);
      box.hi.resize(f.dim);
      for (std::size_t i = 0; i < f.dim; ++i) {
        const double h = w(static_cast<Eigen::Index>(i)) + rest + 1e-9;
        box.lo[i] = -h;
        box.hi[i] = h;
      }
      return box;
    }
  }
  throw TruncationFailureError("attractor_box: tail bound did not converge");
}

}  // namespace fracspec
