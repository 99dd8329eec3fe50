#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "fracspec/errors.hpp"

namespace fracspec {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// floor as a big integer; cpp_rational keeps denominator() > 0.
inline BigInt rat_floor(const Rat& r) {
  BigInt n = numerator(r), d = denominator(r);
  BigInt q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

// representative in [0,1); exact, used to reduce phases before any trig
inline Rat mod1(const Rat& r) { return r - Rat(rat_floor(r)); }

// point with exact rational coordinates, ordered lexicographically
struct RatPoint {
  std::vector<Rat> c;

  RatPoint() = default;
  explicit RatPoint(std::vector<Rat> coords) : c(std::move(coords)) {}
  std::size_t dim() const { return c.size(); }

  friend bool operator==(const RatPoint& a, const RatPoint& b) { return a.c == b.c; }
  friend bool operator!=(const RatPoint& a, const RatPoint& b) { return !(a == b); }
  friend bool operator<(const RatPoint& a, const RatPoint& b) {
    if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
    for (std::size_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
    }
    return false;
  }
};

inline RatPoint rat_point_zero(std::size_t dim) {
  return RatPoint(std::vector<Rat>(dim, Rat(0)));
}

inline Rat dot(const RatPoint& a, const RatPoint& b) {
  if (a.dim() != b.dim()) throw SizeMismatchError("dot: dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a.c[i] * b.c[i];
  return s;
}

inline Rat dot(const std::vector<std::int64_t>& a, const RatPoint& b) {
  if (a.size() != b.dim()) throw SizeMismatchError("dot: dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b.c[i];
  return s;
}

// minimal dense row-major matrix; T is a value type with field operations
template <class T>
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T(0)) {}

  T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

using IntMat = Mat<std::int64_t>;
using RatMat = Mat<Rat>;

inline RatMat rat_mat(const IntMat& m) {
  RatMat r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = Rat(m.a[i]);
  return r;
}

template <class T>
inline Mat<T> transpose(const Mat<T>& m) {
  Mat<T> t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

inline RatPoint matvec(const RatMat& m, const RatPoint& v) {
  if (m.cols != v.dim()) throw SizeMismatchError("matvec: dimension mismatch");
  RatPoint out;
  out.c.resize(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    Rat s = 0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * v.c[j];
    out.c[i] = s;
  }
  return out;
}

inline RatMat mat_mul(const RatMat& x, const RatMat& y) {
  if (x.cols != y.rows) throw SizeMismatchError("mat_mul: dimension mismatch");
  RatMat r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      if (x(i, k) == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += x(i, k) * y(k, j);
    }
  return r;
}

// exact Gauss-Jordan inverse; throws on a singular input
inline RatMat rat_inverse(const RatMat& m) {
  if (m.rows != m.cols) throw SizeMismatchError("rat_inverse: square matrix required");
  const std::size_t n = m.rows;
  RatMat w = m, inv = RatMat::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && w(piv, col) == 0) ++piv;
    if (piv == n) throw ComputeError("rat_inverse: singular matrix");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(w(piv, j), w(col, j));
      std::swap(inv(piv, j), inv(col, j));
    }
    const Rat p = w(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      w(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || w(i, col) == 0) continue;
      const Rat f = w(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        w(i, j) -= f * w(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

// Column-style Hermite normal form of the d x N matrix whose columns are the
// given vectors. Returns the lower-triangular d x d basis with positive
// pivots and off-diagonal row entries reduced into [0, pivot). Throws
// DegenerateDigitsError when the vectors do not span full rank.
inline Mat<BigInt> hnf_basis(const std::vector<std::vector<std::int64_t>>& vecs,
                             std::size_t dim) {
  const std::size_t n = vecs.size();
  Mat<BigInt> m(dim, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (vecs[j].size() != dim) throw SizeMismatchError("hnf_basis: vector dimension mismatch");
    for (std::size_t i = 0; i < dim; ++i) m(i, j) = BigInt(vecs[j][i]);
  }
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t i = 0; i < dim; ++i) std::swap(m(i, x), m(i, y));
  };
  auto axpy_col = [&](std::size_t dst, std::size_t src, const BigInt& q) {
    for (std::size_t i = 0; i < dim; ++i) m(i, dst) -= q * m(i, src);
  };
  for (std::size_t row = 0; row < dim; ++row) {
    // Euclidean elimination across columns >= row at this row
    while (true) {
      std::size_t best = n;
      for (std::size_t j = row; j < n; ++j) {
        if (m(row, j) == 0) continue;
        if (best == n || abs(m(row, j)) < abs(m(row, best))) best = j;
      }
      if (best == n) throw DegenerateDigitsError("hnf_basis: digits do not span full rank");
      swap_cols(row, best);
      bool clean = true;
      for (std::size_t j = row + 1; j < n; ++j) {
        if (m(row, j) == 0) continue;
        axpy_col(j, row, m(row, j) / m(row, row));
        if (m(row, j) != 0) clean = false;
      }
      if (clean) break;
    }
    if (m(row, row) < 0)
      for (std::size_t i = 0; i < dim; ++i) m(i, row) = -m(i, row);
  }
  // canonical reduction of earlier columns against each pivot
  for (std::size_t row = 0; row < dim; ++row) {
    for (std::size_t j = 0; j < row; ++j) {
      BigInt v = m(row, j) % m(row, row);
      if (v < 0) v += m(row, row);
      axpy_col(j, row, (m(row, j) - v) / m(row, row));
    }
  }
  Mat<BigInt> h(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) h(i, j) = m(i, j);
  return h;
}

// "p/q" or plain integer, optional leading minus; strict
inline Rat parse_rat(const std::string& s) {
  auto bad = [&] { throw ConfigError("parse_rat: malformed rational '" + s + "'"); };
  auto is_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!is_int(s)) bad();
    return Rat(BigInt(s));
  }
  const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!is_int(num) || !is_int(den)) bad();
  BigInt d(den);
  if (d <= 0) bad();  // sign lives on the numerator
  return Rat(BigInt(num), d);
}

// integers print bare, everything else as "p/q"
inline std::string format_rat(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

inline std::string format_point(const RatPoint& p) {
  std::string s;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) s += ' ';
    s += format_rat(p.c[i]);
  }
  return s;
}

}  // namespace fracspec
