#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fracspec/errors.hpp"
#include "fracspec/exact.hpp"
#include "fracspec/hadamard.hpp"
#include "fracspec/ifs.hpp"

namespace fracspec {

enum class Provenance { explicit_set, from_cycles, s_iterate, intersection, gamma_n };

inline const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::explicit_set: return "explicit";
    case Provenance::from_cycles: return "from-cycles";
    case Provenance::s_iterate: return "s-iterate";
    case Provenance::intersection: return "intersection";
    case Provenance::gamma_n: return "gamma-n";
  }
  return "explicit";
}

inline Provenance provenance_from_name(const std::string& s) {
  if (s == "explicit") return Provenance::explicit_set;
  if (s == "from-cycles") return Provenance::from_cycles;
  if (s == "s-iterate") return Provenance::s_iterate;
  if (s == "intersection") return Provenance::intersection;
  if (s == "gamma-n") return Provenance::gamma_n;
  throw ConfigError("unknown provenance '" + s + "'");
}

// Finite candidate frequency set: points sorted lexicographically, no
// duplicates. depth records how many construction rounds produced it.
struct SpectrumSet {
  std::size_t dim = 1;
  std::vector<RatPoint> points;
  Provenance provenance = Provenance::explicit_set;
  std::size_t depth = 0;
  std::string note;
};

inline SpectrumSet make_spectrum(std::size_t dim, std::vector<RatPoint> pts,
                                 Provenance prov = Provenance::explicit_set,
                                 std::size_t depth = 0, std::string note = {}) {
  for (const RatPoint& p : pts)
    if (p.dim() != dim) throw SizeMismatchError("spectrum: point dimension mismatch");
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  SpectrumSet s;
  s.dim = dim;
  s.points = std::move(pts);
  s.provenance = prov;
  s.depth = depth;
  s.note = std::move(note);
  return s;
}

// one expansion round: { R^T lambda + l }
inline SpectrumSet s_apply(const IntMat& R, const std::vector<std::vector<std::int64_t>>& L,
                           const SpectrumSet& in) {
  const RatMat rt = rat_mat(transpose(R));
  std::vector<RatPoint> pts;
  pts.reserve(in.points.size() * L.size());
  for (const RatPoint& lam : in.points) {
    const RatPoint y = matvec(rt, lam);
    for (const auto& l : L) {
      RatPoint q = y;
      for (std::size_t i = 0; i < q.dim(); ++i) q.c[i] += l[i];
      pts.push_back(std::move(q));
    }
  }
  return make_spectrum(in.dim, std::move(pts), Provenance::s_iterate, in.depth + 1, in.note);
}

// periodic orbit of the dual maps; extreme when |m_B| = 1 along the whole
// orbit (within mask_tol)
struct Cycle {
  std::vector<RatPoint> points;  // rotated so the lexicographic min comes first
  Word digits;                   // digits[i] maps points[i] to points[(i+1) % size]
  double min_mask = 0.0;
  bool extreme = false;
};

struct CycleSearchOptions {
  double mask_tol = 1e-12;
  std::size_t max_candidates = 100000;
  std::size_t max_cycles = 10000;
};

namespace detail {

// candidates = dual-lattice points inside the dual attractor box. In d=1 with
// R >= 2 the box is the exact attractor interval [min L, max L]/(R-1).
inline std::vector<RatPoint> cycle_candidates(const HadamardPair& p, const Lattice& lat,
                                              const CycleSearchOptions& opt) {
  const std::size_t d = p.system.dim;
  std::vector<Rat> lo(d), hi(d);
  if (d == 1 && p.system.R(0, 0) >= 2) {
    Rat mn = Rat(p.L[0][0]), mx = Rat(p.L[0][0]);
    for (const auto& l : p.L) {
      mn = std::min(mn, Rat(l[0]));
      mx = std::max(mx, Rat(l[0]));
    }
    const Rat den = Rat(p.system.R(0, 0)) - 1;
    lo[0] = mn / den;
    hi[0] = mx / den;
  } else {
    const Box box = attractor_box(dual_ifs(p));
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = Rat(box.lo[i]);  // exact conversion of the inflated double box
      hi[i] = Rat(box.hi[i]);
    }
  }
  // integer coordinate ranges: image of the box corners under basis_inv
  std::vector<BigInt> zlo(d), zhi(d);
  bool first = true;
  for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
    RatPoint c;
    c.c.resize(d);
    for (std::size_t i = 0; i < d; ++i) c.c[i] = (corner >> i) & 1 ? hi[i] : lo[i];
    const RatPoint z = matvec(lat.basis_inv, c);
    for (std::size_t i = 0; i < d; ++i) {
      const BigInt cl = rat_floor(z.c[i]);
      const BigInt cu = -rat_floor(-z.c[i]);  // ceil
      if (first || cl < zlo[i]) zlo[i] = cl;
      if (first || cu > zhi[i]) zhi[i] = cu;
    }
    first = false;
  }
  // enumerate the integer grid and keep lattice points inside the box
  std::vector<RatPoint> cands;
  std::vector<BigInt> z(d);
  for (std::size_t i = 0; i < d; ++i) z[i] = zlo[i];
  std::uint64_t visited = 0;
  while (true) {
    if (++visited > opt.max_candidates)
      throw SizeOverflowError("cycle search: candidate grid exceeds cap");
    RatPoint pt = rat_point_zero(d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < d; ++i) pt.c[i] += lat.basis(i, j) * Rat(z[j]);
    bool inside = true;
    for (std::size_t i = 0; i < d; ++i)
      inside = inside && lo[i] <= pt.c[i] && pt.c[i] <= hi[i];
    if (inside) cands.push_back(std::move(pt));
    std::size_t k = 0;
    while (k < d && z[k] == zhi[k]) {
      z[k] = zlo[k];
      ++k;
    }
    if (k == d) break;
    ++z[k];
  }
  std::sort(cands.begin(), cands.end());
  return cands;
}

}  // namespace detail

// All directed cycles of the dual maps over lattice candidates, each reported
// once (rotated to start at its lexicographic minimum), sorted by that start.
// Every cycle of the maps lies in the dual attractor, so box slack can only
// add candidates, never lose a cycle.
inline std::vector<Cycle> find_extreme_cycles(const HadamardPair& p,
                                              const CycleSearchOptions& opt = {}) {
  validate_pair(p);
  const Lattice lat = dual_lattice(p.system);
  const std::vector<RatPoint> cands = detail::cycle_candidates(p, lat, opt);
  std::map<RatPoint, std::size_t> index;
  for (std::size_t i = 0; i < cands.size(); ++i) index.emplace(cands[i], i);
  const RatMat ct = detail::rt_inverse_exact(p.system);
  // edges[i] = (digit index, target candidate index)
  std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> edges(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t li = 0; li < p.L.size(); ++li) {
      RatPoint y = cands[i];
      for (std::size_t k = 0; k < y.dim(); ++k) y.c[k] += p.L[li][k];
      y = matvec(ct, y);
      const auto it = index.find(y);
      if (it != index.end())
        edges[i].push_back({static_cast<std::uint32_t>(li), it->second});
    }
  }
  std::vector<Cycle> cycles;
  // DFS from each start over nodes with larger index only, so a cycle is
  // emitted exactly once, anchored at its minimal node
  std::vector<std::size_t> path;
  std::vector<std::uint32_t> path_digits;
  std::vector<char> on_path(cands.size(), 0);
  for (std::size_t start = 0; start < cands.size(); ++start) {
    struct Frame {
      std::size_t node;
      std::size_t next_edge;
    };
    std::vector<Frame> stack{{start, 0}};
    path.assign(1, start);
    path_digits.clear();
    std::fill(on_path.begin(), on_path.end(), 0);
    on_path[start] = 1;
    while (!stack.empty()) {
      Frame& fr = stack.back();
      if (fr.next_edge < edges[fr.node].size()) {
        const auto [dig, tgt] = edges[fr.node][fr.next_edge++];
        if (tgt == start) {
          Cycle c;
          for (std::size_t n : path) c.points.push_back(cands[n]);
          c.digits = path_digits;
          c.digits.push_back(dig);
          cycles.push_back(std::move(c));
          if (cycles.size() > opt.max_cycles)
            throw SizeOverflowError("cycle search: cycle count exceeds cap");
        } else if (tgt > start && !on_path[tgt]) {
          stack.push_back({tgt, 0});
          path.push_back(tgt);
          path_digits.push_back(dig);
          on_path[tgt] = 1;
        }
      } else {
        on_path[fr.node] = 0;
        stack.pop_back();
        if (!path.empty()) path.pop_back();
        if (!path_digits.empty()) path_digits.pop_back();
      }
    }
  }
  for (Cycle& c : cycles) {
    double mn = 2.0;
    for (const RatPoint& pt : c.points) mn = std::min(mn, std::abs(mask_m(p.system, pt)));
    c.min_mask = mn;
    c.extreme = mn >= 1.0 - opt.mask_tol;
  }
  std::sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
    if (a.points.size() != b.points.size()) return a.points.size() < b.points.size();
    return a.points < b.points;
  });
  return cycles;
}

// Iterated expansion seeded by the negated extreme cycle points:
// depth rounds of Lambda -> Lambda union S(Lambda).
inline SpectrumSet spectrum_from_cycles(const HadamardPair& p, const std::vector<Cycle>& cycles,
                                        std::size_t depth,
                                        std::uint64_t point_cap = std::uint64_t{1} << 20) {
  if (cycles.empty()) throw NoCyclesError("spectrum_from_cycles: no cycles supplied");
  std::set<RatPoint> cur;
  for (const Cycle& c : cycles) {
    if (!c.extreme) continue;
    for (const RatPoint& pt : c.points) {
      RatPoint q = pt;
      for (auto& v : q.c) v = -v;
      cur.insert(std::move(q));
    }
  }
  if (cur.empty()) throw NoCyclesError("spectrum_from_cycles: no extreme cycle among inputs");
  const RatMat rt = rat_mat(transpose(p.system.R));
  for (std::size_t round = 0; round < depth; ++round) {
    std::set<RatPoint> next = cur;
    for (const RatPoint& lam : cur) {
      const RatPoint y = matvec(rt, lam);
      for (const auto& l : p.L) {
        RatPoint q = y;
        for (std::size_t i = 0; i < q.dim(); ++i) q.c[i] += l[i];
        next.insert(std::move(q));
      }
    }
    if (next.size() > point_cap)
      throw SizeOverflowError("spectrum_from_cycles: point cap exceeded");
    cur = std::move(next);
  }
  SpectrumSet out;
  out.dim = p.system.dim;
  out.points.assign(cur.begin(), cur.end());
  out.provenance = Provenance::from_cycles;
  out.depth = depth;
  if (p.system.dim > 1)
    out.note = "candidate set: cycle construction is only proved complete in d=1";
  return out;
}

// Does an n-step digit chain peel x down into the lattice? At most one digit
// can work per step on a Hadamard pair; two working digits raise
// AmbiguousDigit since the chain is then ill-defined.
inline bool s_chain_membership(const RatPoint& x, const HadamardPair& p, const Lattice& lat,
                               std::size_t n) {
  if (x.dim() != p.system.dim) throw SizeMismatchError("membership: dimension mismatch");
  const RatMat ct = detail::rt_inverse_exact(p.system);
  RatPoint cur = x;
  if (n == 0) return lattice_contains(lat, cur);
  for (std::size_t step = 0; step < n; ++step) {
    bool found = false;
    RatPoint next;
    for (const auto& l : p.L) {
      RatPoint y = cur;
      for (std::size_t i = 0; i < y.dim(); ++i) y.c[i] -= l[i];
      y = matvec(ct, y);
      if (lattice_contains(lat, y)) {
        if (found)
          throw AmbiguousDigitError("membership: two digits admit a chain at step " +
                                    std::to_string(step));
        found = true;
        next = std::move(y);
      }
    }
    if (!found) return false;
    cur = std::move(next);
  }
  return true;
}

// keep frequencies with ||(R^T)^{-n} lambda||^2 <= r0^2, compared in exact
// rational arithmetic (inclusive boundary, r0 converted exactly from double)
inline SpectrumSet lambda_n_filter(const SpectrumSet& in, const IntMat& R, std::size_t n,
                                   double r0) {
  if (!(r0 >= 0.0)) throw ConfigError("lambda_n_filter: r0 must be nonnegative");
  const RatMat ct1 = rat_inverse(rat_mat(transpose(R)));
  RatMat ct = RatMat::identity(ct1.rows);
  for (std::size_t i = 0; i < n; ++i) ct = mat_mul(ct, ct1);
  const Rat bound = Rat(r0) * Rat(r0);
  SpectrumSet out = in;
  out.points.clear();
  for (const RatPoint& lam : in.points) {
    const RatPoint y = matvec(ct, lam);
    Rat nrm2 = 0;
    for (const Rat& v : y.c) nrm2 += v * v;
    if (nrm2 <= bound) out.points.push_back(lam);
  }
  return out;
}

// membership-filtered copy; provenance marks the finite intersection depth
inline SpectrumSet intersect_filter(const SpectrumSet& in, const HadamardPair& p,
                                    const Lattice& lat, std::size_t depth) {
  SpectrumSet out = in;
  out.points.clear();
  for (const RatPoint& pt : in.points)
    if (s_chain_membership(pt, p, lat, depth)) out.points.push_back(pt);
  out.provenance = Provenance::intersection;
  out.depth = depth;
  return out;
}

}  // namespace fracspec
