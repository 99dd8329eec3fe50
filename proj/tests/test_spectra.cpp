#include <catch2/catch_amalgamated.hpp>

#include "fracspec/config.hpp"
#include "fracspec/spectra.hpp"

using namespace fracspec;

namespace {

HadamardPair make_pair1(std::int64_t r, std::vector<std::vector<std::int64_t>> b,
                        std::vector<std::vector<std::int64_t>> l) {
  HadamardPair p;
  p.system.dim = 1;
  p.system.R = IntMat(1, 1);
  p.system.R(0, 0) = r;
  p.system.digits = std::move(b);
  p.L = std::move(l);
  return p;
}

std::vector<Rat> flat(const SpectrumSet& s) {
  std::vector<Rat> out;
  for (const RatPoint& p : s.points) out.push_back(p.c[0]);
  return out;
}

}  // namespace

TEST_CASE("spectrum sets sort and deduplicate") {
  std::vector<RatPoint> pts{RatPoint{{Rat(5)}}, RatPoint{{Rat(1)}}, RatPoint{{Rat(5)}}};
  const SpectrumSet s = make_spectrum(1, pts);
  REQUIRE(s.points.size() == 2);
  CHECK(s.points[0].c[0] == Rat(1));
  CHECK(s.points[1].c[0] == Rat(5));
  CHECK_THROWS_AS(make_spectrum(2, pts), SizeMismatchError);
}

TEST_CASE("one application of the dual map set") {
  const RunConfig cfg = preset("quarter-cantor");
  SpectrumSet s = make_spectrum(1, {RatPoint{{Rat(0)}}, RatPoint{{Rat(1)}}});
  const SpectrumSet t = s_apply(cfg.system.R, cfg.L, s);
  CHECK(flat(t) == std::vector<Rat>{Rat(0), Rat(1), Rat(4), Rat(5)});
  CHECK(t.depth == 1);
  CHECK(t.provenance == Provenance::s_iterate);
}

TEST_CASE("quarter system has the single extreme cycle at zero") {
  const HadamardPair pair = pair_of(preset("quarter-cantor"));
  const auto cycles = find_extreme_cycles(pair);
  std::size_t extreme = 0;
  for (const Cycle& c : cycles)
    if (c.extreme) {
      ++extreme;
      REQUIRE(c.points.size() == 1);
      CHECK(c.points[0].c[0] == Rat(0));
      CHECK(c.min_mask == Catch::Approx(1.0).margin(1e-12));
    }
  CHECK(extreme == 1);
}

TEST_CASE("dyadic systems expose two extreme fixed points") {
  // R=2, B={0,1}, L={0,1}: extreme cycles {0} and {1}
  const HadamardPair p2 = make_pair1(2, {{0}, {1}}, {{0}, {1}});
  const auto c2 = find_extreme_cycles(p2);
  std::vector<Rat> pts;
  for (const Cycle& c : c2)
    if (c.extreme) {
      REQUIRE(c.points.size() == 1);
      pts.push_back(c.points[0].c[0]);
    }
  CHECK(pts == std::vector<Rat>{Rat(0), Rat(1)});

  // R=4, B={0,2}, L={0,3}: the fixed point at 1 is extreme too
  const HadamardPair p4 = make_pair1(4, {{0}, {2}}, {{0}, {3}});
  std::vector<Rat> pts4;
  for (const Cycle& c : find_extreme_cycles(p4))
    if (c.extreme) pts4.push_back(c.points[0].c[0]);
  CHECK(pts4 == std::vector<Rat>{Rat(0), Rat(1)});
}

TEST_CASE("scale-3 candidate cycles include the half-integer fixed point") {
  const HadamardPair pair = pair_of(preset("cantor3"));
  std::vector<Rat> pts;
  for (const Cycle& c : find_extreme_cycles(pair))
    if (c.extreme) pts.push_back(c.points[0].c[0]);
  CHECK(pts == std::vector<Rat>{Rat(0), Rat(1, 2)});
}

TEST_CASE("shear system yields four extreme fixed points") {
  const HadamardPair pair = pair_of(preset("remark18"));
  const auto cycles = find_extreme_cycles(pair);
  std::vector<RatPoint> pts;
  for (const Cycle& c : cycles)
    if (c.extreme) {
      REQUIRE(c.points.size() == 1);
      pts.push_back(c.points[0]);
    }
  REQUIRE(pts.size() == 4);
  CHECK(pts[0] == RatPoint{{Rat(-1), Rat(1)}});
  CHECK(pts[1] == RatPoint{{Rat(0), Rat(0)}});
  CHECK(pts[2] == RatPoint{{Rat(0), Rat(1)}});
  CHECK(pts[3] == RatPoint{{Rat(1), Rat(0)}});
  // every extreme cycle point maps back into the set under its digit
  const Ifs dual = dual_ifs(pair);
  const RatMat rti = rat_inverse(rat_mat(dual.R));
  for (const Cycle& c : cycles) {
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      RatPoint x = c.points[i];
      for (std::size_t k = 0; k < 2; ++k) x.c[k] += dual.digits[c.digits[i]][k];
      CHECK(matvec(rti, x) == c.points[(i + 1) % c.points.size()]);
    }
  }
}

TEST_CASE("spectrum growth from cycles") {
  const HadamardPair pair = pair_of(preset("quarter-cantor"));
  const auto cycles = find_extreme_cycles(pair);
  const SpectrumSet s3 = spectrum_from_cycles(pair, cycles, 3);
  CHECK(flat(s3) ==
        std::vector<Rat>{Rat(0), Rat(1), Rat(4), Rat(5), Rat(16), Rat(17), Rat(20), Rat(21)});
  CHECK(s3.provenance == Provenance::from_cycles);
  CHECK(s3.depth == 3);
  CHECK(s3.note.empty());  // complete in one dimension

  const SpectrumSet s0 = spectrum_from_cycles(pair, cycles, 0);
  CHECK(flat(s0) == std::vector<Rat>{Rat(0)});

  CHECK_THROWS_AS(spectrum_from_cycles(pair, {}, 3), NoCyclesError);
  Cycle fake;
  fake.points = {RatPoint{{Rat(0)}}};
  fake.digits = {0};
  fake.extreme = false;
  CHECK_THROWS_AS(spectrum_from_cycles(pair, {fake}, 3), NoCyclesError);
  CHECK_THROWS_AS(spectrum_from_cycles(pair, cycles, 25, 100), SizeOverflowError);
}

TEST_CASE("candidate sets in higher dimension carry a caveat") {
  const HadamardPair pair = pair_of(preset("remark18"));
  const SpectrumSet s = spectrum_from_cycles(pair, find_extreme_cycles(pair), 2);
  CHECK_FALSE(s.note.empty());
}

TEST_CASE("chain membership accepts generated points") {
  const RunConfig cfg = preset("quarter-cantor");
  const HadamardPair pair = pair_of(cfg);
  const Lattice lat = dual_lattice(cfg.system.digits, 1);
  const SpectrumSet s = spectrum_from_cycles(pair, find_extreme_cycles(pair), 4);
  for (const RatPoint& p : s.points) CHECK(s_chain_membership(p, pair, lat, 6));
  // 1/3 is not in the lattice chain
  CHECK_FALSE(s_chain_membership(RatPoint{{Rat(1, 3)}}, pair, lat, 3));
}

TEST_CASE("shear counterexample point is rejected at depth one") {
  const RunConfig cfg = preset("remark18");
  const HadamardPair pair = pair_of(cfg);
  const Lattice lat = dual_lattice(cfg.system.digits, 2);
  const RatPoint x{{Rat(0), Rat(2, 3)}};
  CHECK(lattice_contains(lat, x));
  CHECK(s_chain_membership(x, pair, lat, 0));
  CHECK_FALSE(s_chain_membership(x, pair, lat, 1));
  // a genuine chain point passes at depth one: (7/3,5/3) = R^T (1,1/3) + (0,1)
  const RatPoint good{{Rat(7, 3), Rat(5, 3)}};
  CHECK(s_chain_membership(good, pair, lat, 1));
}

TEST_CASE("ambiguous digit peeling is reported") {
  // R=2 with L={0,2}: both digits shift x=2 into the lattice
  const HadamardPair p = make_pair1(2, {{0}, {1}}, {{0}, {2}});
  const Lattice lat = dual_lattice(p.system.digits, 1);
  CHECK_THROWS_AS(s_chain_membership(RatPoint{{Rat(2)}}, p, lat, 1), AmbiguousDigitError);
}

TEST_CASE("level filter keeps the exact closed ball") {
  const RunConfig cfg = preset("quarter-cantor");
  SpectrumSet s = make_spectrum(
      1, {RatPoint{{Rat(0)}}, RatPoint{{Rat(2)}}, RatPoint{{Rat(-2)}}, RatPoint{{Rat(3)}}});
  // level 1, radius 1/2: |lambda / 4| <= 1/2, boundary included
  const SpectrumSet f = lambda_n_filter(s, cfg.system.R, 1, 0.5);
  CHECK(flat(f) == std::vector<Rat>{Rat(-2), Rat(0), Rat(2)});
  const SpectrumSet f0 = lambda_n_filter(s, cfg.system.R, 0, 0.5);
  CHECK(flat(f0) == std::vector<Rat>{Rat(0)});
  CHECK_THROWS_AS(lambda_n_filter(s, cfg.system.R, 1, -1.0), ConfigError);
}

TEST_CASE("level filter in two dimensions uses the euclidean norm") {
  const RunConfig cfg = preset("remark18");
  SpectrumSet s = make_spectrum(2, {RatPoint{{Rat(2), Rat(0)}}, RatPoint{{Rat(2), Rat(2)}},
                                    RatPoint{{Rat(0), Rat(0)}}});
  // (R^T)^{-1} = [[1/2, -1/4], [0, 1/2]]: (2,0) lands on the boundary and is
  // kept, (2,2) lands at (1/2, 1) with norm sqrt(5)/2 and is dropped
  const SpectrumSet f = lambda_n_filter(s, cfg.system.R, 1, 1.0);
  REQUIRE(f.points.size() == 2);
  CHECK(f.points[0] == RatPoint{{Rat(0), Rat(0)}});
  CHECK(f.points[1] == RatPoint{{Rat(2), Rat(0)}});
}

TEST_CASE("intersection filter keeps chain members") {
  const RunConfig cfg = preset("quarter-cantor");
  const HadamardPair pair = pair_of(cfg);
  const Lattice lat = dual_lattice(cfg.system.digits, 1);
  SpectrumSet s = make_spectrum(1, {RatPoint{{Rat(0)}}, RatPoint{{Rat(1)}}, RatPoint{{Rat(1, 3)}},
                                    RatPoint{{Rat(7)}}});
  const SpectrumSet f = intersect_filter(s, pair, lat, 4);
  CHECK(flat(f) == std::vector<Rat>{Rat(0), Rat(1)});
  CHECK(f.provenance == Provenance::intersection);
}
