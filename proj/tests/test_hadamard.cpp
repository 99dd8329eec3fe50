#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fracspec/config.hpp"
#include "fracspec/hadamard.hpp"
#include "support/oracles.hpp"

using namespace fracspec;

TEST_CASE("pair check accepts the unitary presets") {
  for (const char* name : {"quarter-cantor", "remark18"}) {
    const HadamardPair pair = pair_of(preset(name));
    const HadamardCheck chk = check_hadamard(pair);
    INFO(name);
    CHECK(chk.accepted);
    CHECK(chk.deviation < 1e-12);
    REQUIRE(chk.matrix.rows == pair.system.digits.size());
    // matrix columns are orthonormal: verify against a direct rebuild
    for (std::size_t i = 0; i < chk.matrix.rows; ++i)
      for (std::size_t j = 0; j < chk.matrix.cols; ++j)
        CHECK(std::abs(chk.matrix(i, j)) ==
              Catch::Approx(1.0 / std::sqrt(double(chk.matrix.rows))).margin(1e-14));
  }
}

TEST_CASE("pair check rejects a non-unitary pair") {
  const RunConfig cfg = preset("cantor3");
  const HadamardPair pair = pair_of(cfg);
  const HadamardCheck chk = check_hadamard(pair);
  CHECK_FALSE(chk.accepted);
  CHECK(chk.deviation == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("pair validation") {
  HadamardPair p = pair_of(preset("quarter-cantor"));
  HadamardPair wrong_count = p;
  wrong_count.L = {{0}};
  CHECK_THROWS_AS(validate_pair(wrong_count), SizeMismatchError);
  HadamardPair no_zero = p;
  no_zero.L = {{1}, {2}};
  CHECK_THROWS_AS(validate_pair(no_zero), MissingZeroDigitError);
  HadamardPair dup = p;
  dup.L = {{0}, {0}};
  CHECK_THROWS_AS(validate_pair(dup), DuplicateDigitError);
}

TEST_CASE("dual system transposes the expansion") {
  const HadamardPair p = pair_of(preset("remark18"));
  const Ifs d = dual_ifs(p);
  CHECK(d.R(0, 1) == 1);
  CHECK(d.R(1, 0) == 0);
  CHECK(d.digits == p.L);
}

TEST_CASE("dual lattice of the shear digits is Z x (1/3)Z") {
  const RunConfig cfg = preset("remark18");
  const Lattice lat = dual_lattice(cfg.system.digits, 2);
  CHECK(lat.basis(0, 0) == Rat(1));
  CHECK(lat.basis(1, 0) == Rat(0));
  CHECK(lat.basis(0, 1) == Rat(0));
  CHECK(lat.basis(1, 1) == Rat(1, 3));
  CHECK(lattice_contains(lat, RatPoint{{Rat(5), Rat(7, 3)}}));
  CHECK(lattice_contains(lat, RatPoint{{Rat(0), Rat(-2, 3)}}));
  CHECK_FALSE(lattice_contains(lat, RatPoint{{Rat(1, 2), Rat(0)}}));
  CHECK_FALSE(lattice_contains(lat, RatPoint{{Rat(0), Rat(1, 6)}}));
}

TEST_CASE("dual lattice in one dimension") {
  const Lattice lat = dual_lattice({{0}, {2}}, 1);
  CHECK(lat.basis(0, 0) == Rat(1, 2));
  CHECK(lattice_contains(lat, RatPoint{{Rat(-7, 2)}}));
  CHECK_FALSE(lattice_contains(lat, RatPoint{{Rat(1, 3)}}));
}

TEST_CASE("transfer identity holds exactly for Hadamard pairs") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const char* name : {"quarter-cantor", "remark18"}) {
    const HadamardPair pair = pair_of(preset(name));
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      std::vector<double> x(pair.system.dim);
      for (double& v : x) v = u(rng);
      worst = std::max(worst, std::abs(transfer_one(pair, x) - 1.0));
    }
    INFO(name);
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("transfer identity fails for a non-Hadamard pair") {
  const HadamardPair pair = pair_of(preset("cantor3"));
  HadamardPair broken = pair;
  broken.L = {{0}, {2}};
  CHECK(transfer_one(broken, std::vector<double>{0.0}) == Catch::Approx(1.25).margin(1e-12));
}

TEST_CASE("h partial sums stay below one for orthogonal families") {
  const RunConfig cfg = preset("quarter-cantor");
  const SpectrumSet lam = resolve_lambda(cfg);
  const MuHatEvaluator mu(cfg.system);
  CHECK(h_function(mu, lam.points, std::vector<double>{0.0}) ==
        Catch::Approx(1.0).margin(1e-12));
  const double h = h_function(mu, lam.points, std::vector<double>{0.3});
  CHECK(h <= 1.0 + 1e-9);
  CHECK(h == Catch::Approx(0.9998801099105253).margin(1e-10));
}

TEST_CASE("orthogonality deviation separates spectra from non-spectra") {
  const RunConfig cfg = preset("quarter-cantor");
  const HadamardPair pair = pair_of(cfg);
  const MuHatEvaluator mu(cfg.system);
  const SpectrumSet lam = spectrum_from_cycles(pair, find_extreme_cycles(pair), 5);
  CHECK(orthogonality_deviation(mu, lam.points) < 1e-8);
  // {0, 1/3} is not orthogonal for the quarter system
  std::vector<RatPoint> bad{RatPoint{{Rat(0)}}, RatPoint{{Rat(1, 3)}}};
  CHECK(orthogonality_deviation(mu, bad) > 1e-3);
  CHECK_THROWS_AS(orthogonality_deviation(mu, lam.points, 10), SizeOverflowError);
}
