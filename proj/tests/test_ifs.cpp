#include <catch2/catch_amalgamated.hpp>

#include "fracspec/ifs.hpp"
#include "support/oracles.hpp"

using namespace fracspec;

namespace {

Ifs scale3() {
  Ifs f;
  f.dim = 1;
  f.R = IntMat(1, 1);
  f.R(0, 0) = 3;
  f.digits = {{0}, {2}};
  return f;
}

Ifs scale4() {
  Ifs f;
  f.dim = 1;
  f.R = IntMat(1, 1);
  f.R(0, 0) = 4;
  f.digits = {{0}, {2}};
  return f;
}

Ifs shear2() {
  Ifs f;
  f.dim = 2;
  f.R = IntMat(2, 2);
  f.R(0, 0) = 2;
  f.R(0, 1) = 0;
  f.R(1, 0) = 1;
  f.R(1, 1) = 2;
  f.digits = {{0, 0}, {1, 0}, {0, 3}, {1, 3}};
  return f;
}

}  // namespace

TEST_CASE("validation rejects malformed systems") {
  Ifs f = scale3();
  CHECK_NOTHROW(validate(f));

  Ifs dup = f;
  dup.digits = {{0}, {0}};
  CHECK_THROWS_AS(validate(dup), DuplicateDigitError);

  Ifs nozero = f;
  nozero.digits = {{1}, {2}};
  CHECK_THROWS_AS(validate(nozero), MissingZeroDigitError);

  Ifs flat = f;
  flat.R(0, 0) = 1;
  CHECK_THROWS_AS(validate(flat), NotExpansiveError);
  flat.R(0, 0) = 0;
  CHECK_THROWS_AS(validate(flat), NotExpansiveError);
  flat.R(0, 0) = -3;  // expansive even though negative
  CHECK_NOTHROW(validate(flat));

  Ifs wrong = f;
  wrong.digits = {{0, 1}, {2, 0}};
  CHECK_THROWS_AS(validate(wrong), SizeMismatchError);

  Ifs empty = f;
  empty.digits = {{0}};
  CHECK_THROWS_AS(validate(empty), ConfigError);

  // rotation by 90 degrees is not expansive (unit eigenvalues)
  Ifs rot;
  rot.dim = 2;
  rot.R = IntMat(2, 2);
  rot.R(0, 1) = -1;
  rot.R(1, 0) = 1;
  rot.digits = {{0, 0}, {1, 0}};
  CHECK_THROWS_AS(validate(rot), NotExpansiveError);
}

TEST_CASE("word points follow the forward iteration") {
  const Ifs f = scale3();
  CHECK(word_point(f, Word{1, 1}).c[0] == Rat(8, 9));
  CHECK(word_point(f, Word{1, 0}).c[0] == Rat(2, 9));
  CHECK(word_point(f, Word{0, 1}).c[0] == Rat(2, 3));
  CHECK(word_point(f, Word{}).c[0] == Rat(0));
  CHECK_THROWS_AS(word_point(f, Word{2}), ConfigError);
}

TEST_CASE("atomic measure enumerates words lexicographically") {
  const Ifs f = scale3();
  const AtomicMeasure a = atomic_measure(f, 2);
  REQUIRE(a.support.size() == 4);
  CHECK(a.weight == Catch::Approx(0.25));
  CHECK(a.support[0].c[0] == Rat(0));
  CHECK(a.support[1].c[0] == Rat(2, 3));
  CHECK(a.support[2].c[0] == Rat(2, 9));
  CHECK(a.support[3].c[0] == Rat(8, 9));
  // index k reads as the word in base N, most significant digit first
  for (std::size_t k = 0; k < 4; ++k) {
    const Word w{static_cast<std::uint32_t>(k / 2), static_cast<std::uint32_t>(k % 2)};
    CHECK(a.support[k] == word_point(f, w));
  }
  CHECK(atomic_measure(f, 0).support.size() == 1);
  CHECK_THROWS_AS(atomic_measure(f, 30, 1024), SizeOverflowError);
}

TEST_CASE("mask values at rational points") {
  const Ifs f = scale4();
  CHECK(std::abs(mask_m(f, std::vector<double>{0.0}) - 1.0) < 1e-15);
  CHECK(std::abs(mask_m(f, std::vector<double>{0.25})) < 1e-15);
  RatPoint half{{Rat(1, 2)}};
  CHECK(std::abs(mask_m(f, half) - 1.0) < 1e-15);
  // huge rational argument: exact mod-1 reduction keeps full precision
  RatPoint big{{Rat(BigInt("4000000000000000000000001"), 4)}};
  CHECK(std::abs(mask_m(f, big)) < 1e-15);
}

TEST_CASE("transform matches a long double product oracle") {
  // tight truncation so the comparison probes rounding, not the tail cutoff
  const Ifs f3 = scale3();
  const MuHatEvaluator mu3(f3, 1e-15);
  for (double x : {1.0, 0.5, 0.37, -2.25, 11.0}) {
    const auto ref = oracles::mu_hat_reference(f3, {x});
    const Cplx got = mu3(std::vector<double>{x});
    CHECK(std::abs(got - Cplx(double(ref.real()), double(ref.imag()))) < 2e-14);
  }
  // frozen reference value for the scale-3 transform at 1
  CHECK(std::abs(mu3(std::vector<double>{1.0})) ==
        Catch::Approx(0.37143735670876563).margin(1e-13));

  const Ifs f2 = shear2();
  const MuHatEvaluator mu2(f2, 1e-15);
  for (auto [x, y] : {std::pair{0.3, -0.7}, std::pair{1.5, 2.0}}) {
    const auto ref = oracles::mu_hat_reference(f2, {x, y});
    const Cplx got = mu2(std::vector<double>{x, y});
    CHECK(std::abs(got - Cplx(double(ref.real()), double(ref.imag()))) < 2e-13);
  }
}

TEST_CASE("transform is exactly one at zero") {
  const MuHatEvaluator mu(scale4());
  CHECK(mu(std::vector<double>{0.0}) == Cplx(1.0));
  CHECK(mu(RatPoint{{Rat(0)}}) == Cplx(1.0));
}

TEST_CASE("transform accepts exact rational arguments") {
  const Ifs f = scale4();
  const MuHatEvaluator mu(f);
  // orthogonality: transform vanishes at nonzero differences of spectrum points
  for (std::int64_t k : {1, 4, 5, 16, 17, 20, 21}) {
    RatPoint p{{Rat(k)}};
    CHECK(std::abs(mu(p)) < 1e-13);
  }
  RatPoint large{{Rat(BigInt("1208925819614629174706177"))}};  // 2^80 + 1
  CHECK(std::isfinite(std::abs(mu(large))));
}

TEST_CASE("refinement identity holds") {
  // mu_hat(x) = m((R^T)^{-1} x) mu_hat((R^T)^{-1} x)
  const Ifs f = scale3();
  const MuHatEvaluator mu(f);
  for (double x : {0.9, -1.3, 3.141}) {
    const double y = x / 3.0;
    const Cplx lhs = mu(std::vector<double>{x});
    const Cplx rhs = mask_m(f, std::vector<double>{y}) * mu(std::vector<double>{y});
    CHECK(std::abs(lhs - rhs) < 1e-13);
  }
}

TEST_CASE("interval approximant transform matches the closed form") {
  const Ifs f = scale3();
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{4}}) {
    const NuHatEvaluator nu(f, n);
    for (double xi : {0.0, 1.0, -2.5, 7.25}) {
      const auto ref = oracles::nu3_hat_reference(n, static_cast<oracles::LD>(xi));
      const Cplx got = nu(std::vector<double>{xi});
      CHECK(std::abs(got - Cplx(double(ref.real()), double(ref.imag()))) < 1e-12);
    }
  }
  // nu_1 at 1: closed form 3 sqrt(3) / (4 pi)
  const NuHatEvaluator nu1(f, 1);
  CHECK(std::abs(nu1(std::vector<double>{1.0})) ==
        Catch::Approx(3.0 * std::sqrt(3.0) / (4.0 * std::numbers::pi)).margin(1e-14));
}

TEST_CASE("interval approximants converge to the transform") {
  const Ifs f = scale3();
  const MuHatEvaluator mu(f);
  double err10 = 0.0, err16 = 0.0;
  for (double x : {1.0, 0.5, -3.3}) {
    const Cplx exact = mu(std::vector<double>{x});
    err10 = std::max(err10, std::abs(NuHatEvaluator(f, 10)(std::vector<double>{x}) - exact));
    err16 = std::max(err16, std::abs(NuHatEvaluator(f, 16)(std::vector<double>{x}) - exact));
  }
  CHECK(err16 < err10);
  CHECK(err16 < 1e-6);
}

TEST_CASE("atomic transform equals the direct exponential sum") {
  const Ifs f3 = scale3();
  for (std::size_t n : {std::size_t{1}, std::size_t{4}}) {
    const AtomicHatEvaluator ah(f3, n);
    for (double x : {0.7, -4.2, 19.0}) {
      const auto ref = oracles::atomic_hat_reference(f3, n, {x});
      const Cplx got = ah(std::vector<double>{x});
      CHECK(std::abs(got - Cplx(double(ref.real()), double(ref.imag()))) < 1e-13);
    }
  }
  const Ifs f2 = shear2();
  const AtomicHatEvaluator ah2(f2, 3);
  const auto ref = oracles::atomic_hat_reference(f2, 3, {0.4, -1.1});
  const Cplx got = ah2(std::vector<double>{0.4, -1.1});
  CHECK(std::abs(got - Cplx(double(ref.real()), double(ref.imag()))) < 1e-13);
}

TEST_CASE("attractor box contains all level points") {
  for (const Ifs& f : {scale3(), scale4(), shear2()}) {
    const Box box = attractor_box(f);
    const AtomicMeasure a = atomic_measure(f, 4);
    for (const RatPoint& p : a.support)
      for (std::size_t i = 0; i < f.dim; ++i) {
        const double v = to_double(p.c[i]);
        CHECK(v >= box.lo[i]);
        CHECK(v <= box.hi[i]);
      }
  }
}

TEST_CASE("tail tolerance controls truncation") {
  const Ifs f = scale3();
  const MuHatEvaluator loose(f, 1e-6);
  const MuHatEvaluator tight(f, 1e-14);
  const Cplx a = loose(std::vector<double>{2.0});
  const Cplx b = tight(std::vector<double>{2.0});
  CHECK(std::abs(a - b) < 1e-5);
  CHECK_THROWS_AS(MuHatEvaluator(f, 1e-14, 3)(std::vector<double>{1.0}),
                  TruncationFailureError);
}
