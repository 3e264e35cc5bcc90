#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spectrode/psd.hpp"

using namespace spectrode;

TEST_CASE("identity PSD validates") {
  const auto psd = validate_psd({{1.0, 1.0}});
  CHECK(psd.atoms().size() == 1);
  CHECK(psd.atoms()[0].t == 1.0);
  CHECK(psd.atoms()[0].w == 1.0);
  CHECK(psd.uniforms().empty());
}

TEST_CASE("two-point PSD validates") {
  const auto psd = validate_psd({{8.0, 0.5}, {1.0, 0.5}});
  REQUIRE(psd.atoms().size() == 2);
  CHECK(psd.atoms()[0].t == 1.0);  // sorted ascending
  CHECK(psd.atoms()[1].t == 8.0);
}

TEST_CASE("boxcar plus ten atoms (arithmetic weights)") {
  std::vector<Atom> atoms;
  for (int i = 0; i < 10; ++i)
    atoms.push_back({2.0 + i, 0.0275 + 0.005 * i});
  const auto psd = validate_psd(atoms, {{0.5, 1.5, 0.5}});
  CHECK(psd.atoms().size() == 10);
  CHECK(psd.uniforms().size() == 1);
  double sum = 0.0;
  for (const auto& a : psd.atoms()) sum += a.w;
  for (const auto& u : psd.uniforms()) sum += u.w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(psd.mean() == doctest::Approx(4.1625).epsilon(1e-12));
}

TEST_CASE("validation errors") {
  CHECK_THROWS_WITH_AS(validate_psd({{-1.0, 1.0}}), doctest::Contains("positive"),
                       Error);
  CHECK_THROWS_AS(validate_psd({{1.0, 0.5}, {2.0, 0.4}}), Error);
  CHECK_THROWS_AS(validate_psd({{1.0, 0.5}, {1.0, 0.5}}), Error);
  CHECK_THROWS_AS(validate_psd({}, {{1.5, 0.5, 1.0}}), Error);
  CHECK_THROWS_AS(validate_psd({}, {}), Error);

  try {
    validate_psd({{1.0, 0.5}, {2.0, 0.6}});
    FAIL("expected WeightsDoNotSumToOne");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WeightsDoNotSumToOne);
  }
}

TEST_CASE("weights renormalized within 1e-9 slack only") {
  const auto psd = validate_psd({{1.0, 0.5 + 4e-10}, {2.0, 0.5}});
  double sum = 0.0;
  for (const auto& a : psd.atoms()) sum += a.w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("comb: J=6 arithmetic weights sum to one") {
  const auto psd = comb_psd(6, 0.01, 0.5, 1.9);
  REQUIRE(psd.atoms().size() == 6);
  CHECK(psd.atoms()[0].t == doctest::Approx(0.5));
  CHECK(psd.atoms()[5].t == doctest::Approx(10.0));
  // weights a + j*b with gap 0.01
  const double gap = psd.atoms()[1].w - psd.atoms()[0].w;
  CHECK(gap == doctest::Approx(0.01).epsilon(1e-9));
  double sum = 0.0;
  for (const auto& a : psd.atoms()) sum += a.w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("comb: J=1 and b=0 degenerate cases") {
  const auto one = comb_psd(1, 0.0, 3.0, 0.0);
  REQUIRE(one.atoms().size() == 1);
  CHECK(one.atoms()[0].w == doctest::Approx(1.0));

  const auto equal = comb_psd(3, 0.0, 1.0, 1.0);
  for (const auto& a : equal.atoms())
    CHECK(a.w == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("comb: invalid parameters") {
  CHECK_THROWS_AS(comb_psd(3, 0.0, -1.0, 1.0), Error);  // eigenvalue <= 0
  CHECK_THROWS_AS(comb_psd(4, -0.2, 1.0, 1.0), Error);  // weight <= 0
  try {
    comb_psd(2, 0.0, 0.0, 1.0);
    FAIL("expected InvalidComb");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidComb);
  }
}

TEST_CASE("property: accept/reject matches the invariant predicates") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n_atoms = 1 + static_cast<int>(unit(rng) * 4);
    std::vector<Atom> atoms;
    double sum = 0.0;
    bool expect_ok = true;
    for (int i = 0; i < n_atoms; ++i) {
      double t = unit(rng) * 10.0 - (trial % 17 == 0 ? 1.0 : 0.0);
      double w = unit(rng);
      atoms.push_back({t, w});
      sum += w;
      if (!(t > 0.0)) expect_ok = false;
    }
    for (auto& a : atoms) a.w /= sum;  // normalize
    if (trial % 5 == 0) {
      atoms[0].w += 0.01;  // break the sum
      expect_ok = false;
    }
    for (std::size_t i = 0; expect_ok && i < atoms.size(); ++i)
      for (std::size_t j = i + 1; j < atoms.size(); ++j)
        if (atoms[i].t == atoms[j].t) expect_ok = false;

    bool ok = true;
    try {
      const auto psd = validate_psd(atoms);
      // surviving PSDs satisfy the type invariants
      double total = 0.0;
      for (std::size_t i = 0; i < psd.atoms().size(); ++i) {
        CHECK(psd.atoms()[i].t > 0.0);
        if (i) CHECK(psd.atoms()[i].t > psd.atoms()[i - 1].t);
        total += psd.atoms()[i].w;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    } catch (const Error&) {
      ok = false;
    }
    CHECK(ok == expect_ok);
  }
}

TEST_CASE("comb output always passes validate_psd") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int J = 1 + static_cast<int>(unit(rng) * 9);
    const double b = unit(rng) * (1.8 / (J * std::max(1, J - 1)));
    const double c = 0.1 + unit(rng) * 5.0;
    const double d = unit(rng) * 2.0;
    try {
      const auto psd = comb_psd(J, b, c, d);
      std::vector<Atom> copy(psd.atoms().begin(), psd.atoms().end());
      CHECK_NOTHROW(validate_psd(copy));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidComb);
    }
  }
}

TEST_CASE("precision defaults") {
  const Precision p(1e-4);
  CHECK(p.eta == 1e-4);
  CHECK(p.delta == doctest::Approx(1e-8));
  CHECK(p.grid_size_per_interval == 100);
  CHECK(Precision(1e-1).grid_size_per_interval == 4);
  CHECK_THROWS_AS(Precision(0.0), Error);
  CHECK_THROWS_AS(Precision(1e-12), Error);  // documented floor
}

TEST_CASE("gamma validation") {
  CHECK_THROWS_AS(validate_gamma(1.0), Error);
  CHECK_THROWS_AS(validate_gamma(0.0), Error);
  CHECK_THROWS_AS(validate_gamma(-2.0), Error);
  CHECK_NOTHROW(validate_gamma(0.5));
  CHECK_NOTHROW(validate_gamma(4.0));
  try {
    validate_gamma(1.0);
    FAIL("expected GammaEqualsOne");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GammaEqualsOne);
  }
}
