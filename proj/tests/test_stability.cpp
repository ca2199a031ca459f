#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "scfem/stability.hpp"

using namespace scfem;

namespace {
constexpr double kPi = std::numbers::pi;
const double kHc = std::sqrt(11.0) * kPi / 4.0;
const double kL4 = 10.0 * kHc;
const double kRy4 = 2.0 / std::sqrt(11.0);
}  // namespace

TEST_CASE("classify_semi") {
  const StabilityVerdict u = classify_semi(-1.2, 0.5);
  CHECK(u.regime == Regime::Unstable);
  CHECK(u.condition == ConditionId::AssR_b);
  CHECK(*u.critical_t == doctest::Approx(std::sqrt(8.25)).epsilon(1e-14));
  CHECK(!u.inverse_norm_bound.has_value());

  const StabilityVerdict s = classify_semi(-1.2, 2.0);
  CHECK(s.regime == Regime::Stable);
  CHECK(s.condition == ConditionId::AssR_vv_b);
  CHECK(*s.min_factor == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(*s.inverse_norm_bound == doctest::Approx(10.0).epsilon(1e-13));

  const StabilityVerdict sa = classify_semi(-0.5, 1.0);
  CHECK(sa.regime == Regime::Stable);
  CHECK(sa.condition == ConditionId::AssR_vv_a);

  CHECK(classify_semi(-1.0, 3.0).regime == Regime::Boundary);
  CHECK(classify_semi(-0.5, 2.0).regime == Regime::Boundary);  // r|kappa| = 1
  CHECK_THROWS_AS(classify_semi(0.5, 1.0), ConfigError);
  CHECK_THROWS_AS(classify_semi(-0.5, 0.0), ConfigError);

  // Caller-provided |sigma_minus| scales the bound.
  const StabilityVerdict s2 = classify_semi(-1.2, 2.0, 2.0);
  CHECK(*s2.inverse_norm_bound == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("classify_full") {
  const StabilityVerdict u = classify_full(-1.2, 0.5, kRy4);
  CHECK(u.regime == Regime::Unstable);
  CHECK(u.condition == ConditionId::AssRy_b);
  CHECK(*u.critical_s == doctest::Approx(kPi / 2.0).epsilon(1e-13));
  CHECK(*u.critical_t == doctest::Approx(std::sqrt(8.25)).epsilon(1e-14));

  const StabilityVerdict s = classify_full(-1.2, 2.0, 2.0 * kRy4);
  CHECK(s.regime == Regime::Stable);
  CHECK(s.condition == ConditionId::AssRy_vv_b);
  CHECK(*s.min_factor == doctest::Approx(0.1).epsilon(1e-13));
  // The r_y-dependent fourth factor does not bind here but must be correct.
  const double sy = std::sqrt(1.0 + 16.0 / 11.0);
  const double sxy = std::sqrt(4.0 + 16.0 / 11.0);
  CHECK(std::abs((sy - 1.2 * sxy) / (sy + sxy)) ==
        doctest::Approx(0.31671842700025236).epsilon(1e-13));

  const StabilityVerdict sa = classify_full(-0.9, 1.0, 1.0);
  CHECK(sa.regime == Regime::Stable);
  CHECK(sa.condition == ConditionId::AssRy_vv_a);

  // Stable full discretization whose semi-discrete counterpart is unstable.
  const StabilityVerdict note = classify_full(-0.8, 1.5, 2.0);
  CHECK(note.regime == Regime::Stable);
  CHECK(note.semi_discrete_unstable);
  CHECK(!s.semi_discrete_unstable);
}

TEST_CASE("classify_full reduces to classify_semi as r_y -> 0") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> k_dist(-3.0, -0.05), r_dist(0.1, 4.0);
  int done = 0;
  while (done < 300) {
    const double kappa = k_dist(rng), r = r_dist(rng);
    const double ak = std::abs(kappa);
    if (std::abs(ak - 1.0) < 1e-3 || std::abs(r * ak - 1.0) < 1e-3) continue;
    ++done;
    const StabilityVerdict semi = classify_semi(kappa, r);
    const StabilityVerdict full = classify_full(kappa, r, 1e-6);
    CHECK(full.regime == semi.regime);
  }
}

TEST_CASE("mesh-swap duality flips the reference configuration") {
  const StabilityVerdict a = classify_full(-1.2, 0.5, kRy4);
  const StabilityVerdict b = classify_full(-1.2, 1.0 / 0.5, kRy4 / 0.5);
  CHECK(a.regime == Regime::Unstable);
  CHECK(b.regime == Regime::Stable);
}

TEST_CASE("classify_bounded") {
  const StabilityVerdict s = classify_bounded(-1.2, 2.0, 2.0 * kRy4, 0.05);
  CHECK(s.regime == Regime::Stable);
  CHECK(s.condition == ConditionId::AssRyL_vv_b);
  CHECK(s.small_h_caveat);
  CHECK(*s.epsilon_slack == 0.05);
  CHECK(*s.min_factor > 0.0);

  const StabilityVerdict u = classify_bounded(-1.2, 0.5, kRy4, 0.05);
  CHECK(u.regime == Regime::Unstable);
  CHECK(u.condition == ConditionId::AssRy_b);
  CHECK(!u.small_h_caveat);

  const StabilityVerdict b = classify_bounded(-0.99, 1.005, std::nullopt, 0.05);
  CHECK(b.regime == Regime::Boundary);
  CHECK(b.condition == ConditionId::None);

  const StabilityVerdict ssemi = classify_bounded(-0.5, 0.5, std::nullopt, 0.05);
  CHECK(ssemi.regime == Regime::Stable);
  CHECK(ssemi.condition == ConditionId::AssRL_vv_a);

  // Bounded-domain stability minimum at kappa=-1.2, r=2, eps=0.05:
  // min{1, 1.2, |1-1.26|/2.05, |1-1.14|/2.05, |1-2.52|/3.1, |1-2.28|/3.1}.
  const StabilityVerdict sb = classify_bounded(-1.2, 2.0, std::nullopt, 0.05);
  CHECK(sb.regime == Regime::Stable);
  CHECK(sb.condition == ConditionId::AssRL_vv_b);
  CHECK(*sb.min_factor == doctest::Approx(std::abs(1.0 - 1.14) / 2.05).epsilon(1e-12));

  CHECK_THROWS_AS(classify_bounded(-1.2, 2.0, std::nullopt, 0.0), ConfigError);
  CHECK_THROWS_AS(classify_bounded(-1.2, 2.0, std::nullopt, 1.0), ConfigError);
}

TEST_CASE("verdict shape over a random parameter sweep") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> k_dist(-3.0, -0.05), r_dist(0.1, 4.0),
      ry_dist(0.05, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double kappa = k_dist(rng), r = r_dist(rng), ry = ry_dist(rng);
    const StabilityVerdict v = classify_full(kappa, r, ry);
    CHECK(v.inverse_norm_bound.has_value() == (v.regime == Regime::Stable));
    CHECK(v.min_factor.has_value() == (v.regime == Regime::Stable));
    CHECK(v.critical_s.has_value() == (v.regime == Regime::Unstable));
    if (v.regime == Regime::Boundary) CHECK(v.condition == ConditionId::None);
    if (v.min_factor) CHECK(*v.min_factor > 0.0);
    const StabilityVerdict b = classify_bounded(kappa, r, ry, 0.05);
    CHECK(b.small_h_caveat == (b.regime == Regime::Stable));
    CHECK(b.inverse_norm_bound.has_value() == (b.regime == Regime::Stable));
  }
}

TEST_CASE("stable bound sanity along the kappa sweep") {
  // r = r_y = 1: for kappa in (-1, -1/3) the minimum is |1+kappa|/2, so the
  // bound shrinks as the contrast moves away from -1. (Beyond -1/3 the |kappa|
  // term takes over and the bound legitimately grows toward kappa = 0.)
  double prev_bound = 0.0;
  for (double kappa = -0.999; kappa < -0.34; kappa += 0.01) {
    const StabilityVerdict v = classify_full(kappa, 1.0, 1.0);
    REQUIRE(v.regime == Regime::Stable);
    CHECK(*v.inverse_norm_bound > 0.0);
    if (prev_bound > 0.0) CHECK(*v.inverse_norm_bound <= prev_bound * (1.0 + 1e-12));
    prev_bound = *v.inverse_norm_bound;
  }
}

TEST_CASE("critical meshes") {
  const std::vector<CriticalMesh> ms = critical_meshes(-1.2, 0.5, kRy4, 10);
  REQUIRE(ms.size() == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(ms[static_cast<size_t>(i)].m == i + 1);
    CHECK(ms[static_cast<size_t>(i)].h_minus == doctest::Approx(kHc / (i + 1)).epsilon(1e-13));
    // Reconstruction identity h_minus * r_y * m = s_crit.
    CHECK(ms[static_cast<size_t>(i)].h_minus * kRy4 * (i + 1) ==
          doctest::Approx(kPi / 2.0).epsilon(1e-14));
    if (i > 0) CHECK(ms[static_cast<size_t>(i)].h_minus < ms[static_cast<size_t>(i - 1)].h_minus);
  }

  const std::vector<CriticalMesh> semi = critical_meshes(-1.2, 0.5, std::nullopt, 3);
  CHECK(semi[1].h_minus == doctest::Approx(std::sqrt(8.25) / 2.0).epsilon(1e-14));

  CHECK_THROWS_AS(critical_meshes(-1.2, 2.0, 2.0 * kRy4, 3), NoCriticalMesh);
  CHECK_THROWS_AS(critical_meshes(-1.2, 2.0, std::nullopt, 3), NoCriticalMesh);
  CHECK_THROWS_AS(critical_meshes(-1.2, 0.5, kRy4, 0), ConfigError);
}

TEST_CASE("solve_ry_for_rational_s") {
  CHECK(solve_ry_for_rational_s(-1.2, 0.5, 1, 2) ==
        doctest::Approx(2.0 / std::sqrt(11.0)).epsilon(1e-14));
  const double ry3 = solve_ry_for_rational_s(-1.2, 0.5, 1, 3);
  CHECK(ry3 == doctest::Approx(0.38138503569823693).epsilon(1e-13));
  CHECK(s_crit(-1.2, 0.5, ry3) == doctest::Approx(kPi / 3.0).epsilon(1e-13));
  CHECK_THROWS_AS(solve_ry_for_rational_s(-1.2, 2.0, 1, 2), NoAdmissibleRatio);
  CHECK_THROWS_AS(solve_ry_for_rational_s(-1.2, 0.5, 2, 2), ConfigError);
  CHECK_THROWS_AS(solve_ry_for_rational_s(-1.2, 0.5, 0, 2), ConfigError);
}

TEST_CASE("solve_ry substitution check over random parameters") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> k_dist(-3.0, -0.05), r_dist(0.1, 4.0);
  std::uniform_int_distribution<int> k_den(2, 12);
  int done = 0;
  while (done < 200) {
    const double kappa = k_dist(rng), r = r_dist(rng);
    const int k = k_den(rng);
    std::uniform_int_distribution<int> l_num(1, k - 1);
    const int l = l_num(rng);
    try {
      const double ry = solve_ry_for_rational_s(kappa, r, l, k);
      CHECK(s_crit(kappa, r, ry) == doctest::Approx(kPi * l / k).epsilon(1e-12));
      ++done;
    } catch (const NoAdmissibleRatio&) {
      // stable-regime draw; irrelevant for this property
    }
  }
}

TEST_CASE("min_abs_diagonal") {
  const PhysicalConfig phys(-1.0, 1.2, kL4);

  const MinDiagonal crit = min_abs_diagonal(phys, MeshConfig::from_counts(kL4, 10, 20, 2));
  CHECK(crit.m_star == 1);
  CHECK(crit.value < 1e-8);

  // Near-critical h_minus = sqrt(11) pi / 6: bounded away from zero.
  const MinDiagonal near = min_abs_diagonal(phys, MeshConfig::from_counts(kL4, 15, 30, 3));
  CHECK(near.value >= 0.01);

  // Flipped mesh family: the stability floor 0.1|sigma_-| holds.
  const MinDiagonal flip = min_abs_diagonal(phys, MeshConfig::from_counts(kL4, 40, 20, 4));
  CHECK(flip.value >= 0.1 - 1e-9);
}
