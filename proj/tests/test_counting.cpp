#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oppenheim/counting.hpp"
#include "oracles.hpp"

using namespace oppenheim;

namespace {

Rational r(long a, long b = 1) { return make_rational(a, b); }

Radii radii(Real T, std::vector<std::optional<int>> t = {}) { return Radii{T, std::move(t)}; }

SInterval interval(Real lo, Real hi, std::vector<PAdicInterval> finite = {}) {
  return SInterval{RealInterval(lo, hi), std::move(finite)};
}

McOptions mc(std::uint64_t samples, std::uint64_t seed = 1) {
  McOptions o;
  o.samples = samples;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(Count, HandCheckedExamples) {
  const auto q = standard_form(3, SSet{});
  const auto omega = StarBody::unit(SSet{});
  EXPECT_EQ(count_N(q, omega, interval(-0.5L, 0.5L), radii(1)).count, 5u);
  EXPECT_EQ(count_N(q, omega, interval(0.5L, 1.5L), radii(1)).count, 2u);

  const SSet s({3});
  const auto q3 = standard_form(3, s);
  EXPECT_EQ(count_N(q3, StarBody::unit(s), interval(-0.5L, 0.5L, {PAdicInterval{3, r(0), 0}}), radii(1, {0})).count,
            5u);
}

TEST(Count, MatchesFullScan) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> T(1.0, 4.0);
  std::uniform_int_distribution<int> t(0, 1);
  std::uniform_int_distribution<int> center(0, 8);
  for (int i = 0; i < 10; ++i) {
    const SSet s = i % 2 ? SSet({3}) : SSet{};
    const auto q = random_generic_form(100 + i, 3, s, 12).form;
    oracle::ScanSpec spec{s, 3, static_cast<Real>(T(rng)), {}, i % 3 != 0};
    std::vector<PAdicInterval> finite;
    Radii R = radii(spec.T_inf);
    if (!s.primes().empty()) {
      spec.t.push_back(t(rng));
      R.t.emplace_back(static_cast<int>(spec.t[0]));
      finite.push_back(PAdicInterval{3, r(center(rng)), i % 4 == 1 ? 1 : 0});
    }
    const auto I = interval(-2, 2, finite);
    CountOptions opts;
    opts.include_origin = spec.include_origin;
    EXPECT_EQ(count_N(q, StarBody::unit(s), I, R, opts).count, oracle::count(q, I, spec)) << "instance " << i;
  }
}

TEST(Count, SieveDoesNotChangeCounts) {
  const SSet s({3});
  for (int i = 0; i < 6; ++i) {
    const auto q = random_generic_form(200 + i, 3, s, 12).form;
    const auto I = interval(-3, 3, {PAdicInterval{3, r(i % 3), 1 + i % 2}});
    CountOptions on, off;
    off.use_sieve = false;
    const auto a = count_N(q, StarBody::unit(s), I, radii(5, {1}), on);
    const auto b = count_N(q, StarBody::unit(s), I, radii(5, {1}), off);
    EXPECT_EQ(a.count, b.count);
    EXPECT_LE(a.sieve_admitted, b.sieve_admitted);
  }
}

TEST(Count, SerialEqualsParallel) {
  const SSet s({3});
  const auto q = random_generic_form(7, 3, s, 12).form;
  const auto I = interval(-0.5L, 0.5L, {PAdicInterval{3, r(0), 0}});
  CountOptions serial, parallel;
  serial.execution = Execution::Serial;
  serial.keep_vectors = parallel.keep_vectors = true;
  const auto a = count_N(q, StarBody::unit(s), I, radii(12, {1}), serial);
  const auto b = count_N(q, StarBody::unit(s), I, radii(12, {1}), parallel);
  EXPECT_EQ(a.count, b.count);
  EXPECT_EQ(a.vectors, b.vectors);
}

TEST(Count, ZeroFiniteBall) {
  const SSet s({3});
  const auto q = standard_form(3, s);
  const auto I = interval(-0.5L, 0.5L, {PAdicInterval{3, r(0), 0}});
  EXPECT_EQ(count_N(q, StarBody::unit(s), I, Radii{5, {std::nullopt}}).count, 1u);
  CountOptions no_origin;
  no_origin.include_origin = false;
  EXPECT_EQ(count_N(q, StarBody::unit(s), I, Radii{5, {std::nullopt}}, no_origin).count, 0u);
}

TEST(FiniteVolume, Examples) {
  const auto q = standard_form(3, SSet({3}));
  const auto& f = q.finite()[0];
  const auto a = finite_place_volume(f, 0, PAdicInterval{3, r(0), 1}, 0);
  EXPECT_EQ(a.value, r(1, 3));
  EXPECT_TRUE(a.certified);
  const auto b = finite_place_volume(f, 0, PAdicInterval{3, r(0), 0}, 0);
  EXPECT_EQ(b.value, r(1));
  const auto c = finite_place_volume(f, 0, PAdicInterval{3, r(1), 1}, 0);
  EXPECT_EQ(c.value, r(4, 9));
  EXPECT_TRUE(c.certified);
  EXPECT_EQ(finite_place_volume(f, 0, PAdicInterval{3, r(0), 1}, std::nullopt).value, 0);
}

TEST(FiniteVolume, MatchesResidueOracle) {
  // Unit ball: the volume is #{w mod 9 : q(w) = c mod 9} / 9^3.
  const auto q = standard_form(3, SSet({3}));
  const auto& f = q.finite()[0];
  for (long c = 0; c < 9; ++c) {
    const auto v = finite_place_volume(f, 0, PAdicInterval{3, r(c), 2}, 0);
    EXPECT_EQ(v.value, make_rational(oracle::residues_rank3(1, c, 9), 9 * 9 * 9)) << c;
    EXPECT_TRUE(v.certified);
  }
}

TEST(FiniteVolume, ScalesWithRadius) {
  // vol(||v|| <= p^t, q in p^b Z) = p^{3t} vol(||v|| <= 1, q in p^{b+2t} Z).
  const auto q = standard_form(3, SSet({5}));
  const auto& f = q.finite()[0];
  const auto big = finite_place_volume(f, 0, PAdicInterval{5, r(0), 1}, 1).value;
  const auto small = finite_place_volume(f, 0, PAdicInterval{5, r(0), 3}, 0).value;
  EXPECT_EQ(big, 125 * small);
}

TEST(FiniteVolume, ShellPlusInnerBallIsBall) {
  const auto q = random_generic_form(4, 3, SSet({3}), 12).form;
  const auto& f = q.finite()[0];
  const PAdicInterval I{3, r(2), 1};
  const auto body = finite_place_volume(f, 0, I, 1, Region::Body).value;
  const auto shell = finite_place_volume(f, 0, I, 1, Region::Shell).value;
  const auto inner = finite_place_volume(f, 0, I, 0, Region::Body).value;
  EXPECT_EQ(body, shell + inner);
}

TEST(Jf, Examples) {
  const auto box = SlabIndicator::box({std::numeric_limits<Real>::infinity(), 1, 1});
  EXPECT_NEAR(static_cast<double>(jf_real(3, 1, 1, box, 1, 0)), 2.0, 1e-6);
  EXPECT_NEAR(static_cast<double>(jf_real(3, 1, 1, box, 1, 4)), 0.0, 1e-12);
  EXPECT_EQ(jf_real(3, 1, 1, SlabIndicator::zero(), 2, 0.3L), 0.0L);
}

TEST(Jf, FibrationMatchesMonteCarlo) {
  const auto q = standard_form(3, SSet{});
  const RealInterval I(-0.5L, 0.5L);
  const auto mcv = real_place_volume(q.real(), RealRadius::constant(1), I, 3, Region::Body, mc(2'000'000));
  const Real jf = volume_via_jf(3, 1, 1, SlabIndicator::ball(3), I, 3, 48);
  EXPECT_NEAR(static_cast<double>(jf), static_cast<double>(mcv.value), 4 * static_cast<double>(mcv.std_error) + 1e-2);
}

TEST(RealVolume, WholeBall) {
  const auto q = standard_form(3, SSet{});
  const auto v = real_place_volume(q.real(), RealRadius::constant(1), RealInterval(-10, 10), 1, Region::Body,
                                   mc(1'000'000));
  const double expect = 4.0 / 3.0 * std::numbers::pi;
  EXPECT_NEAR(static_cast<double>(v.value), expect, 3 * static_cast<double>(v.std_error));
  EXPECT_GT(v.std_error, 0);
}

TEST(RealVolume, ScalingRatio) {
  const auto q = standard_form(3, SSet{});
  const RealInterval I(-0.5L, 0.5L);
  const auto a = real_place_volume(q.real(), RealRadius::constant(1), I, 10, Region::Body, mc(1'000'000, 1));
  const auto b = real_place_volume(q.real(), RealRadius::constant(1), I, 20, Region::Body, mc(1'000'000, 2));
  const Real ratio = b.value / a.value;
  const Real se = ratio * std::sqrt(std::pow(a.std_error / a.value, 2) + std::pow(b.std_error / b.value, 2));
  EXPECT_NEAR(static_cast<double>(ratio), 2.0, 3 * static_cast<double>(se));
}

TEST(RealVolume, SerialEqualsParallel) {
  const auto q = random_generic_form(3, 3, SSet{}, 12).form;
  McOptions s = mc(100'000), p = mc(100'000);
  s.execution = Execution::Serial;
  const auto a = real_place_volume(q.real(), RealRadius::constant(1), RealInterval(-1, 1), 4, Region::Shell, s);
  const auto b = real_place_volume(q.real(), RealRadius::constant(1), RealInterval(-1, 1), 4, Region::Shell, p);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(RealVolume, Rejections) {
  const auto q = standard_form(3, SSet{});
  EXPECT_THROW(RealInterval(0.5L, 0.5L), ConfigurationError);
  EXPECT_THROW(real_place_volume(q.real(), RealRadius::constant(1), RealInterval(0, 1), 1, Region::Body, mc(10)),
               ConfigurationError);
}

TEST(TotalVolume, FactorsOverPlaces) {
  const SSet s({3});
  const auto q = standard_form(3, s);
  const auto omega = StarBody::unit(s);
  const auto M = mc(200'000);
  const auto base = real_place_volume(q.real(), omega.inf, RealInterval(-0.5L, 0.5L), 5, Region::Body, M);
  const auto whole = total_volume(q, omega, interval(-0.5L, 0.5L, {PAdicInterval{3, r(0), 0}}), radii(5, {0}),
                                  Region::Body, M);
  EXPECT_EQ(whole.total, base.value);
  const auto third = total_volume(q, omega, interval(-0.5L, 0.5L, {PAdicInterval{3, r(0), 1}}), radii(5, {0}),
                                  Region::Body, M);
  EXPECT_EQ(third.finite[0].value, r(1, 3));
  EXPECT_NEAR(static_cast<double>(third.total), static_cast<double>(base.value / 3), 1e-12);

  const auto real_only = total_volume(standard_form(3, SSet{}), StarBody::unit(SSet{}), interval(-0.5L, 0.5L),
                                      radii(5), Region::Body, M);
  EXPECT_EQ(real_only.total, base.value);
}

TEST(Lambda, StableAcrossSchedule) {
  const auto q = standard_form(3, SSet{});
  const std::vector<Radii> schedule{radii(10), radii(20), radii(40)};
  const auto est = lambda_estimate(q, StarBody::unit(SSet{}), interval(-0.5L, 0.5L), schedule, Region::Body,
                                   mc(2'000'000));
  const auto [lo, hi] = std::minmax_element(est.per_T.begin(), est.per_T.end());
  EXPECT_LE((*hi - *lo) / est.lambda_hat, 0.05L);
}

TEST(Lambda, IndependentOfIntervalLength) {
  const auto q = standard_form(3, SSet{});
  const std::vector<Radii> schedule{radii(10), radii(20), radii(40)};
  const auto a = lambda_estimate(q, StarBody::unit(SSet{}), interval(-0.5L, 0.5L), schedule, Region::Body,
                                 mc(2'000'000));
  const auto b = lambda_estimate(q, StarBody::unit(SSet{}), interval(-1, 1), schedule, Region::Body, mc(2'000'000));
  EXPECT_NEAR(static_cast<double>(b.lambda_hat / a.lambda_hat), 1.0, 0.05);
}

TEST(Lambda, ScalesWithRadius) {
  const auto q = standard_form(3, SSet{});
  const auto I = interval(-0.5L, 0.5L);
  const std::vector<Radii> schedule{radii(10), radii(15), radii(20)};
  const StarBody unit = StarBody::unit(SSet{});
  const StarBody wide{RealRadius::constant(2), {}};
  const auto a = lambda_estimate(q, unit, I, schedule, Region::Body, mc(4'000'000));
  const auto b = lambda_estimate(q, wide, I, schedule, Region::Body, mc(4'000'000));
  // Tolerance from the standard errors of the two last-radius volumes.
  const auto va = real_place_volume(q.real(), unit.inf, I.real, 20, Region::Body, mc(4'000'000));
  const auto vb = real_place_volume(q.real(), wide.inf, I.real, 20, Region::Body, mc(4'000'000));
  const Real rel = std::hypot(va.std_error / va.value, vb.std_error / vb.value);
  EXPECT_NEAR(static_cast<double>(b.lambda_hat / a.lambda_hat), 2.0, static_cast<double>(2 * 3 * rel));
}

TEST(Lambda, ScheduleValidation) {
  EXPECT_THROW(validate_schedule({radii(10), radii(5)}, SSet{}), ConfigurationError);
  EXPECT_NO_THROW(validate_schedule({radii(10), radii(20)}, SSet{}));
}

TEST(Ratio, FlagsRationalForm) {
  const auto q = standard_form(3, SSet{});
  CountOptions opts;
  const auto report = ratio_experiment(q, StarBody::unit(SSet{}), interval(-0.5L, 0.5L), {radii(4), radii(8)},
                                       mc(20'000), opts);
  bool flagged = false;
  for (const auto& n : report.notes) flagged = flagged || n.find("rational") != std::string::npos;
  EXPECT_TRUE(flagged);
  EXPECT_EQ(report.rows.size(), 2u);
}

TEST(Ratio, ImpossibleFiniteInterval) {
  // q0 takes only values in Z_3 on Z_3^3, so 1/3 + 3^5 Z_3 is never hit.
  const SSet s({3});
  const auto q = standard_form(3, s);
  CountOptions opts;
  const auto report = ratio_experiment(q, StarBody::unit(s), interval(-0.5L, 0.5L, {PAdicInterval{3, r(1, 3), 5}}),
                                       {radii(4, {0}), radii(8, {0})}, mc(20'000), opts);
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.count.count, 0u);
    EXPECT_EQ(row.volume.total, 0);
  }
  const auto csv = report_csv(report, s, "abc");
  EXPECT_NE(csv.find("Tinf,t_3,absT,N,V,V_err,ratio,lambda_hat"), std::string::npos);
}
