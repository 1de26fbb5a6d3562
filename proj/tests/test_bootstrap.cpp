#include <gtest/gtest.h>

#include <cmath>

#include "fprisk/bootstrap.hpp"
#include "fprisk/error.hpp"

using namespace fprisk;

namespace {

StudyRecord study(std::string id, Disease d, std::int64_t fp, std::int64_t tn,
                  std::int64_t pos = 0) {
  return StudyRecord{std::move(id), d, pos, 0, tn, fp, ""};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::InvalidArgument;
}

ScheduleConfig single_disease_schedule(Disease d, std::int64_t occasions) {
  ScheduleConfig cfg;
  cfg.version_label = "unit";
  cfg.subpopulations = {"baseline_female"};
  cfg.diseases = {d};
  cfg.entries.push_back({"baseline_female", d, DirectCount{occasions}, 0});
  return cfg;
}

struct Moments {
  double mean = 0;
  double var = 0;
};

template <typename F>
Moments moments(int draws, F&& draw) {
  double sum = 0, sq = 0;
  for (int k = 0; k < draws; ++k) {
    const double x = static_cast<double>(draw(k));
    sum += x;
    sq += x * x;
  }
  Moments m;
  m.mean = sum / draws;
  m.var = (sq - draws * m.mean * m.mean) / (draws - 1);
  return m;
}

}  // namespace

TEST(SampleMultinomial, DegenerateCases) {
  CounterRng rng(1, 0, 0);
  EXPECT_EQ(sample_multinomial(0, {0.2, 0.3, 0.5}, rng), (CellCounts{0, 0, 0}));
  EXPECT_EQ(sample_multinomial(50, {1.0, 0.0, 0.0}, rng), (CellCounts{50, 0, 0}));
  EXPECT_EQ(sample_multinomial(50, {0.0, 1.0, 0.0}, rng), (CellCounts{0, 50, 0}));
  EXPECT_EQ(sample_multinomial(50, {0.0, 0.0, 1.0}, rng), (CellCounts{0, 0, 50}));
}

TEST(SampleMultinomial, InvalidProbs) {
  CounterRng rng(1, 0, 0);
  EXPECT_EQ(code_of([&] { sample_multinomial(10, {0.2, 0.3, 0.4}, rng); }), ErrorCode::InvalidProbs);
  EXPECT_EQ(code_of([&] { sample_multinomial(10, {-0.1, 0.6, 0.5}, rng); }), ErrorCode::InvalidProbs);
  EXPECT_EQ(code_of([&] { sample_multinomial(10, {std::nan(""), 0.5, 0.5}, rng); }),
            ErrorCode::InvalidProbs);
  // Within the 1e-12 tolerance.
  EXPECT_NO_THROW(sample_multinomial(10, {0.1, 0.2, 0.7 + 1e-13}, rng));
}

// First cell of Multinomial(10^6; 0.05, 0.90, 0.05) is Binomial(10^6, 0.05):
// mean 50000, SD sqrt(10^6 * 0.05 * 0.95) = 217.94.
TEST(SampleMultinomial, LargeSampleFirstCellWithinFiveSd) {
  const double sd = std::sqrt(1e6 * 0.05 * 0.95);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CounterRng rng(seed, 42, 0);
    const auto c = sample_multinomial(1'000'000, {0.05, 0.90, 0.05}, rng);
    EXPECT_EQ(c.total(), 1'000'000);
    EXPECT_LE(std::abs(static_cast<double>(c.fp) - 50'000.0), 5 * sd);
  }
}

// Each marginal is Binomial(N, p_k): check mean and variance of all three.
TEST(SampleMultinomial, MarginalsAreBinomial) {
  const std::int64_t n = 120;
  const std::array<double, 3> p = {0.15, 0.6, 0.25};
  const int draws = 40000;
  std::vector<CellCounts> out(draws);
  for (int k = 0; k < draws; ++k) {
    CounterRng rng(9, static_cast<std::uint64_t>(k), 1);
    out[k] = sample_multinomial(n, p, rng);
    ASSERT_EQ(out[k].total(), n);
  }
  auto check = [&](auto member, double prob) {
    const auto m = moments(draws, [&](int k) { return out[k].*member; });
    const double mean = n * prob;
    const double var = n * prob * (1 - prob);
    EXPECT_NEAR(m.mean, mean, 5 * std::sqrt(var / draws));
    EXPECT_NEAR(m.var / var, 1.0, 0.05);
  };
  check(&CellCounts::fp, p[0]);
  check(&CellCounts::tn, p[1]);
  check(&CellCounts::pos, p[2]);
}

TEST(SampleBinomial, MomentsAcrossRegimes) {
  struct Case {
    std::int64_t n;
    double p;
  };
  // Small n*p exercises inversion, large n*p the rejection sampler.
  for (const auto& c : {Case{20, 0.1}, Case{1000, 0.004}, Case{5000, 0.3}, Case{100000, 0.95}}) {
    const int draws = 20000;
    const auto m = moments(draws, [&](int k) {
      CounterRng rng(3, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(c.n));
      return sample_binomial(c.n, c.p, rng);
    });
    const double var = c.n * c.p * (1 - c.p);
    EXPECT_NEAR(m.mean, c.n * c.p, 5 * std::sqrt(var / draws)) << c.n << "," << c.p;
    EXPECT_NEAR(m.var / var, 1.0, 0.06) << c.n << "," << c.p;
  }
}

TEST(Summarize, HandArithmetic) {
  const double two[] = {0.0, 1.0};
  EXPECT_DOUBLE_EQ(summarize(two).se, std::sqrt(0.5));
  EXPECT_DOUBLE_EQ(summarize(two).mean, 0.5);
  const double four[] = {1, 2, 3, 4};
  EXPECT_NEAR(summarize(four).se, 1.2910, 5e-5);
  EXPECT_DOUBLE_EQ(summarize(four).se, std::sqrt(5.0 / 3.0));
  const double flat[] = {0.3, 0.3, 0.3};
  EXPECT_EQ(summarize(flat).se, 0.0);
  const double one[] = {1.0};
  EXPECT_EQ(code_of([&] { summarize(one); }), ErrorCode::InsufficientReplicates);
}

TEST(ResampleStudy, ConservesTotalAndIsReproducible) {
  const auto s = study("x", Disease::Hiv, 17, 400, 33);
  for (std::uint64_t b = 0; b < 2000; ++b) {
    const auto c = resample_study(s, 77, b, 3);
    ASSERT_EQ(c.total(), s.total());
    ASSERT_GE(c.fp, 0);
    ASSERT_GE(c.tn, 0);
    ASSERT_GE(c.pos, 0);
    ASSERT_EQ(c, resample_study(s, 77, b, 3));
  }
}

// SE of a single binomial proportion: sqrt(0.05 * 0.95 / 1000) = 0.006892.
TEST(RunBootstrap, SingleStudyMatchesAnalyticSe) {
  const auto rows = load_study_csv(FPRISK_FIXTURE_DIR "/single_binomial.csv");
  BootstrapConfig bc;
  bc.iterations = 10'000;
  bc.seed = 2024;
  const auto result = run_bootstrap(rows, ScheduleConfig{}, {}, bc);
  const double analytic = std::sqrt(0.05 * 0.95 / 1000.0);
  const double se = result.per_disease.at(Disease::BreastCancer).se;
  EXPECT_LT(std::abs(se - analytic) / analytic, 0.10) << se;
}

TEST(RunBootstrap, DegenerateStudiesGiveZeroSe) {
  const StudyRecord rows[] = {study("a", Disease::Hiv, 0, 500), study("b", Disease::Hiv, 0, 20),
                              study("c", Disease::Syphilis, 0, 90)};
  auto cfg = single_disease_schedule(Disease::Hiv, 3);
  const SubpopulationProfile p[] = {SubpopulationProfile{}};
  BootstrapConfig bc;
  bc.iterations = 2;
  bc.seed = 99;
  const auto result = run_bootstrap(rows, cfg, p, bc);
  for (const auto& [d, s] : result.per_disease) EXPECT_EQ(s.se, 0.0);
  for (const auto& [k, s] : result.per_pair) EXPECT_EQ(s.se, 0.0);
  EXPECT_EQ(result.total.at(p[0]).se, 0.0);
}

TEST(RunBootstrap, BitIdenticalAcrossThreadCounts) {
  const auto rows = load_study_csv(FPRISK_DATA_DIR "/studies.csv");
  const auto cfg = load_schedule_config(FPRISK_DATA_DIR "/schedule.json");
  std::vector<SubpopulationProfile> profiles;
  for (const auto& c : canonical_profiles()) profiles.push_back(c.profile);
  BootstrapConfig bc;
  bc.iterations = 500;
  bc.seed = 31337;
  bc.keep_replicates = true;
  bc.threads = 1;
  const auto one = run_bootstrap(rows, cfg, profiles, bc);
  for (unsigned t : {2u, 8u}) {
    bc.threads = t;
    EXPECT_TRUE(run_bootstrap(rows, cfg, profiles, bc) == one) << t << " threads";
  }
  bc.seed = 31338;
  EXPECT_FALSE(run_bootstrap(rows, cfg, profiles, bc) == one);
}

// The replicate pipeline must be the estimator applied to resampled counts.
TEST(RunBootstrap, ReplicateMatchesEstimatorOnResampledStudies) {
  const auto rows = load_study_csv(FPRISK_DATA_DIR "/studies.csv");
  const auto cfg = load_schedule_config(FPRISK_DATA_DIR "/schedule.json");
  const SubpopulationProfile p[] = {SubpopulationProfile{},
                                    SubpopulationProfile{Sex::Male, true, 0, true, true}};
  BootstrapConfig bc;
  bc.iterations = 300;
  bc.seed = 8;
  bc.threads = 4;
  bc.keep_replicates = true;
  const auto result = run_bootstrap(rows, cfg, p, bc);
  for (std::uint64_t b : {0ull, 137ull, 299ull}) {
    const auto resampled = resample_iteration(rows, bc.seed, b);
    const auto rates = pool_all(resampled);
    for (const auto& profile : p) {
      EXPECT_EQ(estimate_profile(profile, rates, cfg).total,
                result.total_replicates.at(profile)[b]);
    }
  }
}

TEST(RunBootstrap, ReportsEveryPairAndNonNegativeSes) {
  const auto rows = load_study_csv(FPRISK_DATA_DIR "/studies.csv");
  const auto cfg = load_schedule_config(FPRISK_DATA_DIR "/schedule.json");
  const SubpopulationProfile p[] = {SubpopulationProfile{Sex::Female, true, 2, false, false}};
  BootstrapConfig bc;
  bc.iterations = 200;
  const auto result = run_bootstrap(rows, cfg, p, bc);
  const auto est = estimate_profile(p[0], pool_all(rows), cfg);
  for (const auto& r : est.per_disease) {
    ASSERT_TRUE(result.per_pair.contains({p[0], r.disease}));
    EXPECT_GE(result.per_pair.at({p[0], r.disease}).se, 0.0);
  }
  EXPECT_EQ(result.per_disease.size(), kDiseaseCount);
  EXPECT_GT(result.total.at(p[0]).se, 0.0);

  auto est_se = est;
  attach_se(est_se, result);
  EXPECT_EQ(est_se.total_se, result.total.at(p[0]).se);
}

TEST(RunBootstrap, Errors) {
  const StudyRecord rows[] = {study("a", Disease::Hiv, 3, 97)};
  const auto cfg = single_disease_schedule(Disease::Syphilis, 2);
  const SubpopulationProfile p[] = {SubpopulationProfile{}};
  BootstrapConfig bc;
  bc.iterations = 1;
  EXPECT_EQ(code_of([&] { run_bootstrap(rows, ScheduleConfig{}, {}, bc); }),
            ErrorCode::InsufficientReplicates);
  bc.iterations = 10;
  EXPECT_EQ(code_of([&] { run_bootstrap(rows, cfg, p, bc); }), ErrorCode::MissingRate);

  // One negative among many positives: some replicate loses every negative.
  const StudyRecord fragile[] = {study("f", Disease::Hiv, 0, 1, 10'000)};
  bc.iterations = 200;
  bc.threads = 3;
  EXPECT_EQ(code_of([&] { run_bootstrap(fragile, ScheduleConfig{}, {}, bc); }),
            ErrorCode::ZeroDenominatorInReplicate);
}
