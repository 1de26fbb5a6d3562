#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <string>

#include "fprisk/error.hpp"
#include "fprisk/ingest.hpp"

using namespace fprisk;

namespace {

const std::string kHeader = "study_id,disease_id,tp,fn,tn,fp,source\n";

ErrorCode code_of(const std::string& text) {
  try {
    parse_study_csv(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a parse error";
  return ErrorCode::InvalidArgument;
}

std::size_t line_of(const std::string& text) {
  try {
    parse_study_csv(text);
  } catch (const Error& e) {
    return e.line();
  }
  return 0;
}

ErrorCode config_code(const std::string& text) {
  try {
    parse_schedule_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a config error";
  return ErrorCode::InvalidArgument;
}

std::string config_with(const std::string& entries) {
  return R"({"version": "t", "subpopulations": ["baseline_female", "baseline_male"],
             "diseases": ["breast_cancer", "hiv"], "entries": [)" +
         entries + "]}";
}

}  // namespace

TEST(StudyCsv, ParsesSingleRowAndDerivesTotals) {
  auto rows = parse_study_csv(kHeader + "s1,breast_cancer,10,5,900,49,RefA\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].study_id, "s1");
  EXPECT_EQ(rows[0].disease, Disease::BreastCancer);
  EXPECT_EQ(rows[0].total(), 964);
  EXPECT_EQ(rows[0].negatives(), 949);
  EXPECT_EQ(rows[0].positives(), 15);
  EXPECT_EQ(rows[0].source, "RefA");
}

TEST(StudyCsv, PreservesRowOrderAndQuotedCommas) {
  auto rows = parse_study_csv(kHeader +
                              "z,hiv,1,0,10,1,\"Smith, J. \"\"HIV\"\" 2020\"\r\n"
                              "a,syphilis,0,0,5,0,plain\r\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].study_id, "z");
  EXPECT_EQ(rows[0].source, "Smith, J. \"HIV\" 2020");
  EXPECT_EQ(rows[1].study_id, "a");
}

TEST(StudyCsv, NegativeCountIsMalformedAtItsLine) {
  const std::string text = kHeader + "s1,hiv,1,0,10,1,ok\ns2,hiv,-1,0,10,1,bad\n";
  EXPECT_EQ(code_of(text), ErrorCode::MalformedRow);
  EXPECT_EQ(line_of(text), 3u);
}

TEST(StudyCsv, RejectsStructuralProblems) {
  EXPECT_EQ(code_of(kHeader + "s1,hiv,1,0,10\n"), ErrorCode::MalformedRow);
  EXPECT_EQ(code_of(kHeader + "s1,hiv,1,0,ten,1,x\n"), ErrorCode::MalformedRow);
  EXPECT_EQ(code_of(kHeader + "s1,hiv,1.5,0,10,1,x\n"), ErrorCode::MalformedRow);
  EXPECT_EQ(code_of(kHeader + "s1,hiv,0,0,0,0,x\n"), ErrorCode::MalformedRow);
  EXPECT_EQ(code_of(kHeader + "s1,hiv,1,0,10,1,\"unterminated\n"), ErrorCode::MalformedRow);
  EXPECT_EQ(code_of("id,disease,tp,fn,tn,fp,source\ns1,hiv,1,0,10,1,x\n"),
            ErrorCode::MalformedRow);
  EXPECT_EQ(code_of(kHeader + "s1,measles,1,0,10,1,x\n"), ErrorCode::UnknownDisease);
  EXPECT_EQ(code_of(kHeader), ErrorCode::EmptyDataset);
  EXPECT_EQ(code_of(""), ErrorCode::MalformedRow);
}

TEST(StudyCsv, DuplicateIdOnlyWithinADisease) {
  EXPECT_EQ(code_of(kHeader + "s1,hiv,1,0,10,1,x\ns1,hiv,2,0,10,1,y\n"),
            ErrorCode::DuplicateStudyId);
  EXPECT_NO_THROW(parse_study_csv(kHeader + "s1,hiv,1,0,10,1,x\ns1,syphilis,2,0,10,1,y\n"));
}

TEST(StudyCsv, AcceptsZeroNegativesStudy) {
  // Statistical validity is checked when pooling, not here.
  auto rows = parse_study_csv(kHeader + "s1,hiv,4,1,0,0,x\n");
  EXPECT_EQ(rows[0].negatives(), 0);
}

TEST(StudyCsv, LineNumbersCountEmbeddedNewlines) {
  const std::string text = kHeader + "s1,hiv,1,0,10,1,\"two\nlines\"\ns2,hiv,1,x,10,1,y\n";
  EXPECT_EQ(line_of(text), 4u);
}

// Property: write -> parse is the identity on randomly generated records, and
// the three cell proportions add up to one exactly (integer identity).
TEST(StudyCsv, RoundTripProperty) {
  std::mt19937_64 gen(7);
  const char* sources[] = {"plain", "with, comma", "with \"quotes\"", "multi\nline", ""};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<StudyRecord> records;
    const int n = 1 + static_cast<int>(gen() % 20);
    for (int k = 0; k < n; ++k) {
      StudyRecord r;
      r.study_id = "id" + std::to_string(k) + (k % 3 == 0 ? ",q" : "");
      r.disease = kAllDiseases[gen() % kDiseaseCount];
      r.tp = static_cast<std::int64_t>(gen() % 1000);
      r.fn = static_cast<std::int64_t>(gen() % 100);
      r.tn = static_cast<std::int64_t>(gen() % 100000);
      r.fp = static_cast<std::int64_t>(gen() % 5000) + 1;
      r.source = sources[gen() % 5];
      records.push_back(r);
    }
    const auto parsed = parse_study_csv(write_study_csv(records));
    ASSERT_EQ(parsed, records);
    for (const auto& r : parsed) {
      EXPECT_EQ(r.fp + r.tn + r.positives(), r.total());
    }
  }
}

TEST(StudyCsv, PublishedFixtureLoads) {
  auto rows = load_study_csv(FPRISK_DATA_DIR "/studies.csv");
  EXPECT_EQ(rows.size(), 116u);
}

TEST(StudyCsv, MissingFileIsIoError) {
  try {
    load_study_csv("/nonexistent/studies.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
    EXPECT_EQ(e.category(), ErrorCategory::Parse);
  }
}

TEST(ScheduleConfig, ParsesDerivedAndDirectEntries) {
  auto cfg = parse_schedule_config(config_with(R"(
      {"subpopulation": "baseline_female", "disease": "breast_cancer",
       "start_age": 50, "end_age": 74, "interval_years": 2},
      {"subpopulation": "baseline_male", "disease": "hiv", "occasions": 1,
       "per_pregnancy_occasions": 0})"));
  EXPECT_EQ(cfg.version_label, "t");
  ASSERT_EQ(cfg.entries.size(), 2u);
  const auto* breast = cfg.find("baseline_female", Disease::BreastCancer);
  ASSERT_NE(breast, nullptr);
  EXPECT_EQ(std::get<AgeRange>(breast->occasions), (AgeRange{50, 74, 2}));
  const auto* hiv = cfg.find("baseline_male", Disease::Hiv);
  ASSERT_NE(hiv, nullptr);
  EXPECT_EQ(std::get<DirectCount>(hiv->occasions).occasions, 1);
  EXPECT_EQ(cfg.find("baseline_male", Disease::BreastCancer), nullptr);
}

TEST(ScheduleConfig, Errors) {
  const std::string a = R"({"subpopulation": "baseline_male", "disease": "hiv", "occasions": 1})";
  EXPECT_EQ(config_code(config_with(a + "," + a)), ErrorCode::DuplicatePair);
  EXPECT_EQ(config_code(config_with(
                R"({"subpopulation": "baseline_male", "disease": "syphilis", "occasions": 1})")),
            ErrorCode::UnknownDisease);
  EXPECT_EQ(config_code(config_with(
                R"({"subpopulation": "female_smokers", "disease": "hiv", "occasions": 1})")),
            ErrorCode::UnknownSubpopulation);
  EXPECT_EQ(config_code(config_with(
                R"({"subpopulation": "baseline_male", "disease": "hiv",
                    "start_age": 60, "end_age": 50, "interval_years": 1})")),
            ErrorCode::InvalidDerivation);
  EXPECT_EQ(config_code(config_with(
                R"({"subpopulation": "baseline_male", "disease": "hiv",
                    "start_age": 50, "end_age": 60, "interval_years": 0})")),
            ErrorCode::InvalidDerivation);
  EXPECT_EQ(config_code(config_with(
                R"({"subpopulation": "baseline_male", "disease": "hiv", "occasions": -1})")),
            ErrorCode::MalformedConfig);
  EXPECT_EQ(config_code(config_with(
                R"({"subpopulation": "baseline_male", "disease": "hiv", "occasions": 1,
                    "start_age": 1, "end_age": 2, "interval_years": 1})")),
            ErrorCode::MalformedConfig);
  EXPECT_EQ(config_code(R"({"version": "t", "subpopulations": ["aliens"], "diseases": [],
                            "entries": []})"),
            ErrorCode::UnknownSubpopulation);
  EXPECT_EQ(config_code(R"({"version": "t", "subpopulations": [], "diseases": ["flu"],
                            "entries": []})"),
            ErrorCode::UnknownDisease);
  EXPECT_EQ(config_code("{not json"), ErrorCode::MalformedConfig);
  EXPECT_EQ(config_code(R"({"subpopulations": [], "diseases": [], "entries": []})"),
            ErrorCode::MalformedConfig);
}

TEST(ScheduleConfig, ErrorNamesTheOffendingKey) {
  try {
    parse_schedule_config(config_with(
        R"({"subpopulation": "baseline_male", "disease": "hiv", "occasions": 1},
           {"subpopulation": "baseline_male", "disease": "hiv",
            "start_age": 50, "end_age": 60, "interval_years": -2})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.key(), "entries[1].interval_years");
  }
}

TEST(ScheduleConfig, ShippedScheduleCoversEveryCanonicalGroup) {
  auto cfg = load_schedule_config(FPRISK_DATA_DIR "/schedule.json");
  EXPECT_EQ(cfg.subpopulations.size(), 10u);
  EXPECT_EQ(cfg.diseases.size(), kDiseaseCount);
}
