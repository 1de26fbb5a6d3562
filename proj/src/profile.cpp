#include "fprisk/profile.hpp"

#include <array>

#include "fprisk/error.hpp"

namespace fprisk {

namespace {

constexpr SubpopulationProfile female(bool smoker, int pregnancies) {
  return {Sex::Female, smoker, pregnancies, false, false};
}

constexpr SubpopulationProfile male(bool smoker, bool msm, bool prostate) {
  return {Sex::Male, smoker, 0, msm, prostate};
}

constexpr std::array<CanonicalProfile, 14> kCanonical = {{
    {"baseline_female", female(false, 0)},
    {"female_one_pregnancy", female(false, 1)},
    {"female_two_pregnancies", female(false, 2)},
    {"female_smokers", female(true, 0)},
    {"female_smokers_one_pregnancy", female(true, 1)},
    {"female_smokers_two_pregnancies", female(true, 2)},
    {"baseline_male", male(false, false, false)},
    {"msm", male(false, true, false)},
    {"male_smokers", male(true, false, false)},
    {"msm_smokers", male(true, true, false)},
    {"male_prostate", male(false, false, true)},
    {"msm_prostate", male(false, true, true)},
    {"male_smokers_prostate", male(true, false, true)},
    {"msm_smokers_prostate", male(true, true, true)},
}};

constexpr std::array<std::string_view, 10> kScheduleGroups = {
    "baseline_female", "female_smokers",        "baseline_male",
    "msm",             "male_smokers",          "msm_smokers",
    "male_prostate",   "msm_prostate",          "male_smokers_prostate",
    "msm_smokers_prostate",
};

std::string pregnancy_word(int n) {
  switch (n) {
    case 1: return "one";
    case 2: return "two";
    default: return std::to_string(n);
  }
}

}  // namespace

std::string_view to_string(Sex sex) { return sex == Sex::Female ? "female" : "male"; }

std::optional<Sex> parse_sex(std::string_view text) {
  if (text == "female") return Sex::Female;
  if (text == "male") return Sex::Male;
  return std::nullopt;
}

void validate(const SubpopulationProfile& profile) {
  if (profile.pregnancies < 0) {
    throw Error(ErrorCode::InvalidProfile, "pregnancies must be non-negative", 0,
                "pregnancies");
  }
  if (profile.sex == Sex::Male) {
    if (profile.pregnancies != 0) {
      throw Error(ErrorCode::InvalidProfile,
                  "pregnancies must be 0 for male profiles", 0, "pregnancies");
    }
  } else {
    if (profile.msm) {
      throw Error(ErrorCode::InvalidProfile, "msm applies to male profiles only", 0,
                  "msm");
    }
    if (profile.prostate_screening) {
      throw Error(ErrorCode::InvalidProfile,
                  "prostate_screening applies to male profiles only", 0,
                  "prostate_screening");
    }
  }
}

std::string label(const SubpopulationProfile& p) {
  if (p.sex == Sex::Female) {
    std::string out = p.smoker ? "female_smokers" : (p.pregnancies == 0 ? "baseline_female" : "female");
    if (p.pregnancies == 1) out += "_one_pregnancy";
    if (p.pregnancies > 1) out += "_" + pregnancy_word(p.pregnancies) + "_pregnancies";
    return out;
  }
  if (!p.msm && !p.smoker && !p.prostate_screening) return "baseline_male";
  std::string out = p.msm ? "msm" : "male";
  if (p.smoker) out += "_smokers";
  if (p.prostate_screening) out += "_prostate";
  return out;
}

std::string display_name(const SubpopulationProfile& p) {
  if (p.sex == Sex::Female) {
    if (!p.smoker && p.pregnancies == 0) return "Baseline females";
    std::string out = p.smoker ? "Female smokers" : "Females";
    if (p.pregnancies == 1) out += ", one pregnancy";
    if (p.pregnancies > 1) out += ", " + pregnancy_word(p.pregnancies) + " pregnancies";
    return out;
  }
  if (!p.msm && !p.smoker && !p.prostate_screening) return "Baseline males";
  std::string out;
  if (p.msm) {
    out = p.smoker ? "MSM smokers" : (p.prostate_screening ? "MSM" : "Men who have sex with men (MSM)");
  } else {
    out = p.smoker ? "Male smokers" : "Males";
  }
  if (p.prostate_screening) out += ", routine prostate exams";
  return out;
}

std::string schedule_group(const SubpopulationProfile& profile) {
  SubpopulationProfile base = profile;
  base.pregnancies = 0;
  return label(base);
}

bool within_published_grid(const SubpopulationProfile& profile) {
  return profile.pregnancies >= 0 && profile.pregnancies <= 2;
}

std::span<const CanonicalProfile> canonical_profiles() { return kCanonical; }

std::optional<SubpopulationProfile> find_canonical(std::string_view name) {
  for (const auto& c : kCanonical) {
    if (c.label == name) return c.profile;
  }
  return std::nullopt;
}

std::span<const std::string_view> schedule_groups() { return kScheduleGroups; }

}  // namespace fprisk
