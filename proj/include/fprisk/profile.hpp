#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace fprisk {

enum class Sex { Female, Male };

std::string_view to_string(Sex sex);
std::optional<Sex> parse_sex(std::string_view text);

/// Demographic and behavioral attributes that select a screening schedule.
///
/// Female profiles vary by smoking and expected pregnancies; male profiles by
/// smoking, MSM status and whether routine prostate screening is elected.
struct SubpopulationProfile {
  Sex sex = Sex::Female;
  bool smoker = false;
  int pregnancies = 0;
  bool msm = false;
  bool prostate_screening = false;

  auto operator<=>(const SubpopulationProfile&) const = default;
};

/// Throws Error(InvalidProfile) naming the offending field.
void validate(const SubpopulationProfile& profile);

/// Stable identifier, e.g. "baseline_female" or "msm_smokers_prostate".
/// Profiles with more than two pregnancies get a numeric suffix
/// ("female_smokers_3_pregnancies").
std::string label(const SubpopulationProfile& profile);

/// Human-readable row name, e.g. "Female smokers, one pregnancy".
std::string display_name(const SubpopulationProfile& profile);

/// Schedule-config key for the profile: the label of the same profile with
/// zero pregnancies. Pregnancy-driven screenings are handled as per-event
/// extras on each schedule entry.
std::string schedule_group(const SubpopulationProfile& profile);

/// True when the profile lies on the tabulated grid (pregnancies 0, 1 or 2).
bool within_published_grid(const SubpopulationProfile& profile);

struct CanonicalProfile {
  std::string_view label;
  SubpopulationProfile profile;
};

/// The 14 tabulated subpopulations: six female rows then eight male rows.
std::span<const CanonicalProfile> canonical_profiles();

std::optional<SubpopulationProfile> find_canonical(std::string_view label);

/// Schedule groups referenced by the canonical profiles (10 ids).
std::span<const std::string_view> schedule_groups();

}  // namespace fprisk
