#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace fprisk {

/// The eleven screened diseases, in canonical (alphabetical) order.
enum class Disease : std::uint8_t {
  BreastCancer,
  CervicalCancer,
  Chlamydia,
  ColorectalCancer,
  Gonorrhea,
  HepatitisB,
  HepatitisC,
  Hiv,
  LungCancer,
  ProstateCancer,
  Syphilis,
};

inline constexpr std::size_t kDiseaseCount = 11;

inline constexpr std::array<Disease, kDiseaseCount> kAllDiseases = {
    Disease::BreastCancer, Disease::CervicalCancer,   Disease::Chlamydia,
    Disease::ColorectalCancer, Disease::Gonorrhea,    Disease::HepatitisB,
    Disease::HepatitisC,   Disease::Hiv,              Disease::LungCancer,
    Disease::ProstateCancer, Disease::Syphilis,
};

struct DiseaseInfo {
  Disease disease;
  std::string_view id;
  std::string_view display_name;
  std::string_view procedure;
};

const DiseaseInfo& info(Disease disease);
std::string_view to_string(Disease disease);
std::optional<Disease> parse_disease(std::string_view id);

}  // namespace fprisk
