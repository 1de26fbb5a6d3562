#include "fprisk/disease.hpp"

namespace fprisk {

namespace {

constexpr std::array<DiseaseInfo, kDiseaseCount> kRegistry = {{
    {Disease::BreastCancer, "breast_cancer", "Breast cancer", "Mammogram"},
    {Disease::CervicalCancer, "cervical_cancer", "Cervical cancer", "Pap test"},
    {Disease::Chlamydia, "chlamydia", "Chlamydia", "NAAT"},
    {Disease::ColorectalCancer, "colorectal_cancer", "Colorectal cancer", "Colonoscopy"},
    {Disease::Gonorrhea, "gonorrhea", "Gonorrhea", "NAAT"},
    {Disease::HepatitisB, "hepatitis_b", "Hepatitis B", "HBsAg test"},
    {Disease::HepatitisC, "hepatitis_c", "Hepatitis C", "Anti-HCV antibody test"},
    {Disease::Hiv, "hiv", "HIV", "Antigen/antibody test"},
    {Disease::LungCancer, "lung_cancer", "Lung cancer", "Low-dose CT scan"},
    {Disease::ProstateCancer, "prostate_cancer", "Prostate cancer", "PSA test"},
    {Disease::Syphilis, "syphilis", "Syphilis", "RPR test"},
}};

}  // namespace

const DiseaseInfo& info(Disease disease) {
  return kRegistry[static_cast<std::size_t>(disease)];
}

std::string_view to_string(Disease disease) { return info(disease).id; }

std::optional<Disease> parse_disease(std::string_view id) {
  for (const auto& entry : kRegistry) {
    if (entry.id == id) return entry.disease;
  }
  return std::nullopt;
}

}  // namespace fprisk
