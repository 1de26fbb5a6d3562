#include "fprisk/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fprisk {

using nlohmann::ordered_json;

namespace {

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string estimate_cell(double value, const std::optional<double>& se) {
  std::string out = format_percent(value);
  if (se) out += " (" + format_se(*se) + ")";
  return out;
}

}  // namespace

std::string dataset_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_percent(double probability) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", probability * 100.0);
  return buf;
}

std::string format_se(double se) {
  if (se > 0.0 && se < 0.0005) return "<0.1%";
  return format_percent(se);
}

ordered_json to_json(const DiseaseRate& rate) {
  const auto& meta = info(rate.disease);
  ordered_json j;
  j["disease_id"] = meta.id;
  j["display_name"] = meta.display_name;
  j["procedure"] = meta.procedure;
  j["rate"] = rate.rate;
  j["se"] = optional_number(rate.se);
  j["pooled_fp"] = rate.pooled_fp;
  j["pooled_n"] = rate.pooled_n;
  return j;
}

ordered_json to_json(const RiskEstimate& estimate) {
  ordered_json j;
  j["subpopulation"] = label(estimate.profile);
  j["display_name"] = display_name(estimate.profile);
  j["estimate"] = estimate.total;
  j["se"] = optional_number(estimate.total_se);
  ordered_json diseases = ordered_json::array();
  for (const auto& r : estimate.per_disease) {
    ordered_json d;
    d["disease_id"] = to_string(r.disease);
    d["occasions"] = r.occasions;
    d["estimate"] = r.risk;
    d["se"] = optional_number(r.se);
    diseases.push_back(std::move(d));
  }
  j["per_disease"] = std::move(diseases);
  return j;
}

ordered_json to_json(const ReportDocument& report) {
  ordered_json j;
  ordered_json meta;
  meta["dataset_hash"] = report.metadata.dataset_hash;
  if (!report.metadata.schedule_version.empty()) {
    meta["schedule_version"] = report.metadata.schedule_version;
  }
  meta["seed"] = report.metadata.seed ? ordered_json(*report.metadata.seed) : ordered_json(nullptr);
  meta["iterations"] =
      report.metadata.iterations ? ordered_json(*report.metadata.iterations) : ordered_json(nullptr);
  j["metadata"] = std::move(meta);

  ordered_json rates = ordered_json::array();
  for (const auto& r : report.disease_rates) rates.push_back(to_json(r));
  j["disease_rates"] = std::move(rates);

  if (!report.profile_risks.empty()) {
    ordered_json risks = ordered_json::array();
    for (const auto& e : report.profile_risks) risks.push_back(to_json(e));
    j["profile_risks"] = std::move(risks);
  }
  if (!report.comparisons.empty()) {
    ordered_json cmp = ordered_json::array();
    for (const auto& c : report.comparisons) {
      cmp.push_back({{"first", c.first}, {"second", c.second}, {"odds_ratio", c.odds_ratio}});
    }
    j["comparisons"] = std::move(cmp);
  }
  return j;
}

std::string render_json(const ReportDocument& report) { return to_json(report).dump(2) + "\n"; }

std::string render_table(const ReportDocument& report) {
  std::ostringstream out;
  if (!report.disease_rates.empty()) {
    out << pad("Disease", 20) << pad("Screening procedure", 26) << "Estimate (SE)\n";
    for (const auto& r : report.disease_rates) {
      const auto& meta = info(r.disease);
      out << pad(std::string(meta.display_name), 20) << pad(std::string(meta.procedure), 26)
          << estimate_cell(r.rate, r.se) << '\n';
    }
  }
  if (!report.profile_risks.empty()) {
    if (!report.disease_rates.empty()) out << '\n';
    out << pad("Subpopulation", 40) << "Estimate (SE)\n";
    for (const auto& e : report.profile_risks) {
      out << pad(display_name(e.profile), 40) << estimate_cell(e.total, e.total_se) << '\n';
    }
    if (report.profile_risks.size() == 1) {
      const auto& e = report.profile_risks.front();
      out << '\n' << pad("Disease", 20) << pad("Occasions", 11) << "Estimate (SE)\n";
      for (const auto& r : e.per_disease) {
        out << pad(std::string(info(r.disease).display_name), 20)
            << pad(std::to_string(r.occasions), 11) << estimate_cell(r.risk, r.se) << '\n';
      }
    }
  }
  for (const auto& c : report.comparisons) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", c.odds_ratio);
    out << "\nOdds ratio " << c.first << " vs " << c.second << ": " << buf << '\n';
  }
  out << "\ndataset " << report.metadata.dataset_hash;
  if (!report.metadata.schedule_version.empty()) {
    out << ", schedule " << report.metadata.schedule_version;
  }
  if (report.metadata.iterations) {
    out << ", B=" << *report.metadata.iterations << ", seed " << report.metadata.seed.value_or(0);
  }
  out << '\n';
  return out.str();
}

}  // namespace fprisk
