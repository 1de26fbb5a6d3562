#include "fprisk/service.hpp"

#include <algorithm>
#include <map>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "fprisk/error.hpp"
#include "fprisk/profile.hpp"
#include "fprisk/report.hpp"

namespace fprisk {

using nlohmann::ordered_json;

struct RiskService::Model {
  std::vector<StudyRecord> studies;
  ScheduleConfig schedule;
  std::string dataset_version;
  RateTable rates;  // with startup SEs
  std::map<SubpopulationProfile, RiskEstimate> canonical;
};

namespace {

HttpReply json_reply(int status, const ordered_json& body) { return {status, body.dump()}; }

HttpReply error_reply(int status, std::string_view error, const std::string& message,
                      ordered_json fields = ordered_json::object()) {
  ordered_json j;
  j["error"] = error;
  j["message"] = message;
  j["fields"] = std::move(fields);
  return json_reply(status, j);
}

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

RiskService::RiskService(ServiceConfig config) : config_(std::move(config)) {}
RiskService::~RiskService() = default;

bool RiskService::initialize() {
  try {
    const std::string csv = read_file(config_.studies_path);
    auto studies = parse_study_csv(csv);
    auto schedule = load_schedule_config(config_.schedule_path);
    return initialize(std::move(studies), std::move(schedule), dataset_hash(csv));
  } catch (const std::exception& e) {
    std::lock_guard lock(mutex_);
    load_error_ = e.what();
    return false;
  }
}

bool RiskService::initialize(std::vector<StudyRecord> studies, ScheduleConfig schedule,
                             std::string dataset_version) {
  try {
    auto m = std::make_shared<Model>();
    m->studies = std::move(studies);
    m->schedule = std::move(schedule);
    m->dataset_version = std::move(dataset_version);
    m->rates = pool_all(m->studies);

    std::vector<SubpopulationProfile> profiles;
    for (const auto& c : canonical_profiles()) profiles.push_back(c.profile);
    BootstrapConfig bc;
    bc.iterations = config_.startup_iterations;
    bc.seed = config_.startup_seed;
    bc.threads = config_.threads;
    const auto boot = run_bootstrap(m->studies, m->schedule, profiles, bc);
    attach_se(m->rates, boot);
    for (const auto& p : profiles) {
      auto est = estimate_profile(p, m->rates, m->schedule);
      attach_se(est, boot);
      m->canonical.emplace(p, std::move(est));
    }

    std::lock_guard lock(mutex_);
    model_ = std::move(m);
    load_error_.clear();
    return true;
  } catch (const std::exception& e) {
    std::lock_guard lock(mutex_);
    load_error_ = e.what();
    return false;
  }
}

bool RiskService::ready() const { return model() != nullptr; }

std::string RiskService::load_error() const {
  std::lock_guard lock(mutex_);
  return load_error_;
}

std::shared_ptr<const RiskService::Model> RiskService::model() const {
  std::lock_guard lock(mutex_);
  return model_;
}

HttpReply RiskService::handle(std::string_view method, std::string_view path,
                              std::string_view body) const {
  const bool get = method == "GET";
  const bool post = method == "POST";
  if (path == "/api/health") {
    if (!get) return error_reply(405, "method_not_allowed", "use GET");
    ordered_json j{{"status", "ok"}, {"ready", ready()}};
    return json_reply(200, j);
  }
  if (path != "/api/diseases" && path != "/api/subpopulations" && path != "/api/estimate") {
    return error_reply(404, "not_found", "no such endpoint: " + std::string(path));
  }
  if ((path == "/api/estimate") != post || (!get && !post)) {
    return error_reply(405, "method_not_allowed",
                       path == "/api/estimate" ? "use POST" : "use GET");
  }

  const auto m = model();
  if (!m) {
    std::string why = load_error();
    return error_reply(503, "unavailable", why.empty() ? "dataset is still loading" : why);
  }
  if (path == "/api/diseases") return diseases(*m);
  if (path == "/api/subpopulations") return subpopulations(*m);
  return estimate(*m, body);
}

HttpReply RiskService::diseases(const Model& m) const {
  ordered_json list = ordered_json::array();
  for (const auto& [d, rate] : m.rates) list.push_back(to_json(rate));
  ordered_json j;
  j["metadata"] = {{"dataset_version", m.dataset_version},
                   {"schedule_version", m.schedule.version_label},
                   {"iterations", config_.startup_iterations},
                   {"seed", config_.startup_seed}};
  j["diseases"] = std::move(list);
  return json_reply(200, j);
}

HttpReply RiskService::subpopulations(const Model& m) const {
  ordered_json list = ordered_json::array();
  for (const auto& c : canonical_profiles()) list.push_back(to_json(m.canonical.at(c.profile)));
  ordered_json j;
  j["metadata"] = {{"dataset_version", m.dataset_version},
                   {"schedule_version", m.schedule.version_label},
                   {"iterations", config_.startup_iterations},
                   {"seed", config_.startup_seed}};
  j["subpopulations"] = std::move(list);
  return json_reply(200, j);
}

HttpReply RiskService::estimate(const Model& m, std::string_view body) const {
  nlohmann::json req;
  try {
    req = nlohmann::json::parse(body.begin(), body.end());
  } catch (const nlohmann::json::parse_error&) {
    return error_reply(400, "invalid_request", "body is not valid JSON");
  }
  if (!req.is_object()) return error_reply(400, "invalid_request", "body must be a JSON object");

  ordered_json fields = ordered_json::object();
  SubpopulationProfile profile;
  if (auto it = req.find("sex"); it == req.end()) {
    fields["sex"] = "required";
  } else if (!it->is_string() || !parse_sex(it->get<std::string>())) {
    fields["sex"] = "must be \"female\" or \"male\"";
  } else {
    profile.sex = *parse_sex(it->get<std::string>());
  }
  auto read_flag = [&](const char* key, bool& out) {
    if (auto it = req.find(key); it != req.end()) {
      if (it->is_boolean()) out = it->get<bool>();
      else fields[key] = "must be a boolean";
    }
  };
  read_flag("smoker", profile.smoker);
  read_flag("msm", profile.msm);
  read_flag("prostate_screening", profile.prostate_screening);
  if (auto it = req.find("pregnancies"); it != req.end()) {
    if (it->is_number_integer() && it->get<std::int64_t>() >= 0 &&
        it->get<std::int64_t>() <= 1000) {
      profile.pregnancies = it->get<int>();
    } else {
      fields["pregnancies"] = "must be a non-negative integer";
    }
  }
  if (fields.empty()) {
    try {
      validate(profile);
    } catch (const Error& e) {
      fields[e.key()] = e.what();
    }
  }

  bool bootstrap = false;
  std::uint64_t iterations = config_.startup_iterations;
  std::uint64_t seed = config_.startup_seed;
  if (auto it = req.find("bootstrap"); it != req.end() && !it->is_null()) {
    bootstrap = true;
    if (!it->is_object()) {
      fields["bootstrap"] = "must be an object";
    } else {
      if (auto b = it->find("iterations"); b != it->end()) {
        if (b->is_number_unsigned() && b->get<std::uint64_t>() >= 2) iterations = b->get<std::uint64_t>();
        else fields["bootstrap.iterations"] = "must be an integer >= 2";
      }
      if (auto s = it->find("seed"); s != it->end()) {
        if (s->is_number_unsigned()) seed = s->get<std::uint64_t>();
        else fields["bootstrap.seed"] = "must be an unsigned 64-bit integer";
      }
    }
  }
  if (!fields.empty()) return error_reply(400, "invalid_request", "invalid estimate request", fields);
  if (bootstrap && iterations > config_.max_iterations) {
    return error_reply(422, "iterations_above_cap",
                       "bootstrap.iterations exceeds the cap of " +
                           std::to_string(config_.max_iterations),
                       ordered_json{{"bootstrap.iterations", "at most " + std::to_string(config_.max_iterations)}});
  }

  RiskEstimate est;
  try {
    auto cached = m.canonical.find(profile);
    const bool startup_params =
        iterations == config_.startup_iterations && seed == config_.startup_seed;
    if (cached != m.canonical.end() && (!bootstrap || startup_params)) {
      est = cached->second;
    } else {
      est = estimate_profile(profile, m.rates, m.schedule);
      if (bootstrap) {
        BootstrapConfig bc;
        bc.iterations = iterations;
        bc.seed = seed;
        bc.threads = config_.threads;
        const SubpopulationProfile one[] = {profile};
        attach_se(est, run_bootstrap(m.studies, m.schedule, one, bc));
      }
    }
  } catch (const Error& e) {
    return error_reply(e.category() == ErrorCategory::Usage ? 400 : 500, "estimation_failed",
                       e.what());
  }
  if (!bootstrap) {
    est.total_se.reset();
    for (auto& r : est.per_disease) r.se.reset();
  }

  std::vector<DiseaseRisk> sorted = est.per_disease;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const DiseaseRisk& a, const DiseaseRisk& b) { return a.risk > b.risk; });

  ordered_json per = ordered_json::array();
  for (const auto& r : sorted) {
    per.push_back({{"disease_id", to_string(r.disease)},
                   {"display_name", info(r.disease).display_name},
                   {"occasions", r.occasions},
                   {"estimate", r.risk},
                   {"se", optional_number(r.se)}});
  }
  ordered_json j;
  j["subpopulation"] = label(profile);
  j["display_name"] = display_name(profile);
  j["profile"] = {{"sex", to_string(profile.sex)},
                  {"smoker", profile.smoker},
                  {"pregnancies", profile.pregnancies},
                  {"msm", profile.msm},
                  {"prostate_screening", profile.prostate_screening}};
  j["extrapolated"] = !within_published_grid(profile);
  j["total"] = {{"estimate", est.total}, {"se", optional_number(est.total_se)}};
  j["per_disease"] = std::move(per);
  j["metadata"] = {{"dataset_version", m.dataset_version},
                   {"schedule_version", m.schedule.version_label},
                   {"iterations", bootstrap ? ordered_json(iterations) : ordered_json(nullptr)},
                   {"seed", bootstrap ? ordered_json(seed) : ordered_json(nullptr)}};
  return json_reply(200, j);
}

void mount(httplib::Server& server, const RiskService& service) {
  const std::string origin = service.config().ui_origin;
  auto forward = [&service, origin](const httplib::Request& req, httplib::Response& res) {
    const HttpReply reply = service.handle(req.method, req.path, req.body);
    res.status = reply.status;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_content(reply.body, "application/json");
  };
  server.Get(R"(/api/.*)", forward);
  server.Post(R"(/api/.*)", forward);
  server.Options(R"(/api/.*)", [origin](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
}

}  // namespace fprisk
