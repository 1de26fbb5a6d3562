// fprisk: command-line front end for the lifetime false-positive risk engine.
//
//   fprisk rates    --studies data/studies.csv [--bootstrap B --seed S]
//   fprisk estimate --studies ... --schedule ... (--all | --profile LABEL | --sex ...)
//   fprisk oracle   --rate 0.049 --occasions 13 --lifetimes 10000000
//   fprisk serve    --studies ... --schedule ... --listen 127.0.0.1:8080
//
// Exit codes: 0 success, 2 parse error, 3 estimation error (or oracle
// disagreement), 4 usage error.

#include <cmath>
#include <csignal>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "fprisk/bootstrap.hpp"
#include "fprisk/error.hpp"
#include "fprisk/estimator.hpp"
#include "fprisk/ingest.hpp"
#include "fprisk/oracle_sim.hpp"
#include "fprisk/profile.hpp"
#include "fprisk/report.hpp"
#include "fprisk/service.hpp"

namespace {

using namespace fprisk;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitEstimation = 3;
constexpr int kExitUsage = 4;

struct GlobalOptions {
  std::string studies;
  std::string schedule;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> bootstrap;
  std::string format = "json";
  unsigned threads = 0;
};

struct EstimateOptions {
  bool all = false;
  std::vector<std::string> profiles;
  std::optional<std::string> sex;
  std::optional<bool> smoker;
  std::optional<int> pregnancies;
  bool msm = false;
  bool prostate = false;
  std::vector<std::string> compare;
};

struct OracleOptions {
  std::optional<double> rate;
  std::optional<std::int64_t> occasions;
  std::vector<std::string> components;
  std::uint64_t lifetimes = 1'000'000;
};

struct ServeOptions {
  std::string listen = "127.0.0.1:8080";
  std::string ui_origin = "*";
  std::uint64_t max_iterations = 10'000;
  std::uint64_t startup_iterations = 10'000;
};

[[noreturn]] void usage_error(const std::string& message) {
  throw Error(ErrorCode::InvalidArgument, message);
}

void emit(const ReportDocument& doc, const GlobalOptions& g) {
  std::cout << (g.format == "table" ? render_table(doc) : render_json(doc));
}

struct LoadedStudies {
  std::vector<StudyRecord> records;
  std::string hash;
};

LoadedStudies load_studies(const GlobalOptions& g) {
  if (g.studies.empty()) usage_error("--studies is required");
  const std::string bytes = read_file(g.studies);
  return {parse_study_csv(bytes), dataset_hash(bytes)};
}

ScheduleConfig load_schedule(const GlobalOptions& g) {
  if (g.schedule.empty()) usage_error("--schedule is required");
  return load_schedule_config(g.schedule);
}

BootstrapConfig bootstrap_config(const GlobalOptions& g) {
  BootstrapConfig bc;
  bc.iterations = *g.bootstrap;
  bc.seed = g.seed;
  bc.threads = g.threads;
  return bc;
}

int cmd_rates(const GlobalOptions& g) {
  const auto studies = load_studies(g);
  RateTable rates = pool_all(studies.records);

  ReportDocument doc;
  doc.metadata.dataset_hash = studies.hash;
  if (g.bootstrap) {
    const auto result = run_bootstrap(studies.records, ScheduleConfig{}, {}, bootstrap_config(g));
    attach_se(rates, result);
    doc.metadata.seed = g.seed;
    doc.metadata.iterations = *g.bootstrap;
  }
  for (const auto& [d, r] : rates) doc.disease_rates.push_back(r);
  emit(doc, g);
  return kExitOk;
}

std::vector<SubpopulationProfile> select_profiles(const EstimateOptions& o) {
  const bool explicit_flags = o.sex || o.smoker || o.pregnancies || o.msm || o.prostate;
  if (o.all && (explicit_flags || !o.profiles.empty())) {
    usage_error("--all cannot be combined with --profile or profile flags");
  }
  std::vector<SubpopulationProfile> out;
  if (o.all) {
    for (const auto& c : canonical_profiles()) out.push_back(c.profile);
    return out;
  }
  for (const auto& name : o.profiles) {
    auto p = find_canonical(name);
    if (!p) usage_error("unknown subpopulation label '" + name + "'");
    out.push_back(*p);
  }
  if (explicit_flags) {
    if (!o.sex) usage_error("--sex is required with profile flags");
    SubpopulationProfile p;
    auto sex = parse_sex(*o.sex);
    if (!sex) usage_error("--sex must be 'female' or 'male'");
    p.sex = *sex;
    p.smoker = o.smoker.value_or(false);
    p.pregnancies = o.pregnancies.value_or(0);
    p.msm = o.msm;
    p.prostate_screening = o.prostate;
    validate(p);
    out.push_back(p);
  }
  return out;
}

int cmd_estimate(const GlobalOptions& g, const EstimateOptions& o) {
  auto profiles = select_profiles(o);
  std::vector<SubpopulationProfile> compared;
  for (const auto& name : o.compare) {
    auto p = find_canonical(name);
    if (!p) usage_error("unknown subpopulation label '" + name + "' in --compare");
    compared.push_back(*p);
  }
  if (profiles.empty() && compared.empty()) {
    usage_error("select profiles with --all, --profile LABEL, --sex ... or --compare A B");
  }
  if (profiles.empty()) profiles = compared;

  const auto studies = load_studies(g);
  const auto schedule = load_schedule(g);
  RateTable rates = pool_all(studies.records);

  std::vector<SubpopulationProfile> evaluated = profiles;
  for (const auto& p : compared) {
    if (std::find(evaluated.begin(), evaluated.end(), p) == evaluated.end()) evaluated.push_back(p);
  }

  ReportDocument doc;
  doc.metadata.dataset_hash = studies.hash;
  doc.metadata.schedule_version = schedule.version_label;
  std::optional<BootstrapResult> boot;
  if (g.bootstrap) {
    boot = run_bootstrap(studies.records, schedule, evaluated, bootstrap_config(g));
    attach_se(rates, *boot);
    doc.metadata.seed = g.seed;
    doc.metadata.iterations = *g.bootstrap;
  }
  for (const auto& [d, r] : rates) doc.disease_rates.push_back(r);

  std::map<SubpopulationProfile, double> totals;
  for (const auto& p : evaluated) {
    RiskEstimate est = estimate_profile(p, rates, schedule);
    if (boot) attach_se(est, *boot);
    totals[p] = est.total;
    if (std::find(profiles.begin(), profiles.end(), p) != profiles.end()) {
      doc.profile_risks.push_back(std::move(est));
    }
  }
  for (std::size_t k = 0; k + 1 < compared.size(); k += 2) {
    doc.comparisons.push_back({o.compare[k], o.compare[k + 1],
                               odds_ratio(totals.at(compared[k]), totals.at(compared[k + 1]))});
  }
  emit(doc, g);
  return kExitOk;
}

double closed_form(const std::vector<SimComponent>& components) {
  std::vector<RiskComponent> rc;
  for (const auto& c : components) rc.push_back({c.rate, c.occasions});
  return lifetime_total_risk(rc);
}

int cmd_oracle(const GlobalOptions& g, const OracleOptions& o) {
  SimSpec spec;
  spec.lifetimes = o.lifetimes;
  spec.seed = g.seed;
  spec.threads = g.threads;
  if (o.rate || o.occasions) {
    if (!o.rate || !o.occasions) usage_error("--rate and --occasions go together");
    spec.components.push_back({*o.rate, *o.occasions});
  }
  for (const auto& text : o.components) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) usage_error("--component expects RATE:OCCASIONS");
    try {
      spec.components.push_back(
          {std::stod(text.substr(0, colon)), std::stoll(text.substr(colon + 1))});
    } catch (const std::exception&) {
      usage_error("--component expects RATE:OCCASIONS, got '" + text + "'");
    }
  }
  if (spec.components.empty()) usage_error("give --rate/--occasions or --component");

  const SimResult sim = simulate_lifetimes(spec);
  const double exact = closed_form(spec.components);
  // A degenerate sample (all or no hits) has zero empirical SE; fall back to
  // the SE implied by the closed form.
  const double se = sim.mc_se > 0.0
                        ? sim.mc_se
                        : std::sqrt(exact * (1.0 - exact) / static_cast<double>(sim.lifetimes));
  const double deviation = std::abs(sim.hit_fraction - exact);
  const bool pass = deviation <= 3.0 * se;

  if (g.format == "table") {
    std::printf("lifetimes      %llu\n", static_cast<unsigned long long>(sim.lifetimes));
    std::printf("hit_fraction   %.6f\n", sim.hit_fraction);
    std::printf("mc_se          %.6f\n", sim.mc_se);
    std::printf("closed_form    %.6f\n", exact);
    std::printf("deviation/se   %.3f\n", se > 0.0 ? deviation / se : 0.0);
    std::printf("verdict        %s\n", pass ? "PASS" : "FAIL");
  } else {
    nlohmann::ordered_json j;
    nlohmann::ordered_json comps = nlohmann::ordered_json::array();
    for (const auto& c : spec.components) comps.push_back({{"rate", c.rate}, {"occasions", c.occasions}});
    j["components"] = std::move(comps);
    j["lifetimes"] = sim.lifetimes;
    j["seed"] = g.seed;
    j["hits"] = sim.hits;
    j["hit_fraction"] = sim.hit_fraction;
    j["mc_se"] = sim.mc_se;
    j["closed_form"] = exact;
    j["verdict"] = pass ? "PASS" : "FAIL";
    std::cout << j.dump(2) << '\n';
  }
  return pass ? kExitOk : kExitEstimation;
}

httplib::Server* g_server = nullptr;

void stop_server(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const GlobalOptions& g, const ServeOptions& o) {
  const auto colon = o.listen.rfind(':');
  if (colon == std::string::npos) usage_error("--listen expects HOST:PORT");
  const std::string host = o.listen.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(o.listen.substr(colon + 1));
  } catch (const std::exception&) {
    usage_error("--listen expects HOST:PORT");
  }
  if (g.studies.empty() || g.schedule.empty()) usage_error("--studies and --schedule are required");

  ServiceConfig config;
  config.studies_path = g.studies;
  config.schedule_path = g.schedule;
  config.max_iterations = o.max_iterations;
  config.startup_iterations = o.startup_iterations;
  config.startup_seed = g.seed;
  config.threads = g.threads;
  config.ui_origin = o.ui_origin;
  RiskService service(config);

  httplib::Server server;
  mount(server, service);
  g_server = &server;
  std::signal(SIGINT, stop_server);
  std::signal(SIGTERM, stop_server);

  std::thread loader([&] {
    if (service.initialize()) {
      std::cerr << "fprisk: dataset loaded, serving estimates\n";
    } else {
      std::cerr << "fprisk: failed to load dataset: " << service.load_error() << '\n';
    }
  });
  std::cerr << "fprisk: listening on " << host << ':' << port << '\n';
  const bool ok = server.listen(host, port);
  loader.join();
  if (!ok) {
    std::cerr << "fprisk: cannot listen on " << o.listen << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Parse: return kExitParse;
    case ErrorCategory::Estimation: return kExitEstimation;
    case ErrorCategory::Usage: return kExitUsage;
  }
  return kExitEstimation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifetime false-positive screening risk"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--studies", g.studies, "Study CSV (study_id,disease_id,tp,fn,tn,fp,source)")
      ->envname("FPRISK_STUDIES");
  app.add_option("--schedule", g.schedule, "Schedule config (JSON)")->envname("FPRISK_SCHEDULE");
  app.add_option("--seed", g.seed, "Master RNG seed")->capture_default_str();
  app.add_option("--bootstrap", g.bootstrap, "Bootstrap iterations B (>= 2)")
      ->check(CLI::Range(std::uint64_t{2}, std::numeric_limits<std::uint64_t>::max()));
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();

  auto* rates = app.add_subcommand("rates", "Pooled per-disease false-positive rates");

  EstimateOptions eo;
  auto* estimate = app.add_subcommand("estimate", "Lifetime risk for subpopulation profiles");
  estimate->add_flag("--all", eo.all, "All 14 canonical subpopulations");
  estimate->add_option("--profile", eo.profiles, "Canonical subpopulation label (repeatable)");
  estimate->add_option("--sex", eo.sex, "female or male");
  estimate->add_flag("--smoker,!--no-smoker", eo.smoker, "20 pack-year smoker");
  estimate->add_option("--pregnancies", eo.pregnancies, "Expected pregnancies (female)");
  estimate->add_flag("--msm", eo.msm, "Man who has sex with men");
  estimate->add_flag("--prostate-screening", eo.prostate, "Elects routine prostate screening");
  estimate->add_option("--compare", eo.compare, "Odds ratio of LABEL_A vs LABEL_B")
      ->expected(2);

  OracleOptions oo;
  auto* oracle = app.add_subcommand("oracle", "Monte Carlo check of the closed-form risk");
  oracle->add_option("--rate", oo.rate, "Per-occasion false-positive probability");
  oracle->add_option("--occasions", oo.occasions, "Screening occasions");
  oracle->add_option("--component", oo.components, "RATE:OCCASIONS (repeatable)");
  oracle->add_option("--lifetimes", oo.lifetimes, "Simulated lifetimes")->capture_default_str();

  ServeOptions so;
  auto* serve = app.add_subcommand("serve", "Run the JSON API");
  serve->add_option("--listen", so.listen, "HOST:PORT")->envname("FPRISK_LISTEN")->capture_default_str();
  serve->add_option("--ui-origin", so.ui_origin, "Access-Control-Allow-Origin value")
      ->envname("FPRISK_UI_ORIGIN")
      ->capture_default_str();
  serve->add_option("--max-iterations", so.max_iterations, "Cap on request bootstrap B")
      ->envname("FPRISK_MAX_ITERATIONS")
      ->capture_default_str();
  serve->add_option("--startup-iterations", so.startup_iterations,
                    "Bootstrap B for the cached canonical estimates")
      ->check(CLI::Range(std::uint64_t{2}, std::numeric_limits<std::uint64_t>::max()))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kExitUsage;
  }

  try {
    if (rates->parsed()) return cmd_rates(g);
    if (estimate->parsed()) return cmd_estimate(g, eo);
    if (oracle->parsed()) return cmd_oracle(g, oo);
    if (serve->parsed()) return cmd_serve(g, so);
  } catch (const Error& e) {
    std::cerr << "fprisk: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "fprisk: " << e.what() << '\n';
    return kExitEstimation;
  }
  return kExitUsage;
}
