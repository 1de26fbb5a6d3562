#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "fprisk/bootstrap.hpp"
#include "fprisk/estimator.hpp"
#include "fprisk/ingest.hpp"

namespace httplib {
class Server;
}

namespace fprisk {

struct ServiceConfig {
  std::filesystem::path studies_path;
  std::filesystem::path schedule_path;
  std::uint64_t max_iterations = 10'000;
  /// Bootstrap run behind the startup cache of canonical estimates.
  std::uint64_t startup_iterations = 10'000;
  std::uint64_t startup_seed = 1;
  unsigned threads = 0;
  /// Value of Access-Control-Allow-Origin.
  std::string ui_origin = "*";
};

struct HttpReply {
  int status = 200;
  std::string body;
};

/// JSON API over the risk engine. All state is built once by initialize()
/// and is immutable afterwards; handle() is safe to call concurrently and
/// answers 503 until initialization has succeeded.
class RiskService {
 public:
  explicit RiskService(ServiceConfig config);
  ~RiskService();

  /// Loads the files named in the config. Returns false (and keeps serving
  /// 503) if loading or the startup bootstrap fails.
  bool initialize();
  bool initialize(std::vector<StudyRecord> studies, ScheduleConfig schedule,
                  std::string dataset_version);

  bool ready() const;
  std::string load_error() const;
  const ServiceConfig& config() const { return config_; }

  HttpReply handle(std::string_view method, std::string_view path, std::string_view body) const;

 private:
  struct Model;

  std::shared_ptr<const Model> model() const;
  HttpReply diseases(const Model& m) const;
  HttpReply subpopulations(const Model& m) const;
  HttpReply estimate(const Model& m, std::string_view body) const;

  ServiceConfig config_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Model> model_;
  std::string load_error_;
};

/// Registers the /api routes on an httplib server, with CORS headers.
void mount(httplib::Server& server, const RiskService& service);

}  // namespace fprisk
