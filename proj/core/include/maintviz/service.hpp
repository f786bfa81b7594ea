#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "maintviz/analytics.hpp"
#include "maintviz/ingest.hpp"

namespace maintviz {

struct ServiceConfig {
  std::optional<std::filesystem::path> dataset_path;
  int port = 8080;
  double threshold = kDefaultBalanceThreshold;
  double anomaly_k = kDefaultAnomalyK;
  /// Built web UI assets, mounted at `/` when present.
  std::optional<std::filesystem::path> static_dir;

  /// Reads MAINTVIZ_DATASET, MAINTVIZ_PORT, MAINTVIZ_THRESHOLD,
  /// MAINTVIZ_ANOMALY_K and MAINTVIZ_STATIC_DIR. Throws InvalidArgument on
  /// an unparsable value.
  static ServiceConfig from_env();
};

enum class ApiErrorCode { UnknownProject, BadParameter, Internal };

std::string_view to_string(ApiErrorCode code);
int http_status(ApiErrorCode code);

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

using QueryParams = std::map<std::string, std::string, std::less<>>;

/// Read-only query surface over an immutable dataset snapshot. Every call
/// pins the current snapshot for its whole duration; reload swaps the
/// snapshot as a whole.
class Api {
 public:
  explicit Api(Dataset dataset, ServiceConfig config = {});

  ApiResponse projects() const;
  ApiResponse activity(const QueryParams& params) const;
  ApiResponse commits(const QueryParams& params) const;
  ApiResponse developers(const QueryParams& params) const;
  ApiResponse profile(const QueryParams& params) const;
  ApiResponse export_csv(const QueryParams& params) const;

  /// Re-reads config().dataset_path. On failure the old snapshot stays.
  ApiResponse reload();

  /// Dispatches `METHOD /api/...`; nullopt for an unknown route.
  std::optional<ApiResponse> handle(std::string_view method,
                                    std::string_view path,
                                    const QueryParams& params);

  std::shared_ptr<const Dataset> snapshot() const;
  void replace_snapshot(Dataset dataset);

  const ServiceConfig& config() const { return config_; }

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const Dataset> snapshot_;
  ServiceConfig config_;
};

/// HTTP front end for an Api.
class Server {
 public:
  explicit Server(Api& api);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds to an ephemeral port on `host` and returns it, or -1.
  int bind_any_port(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);

  /// Blocks serving requests until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace maintviz
