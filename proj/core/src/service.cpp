#include "maintviz/service.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "maintviz/error.hpp"

namespace maintviz {

namespace {

using nlohmann::json;

struct ApiFailure {
  ApiErrorCode code;
  std::string message;
};

[[noreturn]] void bad_parameter(const std::string& message) {
  throw ApiFailure{ApiErrorCode::BadParameter, message};
}

ApiResponse json_response(const json& value) {
  return {200, "application/json", value.dump()};
}

ApiResponse error_response(ApiErrorCode code, const std::string& message) {
  const json body = {{"code", to_string(code)}, {"message", message}};
  return {http_status(code), "application/json", body.dump()};
}

template <typename F>
ApiResponse guarded(F&& f) {
  try {
    return f();
  } catch (const ApiFailure& failure) {
    return error_response(failure.code, failure.message);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::UnknownProject:
        return error_response(ApiErrorCode::UnknownProject, e.what());
      case ErrorKind::InvalidArgument:
      case ErrorKind::InvalidThreshold:
        return error_response(ApiErrorCode::BadParameter, e.what());
      default:
        return error_response(ApiErrorCode::Internal, e.what());
    }
  } catch (const std::exception& e) {
    return error_response(ApiErrorCode::Internal, e.what());
  }
}

std::optional<std::string_view> param(const QueryParams& params,
                                      std::string_view name) {
  const auto it = params.find(name);
  if (it == params.end()) return std::nullopt;
  return std::string_view(it->second);
}

template <typename Int>
std::optional<Int> parse_int(std::string_view text) {
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const std::string copy(text);
  char* end = nullptr;
  const double value = std::strtod(copy.c_str(), &end);
  if (end != copy.c_str() + copy.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

std::optional<Timestamp> timestamp_param(const QueryParams& params,
                                         std::string_view name) {
  const auto text = param(params, name);
  if (!text) return std::nullopt;
  if (auto epoch = parse_int<Timestamp>(*text)) return *epoch;
  if (auto iso = parse_iso8601(*text)) return *iso;
  bad_parameter(std::string(name) + " must be epoch seconds or YYYY-MM-DDTHH:MM:SSZ");
}

int width_param(const QueryParams& params) {
  const auto text = param(params, "width_days");
  if (!text) return kDefaultBucketDays;
  const auto value = parse_int<int>(*text);
  if (!value || *value < 1) bad_parameter("width_days must be an integer >= 1");
  return *value;
}

std::string project_param(const QueryParams& params, const Dataset& dataset) {
  const auto project = param(params, "project");
  if (!project || project->empty()) bad_parameter("project is required");
  if (!dataset.has_project(*project))
    throw ApiFailure{ApiErrorCode::UnknownProject,
                     "unknown project '" + std::string(*project) + "'"};
  return std::string(*project);
}

std::optional<DeveloperIdentity> identity_param(const QueryParams& params) {
  auto name = param(params, "dev_name");
  auto email = param(params, "dev_email");
  const auto mode_text = param(params, "match_mode");
  if (!name && !email) {
    if (mode_text) bad_parameter("match_mode given without dev_name or dev_email");
    return std::nullopt;
  }
  MatchMode mode;
  if (mode_text) {
    const auto parsed = parse_match_mode(*mode_text);
    if (!parsed) bad_parameter("match_mode must be name, email or both");
    mode = *parsed;
  } else {
    mode = name && email ? MatchMode::Both : name ? MatchMode::Name : MatchMode::Email;
  }
  try {
    return DeveloperIdentity(name ? std::optional<std::string>(*name) : std::nullopt,
                             email ? std::optional<std::string>(*email) : std::nullopt,
                             mode);
  } catch (const Error& e) {
    bad_parameter(e.what());
  }
}

// A side left open is taken from the project's data extent.
std::optional<TimeRange> range_param(const QueryParams& params,
                                     const Dataset& dataset,
                                     const std::string& project) {
  auto from = timestamp_param(params, "from");
  auto to = timestamp_param(params, "to");
  if (!from && !to) return std::nullopt;
  if (!from || !to) {
    const auto extent = data_extent(
        filter_commits(dataset.commits(), project, std::nullopt, std::nullopt, true));
    if (!from) from = extent->start();
    if (!to) to = extent->end();
  }
  if (*from >= *to) bad_parameter("from must be earlier than to");
  return TimeRange(*from, *to);
}

json bucket_json(const ActivityBucket& b) {
  return {{"start", format_iso8601(b.start)},
          {"width_days", b.width_days},
          {"corrective", b.corrective},
          {"perfective", b.perfective},
          {"adaptive", b.adaptive}};
}

json anomaly_json(const AnomalyFlag& f) {
  return {{"bucket_start", format_iso8601(f.bucket_start)},
          {"kind", to_string(f.kind)},
          {"total", f.total},
          {"series_mean", f.series_mean},
          {"series_stddev", f.series_stddev}};
}

json commit_json(const LabeledCommit& c) {
  return {{"hash", c.commit.hash},
          {"message", c.commit.message},
          {"author_name", c.commit.author_name},
          {"author_email", c.commit.author_email},
          {"timestamp", format_iso8601(c.commit.timestamp)},
          {"label", to_string(c.label)}};
}

std::optional<std::string> env(const char* name) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

}  // namespace

std::string_view to_string(ApiErrorCode code) {
  switch (code) {
    case ApiErrorCode::UnknownProject: return "unknown_project";
    case ApiErrorCode::BadParameter: return "bad_parameter";
    case ApiErrorCode::Internal: return "internal";
  }
  return "internal";
}

int http_status(ApiErrorCode code) {
  switch (code) {
    case ApiErrorCode::UnknownProject: return 404;
    case ApiErrorCode::BadParameter: return 400;
    case ApiErrorCode::Internal: return 500;
  }
  return 500;
}

ServiceConfig ServiceConfig::from_env() {
  ServiceConfig config;
  if (auto v = env("MAINTVIZ_DATASET")) config.dataset_path = *v;
  if (auto v = env("MAINTVIZ_PORT")) {
    const auto port = parse_int<int>(*v);
    if (!port || *port < 0 || *port > 65535)
      throw Error(ErrorKind::InvalidArgument, "MAINTVIZ_PORT: '" + *v + "'");
    config.port = *port;
  }
  if (auto v = env("MAINTVIZ_THRESHOLD")) {
    const auto t = parse_double(*v);
    if (!t || !(*t > 0.0 && *t <= kMaxBalanceThreshold))
      throw Error(ErrorKind::InvalidArgument, "MAINTVIZ_THRESHOLD: '" + *v + "'");
    config.threshold = *t;
  }
  if (auto v = env("MAINTVIZ_ANOMALY_K")) {
    const auto k = parse_double(*v);
    if (!k || !(*k > 0.0))
      throw Error(ErrorKind::InvalidArgument, "MAINTVIZ_ANOMALY_K: '" + *v + "'");
    config.anomaly_k = *k;
  }
  if (auto v = env("MAINTVIZ_STATIC_DIR")) config.static_dir = *v;
  return config;
}

Api::Api(Dataset dataset, ServiceConfig config)
    : snapshot_(std::make_shared<const Dataset>(std::move(dataset))),
      config_(std::move(config)) {}

std::shared_ptr<const Dataset> Api::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

void Api::replace_snapshot(Dataset dataset) {
  auto next = std::make_shared<const Dataset>(std::move(dataset));
  std::lock_guard lock(mutex_);
  snapshot_ = std::move(next);
}

ApiResponse Api::projects() const {
  return guarded([&] {
    const auto data = snapshot();
    json out = json::array();
    const auto& rows = data->commits();
    // Dataset order groups projects by name and sorts each by time.
    for (std::size_t i = 0; i < rows.size();) {
      std::size_t j = i;
      while (j < rows.size() && rows[j].commit.project == rows[i].commit.project) ++j;
      out.push_back({{"name", rows[i].commit.project},
                     {"commit_count", j - i},
                     {"first_commit", format_iso8601(rows[i].commit.timestamp)},
                     {"last_commit", format_iso8601(rows[j - 1].commit.timestamp)}});
      i = j;
    }
    return json_response(out);
  });
}

ApiResponse Api::activity(const QueryParams& params) const {
  return guarded([&] {
    const auto data = snapshot();
    const std::string project = project_param(params, *data);
    const int width = width_param(params);
    const auto identity = identity_param(params);
    const auto range = range_param(params, *data, project);
    const auto commits = filter_commits(data->commits(), project, range, identity);
    const auto buckets = bucketize(commits, width, range);
    const auto anomalies = detect_anomalies(buckets, config_.anomaly_k);

    json out = {{"buckets", json::array()}, {"anomalies", json::array()}};
    for (const auto& b : buckets) out["buckets"].push_back(bucket_json(b));
    for (const auto& f : anomalies) out["anomalies"].push_back(anomaly_json(f));
    return json_response(out);
  });
}

ApiResponse Api::commits(const QueryParams& params) const {
  return guarded([&] {
    const auto data = snapshot();
    const std::string project = project_param(params, *data);

    const auto activity_text = param(params, "activity");
    if (!activity_text) bad_parameter("activity is required");
    const auto activity = parse_activity_label(*activity_text);
    if (!activity || *activity == ActivityLabel::Unclassified)
      bad_parameter("activity must be corrective, perfective or adaptive");

    const auto bucket_start = timestamp_param(params, "bucket_start");
    if (!bucket_start) bad_parameter("bucket_start is required");
    const int width = width_param(params);

    std::size_t limit = kDefaultDetailsLimit;
    if (const auto text = param(params, "limit")) {
      const auto v = parse_int<std::size_t>(*text);
      if (!v || *v < 1) bad_parameter("limit must be an integer >= 1");
      limit = *v;
    }
    std::size_t offset = 0;
    if (const auto text = param(params, "offset")) {
      const auto v = parse_int<std::size_t>(*text);
      if (!v) bad_parameter("offset must be a non-negative integer");
      offset = *v;
    }
    std::optional<std::string> query;
    if (const auto q = param(params, "q"); q && !q->empty()) query = std::string(*q);

    const auto identity = identity_param(params);
    const TimeRange bucket(*bucket_start, *bucket_start + width * kSecondsPerDay);
    const auto scoped = filter_commits(data->commits(), project, std::nullopt, identity);
    const auto page = search_commits(scoped, *activity, bucket, query, limit, offset);

    json out = {{"items", json::array()}, {"total_matches", page.total_matches}};
    for (const auto& c : page.items) out["items"].push_back(commit_json(c));
    return json_response(out);
  });
}

ApiResponse Api::developers(const QueryParams& params) const {
  return guarded([&] {
    const auto data = snapshot();
    const std::string project = project_param(params, *data);
    std::map<std::pair<std::string, std::string>, std::size_t> tally;
    for (const auto& c : data->commits())
      if (c.commit.project == project)
        ++tally[{c.commit.author_name, c.commit.author_email}];

    std::vector<std::pair<std::pair<std::string, std::string>, std::size_t>> rows(
        tally.begin(), tally.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.second > b.second;  // map order already breaks ties by name, email
    });
    json out = json::array();
    for (const auto& [who, n] : rows)
      out.push_back({{"name", who.first}, {"email", who.second}, {"commit_count", n}});
    return json_response(out);
  });
}

ApiResponse Api::profile(const QueryParams& params) const {
  return guarded([&] {
    const auto data = snapshot();
    const std::string project = project_param(params, *data);
    double threshold = config_.threshold;
    if (const auto text = param(params, "threshold")) {
      const auto t = parse_double(*text);
      if (!t) bad_parameter("threshold must be a number");
      threshold = *t;
    }
    const auto identity = identity_param(params);
    const auto range = range_param(params, *data, project);
    const auto commits = filter_commits(data->commits(), project, range, identity);
    const auto p = balance_profile(commits, threshold);
    const json out = {
        {"total", p.total},
        {"proportions",
         {{"corrective", p.proportion(ActivityLabel::Corrective)},
          {"perfective", p.proportion(ActivityLabel::Perfective)},
          {"adaptive", p.proportion(ActivityLabel::Adaptive)}}},
        {"min_share_threshold", p.min_share_threshold},
        {"balanced", p.balanced}};
    return json_response(out);
  });
}

ApiResponse Api::export_csv(const QueryParams& params) const {
  return guarded([&] {
    const auto data = snapshot();
    if (const auto project = param(params, "project")) {
      if (!data->has_project(*project))
        throw ApiFailure{ApiErrorCode::UnknownProject,
                         "unknown project '" + std::string(*project) + "'"};
      return ApiResponse{200, "text/csv", dataset_to_csv(data->subset(*project))};
    }
    return ApiResponse{200, "text/csv", dataset_to_csv(*data)};
  });
}

ApiResponse Api::reload() {
  return guarded([&] {
    if (!config_.dataset_path)
      throw ApiFailure{ApiErrorCode::Internal, "no dataset path configured"};
    Dataset next = load_dataset(*config_.dataset_path);
    const std::size_t n = next.size();
    replace_snapshot(std::move(next));
    return json_response({{"status", "ok"}, {"commits", n}});
  });
}

std::optional<ApiResponse> Api::handle(std::string_view method,
                                       std::string_view path,
                                       const QueryParams& params) {
  if (method == "GET") {
    if (path == "/api/projects") return projects();
    if (path == "/api/activity") return activity(params);
    if (path == "/api/commits") return commits(params);
    if (path == "/api/developers") return developers(params);
    if (path == "/api/profile") return profile(params);
    if (path == "/api/export") return export_csv(params);
  } else if (method == "POST" && path == "/api/reload") {
    return reload();
  }
  return std::nullopt;
}

// --- HTTP -------------------------------------------------------------------

namespace {

constexpr std::string_view kPlaceholderPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>maintviz</title></head>
<body>
<h1>maintviz</h1>
<p>The web UI is not installed. The JSON API is available:</p>
<ul>
<li><a href="/api/projects">/api/projects</a></li>
<li>/api/activity, /api/commits, /api/developers, /api/profile</li>
<li><a href="/api/export">/api/export</a> (CSV)</li>
</ul>
</body></html>
)";

}  // namespace

struct Server::Impl {
  Api& api;
  httplib::Server http;

  explicit Impl(Api& a) : api(a) {
    const auto route = [this](const httplib::Request& req, httplib::Response& res) {
      QueryParams params;
      // First occurrence wins for repeated keys.
      for (const auto& [k, v] : req.params) params.emplace(k, v);
      auto out = api.handle(req.method, req.path, params);
      if (!out) {
        res.status = 404;
        return;
      }
      res.status = out->status;
      res.set_content(out->body, out->content_type);
    };
    for (const char* path : {"/api/projects", "/api/activity", "/api/commits",
                             "/api/developers", "/api/profile", "/api/export"})
      http.Get(path, route);
    http.Post("/api/reload", route);

    const auto& dir = api.config().static_dir;
    if (dir && std::filesystem::is_directory(*dir)) {
      http.set_mount_point("/", dir->string());
    } else {
      http.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(std::string(kPlaceholderPage), "text/html");
      });
    }
  }
};

Server::Server(Api& api) : impl_(std::make_unique<Impl>(api)) {}
Server::~Server() = default;

int Server::bind_any_port(const std::string& host) {
  return impl_->http.bind_to_any_port(host);
}

bool Server::bind(const std::string& host, int port) {
  return impl_->http.bind_to_port(host, port);
}

bool Server::listen_after_bind() { return impl_->http.listen_after_bind(); }
void Server::stop() { impl_->http.stop(); }
void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace maintviz
