#include "zoneseg/service_client.hpp"

#include <algorithm>
#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "zoneseg/error.hpp"

namespace zoneseg {
namespace {

httplib::Client make_client(const ServiceConfig& config) {
  httplib::Client client(config.url);
  if (!client.is_valid()) {
    throw TransportError("invalid embedding service URL '" + config.url + "'");
  }
  const auto seconds = static_cast<time_t>(config.timeout.count() / 1000);
  const auto micros = static_cast<time_t>((config.timeout.count() % 1000) * 1000);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);
  return client;
}

nlohmann::json parse_body(const std::string& body) {
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedResponseError(std::string("embedding service sent invalid JSON: ") +
                                 e.what());
  }
}

void check_status(const httplib::Result& result, const std::string& url) {
  if (!result) {
    throw TransportError("embedding service at " + url + " unreachable: " +
                         httplib::to_string(result.error()));
  }
  if (result->status != 200) throw HttpStatusError(result->status, result->body);
}

}  // namespace

ServiceClient::ServiceClient(ServiceConfig config)
    : config_(std::move(config)),
      in_flight_(std::make_shared<Semaphore>(std::clamp(config_.max_in_flight, 1, 1024))) {}

std::vector<std::vector<float>> ServiceClient::embed(
    const std::vector<std::string>& lines) const {
  if (lines.empty()) {
    throw ValidationError("service_embed needs at least one line");
  }
  nlohmann::json request;
  request["lines"] = lines;
  std::string payload;
  try {
    payload = request.dump();
  } catch (const nlohmann::json::type_error& e) {
    throw ValidationError(std::string("lines are not valid UTF-8: ") + e.what());
  }

  in_flight_->acquire();
  httplib::Result result = [&] {
    struct Release {
      Semaphore& s;
      ~Release() { s.release(); }
    } release{*in_flight_};
    auto client = make_client(config_);
    return client.Post("/v1/embed", payload, "application/json");
  }();
  check_status(result, config_.url);

  const nlohmann::json body = parse_body(result->body);
  std::vector<std::vector<float>> rows;
  int dim = 0;
  try {
    dim = body.at("dim").get<int>();
    const auto& embeddings = body.at("embeddings");
    if (!embeddings.is_array()) throw MalformedResponseError("'embeddings' is not an array");
    for (const auto& row : embeddings) {
      rows.push_back(row.get<std::vector<float>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResponseError(std::string("embedding response: ") + e.what());
  }
  if (rows.size() != lines.size()) {
    throw MalformedResponseError("embedding service returned " +
                                 std::to_string(rows.size()) + " rows for " +
                                 std::to_string(lines.size()) + " lines");
  }
  if (config_.dim > 0 && dim != config_.dim) {
    throw DimensionMismatchError("embedding service reports dim " +
                                 std::to_string(dim) + ", expected " +
                                 std::to_string(config_.dim));
  }
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != dim) {
      throw DimensionMismatchError("embedding row has " + std::to_string(row.size()) +
                                   " values, service declared " + std::to_string(dim));
    }
    if (!std::all_of(row.begin(), row.end(), [](float v) { return std::isfinite(v); })) {
      throw MalformedResponseError("embedding service returned a non-finite value");
    }
  }
  return rows;
}

ServiceHealth ServiceClient::health() const {
  auto client = make_client(config_);
  auto result = client.Get("/v1/health");
  check_status(result, config_.url);
  const nlohmann::json body = parse_body(result->body);
  try {
    return ServiceHealth{body.at("status").get<std::string>(),
                         body.value("model", std::string()),
                         body.at("dim").get<int>()};
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResponseError(std::string("health response: ") + e.what());
  }
}

}  // namespace zoneseg
