#pragma once

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>
#include <vector>

namespace zoneseg {

struct ServiceConfig {
  std::string url = "http://127.0.0.1:8080";  // scheme://host:port
  // Expected embedding width; 0 accepts whatever the service reports.
  int dim = 3072;
  std::chrono::milliseconds timeout{30000};
  int max_in_flight = 4;
};

struct ServiceHealth {
  std::string status;
  std::string model;
  int dim = 0;
};

// Client for the embedding exporter: POST /v1/embed {"lines": [...]}
// answered by {"dim": d, "embeddings": [[...], ...]}. Copies share one
// in-flight request cap.
class ServiceClient {
 public:
  explicit ServiceClient(ServiceConfig config);

  // Throws ValidationError on an empty list (before any request),
  // TransportError, HttpStatusError, MalformedResponseError, or
  // DimensionMismatchError.
  std::vector<std::vector<float>> embed(
      const std::vector<std::string>& lines) const;
  ServiceHealth health() const;

  const ServiceConfig& config() const { return config_; }

 private:
  using Semaphore = std::counting_semaphore<1024>;

  ServiceConfig config_;
  std::shared_ptr<Semaphore> in_flight_;
};

}  // namespace zoneseg
