#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "zoneseg/email.hpp"
#include "zoneseg/embedding_file.hpp"
#include "zoneseg/service_client.hpp"

namespace zoneseg {

using LineEmbedding = Eigen::VectorXd;

inline constexpr int kTransformerDim = 3072;

enum class EncoderKind { kFeatures, kFile, kService };

std::string_view to_string(EncoderKind kind);

// Turns an email into one embedding per line. Implementations are read-only
// after construction and may be shared across threads.
class Encoder {
 public:
  virtual ~Encoder() = default;

  virtual EncoderKind kind() const = 0;
  virtual int dim() const = 0;
  virtual std::vector<LineEmbedding> encode_email(const Email& email) const = 0;
};

class FeatureEncoder final : public Encoder {
 public:
  EncoderKind kind() const override { return EncoderKind::kFeatures; }
  int dim() const override;
  std::vector<LineEmbedding> encode_email(const Email& email) const override;
};

// Looks rows up by email id in a precomputed LEMB file.
class FileEncoder final : public Encoder {
 public:
  explicit FileEncoder(const std::string& path);
  explicit FileEncoder(EmbeddingFile file);

  EncoderKind kind() const override { return EncoderKind::kFile; }
  int dim() const override;
  // Throws MissingIdError or ValidationError on a line-count mismatch.
  std::vector<LineEmbedding> encode_email(const Email& email) const override;

  const EmbeddingFile& file() const { return file_; }

 private:
  EmbeddingFile file_;
};

class ServiceEncoder final : public Encoder {
 public:
  explicit ServiceEncoder(ServiceConfig config);

  EncoderKind kind() const override { return EncoderKind::kService; }
  int dim() const override;
  std::vector<LineEmbedding> encode_email(const Email& email) const override;

 private:
  ServiceClient client_;
  int dim_;
};

// "features", "file:<path>" or "service:<url>".
struct EncoderSpec {
  EncoderKind kind = EncoderKind::kFeatures;
  std::string target;
  // service only
  int dim = kTransformerDim;  // 0: take it from /v1/health
  int max_in_flight = 4;
  std::chrono::milliseconds timeout{30000};

  static EncoderSpec parse(std::string_view text);
  std::string to_string() const;
};

std::unique_ptr<Encoder> make_encoder(const EncoderSpec& spec);

}  // namespace zoneseg
