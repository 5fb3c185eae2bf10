#include "zoneseg/encoder.hpp"

#include "zoneseg/error.hpp"
#include "zoneseg/features.hpp"

namespace zoneseg {

std::string_view to_string(EncoderKind kind) {
  switch (kind) {
    case EncoderKind::kFeatures:
      return "features";
    case EncoderKind::kFile:
      return "file";
    case EncoderKind::kService:
      return "service";
  }
  return "unknown";
}

int FeatureEncoder::dim() const { return kFeatureCount; }

std::vector<LineEmbedding> FeatureEncoder::encode_email(const Email& email) const {
  std::vector<LineEmbedding> out;
  out.reserve(email.size());
  for (const auto& line : email.lines()) out.push_back(feature_vector(line));
  return out;
}

FileEncoder::FileEncoder(const std::string& path)
    : file_(EmbeddingFile::open(path)) {}

FileEncoder::FileEncoder(EmbeddingFile file) : file_(std::move(file)) {}

int FileEncoder::dim() const { return static_cast<int>(file_.dim()); }

std::vector<LineEmbedding> FileEncoder::encode_email(const Email& email) const {
  const RowRange& range = file_.range(email.id());
  if (range.count != email.size()) {
    throw ValidationError("email '" + email.id() + "' has " +
                          std::to_string(email.size()) +
                          " lines but the embedding index lists " +
                          std::to_string(range.count));
  }
  std::vector<LineEmbedding> out;
  out.reserve(email.size());
  for (std::uint64_t i = 0; i < range.count; ++i) {
    const auto row = file_.row(range.start + i);
    LineEmbedding embedding(static_cast<Eigen::Index>(row.size()));
    for (std::size_t j = 0; j < row.size(); ++j) {
      embedding(static_cast<Eigen::Index>(j)) = static_cast<double>(row[j]);
    }
    out.push_back(std::move(embedding));
  }
  return out;
}

ServiceEncoder::ServiceEncoder(ServiceConfig config)
    : client_(std::move(config)), dim_(client_.config().dim) {
  if (dim_ <= 0) dim_ = client_.health().dim;
}

int ServiceEncoder::dim() const { return dim_; }

std::vector<LineEmbedding> ServiceEncoder::encode_email(const Email& email) const {
  const auto rows = client_.embed(email.lines());
  std::vector<LineEmbedding> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != dim_) {
      throw DimensionMismatchError("service embedding has dim " +
                                   std::to_string(row.size()) + ", expected " +
                                   std::to_string(dim_));
    }
    out.push_back(Eigen::Map<const Eigen::VectorXf>(row.data(),
                                                    static_cast<Eigen::Index>(row.size()))
                      .cast<double>());
  }
  return out;
}

EncoderSpec EncoderSpec::parse(std::string_view text) {
  EncoderSpec spec;
  if (text == "features") return spec;
  if (text.starts_with("file:") && text.size() > 5) {
    spec.kind = EncoderKind::kFile;
    spec.target = std::string(text.substr(5));
    return spec;
  }
  if (text.starts_with("service:") && text.size() > 8) {
    spec.kind = EncoderKind::kService;
    spec.target = std::string(text.substr(8));
    return spec;
  }
  throw ValidationError("encoder must be 'features', 'file:<path>' or "
                        "'service:<url>', got '" + std::string(text) + "'");
}

std::string EncoderSpec::to_string() const {
  if (kind == EncoderKind::kFeatures) return "features";
  return std::string(zoneseg::to_string(kind)) + ":" + target;
}

std::unique_ptr<Encoder> make_encoder(const EncoderSpec& spec) {
  switch (spec.kind) {
    case EncoderKind::kFeatures:
      return std::make_unique<FeatureEncoder>();
    case EncoderKind::kFile:
      return std::make_unique<FileEncoder>(spec.target);
    case EncoderKind::kService: {
      ServiceConfig config;
      config.url = spec.target;
      config.dim = spec.dim;
      config.max_in_flight = spec.max_in_flight;
      config.timeout = spec.timeout;
      return std::make_unique<ServiceEncoder>(std::move(config));
    }
  }
  throw ValidationError("unknown encoder kind");
}

}  // namespace zoneseg
