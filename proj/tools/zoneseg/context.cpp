#include "context.hpp"

#include <spdlog/spdlog.h>

#include "json_config.hpp"
#include "zoneseg/error.hpp"

namespace zoneseg::cli {

TaxonomyRegistry Context::registry() const {
  TaxonomyRegistry registry;
  for (const auto& path : taxonomy_files) registry.add_file(path);
  return registry;
}

void echo_config(const CLI::App& command) {
  spdlog::info("{} config: {}", command.get_name(),
               JsonConfig::render(&command, true).dump());
}

std::unique_ptr<Encoder> open_encoder(const std::string& text, int parallel) {
  EncoderSpec spec = EncoderSpec::parse(text);
  spec.max_in_flight = std::max(1, parallel);
  auto encoder = make_encoder(spec);
  spdlog::info("encoder {} (dim {})", spec.to_string(), encoder->dim());
  return encoder;
}

Taxonomy model_taxonomy(const ModelParams& model, const TaxonomyRegistry& registry) {
  const ModelConfig& config = model.config;
  if (const Taxonomy* known = registry.find(config.taxonomy)) {
    if (config.zones.empty() || known->zones() == config.zones) return *known;
    spdlog::warn("model zones differ from registered taxonomy '{}'; using the model's",
                 config.taxonomy);
  }
  if (config.zones.empty()) {
    throw ValidationError("model taxonomy '" + config.taxonomy +
                          "' is not registered and the model lists no zones");
  }
  return Taxonomy(config.taxonomy, config.zones);
}

Corpus predict_corpus(const ModelParams& model, const Taxonomy& taxonomy, const Corpus& input,
                      const Encoder& encoder, Decoding decoding, int parallel) {
  if (encoder.dim() != model.config.input_dim) {
    throw DimensionMismatchError("encoder produces dim " + std::to_string(encoder.dim()) +
                                 " but the model expects " +
                                 std::to_string(model.config.input_dim));
  }
  if (model.config.encoder_kind != to_string(encoder.kind())) {
    spdlog::warn("model was trained with the {} encoder, predicting with {}",
                 model.config.encoder_kind, to_string(encoder.kind()));
  }
  const auto encoded = encode_corpus(input, encoder, parallel);
  std::vector<AnnotatedEmail> out;
  out.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    const auto labels = predict(model, encoded[i].embeddings, decoding);
    std::vector<std::string> zones;
    zones.reserve(labels.size());
    for (int label : labels) zones.push_back(taxonomy.zone(static_cast<std::size_t>(label)));
    out.emplace_back(input.emails()[i].email(), std::move(zones));
  }
  return Corpus(input.name(), taxonomy, std::move(out));
}

}  // namespace zoneseg::cli
