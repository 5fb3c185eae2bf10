#pragma once

#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zoneseg/corpus.hpp"
#include "zoneseg/encoder.hpp"
#include "zoneseg/labeler.hpp"
#include "zoneseg/taxonomy.hpp"

namespace zoneseg::cli {

// State shared by every subcommand: root-level flags and the taxonomy
// registry they produce.
struct Context {
  std::vector<std::string> taxonomy_files;

  TaxonomyRegistry registry() const;
};

// Logs the subcommand's resolved flags (defaults included) as one JSON line.
void echo_config(const CLI::App& command);

std::unique_ptr<Encoder> open_encoder(const std::string& spec, int parallel);

// Taxonomy recorded in a model header: the registry's entry when its zones
// agree, otherwise a mapping-less taxonomy rebuilt from the header.
Taxonomy model_taxonomy(const ModelParams& model, const TaxonomyRegistry& registry);

// Runs the model over every email of input. Zones of input are ignored.
Corpus predict_corpus(const ModelParams& model, const Taxonomy& taxonomy, const Corpus& input,
                      const Encoder& encoder, Decoding decoding, int parallel);

void add_synth(CLI::App& root, const Context& context);
void add_train(CLI::App& root, const Context& context);
void add_predict(CLI::App& root, const Context& context);
void add_evaluate(CLI::App& root, const Context& context);
void add_agreement(CLI::App& root, const Context& context);
void add_encode(CLI::App& root, const Context& context);

}  // namespace zoneseg::cli
