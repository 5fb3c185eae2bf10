#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "zoneseg/corpus.hpp"
#include "zoneseg/encoder.hpp"
#include "zoneseg/model.hpp"
#include "zoneseg/optimizer.hpp"

namespace zoneseg {

// One email ready for the labeler: its line embeddings and, for training
// data, gold label indices.
struct EncodedSequence {
  std::string id;
  std::vector<LineEmbedding> embeddings;
  std::vector<int> labels;
};

// Encodes every email of corpus with gold labels attached. Up to parallel
// emails are encoded concurrently; output order follows the corpus.
std::vector<EncodedSequence> encode_corpus(const Corpus& corpus, const Encoder& encoder,
                                           int parallel = 1);

enum class Decoding { kCrf, kArgmax };

// Inference-only BiLSTM pass followed by Viterbi (or per-line argmax).
// Reentrant. Throws DimensionMismatchError.
std::vector<int> predict(const ModelParams& params,
                         std::span<const LineEmbedding> embeddings,
                         Decoding decoding = Decoding::kCrf);

// Summed CRF negative log-likelihood of one sequence and its gradient.
double sequence_loss_and_grad(const ModelParams& params,
                              const EncodedSequence& sequence, Rng* dropout_rng,
                              ModelParams& grads);

struct TrainConfig {
  int hidden = 64;
  double dropout_rate = 0.25;
  RmspropConfig optimizer;
  int max_epochs = 500;
  int patience = 20;
  std::uint64_t seed = 0;
  // Stop once selection accuracy reaches 1.0.
  bool stop_when_perfect = false;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double selection_accuracy = 0.0;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_accuracy = 0.0;
  bool early_stopped = false;
  std::string selection_set;  // "dev" or "train"
  std::string loss_aggregation = "sum over lines, per email";
  std::string gradient_clipping = "none";
};

struct TrainResult {
  ModelParams params;
  TrainLog log;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Per-email RMSprop updates over a seeded shuffle each epoch; returns the
// parameters with the best line accuracy on dev (or on train when dev is
// empty). model_config supplies taxonomy, zones and encoder metadata; its
// shape fields are overwritten from the data and train config.
TrainResult train(const std::vector<EncodedSequence>& train_set,
                  const std::vector<EncodedSequence>& dev_set,
                  ModelConfig model_config, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

double line_accuracy(const ModelParams& params,
                     const std::vector<EncodedSequence>& data,
                     Decoding decoding = Decoding::kCrf);

// Model file: one JSON header line, then each tensor as
// u32 name length | name | u32 ndim | u64 dims... | float64 LE row-major.
inline constexpr const char* kModelFormat = "zoneseg-model";
inline constexpr int kModelVersion = 1;

std::string serialize_model(const ModelParams& params);
ModelParams parse_model(std::string_view bytes);
void save_model(const ModelParams& params, const std::string& path);
ModelParams load_model(const std::string& path);

}  // namespace zoneseg
