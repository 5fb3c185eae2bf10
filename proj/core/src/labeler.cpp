#include "zoneseg/labeler.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "binary_io.hpp"
#include "zoneseg/crf.hpp"
#include "zoneseg/error.hpp"
#include "zoneseg/io.hpp"
#include "zoneseg/lstm.hpp"

namespace zoneseg {

std::vector<EncodedSequence> encode_corpus(const Corpus& corpus, const Encoder& encoder,
                                           int parallel) {
  std::vector<EncodedSequence> out(corpus.size());
  auto encode_one = [&](std::size_t i) {
    const auto& email = corpus.emails()[i];
    out[i].id = email.email().id();
    out[i].embeddings = encoder.encode_email(email.email());
    if (out[i].embeddings.size() != email.email().size()) {
      throw ValidationError("encoder returned " + std::to_string(out[i].embeddings.size()) +
                            " rows for email '" + email.email().id() + "' with " +
                            std::to_string(email.email().size()) + " lines");
    }
    out[i].labels = corpus.label_indices(i);
  };
  const auto workers = static_cast<std::size_t>(std::max(1, parallel));
  if (workers == 1 || corpus.size() < 2) {
    for (std::size_t i = 0; i < corpus.size(); ++i) encode_one(i);
    return out;
  }

  // First failure wins; remaining workers drain without doing more work.
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, corpus.size()); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < corpus.size() && !failed; i = next++) {
          try {
            encode_one(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<int> predict(const ModelParams& params, std::span<const LineEmbedding> embeddings,
                         Decoding decoding) {
  const Eigen::MatrixXd emissions = bilstm_forward(params, embeddings);
  if (decoding == Decoding::kArgmax) {
    std::vector<int> labels(static_cast<std::size_t>(emissions.rows()));
    for (Eigen::Index t = 0; t < emissions.rows(); ++t) {
      Eigen::Index arg = 0;
      emissions.row(t).maxCoeff(&arg);  // first maximum on ties
      labels[static_cast<std::size_t>(t)] = static_cast<int>(arg);
    }
    return labels;
  }
  return crf_viterbi({emissions, params.transitions, params.start, params.end}).labels;
}

double sequence_loss_and_grad(const ModelParams& params, const EncodedSequence& sequence,
                              Rng* dropout_rng, ModelParams& grads) {
  BiLstmCache cache;
  const Eigen::MatrixXd emissions =
      bilstm_forward(params, sequence.embeddings, dropout_rng, &cache);
  CrfLoss crf = crf_nll_and_grad({emissions, params.transitions, params.start, params.end},
                                 sequence.labels);
  grads.transitions += crf.grads.transitions;
  grads.start += crf.grads.start;
  grads.end += crf.grads.end;
  bilstm_backward(params, cache, crf.grads.emissions, grads);
  return crf.loss;
}

double line_accuracy(const ModelParams& params, const std::vector<EncodedSequence>& data,
                     Decoding decoding) {
  long correct = 0;
  long total = 0;
  for (const auto& sequence : data) {
    const auto labels = predict(params, sequence.embeddings, decoding);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      correct += labels[i] == sequence.labels[i] ? 1 : 0;
    }
    total += static_cast<long>(labels.size());
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

namespace {

void check_sequences(const std::vector<EncodedSequence>& data, int input_dim,
                     int num_labels, std::string_view role) {
  for (const auto& sequence : data) {
    if (sequence.embeddings.empty()) {
      throw ValidationError(std::string(role) + " email '" + sequence.id + "' is empty");
    }
    if (sequence.labels.size() != sequence.embeddings.size()) {
      throw ValidationError(std::string(role) + " email '" + sequence.id +
                            "' has mismatched labels and embeddings");
    }
    for (const auto& x : sequence.embeddings) {
      if (x.size() != input_dim) {
        throw DimensionMismatchError(std::string(role) + " email '" + sequence.id +
                                     "' has embedding dim " + std::to_string(x.size()) +
                                     ", expected " + std::to_string(input_dim));
      }
    }
    for (int label : sequence.labels) {
      if (label < 0 || label >= num_labels) {
        throw ValidationError(std::string(role) + " email '" + sequence.id +
                              "' has a label outside the taxonomy");
      }
    }
  }
}

void set_zero(ModelParams& params) {
  params.visit([](std::string_view, auto& t) { t.setZero(); });
}

}  // namespace

TrainResult train(const std::vector<EncodedSequence>& train_set,
                  const std::vector<EncodedSequence>& dev_set, ModelConfig model_config,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  if (train_set.empty()) throw ValidationError("training set is empty");
  if (model_config.num_labels <= 0) {
    model_config.num_labels = static_cast<int>(model_config.zones.size());
  }
  if (model_config.input_dim <= 0) {
    model_config.input_dim = static_cast<int>(train_set.front().embeddings.front().size());
  }
  model_config.hidden = config.hidden;
  model_config.dropout_rate = config.dropout_rate;
  check_sequences(train_set, model_config.input_dim, model_config.num_labels, "training");
  check_sequences(dev_set, model_config.input_dim, model_config.num_labels, "dev");
  if (config.max_epochs < 1) throw ValidationError("max_epochs must be at least 1");

  Rng rng(config.seed);
  ModelParams params = ModelParams::initialized(model_config, rng);
  RmspropOptimizer optimizer(config.optimizer, params);
  ModelParams grads = params.zeros_like();

  const bool use_dev = !dev_set.empty();
  const auto& selection = use_dev ? dev_set : train_set;

  TrainResult result{params, {}};
  result.log.selection_set = use_dev ? "dev" : "train";
  double best = -1.0;
  int since_best = 0;

  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle_in_place(order, rng);
    double epoch_loss = 0.0;
    for (std::size_t index : order) {
      set_zero(grads);
      epoch_loss += sequence_loss_and_grad(params, train_set[index], &rng, grads);
      optimizer.step(params, grads);
    }
    if (!params.all_finite()) {
      throw Error("training diverged at epoch " + std::to_string(epoch));
    }

    EpochRecord record{epoch, epoch_loss, line_accuracy(params, selection)};
    result.log.epochs.push_back(record);
    if (on_epoch) on_epoch(record);

    if (record.selection_accuracy > best) {
      best = record.selection_accuracy;
      result.params = params;
      result.log.best_epoch = epoch;
      result.log.best_accuracy = best;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      result.log.early_stopped = true;
      break;
    }
    if (config.stop_when_perfect && best >= 1.0) break;
  }
  return result;
}

std::string serialize_model(const ModelParams& params) {
  const ModelConfig& c = params.config;
  nlohmann::ordered_json header;
  header["format"] = kModelFormat;
  header["version"] = kModelVersion;
  header["input_dim"] = c.input_dim;
  header["hidden"] = c.hidden;
  header["K"] = c.num_labels;
  header["taxonomy"] = c.taxonomy;
  header["encoder_kind"] = c.encoder_kind;
  header["dropout_rate"] = c.dropout_rate;
  header["zones"] = c.zones;

  std::string out = header.dump();
  out += '\n';
  params.visit([&](std::string_view name, const auto& tensor) {
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.append(name);
    if constexpr (std::decay_t<decltype(tensor)>::ColsAtCompileTime == 1) {
      detail::put_le<std::uint32_t>(out, 1);
      detail::put_le<std::uint64_t>(out, static_cast<std::uint64_t>(tensor.rows()));
    } else {
      detail::put_le<std::uint32_t>(out, 2);
      detail::put_le<std::uint64_t>(out, static_cast<std::uint64_t>(tensor.rows()));
      detail::put_le<std::uint64_t>(out, static_cast<std::uint64_t>(tensor.cols()));
    }
    for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
      for (Eigen::Index col = 0; col < tensor.cols(); ++col) {
        detail::put_le<double>(out, tensor(r, col));
      }
    }
  });
  return out;
}

ModelParams parse_model(std::string_view bytes) {
  const std::size_t newline = bytes.find('\n');
  if (newline == std::string_view::npos) throw FormatError("model file lacks a JSON header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(0, newline));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("model header: ") + e.what());
  }
  ModelConfig config;
  try {
    if (header.at("format").get<std::string>() != kModelFormat) {
      throw FormatError("not a zoneseg model file");
    }
    if (header.at("version").get<int>() != kModelVersion) {
      throw VersionMismatchError("unsupported model version " +
                                 header.at("version").dump());
    }
    config.input_dim = header.at("input_dim").get<int>();
    config.hidden = header.at("hidden").get<int>();
    config.num_labels = header.at("K").get<int>();
    config.taxonomy = header.at("taxonomy").get<std::string>();
    config.encoder_kind = header.at("encoder_kind").get<std::string>();
    config.dropout_rate = header.at("dropout_rate").get<double>();
    config.zones = header.value("zones", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model header: ") + e.what());
  }
  if (!config.zones.empty() && static_cast<int>(config.zones.size()) != config.num_labels) {
    throw FormatError("model header lists a zone count different from K");
  }

  ModelParams params = ModelParams::zeros(config);
  detail::ByteReader reader(bytes.substr(newline + 1));
  params.visit([&](std::string_view name, auto& tensor) {
    const auto name_len = reader.get<std::uint32_t>();
    const std::string_view stored = reader.take(name_len);
    if (stored != name) {
      throw FormatError("expected tensor '" + std::string(name) + "', found '" +
                        std::string(stored) + "'");
    }
    const auto ndim = reader.get<std::uint32_t>();
    const std::uint32_t expected_rank =
        std::decay_t<decltype(tensor)>::ColsAtCompileTime == 1 ? 1 : 2;
    if (ndim != expected_rank) {
      throw FormatError("tensor '" + std::string(name) + "' has rank " + std::to_string(ndim));
    }
    const auto rows = reader.get<std::uint64_t>();
    const std::uint64_t cols = ndim == 2 ? reader.get<std::uint64_t>() : 1;
    if (rows != static_cast<std::uint64_t>(tensor.rows()) ||
        cols != static_cast<std::uint64_t>(tensor.cols())) {
      throw FormatError("tensor '" + std::string(name) + "' shape disagrees with header");
    }
    for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
      for (Eigen::Index col = 0; col < tensor.cols(); ++col) {
        tensor(r, col) = reader.get<double>();
      }
    }
  });
  if (reader.remaining() != 0) throw FormatError("model file has trailing bytes");
  if (!params.all_finite()) throw FormatError("model holds non-finite values");
  return params;
}

void save_model(const ModelParams& params, const std::string& path) {
  write_file_atomic(path, serialize_model(params));
}

ModelParams load_model(const std::string& path) { return parse_model(read_file(path)); }

}  // namespace zoneseg
