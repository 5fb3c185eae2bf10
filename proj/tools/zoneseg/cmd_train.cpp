#include <spdlog/spdlog.h>

#include <nlohmann/json.hpp>

#include "context.hpp"
#include "zoneseg/error.hpp"
#include "zoneseg/io.hpp"

namespace zoneseg::cli {
namespace {

struct TrainOptions {
  std::string train_path;
  std::string dev_path;
  std::string encoder = "features";
  std::string model_out;
  std::string log_out;
  TrainConfig config;
  int parallel = 1;
};

nlohmann::ordered_json log_json(const TrainResult& result, const TrainOptions& opts,
                                const ModelConfig& model) {
  const TrainLog& log = result.log;
  nlohmann::ordered_json j;
  j["model"] = opts.model_out;
  j["taxonomy"] = model.taxonomy;
  j["encoder"] = opts.encoder;
  j["input_dim"] = model.input_dim;
  j["hidden"] = opts.config.hidden;
  j["dropout"] = opts.config.dropout_rate;
  j["lr"] = opts.config.optimizer.learning_rate;
  j["decay"] = opts.config.optimizer.decay;
  j["epsilon"] = opts.config.optimizer.epsilon;
  j["seed"] = opts.config.seed;
  j["max_epochs"] = opts.config.max_epochs;
  j["patience"] = opts.config.patience;
  j["loss_aggregation"] = log.loss_aggregation;
  j["gradient_clipping"] = log.gradient_clipping;
  j["selection_set"] = log.selection_set;
  j["best_epoch"] = log.best_epoch;
  j["best_accuracy"] = log.best_accuracy;
  j["early_stopped"] = log.early_stopped;
  auto& epochs = j["epochs"] = nlohmann::ordered_json::array();
  for (const auto& e : log.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"selection_accuracy", e.selection_accuracy}});
  }
  return j;
}

}  // namespace

void add_train(CLI::App& root, const Context& context) {
  auto opts = std::make_shared<TrainOptions>();
  TrainConfig& c = opts->config;
  CLI::App* cmd = root.add_subcommand("train", "Train a BiLSTM-CRF zoning model");
  cmd->add_option("--train", opts->train_path, "Training corpus (.jsonl)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--dev", opts->dev_path,
                  "Dev corpus for model selection (default: select on train)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--encoder", opts->encoder, "features | file:<path> | service:<url>");
  cmd->add_option("-o,--model-out", opts->model_out, "Model file to write")->required();
  cmd->add_option("--log-out", opts->log_out, "Training log JSON (default <model-out>.log.json)");
  cmd->add_option("--hidden", c.hidden, "LSTM units per direction")->check(CLI::PositiveNumber);
  cmd->add_option("--dropout", c.dropout_rate, "Dropout on BiLSTM outputs")
      ->check(CLI::Range(0.0, 0.99));
  cmd->add_option("--lr", c.optimizer.learning_rate, "RMSprop learning rate")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--decay", c.optimizer.decay, "RMSprop decay")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--epsilon", c.optimizer.epsilon, "RMSprop epsilon")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--epochs", c.max_epochs, "Maximum epochs")->check(CLI::PositiveNumber);
  cmd->add_option("--patience", c.patience, "Epochs without improvement before stopping")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Seed for init, shuffling and dropout");
  cmd->add_flag("--stop-when-perfect", c.stop_when_perfect,
                "Stop once selection accuracy reaches 1.0");
  cmd->add_option("--parallel", opts->parallel, "Emails encoded concurrently")
      ->check(CLI::PositiveNumber);

  cmd->callback([cmd, opts, &context] {
    echo_config(*cmd);
    const auto registry = context.registry();
    const Corpus train_corpus = read_corpus(opts->train_path, registry);
    std::optional<Corpus> dev_corpus;
    if (!opts->dev_path.empty()) {
      dev_corpus = read_corpus(opts->dev_path, registry);
      if (dev_corpus->taxonomy().name() != train_corpus.taxonomy().name()) {
        throw ValidationError("train corpus uses taxonomy '" + train_corpus.taxonomy().name() +
                              "' but dev corpus uses '" + dev_corpus->taxonomy().name() + "'");
      }
    }
    const auto encoder = open_encoder(opts->encoder, opts->parallel);
    const auto train_set = encode_corpus(train_corpus, *encoder, opts->parallel);
    const auto dev_set = dev_corpus ? encode_corpus(*dev_corpus, *encoder, opts->parallel)
                                    : std::vector<EncodedSequence>{};
    spdlog::info("training on {} emails ({} lines), dev {} emails", train_corpus.size(),
                 train_corpus.line_count(), dev_set.size());

    ModelConfig model;
    model.input_dim = encoder->dim();
    model.taxonomy = train_corpus.taxonomy().name();
    model.zones = train_corpus.taxonomy().zones();
    model.encoder_kind = std::string(to_string(encoder->kind()));
    const TrainResult result =
        train(train_set, dev_set, model, opts->config, [](const EpochRecord& e) {
          spdlog::debug("epoch {} loss {:.6f} accuracy {:.4f}", e.epoch, e.train_loss,
                        e.selection_accuracy);
        });

    save_model(result.params, opts->model_out);
    const std::string log_path =
        opts->log_out.empty() ? opts->model_out + ".log.json" : opts->log_out;
    write_file_atomic(log_path,
                      log_json(result, *opts, result.params.config).dump(2) + "\n");
    spdlog::info("best {} accuracy {:.4f} at epoch {} of {}{}", result.log.selection_set,
                 result.log.best_accuracy, result.log.best_epoch, result.log.epochs.size(),
                 result.log.early_stopped ? " (early stop)" : "");
    spdlog::info("wrote model {} and log {}", opts->model_out, log_path);
  });
}

}  // namespace zoneseg::cli
