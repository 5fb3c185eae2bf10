#include <filesystem>

#include <spdlog/spdlog.h>

#include "context.hpp"
#include "zoneseg/io.hpp"

namespace zoneseg::cli {
namespace {

struct PredictOptions {
  std::string model;
  std::string input;
  std::string encoder = "features";
  std::string out;
  bool no_crf = false;
  std::string id;
  std::string lang = "und";
  int parallel = 1;
};

// A .txt input is one raw email body; anything else is a corpus file.
Corpus load_input(const PredictOptions& opts, const TaxonomyRegistry& registry,
                  const Taxonomy& taxonomy) {
  const std::filesystem::path path(opts.input);
  if (path.extension() != ".txt") return read_corpus(opts.input, registry);
  const std::string id = opts.id.empty() ? path.stem().string() : opts.id;
  Email email(id, opts.lang, split_lines(read_file(opts.input)));
  // Placeholder zones; only the lines matter for prediction.
  std::vector<std::string> zones(email.size(), taxonomy.zone(0));
  return Corpus(path.stem().string(), taxonomy, {AnnotatedEmail(std::move(email), zones)});
}

}  // namespace

void add_predict(CLI::App& root, const Context& context) {
  auto opts = std::make_shared<PredictOptions>();
  CLI::App* cmd = root.add_subcommand("predict", "Label every line of a corpus or raw email");
  cmd->add_option("-m,--model", opts->model, "Trained model file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("-i,--input", opts->input, "Corpus (.jsonl) or raw email body (.txt)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--encoder", opts->encoder, "features | file:<path> | service:<url>");
  cmd->add_option("-o,--out", opts->out, "Predicted corpus (.jsonl)")->required();
  cmd->add_flag("--no-crf", opts->no_crf, "Per-line argmax instead of Viterbi decoding");
  cmd->add_option("--id", opts->id, "Email id for .txt input (default: file stem)");
  cmd->add_option("--lang", opts->lang, "Language tag for .txt input");
  cmd->add_option("--parallel", opts->parallel, "Emails encoded concurrently")
      ->check(CLI::PositiveNumber);

  cmd->callback([cmd, opts, &context] {
    echo_config(*cmd);
    const auto registry = context.registry();
    const ModelParams model = load_model(opts->model);
    const Taxonomy taxonomy = model_taxonomy(model, registry);
    const Corpus input = load_input(*opts, registry, taxonomy);
    const auto encoder = open_encoder(opts->encoder, opts->parallel);
    const Corpus predicted =
        predict_corpus(model, taxonomy, input, *encoder,
                       opts->no_crf ? Decoding::kArgmax : Decoding::kCrf, opts->parallel);
    write_corpus(predicted, opts->out);
    spdlog::info("labeled {} emails ({} lines) into {}", predicted.size(),
                 predicted.line_count(), opts->out);
  });
}

}  // namespace zoneseg::cli
