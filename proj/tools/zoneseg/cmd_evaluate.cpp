#include <iomanip>
#include <iostream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "context.hpp"
#include "zoneseg/error.hpp"
#include "zoneseg/io.hpp"
#include "zoneseg/metrics.hpp"

namespace zoneseg::cli {
namespace {

struct EvaluateOptions {
  std::string gold;
  std::string pred;
  std::string model;
  std::string encoder = "features";
  bool no_crf = false;
  int parallel = 1;
  std::string map_taxonomy;
  std::string f1 = "macro";
  std::string report_out;
  std::string transfer;
};

Corpus mapped(const Corpus& corpus, const Taxonomy& target) {
  if (corpus.taxonomy().name() == target.name()) return corpus;
  if (!corpus.taxonomy().has_mapping(target.name())) {
    throw ValidationError("corpus '" + corpus.name() + "' (" + corpus.taxonomy().name() +
                          ") has no mapping onto " + target.name());
  }
  return corpus.mapped_to(target);
}

double accuracy_under(const Corpus& gold, const Corpus& pred, const Taxonomy& target) {
  return evaluate(mapped(gold, target), mapped(pred, target)).accuracy;
}

}  // namespace

void add_evaluate(CLI::App& root, const Context& context) {
  auto opts = std::make_shared<EvaluateOptions>();
  CLI::App* cmd = root.add_subcommand(
      "evaluate", "Score predictions against gold (or run a model over a test corpus)");
  cmd->add_option("-g,--gold", opts->gold, "Gold corpus (.jsonl)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* pred = cmd->add_option("-p,--pred", opts->pred, "Predicted corpus (.jsonl)")
                   ->check(CLI::ExistingFile);
  auto* model = cmd->add_option("-m,--model", opts->model, "Model to run over the gold lines")
                    ->check(CLI::ExistingFile);
  pred->excludes(model);
  cmd->add_option("--encoder", opts->encoder, "Encoder for --model")->needs(model);
  cmd->add_flag("--no-crf", opts->no_crf, "Argmax decoding for --model")->needs(model);
  cmd->add_option("--parallel", opts->parallel, "Emails encoded concurrently for --model")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--map-taxonomy", opts->map_taxonomy,
                  "Evaluate after mapping both sides onto this taxonomy");
  cmd->add_option("--f1", opts->f1, "F1 averaging")->check(CLI::IsMember({"macro", "micro"}));
  cmd->add_option("--report-out", opts->report_out, "JSON report to write");
  cmd->add_option("--transfer", opts->transfer,
                  "Training-corpus label; adds the 2-/5-zone domain transfer row");

  cmd->callback([cmd, opts, &context] {
    if (opts->pred.empty() && opts->model.empty()) {
      throw CLI::RequiredError("--pred or --model");
    }
    echo_config(*cmd);
    const auto registry = context.registry();
    const Corpus gold = read_corpus(opts->gold, registry);
    std::optional<Corpus> pred;
    if (!opts->pred.empty()) {
      pred = read_corpus(opts->pred, registry);
    } else {
      const ModelParams params = load_model(opts->model);
      const auto encoder = open_encoder(opts->encoder, opts->parallel);
      pred = predict_corpus(params, model_taxonomy(params, registry), gold, *encoder,
                            opts->no_crf ? Decoding::kArgmax : Decoding::kCrf, opts->parallel);
    }

    const std::string target_name =
        opts->map_taxonomy.empty() ? gold.taxonomy().name() : opts->map_taxonomy;
    if (opts->map_taxonomy.empty() && pred->taxonomy().name() != gold.taxonomy().name()) {
      throw ValidationError("gold uses taxonomy '" + gold.taxonomy().name() +
                            "' but predictions use '" + pred->taxonomy().name() +
                            "'; pass --map-taxonomy");
    }
    const Taxonomy& target = registry.get(target_name);
    const EvalReport report = evaluate(mapped(gold, target), mapped(*pred, target));
    const auto average = opts->f1 == "macro" ? F1Average::kMacro : F1Average::kMicro;
    const double f1 = f1_score(report, average);

    std::cout << report.render_table();
    std::cout << "F1 (" << opts->f1 << "): " << std::fixed << std::setprecision(2) << f1
              << "\n";

    auto json = nlohmann::ordered_json::parse(report.to_json());
    json["f1_average"] = opts->f1;
    json["f1"] = f1;
    if (!opts->transfer.empty()) {
      const DomainTransferRow row{
          opts->model.empty() ? pred->name() : opts->model, opts->transfer, gold.name(),
          accuracy_under(gold, *pred, registry.get("two2")),
          accuracy_under(gold, *pred, registry.get("two5"))};
      std::cout << "\n" << render_domain_transfer_table({row});
      json["domain_transfer"] = nlohmann::ordered_json::parse(domain_transfer_to_json({row}));
    }
    if (!opts->report_out.empty()) write_file_atomic(opts->report_out, json.dump(2) + "\n");
    spdlog::info("accuracy {:.4f} over {} lines", report.accuracy, report.n_lines);
  });
}

}  // namespace zoneseg::cli
