#include <iostream>

#include <spdlog/spdlog.h>

#include "context.hpp"
#include "zoneseg/io.hpp"
#include "zoneseg/metrics.hpp"

namespace zoneseg::cli {
namespace {

struct AgreementOptions {
  std::string a1;
  std::string a2;
  std::string f1 = "macro";
  std::string report_out;
};

}  // namespace

void add_agreement(CLI::App& root, const Context& context) {
  auto opts = std::make_shared<AgreementOptions>();
  CLI::App* cmd =
      root.add_subcommand("agreement", "Inter-annotator agreement per language and pooled");
  cmd->add_option("--a1", opts->a1, "Corpus from the first annotator")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--a2", opts->a2, "Corpus from the second annotator")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--f1", opts->f1, "F1 averaging")->check(CLI::IsMember({"macro", "micro"}));
  cmd->add_option("--report-out", opts->report_out, "JSON report to write");

  cmd->callback([cmd, opts, &context] {
    echo_config(*cmd);
    const auto registry = context.registry();
    const Corpus a1 = read_corpus(opts->a1, registry);
    const Corpus a2 = read_corpus(opts->a2, registry);
    const auto rows = agreement_by_language(
        a1, a2, opts->f1 == "macro" ? F1Average::kMacro : F1Average::kMicro);
    std::cout << render_agreement_table(rows);
    if (!opts->report_out.empty()) {
      write_file_atomic(opts->report_out, agreement_to_json(rows) + "\n");
    }
    spdlog::info("kappa {:.4f} over {} lines", rows.back().kappa, rows.back().n_lines);
  });
}

}  // namespace zoneseg::cli
