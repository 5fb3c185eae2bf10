#include <spdlog/spdlog.h>

#include "context.hpp"
#include "zoneseg/synthetic.hpp"

namespace zoneseg::cli {
namespace {

struct SynthOptions {
  int n = 100;
  std::uint64_t seed = 0;
  std::string taxonomy = "gmane15";
  std::string domain = "a";
  std::string name;
  std::string out;
};

}  // namespace

void add_synth(CLI::App& root, const Context& context) {
  auto opts = std::make_shared<SynthOptions>();
  CLI::App* cmd = root.add_subcommand("synth", "Generate a synthetic annotated corpus");
  cmd->add_option("-n,--n", opts->n, "Number of emails")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opts->seed, "Generator seed");
  cmd->add_option("--taxonomy", opts->taxonomy, "Zone taxonomy of the output");
  cmd->add_option("--domain", opts->domain, "Surface lexicon family")
      ->check(CLI::IsMember({"a", "b"}));
  cmd->add_option("--name", opts->name, "Corpus name (default synthetic-<domain>-<seed>)");
  cmd->add_option("-o,--out", opts->out, "Output corpus (.jsonl)")->required();

  cmd->callback([cmd, opts, &context] {
    echo_config(*cmd);
    const auto registry = context.registry();
    const auto domain = opts->domain == "a" ? SyntheticDomain::kA : SyntheticDomain::kB;
    Corpus generated = generate_synthetic_corpus(opts->n, registry.get(opts->taxonomy),
                                                 opts->seed, domain);
    const std::string name = opts->name.empty()
        ? "synthetic-" + opts->domain + "-" + std::to_string(opts->seed)
        : opts->name;
    write_corpus(Corpus(name, generated.taxonomy(), generated.emails()), opts->out);
    spdlog::info("wrote {} emails ({} lines) to {}", generated.size(),
                 generated.line_count(), opts->out);
  });
}

}  // namespace zoneseg::cli
