#include <deque>
#include <future>

#include <spdlog/spdlog.h>

#include "context.hpp"
#include "zoneseg/error.hpp"

namespace zoneseg::cli {
namespace {

struct EncodeOptions {
  std::string corpus;
  std::string service;
  std::string encoder;
  std::string out;
  int parallel = 4;
  int dim = kTransformerDim;
  int timeout_ms = 30000;
};

std::vector<std::vector<float>> to_rows(const std::vector<LineEmbedding>& embeddings) {
  std::vector<std::vector<float>> rows;
  rows.reserve(embeddings.size());
  for (const auto& e : embeddings) {
    std::vector<float> row(static_cast<std::size_t>(e.size()));
    for (Eigen::Index j = 0; j < e.size(); ++j) {
      row[static_cast<std::size_t>(j)] = static_cast<float>(e(j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void add_encode(CLI::App& root, const Context& context) {
  auto opts = std::make_shared<EncodeOptions>();
  CLI::App* cmd = root.add_subcommand("encode", "Materialize line embeddings into a LEMB file");
  cmd->add_option("-c,--corpus", opts->corpus, "Corpus (.jsonl) to encode")
      ->required()
      ->check(CLI::ExistingFile);
  auto* service = cmd->add_option("--service", opts->service, "Embedding service URL");
  auto* encoder = cmd->add_option("--encoder", opts->encoder,
                                  "Any encoder spec instead of --service");
  service->excludes(encoder);
  cmd->add_option("-o,--out", opts->out, "LEMB file to write (index goes to <out>.idx.jsonl)")
      ->required();
  cmd->add_option("--parallel", opts->parallel, "Concurrent service requests")
      ->check(CLI::Range(1, 256));
  cmd->add_option("--dim", opts->dim, "Expected service dimension; 0 takes /v1/health")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--timeout-ms", opts->timeout_ms, "Service request timeout")
      ->check(CLI::PositiveNumber);

  cmd->callback([cmd, opts, &context] {
    if (opts->service.empty() == opts->encoder.empty()) {
      throw CLI::RequiredError("exactly one of --service or --encoder");
    }
    echo_config(*cmd);
    const Corpus corpus = read_corpus(opts->corpus, context.registry());
    EncoderSpec spec = EncoderSpec::parse(opts->service.empty() ? opts->encoder
                                                                : "service:" + opts->service);
    spec.dim = opts->dim;
    spec.max_in_flight = opts->parallel;
    spec.timeout = std::chrono::milliseconds(opts->timeout_ms);
    const auto enc = make_encoder(spec);
    spdlog::info("encoding {} emails ({} lines) with {} at dim {}", corpus.size(),
                 corpus.line_count(), spec.to_string(), enc->dim());

    // Up to --parallel emails in flight; rows are written in corpus order.
    // An exception leaves the writer uncommitted, which removes its temp file.
    EmbeddingWriter writer(opts->out, static_cast<std::uint32_t>(enc->dim()));
    std::deque<std::future<std::vector<LineEmbedding>>> pending;
    std::size_t next = 0;
    std::size_t written = 0;
    auto drain = [&] {
      for (auto& f : pending) {
        if (f.valid()) f.wait();
      }
    };
    try {
      while (written < corpus.size()) {
        while (next < corpus.size() && pending.size() < static_cast<std::size_t>(opts->parallel)) {
          const Email& email = corpus.emails()[next++].email();
          pending.push_back(std::async(std::launch::async,
                                       [&enc, &email] { return enc->encode_email(email); }));
        }
        const auto embeddings = pending.front().get();
        pending.pop_front();
        const Email& email = corpus.emails()[written++].email();
        if (embeddings.size() != email.size()) {
          throw ValidationError("encoder returned " + std::to_string(embeddings.size()) +
                                " rows for email '" + email.id() + "'");
        }
        writer.add_email(email.id(), to_rows(embeddings));
      }
    } catch (...) {
      drain();
      throw;
    }
    writer.commit();
    spdlog::info("wrote {} rows of dim {} to {}", writer.count(), enc->dim(), opts->out);
  });
}

}  // namespace zoneseg::cli
