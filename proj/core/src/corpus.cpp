#include "zoneseg/corpus.hpp"

#include <cmath>
#include <filesystem>
#include <set>

#include <nlohmann/json.hpp>

#include "zoneseg/error.hpp"
#include "zoneseg/io.hpp"
#include "zoneseg/random.hpp"

namespace zoneseg {

using ordered_json = nlohmann::ordered_json;

Corpus::Corpus(std::string name, Taxonomy taxonomy,
               std::vector<AnnotatedEmail> emails)
    : name_(std::move(name)),
      taxonomy_(std::move(taxonomy)),
      emails_(std::move(emails)) {
  std::set<std::string, std::less<>> ids;
  for (const auto& annotated : emails_) {
    if (!ids.insert(annotated.id()).second) {
      throw ValidationError("email '" + annotated.id() +
                            "': duplicate id in corpus '" + name_ + "'");
    }
    for (std::size_t i = 0; i < annotated.size(); ++i) {
      if (!taxonomy_.contains(annotated.zones()[i])) {
        throw ValidationError("email '" + annotated.id() + "': zone '" +
                              annotated.zones()[i] + "' at line " +
                              std::to_string(i) + " is not in taxonomy '" +
                              taxonomy_.name() + "'");
      }
    }
  }
}

std::size_t Corpus::line_count() const {
  std::size_t total = 0;
  for (const auto& annotated : emails_) total += annotated.size();
  return total;
}

std::vector<int> Corpus::label_indices(std::size_t email_index) const {
  const auto& zones = emails_.at(email_index).zones();
  std::vector<int> labels;
  labels.reserve(zones.size());
  for (const auto& zone : zones) {
    labels.push_back(static_cast<int>(*taxonomy_.index_of(zone)));
  }
  return labels;
}

Corpus Corpus::mapped_to(const Taxonomy& target) const {
  const TaxonomyMapping mapping = taxonomy_.mapping(target.name());
  std::vector<AnnotatedEmail> mapped;
  mapped.reserve(emails_.size());
  for (const auto& annotated : emails_) {
    mapped.push_back(map_annotation(annotated, mapping));
  }
  return Corpus(name_, target, std::move(mapped));
}

namespace {

AnnotatedEmail parse_record(const ordered_json& record, std::size_t line_no) {
  std::string id = "?";
  try {
    id = record.at("id").get<std::string>();
    auto lang = record.at("lang").get<std::string>();
    auto lines = record.at("lines").get<std::vector<std::string>>();
    auto zones = record.at("zones").get<std::vector<std::string>>();
    std::optional<std::string> annotator;
    if (record.contains("annotator") && !record.at("annotator").is_null()) {
      annotator = record.at("annotator").get<std::string>();
    }
    return AnnotatedEmail(Email(id, std::move(lang), std::move(lines)),
                          std::move(zones), std::move(annotator));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("email '" + id + "': " + e.what(), line_no);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(e.what()) + " (record on line " +
                          std::to_string(line_no) + ")");
  }
}

ordered_json record_json(const AnnotatedEmail& annotated) {
  ordered_json record;
  record["id"] = annotated.id();
  record["lang"] = annotated.email().lang();
  record["lines"] = annotated.email().lines();
  record["zones"] = annotated.zones();
  if (annotated.annotator()) {
    record["annotator"] = *annotated.annotator();
  } else {
    record["annotator"] = nullptr;
  }
  return record;
}

}  // namespace

Corpus parse_corpus(std::string_view text, const std::string& default_name,
                    const TaxonomyRegistry& registry) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::optional<ordered_json> header;
  std::vector<AnnotatedEmail> emails;
  while (pos < text.size()) {
    std::size_t next = text.find('\n', pos);
    if (next == std::string_view::npos) next = text.size();
    std::string_view line = text.substr(pos, next - pos);
    pos = next + 1;
    ++line_no;
    if (line.empty()) throw ParseError("empty record", line_no);
    ordered_json record;
    try {
      record = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!record.is_object()) throw ParseError("record is not an object", line_no);
    if (!header) {
      if (record.value("format", "") != kCorpusFormat) {
        throw ParseError("missing zoneseg-corpus header", line_no);
      }
      if (record.value("version", 0) != kCorpusVersion) {
        throw ParseError("unsupported corpus version", line_no);
      }
      if (!record.contains("taxonomy") || !record["taxonomy"].is_string()) {
        throw ParseError("header lacks a taxonomy name", line_no);
      }
      header = std::move(record);
      continue;
    }
    emails.push_back(parse_record(record, line_no));
  }
  if (!header) throw ParseError("empty corpus file", 0);
  const Taxonomy& taxonomy =
      registry.get((*header)["taxonomy"].get<std::string>());
  std::string name = default_name;
  if (header->contains("name") && (*header)["name"].is_string()) {
    name = (*header)["name"].get<std::string>();
  }
  return Corpus(std::move(name), taxonomy, std::move(emails));
}

Corpus read_corpus(const std::string& path, const TaxonomyRegistry& registry) {
  const std::string text = read_file(path);
  return parse_corpus(text, std::filesystem::path(path).stem().string(),
                      registry);
}

std::string serialize_corpus(const Corpus& corpus) {
  ordered_json header;
  header["format"] = kCorpusFormat;
  header["version"] = kCorpusVersion;
  header["taxonomy"] = corpus.taxonomy().name();
  header["name"] = corpus.name();
  std::string out;
  try {
    out = header.dump() + "\n";
    for (const auto& annotated : corpus.emails()) {
      out += record_json(annotated).dump();
      out += '\n';
    }
  } catch (const nlohmann::json::type_error& e) {
    throw ValidationError(std::string("corpus is not valid UTF-8: ") + e.what());
  }
  return out;
}

void write_corpus(const Corpus& corpus, const std::string& path) {
  write_file_atomic(path, serialize_corpus(corpus));
}

CorpusSplit split_corpus(const Corpus& corpus, const SplitSpec& spec) {
  for (double f : {spec.train_fraction, spec.dev_fraction, spec.test_fraction}) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw ValidationError("split fractions must lie in [0, 1]");
    }
  }
  const double total =
      spec.train_fraction + spec.dev_fraction + spec.test_fraction;
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("split fractions must sum to 1");
  }
  if (corpus.empty()) throw ValidationError("cannot split an empty corpus");

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(spec.seed);
  shuffle_in_place(order, rng);

  const double n = static_cast<double>(corpus.size());
  // The slack absorbs products like 0.1 * 30 landing just below an integer.
  const auto dev_size = static_cast<std::size_t>(std::floor(n * spec.dev_fraction + 1e-9));
  const auto test_size = static_cast<std::size_t>(std::floor(n * spec.test_fraction + 1e-9));
  const std::size_t train_size = corpus.size() - dev_size - test_size;

  auto take = [&](std::size_t from, std::size_t count, const std::string& suffix) {
    std::vector<AnnotatedEmail> emails;
    emails.reserve(count);
    for (std::size_t i = from; i < from + count; ++i) {
      emails.push_back(corpus.emails()[order[i]]);
    }
    return Corpus(corpus.name() + "." + suffix, corpus.taxonomy(),
                  std::move(emails));
  };
  return CorpusSplit{take(0, train_size, "train"),
                     take(train_size, dev_size, "dev"),
                     take(train_size + dev_size, test_size, "test")};
}

}  // namespace zoneseg
