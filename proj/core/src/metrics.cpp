#include "zoneseg/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "zoneseg/error.hpp"

namespace zoneseg {

using ordered_json = nlohmann::ordered_json;

namespace {

double ratio(long num, long den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

EvalReport report_from_confusion(const Taxonomy& taxonomy,
                                 std::vector<std::vector<long>> confusion) {
  const std::size_t k = taxonomy.size();
  EvalReport report;
  report.taxonomy = taxonomy.name();
  report.zones = taxonomy.zones();
  long trace = 0;
  std::vector<long> col_sums(k, 0);
  for (std::size_t g = 0; g < k; ++g) {
    for (std::size_t p = 0; p < k; ++p) {
      report.n_lines += confusion[g][p];
      col_sums[p] += confusion[g][p];
    }
    trace += confusion[g][g];
  }
  report.accuracy = ratio(trace, report.n_lines);
  for (std::size_t z = 0; z < k; ++z) {
    ZoneScores scores;
    for (std::size_t p = 0; p < k; ++p) scores.support += confusion[z][p];
    scores.predicted = col_sums[z];
    scores.recall = ratio(confusion[z][z], scores.support);
    scores.precision = ratio(confusion[z][z], scores.predicted);
    scores.f1 = harmonic(scores.precision, scores.recall);
    report.per_zone.emplace(taxonomy.zone(z), scores);
  }
  report.confusion = std::move(confusion);
  report.macro_f1 = f1_score(report, F1Average::kMacro);
  return report;
}

double f1_score(const EvalReport& report, F1Average average) {
  if (average == F1Average::kMicro) {
    // Single-label micro F1 equals pooled accuracy.
    return report.accuracy;
  }
  double sum = 0.0;
  int present = 0;
  for (const auto& [zone, scores] : report.per_zone) {
    if (scores.support == 0 && scores.predicted == 0) continue;
    sum += scores.f1;
    ++present;
  }
  return present == 0 ? 0.0 : sum / present;
}

EvalReport evaluate(const std::vector<AnnotatedEmail>& gold,
                    const std::vector<AnnotatedEmail>& pred, const Taxonomy& taxonomy) {
  if (gold.size() != pred.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) +
                          " emails, predictions have " + std::to_string(pred.size()));
  }
  std::map<std::string_view, const AnnotatedEmail*> by_id;
  for (const auto& p : pred) by_id.emplace(p.id(), &p);

  const std::size_t k = taxonomy.size();
  std::vector<std::vector<long>> confusion(k, std::vector<long>(k, 0));
  for (const auto& g : gold) {
    auto it = by_id.find(g.id());
    if (it == by_id.end()) {
      throw ValidationError("email '" + g.id() + "' has no prediction");
    }
    const AnnotatedEmail& p = *it->second;
    if (p.size() != g.size()) {
      throw ValidationError("email '" + g.id() + "': gold has " + std::to_string(g.size()) +
                            " lines, prediction has " + std::to_string(p.size()));
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto gi = taxonomy.index_of(g.zones()[i]);
      const auto pi = taxonomy.index_of(p.zones()[i]);
      if (!gi || !pi) {
        throw ValidationError("email '" + g.id() + "': zone outside taxonomy '" +
                              taxonomy.name() + "' at line " + std::to_string(i));
      }
      ++confusion[*gi][*pi];
    }
  }
  return report_from_confusion(taxonomy, std::move(confusion));
}

EvalReport evaluate(const Corpus& gold, const Corpus& pred) {
  if (!(gold.taxonomy() == pred.taxonomy())) {
    throw ValidationError("gold uses taxonomy '" + gold.taxonomy().name() +
                          "', predictions use '" + pred.taxonomy().name() + "'");
  }
  return evaluate(gold.emails(), pred.emails(), gold.taxonomy());
}

std::string EvalReport::to_json() const {
  ordered_json doc;
  doc["taxonomy"] = taxonomy;
  doc["n_lines"] = n_lines;
  doc["accuracy"] = accuracy;
  doc["macro_f1"] = macro_f1;
  ordered_json zones_json = ordered_json::object();
  for (const auto& zone : zones) {
    const ZoneScores& s = per_zone.at(zone);
    ordered_json entry;
    entry["recall"] = s.recall;
    entry["precision"] = s.precision;
    entry["f1"] = s.f1;
    entry["support"] = s.support;
    zones_json[zone] = std::move(entry);
  }
  doc["per_zone"] = std::move(zones_json);
  doc["zones"] = zones;
  doc["confusion"] = confusion;
  return doc.dump(2);
}

std::string EvalReport::render_table() const {
  std::size_t width = 4;
  for (const auto& zone : zones) width = std::max(width, zone.size());
  std::string out = fmt::format("{:<{}}  {:>8}  {:>9}  {:>7}\n", "zone", width, "recall",
                                "precision", "support");
  out += fmt::format("{:<{}}  {:>8.2f}  {:>9}  {:>7}\n", "All", width, accuracy, "", n_lines);
  for (const auto& zone : zones) {
    const ZoneScores& s = per_zone.at(zone);
    out += fmt::format("{:<{}}  {:>8.2f}  {:>9.2f}  {:>7}\n", zone, width, s.recall,
                       s.precision, s.support);
  }
  return out;
}

double cohens_kappa(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() != b.size()) {
    throw ValidationError("kappa needs equal-length label lists (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw ValidationError("kappa needs at least one label");
  std::map<std::string_view, long> count_a, count_b;
  long agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++count_a[a[i]];
    ++count_b[b[i]];
    agree += a[i] == b[i] ? 1 : 0;
  }
  const double n = static_cast<double>(a.size());
  const double observed = static_cast<double>(agree) / n;
  double expected = 0.0;
  for (const auto& [label, ca] : count_a) {
    auto it = count_b.find(label);
    if (it == count_b.end()) continue;
    expected += (static_cast<double>(ca) / n) * (static_cast<double>(it->second) / n);
  }
  if (expected >= 1.0) return observed >= 1.0 ? 1.0 : 0.0;
  return (observed - expected) / (1.0 - expected);
}

namespace {

struct PooledLabels {
  std::vector<std::string> a1;
  std::vector<std::string> a2;
};

// Pools aligned labels of the emails selected by keep(lang).
template <typename Keep>
PooledLabels pool(const Corpus& a1, const Corpus& a2, Keep&& keep) {
  std::map<std::string_view, const AnnotatedEmail*> second;
  for (const auto& e : a2.emails()) second.emplace(e.id(), &e);
  PooledLabels out;
  for (const auto& first : a1.emails()) {
    if (!keep(first.email().lang())) continue;
    const AnnotatedEmail& other = *second.at(first.id());
    out.a1.insert(out.a1.end(), first.zones().begin(), first.zones().end());
    out.a2.insert(out.a2.end(), other.zones().begin(), other.zones().end());
  }
  return out;
}

void check_aligned(const Corpus& a1, const Corpus& a2) {
  if (a1.size() != a2.size()) {
    throw ValidationError("annotator corpora hold " + std::to_string(a1.size()) + " and " +
                          std::to_string(a2.size()) + " emails");
  }
  std::map<std::string_view, const AnnotatedEmail*> second;
  for (const auto& e : a2.emails()) second.emplace(e.id(), &e);
  for (const auto& first : a1.emails()) {
    auto it = second.find(first.id());
    if (it == second.end()) {
      throw ValidationError("email '" + first.id() + "' is missing from the second corpus");
    }
    if (it->second->size() != first.size()) {
      throw ValidationError("email '" + first.id() + "' has different line counts");
    }
  }
}

// Union of both vocabularies so the two annotators may use different schemas.
Taxonomy joint_taxonomy(const Corpus& a1, const Corpus& a2) {
  if (a1.taxonomy() == a2.taxonomy()) return a1.taxonomy();
  std::vector<std::string> zones = a1.taxonomy().zones();
  for (const auto& zone : a2.taxonomy().zones()) {
    if (!a1.taxonomy().contains(zone)) zones.push_back(zone);
  }
  return Taxonomy(a1.taxonomy().name() + "+" + a2.taxonomy().name(), std::move(zones));
}

AgreementReport agreement_from(const PooledLabels& labels, const Taxonomy& taxonomy,
                               std::string group, F1Average average) {
  AgreementReport report;
  report.group = std::move(group);
  report.f1_average = average;
  report.n_lines = static_cast<long>(labels.a1.size());
  if (labels.a1.empty()) return report;

  const std::size_t k = taxonomy.size();
  std::vector<std::vector<long>> confusion(k, std::vector<long>(k, 0));
  for (std::size_t i = 0; i < labels.a1.size(); ++i) {
    ++confusion[*taxonomy.index_of(labels.a1[i])][*taxonomy.index_of(labels.a2[i])];
  }
  std::vector<std::vector<long>> transposed(k, std::vector<long>(k, 0));
  for (std::size_t g = 0; g < k; ++g) {
    for (std::size_t p = 0; p < k; ++p) transposed[p][g] = confusion[g][p];
  }
  const EvalReport a1_gold = report_from_confusion(taxonomy, std::move(confusion));
  const EvalReport a2_gold = report_from_confusion(taxonomy, std::move(transposed));
  report.accuracy = a1_gold.accuracy;
  report.f1_a1a2 = f1_score(a1_gold, average);
  report.f1_a2a1 = f1_score(a2_gold, average);
  report.kappa = cohens_kappa(labels.a1, labels.a2);
  return report;
}

}  // namespace

AgreementReport agreement_report(const Corpus& a1, const Corpus& a2, F1Average average) {
  check_aligned(a1, a2);
  return agreement_from(pool(a1, a2, [](const std::string&) { return true; }),
                        joint_taxonomy(a1, a2), "all", average);
}

std::vector<AgreementReport> agreement_by_language(const Corpus& a1, const Corpus& a2,
                                                   F1Average average) {
  check_aligned(a1, a2);
  const Taxonomy taxonomy = joint_taxonomy(a1, a2);
  std::set<std::string> langs;
  for (const auto& e : a1.emails()) langs.insert(e.email().lang());
  std::vector<AgreementReport> out;
  for (const auto& lang : langs) {
    out.push_back(agreement_from(
        pool(a1, a2, [&](const std::string& l) { return l == lang; }), taxonomy, lang, average));
  }
  out.push_back(agreement_from(pool(a1, a2, [](const std::string&) { return true; }),
                               taxonomy, "all", average));
  return out;
}

std::string agreement_to_json(const std::vector<AgreementReport>& reports) {
  ordered_json doc = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json row;
    row["group"] = r.group;
    row["n_lines"] = r.n_lines;
    row["accuracy"] = r.accuracy;
    row["f1_a1a2"] = r.f1_a1a2;
    row["f1_a2a1"] = r.f1_a2a1;
    row["kappa"] = r.kappa;
    row["f1_average"] = r.f1_average == F1Average::kMacro ? "macro" : "micro";
    doc.push_back(std::move(row));
  }
  return doc.dump(2);
}

std::string render_agreement_table(const std::vector<AgreementReport>& reports) {
  std::string out = fmt::format("{:<8}  {:>8}  {:>8}  {:>8}  {:>8}  {:>7}\n", "lang",
                                "accuracy", "F1 A1A2", "F1 A2A1", "k", "lines");
  for (const auto& r : reports) {
    out += fmt::format("{:<8}  {:>8.2f}  {:>8.2f}  {:>8.2f}  {:>8.2f}  {:>7}\n", r.group,
                       r.accuracy, r.f1_a1a2, r.f1_a2a1, r.kappa, r.n_lines);
  }
  return out;
}

std::string render_domain_transfer_table(const std::vector<DomainTransferRow>& rows) {
  std::size_t model_width = 5;
  std::size_t corpus_width = 10;
  for (const auto& r : rows) {
    model_width = std::max(model_width, r.model.size());
    corpus_width = std::max(corpus_width, r.train_corpus.size() + r.test_corpus.size() + 1);
  }
  std::string out = fmt::format("{:<{}}  {:<{}}  {:>8}  {:>8}\n", "Model", model_width,
                                "Train/Test", corpus_width, "2 zones", "5 zones");
  for (const auto& r : rows) {
    out += fmt::format("{:<{}}  {:<{}}  {:>8.2f}  {:>8.2f}\n", r.model, model_width,
                       r.train_corpus + "/" + r.test_corpus, corpus_width, r.accuracy_two2,
                       r.accuracy_two5);
  }
  return out;
}

std::string domain_transfer_to_json(const std::vector<DomainTransferRow>& rows) {
  ordered_json doc = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row;
    row["model"] = r.model;
    row["train"] = r.train_corpus;
    row["test"] = r.test_corpus;
    row["accuracy_2_zones"] = r.accuracy_two2;
    row["accuracy_5_zones"] = r.accuracy_two5;
    doc.push_back(std::move(row));
  }
  return doc.dump(2);
}

}  // namespace zoneseg
