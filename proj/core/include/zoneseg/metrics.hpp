#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "zoneseg/corpus.hpp"

namespace zoneseg {

struct ZoneScores {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  long support = 0;
  long predicted = 0;
};

struct EvalReport {
  std::string taxonomy;
  std::vector<std::string> zones;
  long n_lines = 0;
  double accuracy = 0.0;
  std::map<std::string, ZoneScores> per_zone;
  double macro_f1 = 0.0;
  std::vector<std::vector<long>> confusion;  // [gold][predicted]

  std::string to_json() const;
  // "All" accuracy row then per-zone recall rows.
  std::string render_table() const;
};

enum class F1Average { kMacro, kMicro };

// Pools every line of every email. Emails are matched by id, so order does
// not matter. Zero denominators give 0. Throws ValidationError naming the
// email on id or length mismatches.
EvalReport evaluate(const std::vector<AnnotatedEmail>& gold,
                    const std::vector<AnnotatedEmail>& pred,
                    const Taxonomy& taxonomy);
EvalReport evaluate(const Corpus& gold, const Corpus& pred);

// Per-zone scores from a confusion matrix.
EvalReport report_from_confusion(const Taxonomy& taxonomy,
                                 std::vector<std::vector<long>> confusion);

// Macro F1 averages zones that occur in gold or predictions.
double f1_score(const EvalReport& report, F1Average average);

double cohens_kappa(std::span<const std::string> a,
                    std::span<const std::string> b);

struct AgreementReport {
  std::string group;  // language tag or "all"
  long n_lines = 0;
  double accuracy = 0.0;
  double f1_a1a2 = 0.0;
  double f1_a2a1 = 0.0;
  double kappa = 0.0;
  F1Average f1_average = F1Average::kMacro;
};

AgreementReport agreement_report(const Corpus& a1, const Corpus& a2,
                                 F1Average average = F1Average::kMacro);
// One report per "lang" value in sorted order, then the pooled "all" row.
std::vector<AgreementReport> agreement_by_language(
    const Corpus& a1, const Corpus& a2, F1Average average = F1Average::kMacro);

std::string agreement_to_json(const std::vector<AgreementReport>& reports);
std::string render_agreement_table(const std::vector<AgreementReport>& reports);

// Train/test domain transfer row: accuracy under a coarse 2- and 5-zone view.
struct DomainTransferRow {
  std::string model;
  std::string train_corpus;
  std::string test_corpus;
  double accuracy_two2 = 0.0;
  double accuracy_two5 = 0.0;
};

std::string render_domain_transfer_table(
    const std::vector<DomainTransferRow>& rows);
std::string domain_transfer_to_json(const std::vector<DomainTransferRow>& rows);

}  // namespace zoneseg
