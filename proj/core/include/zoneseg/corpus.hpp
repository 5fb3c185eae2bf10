#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "zoneseg/email.hpp"
#include "zoneseg/taxonomy.hpp"

namespace zoneseg {

// A named set of annotated emails under one taxonomy.
class Corpus {
 public:
  // Throws ValidationError (naming the email id) if a zone is outside the
  // taxonomy, a line/zone count disagrees, or an id repeats.
  Corpus(std::string name, Taxonomy taxonomy,
         std::vector<AnnotatedEmail> emails);

  const std::string& name() const { return name_; }
  const Taxonomy& taxonomy() const { return taxonomy_; }
  const std::vector<AnnotatedEmail>& emails() const { return emails_; }
  std::size_t size() const { return emails_.size(); }
  bool empty() const { return emails_.empty(); }
  std::size_t line_count() const;

  // Zone indices of one email under this corpus' taxonomy.
  std::vector<int> label_indices(std::size_t email_index) const;

  // Every annotation remapped onto target through the taxonomy's mapping.
  Corpus mapped_to(const Taxonomy& target) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::string name_;
  Taxonomy taxonomy_;
  std::vector<AnnotatedEmail> emails_;
};

inline constexpr const char* kCorpusFormat = "zoneseg-corpus";
inline constexpr int kCorpusVersion = 1;

// JSONL: header record then one email per line. Taxonomy names resolve
// through registry.
Corpus read_corpus(const std::string& path,
                   const TaxonomyRegistry& registry = TaxonomyRegistry());
Corpus parse_corpus(std::string_view text, const std::string& default_name,
                    const TaxonomyRegistry& registry = TaxonomyRegistry());
std::string serialize_corpus(const Corpus& corpus);
// Writes through a temporary file and renames it into place.
void write_corpus(const Corpus& corpus, const std::string& path);

struct SplitSpec {
  double train_fraction = 0.8;
  double dev_fraction = 0.1;
  double test_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct CorpusSplit {
  Corpus train;
  Corpus dev;
  Corpus test;
};

// Email-level partition after a seeded shuffle. Dev and test sizes are
// floor(n * fraction); the remainder goes to train.
CorpusSplit split_corpus(const Corpus& corpus, const SplitSpec& spec);

}  // namespace zoneseg
