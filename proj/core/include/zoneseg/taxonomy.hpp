#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zoneseg/email.hpp"

namespace zoneseg {

class Taxonomy;

// A total function from the zones of one taxonomy onto another's.
struct TaxonomyMapping {
  std::string source;
  std::string target;
  std::map<std::string, std::string, std::less<>> table;

  // Throws UnknownZoneError when zone is outside the domain.
  const std::string& apply(std::string_view zone,
                           std::size_t line_index = 0) const;

  static TaxonomyMapping identity(const Taxonomy& taxonomy);
};

// Closed, ordered zone vocabulary. Zone order fixes the label indices used by
// the sequence labeler.
class Taxonomy {
 public:
  // Throws ValidationError on duplicate zones or a mapping that does not
  // cover every zone.
  Taxonomy(std::string name, std::vector<std::string> zones,
           std::map<std::string, TaxonomyMapping> mappings = {});

  // JSON object {"name", "zones", "mappings": {target: {zone: target_zone}}}.
  static Taxonomy from_json(std::string_view text);
  static Taxonomy load(const std::string& path);
  std::string to_json() const;

  const std::string& name() const { return name_; }
  const std::vector<std::string>& zones() const { return zones_; }
  std::size_t size() const { return zones_.size(); }
  const std::string& zone(std::size_t index) const { return zones_.at(index); }
  bool contains(std::string_view zone) const;
  std::optional<std::size_t> index_of(std::string_view zone) const;

  const std::map<std::string, TaxonomyMapping>& mappings() const {
    return mappings_;
  }
  bool has_mapping(std::string_view target) const;
  // Identity when target is this taxonomy. Throws ValidationError when no
  // mapping onto target exists.
  TaxonomyMapping mapping(std::string_view target) const;

  // Checks that the mapping onto target lands inside target's zones.
  void validate_mapping_targets(const Taxonomy& target) const;

  friend bool operator==(const Taxonomy& a, const Taxonomy& b);

 private:
  std::string name_;
  std::vector<std::string> zones_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, TaxonomyMapping> mappings_;
};

// gmane15, two5, two2, parsed from the data files compiled into the library.
std::vector<Taxonomy> builtin_taxonomies();

// Name-keyed lookup; starts from the builtins and accepts user overrides.
class TaxonomyRegistry {
 public:
  TaxonomyRegistry();  // builtins
  static TaxonomyRegistry empty();

  // Replaces any taxonomy of the same name and validates mapping targets
  // that are already registered.
  void add(Taxonomy taxonomy);
  void add_file(const std::string& path);

  const Taxonomy* find(std::string_view name) const;
  const Taxonomy& get(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  struct EmptyTag {};
  explicit TaxonomyRegistry(EmptyTag) {}
  std::map<std::string, Taxonomy, std::less<>> taxonomies_;
};

// Replaces zones elementwise; the email itself is untouched.
AnnotatedEmail map_annotation(const AnnotatedEmail& annotated,
                              const TaxonomyMapping& mapping);

}  // namespace zoneseg
