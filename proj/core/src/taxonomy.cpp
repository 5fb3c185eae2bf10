#include "zoneseg/taxonomy.hpp"

#include <nlohmann/json.hpp>

#include "builtin_taxonomy_data.hpp"
#include "zoneseg/error.hpp"
#include "zoneseg/io.hpp"

namespace zoneseg {

using ordered_json = nlohmann::ordered_json;

const std::string& TaxonomyMapping::apply(std::string_view zone,
                                          std::size_t line_index) const {
  auto it = table.find(zone);
  if (it == table.end()) throw UnknownZoneError(std::string(zone), line_index);
  return it->second;
}

TaxonomyMapping TaxonomyMapping::identity(const Taxonomy& taxonomy) {
  TaxonomyMapping mapping{taxonomy.name(), taxonomy.name(), {}};
  for (const auto& zone : taxonomy.zones()) mapping.table.emplace(zone, zone);
  return mapping;
}

Taxonomy::Taxonomy(std::string name, std::vector<std::string> zones,
                   std::map<std::string, TaxonomyMapping> mappings)
    : name_(std::move(name)),
      zones_(std::move(zones)),
      mappings_(std::move(mappings)) {
  if (name_.empty()) throw ValidationError("taxonomy name must not be empty");
  if (zones_.empty()) {
    throw ValidationError("taxonomy '" + name_ + "' has no zones");
  }
  for (std::size_t i = 0; i < zones_.size(); ++i) {
    if (zones_[i].empty()) {
      throw ValidationError("taxonomy '" + name_ + "' has an empty zone name");
    }
    if (!index_.emplace(zones_[i], i).second) {
      throw ValidationError("taxonomy '" + name_ + "' repeats zone '" +
                            zones_[i] + "'");
    }
  }
  for (auto& [target, mapping] : mappings_) {
    mapping.source = name_;
    mapping.target = target;
    for (const auto& zone : zones_) {
      if (!mapping.table.contains(zone)) {
        throw ValidationError("mapping " + name_ + "->" + target +
                              " does not cover zone '" + zone + "'");
      }
    }
    for (const auto& [from, to] : mapping.table) {
      if (!contains(from)) {
        throw ValidationError("mapping " + name_ + "->" + target +
                              " lists unknown zone '" + from + "'");
      }
    }
  }
}

Taxonomy Taxonomy::from_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("taxonomy JSON: ") + e.what(), 0);
  }
  try {
    std::map<std::string, TaxonomyMapping> mappings;
    if (doc.contains("mappings")) {
      for (const auto& [target, table] : doc.at("mappings").items()) {
        TaxonomyMapping mapping;
        for (const auto& [from, to] : table.items()) {
          mapping.table.emplace(from, to.get<std::string>());
        }
        mappings.emplace(target, std::move(mapping));
      }
    }
    return Taxonomy(doc.at("name").get<std::string>(),
                    doc.at("zones").get<std::vector<std::string>>(),
                    std::move(mappings));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("taxonomy JSON: ") + e.what());
  }
}

Taxonomy Taxonomy::load(const std::string& path) {
  return from_json(read_file(path));
}

std::string Taxonomy::to_json() const {
  ordered_json doc;
  doc["name"] = name_;
  doc["zones"] = zones_;
  ordered_json maps = ordered_json::object();
  for (const auto& [target, mapping] : mappings_) {
    ordered_json table = ordered_json::object();
    for (const auto& zone : zones_) table[zone] = mapping.table.at(zone);
    maps[target] = std::move(table);
  }
  doc["mappings"] = std::move(maps);
  return doc.dump(2);
}

bool Taxonomy::contains(std::string_view zone) const {
  return index_.find(zone) != index_.end();
}

std::optional<std::size_t> Taxonomy::index_of(std::string_view zone) const {
  auto it = index_.find(zone);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Taxonomy::has_mapping(std::string_view target) const {
  return target == name_ || mappings_.contains(std::string(target));
}

TaxonomyMapping Taxonomy::mapping(std::string_view target) const {
  if (target == name_) return TaxonomyMapping::identity(*this);
  auto it = mappings_.find(std::string(target));
  if (it == mappings_.end()) {
    throw ValidationError("taxonomy '" + name_ + "' has no mapping onto '" +
                          std::string(target) + "'");
  }
  return it->second;
}

void Taxonomy::validate_mapping_targets(const Taxonomy& target) const {
  auto it = mappings_.find(target.name());
  if (it == mappings_.end()) return;
  for (const auto& [from, to] : it->second.table) {
    if (!target.contains(to)) {
      throw ValidationError("mapping " + name_ + "->" + target.name() +
                            " sends '" + from + "' to unknown zone '" + to +
                            "'");
    }
  }
}

bool operator==(const Taxonomy& a, const Taxonomy& b) {
  if (a.name_ != b.name_ || a.zones_ != b.zones_ ||
      a.mappings_.size() != b.mappings_.size()) {
    return false;
  }
  for (const auto& [target, mapping] : a.mappings_) {
    auto it = b.mappings_.find(target);
    if (it == b.mappings_.end() || it->second.table != mapping.table) {
      return false;
    }
  }
  return true;
}

std::vector<Taxonomy> builtin_taxonomies() {
  std::vector<Taxonomy> out;
  for (std::string_view text : detail::kBuiltinTaxonomyJson) {
    out.push_back(Taxonomy::from_json(text));
  }
  return out;
}

TaxonomyRegistry::TaxonomyRegistry() {
  for (auto& taxonomy : builtin_taxonomies()) add(std::move(taxonomy));
}

TaxonomyRegistry TaxonomyRegistry::empty() { return TaxonomyRegistry(EmptyTag{}); }

void TaxonomyRegistry::add(Taxonomy taxonomy) {
  for (const auto& [name, other] : taxonomies_) {
    if (name == taxonomy.name()) continue;
    taxonomy.validate_mapping_targets(other);
    other.validate_mapping_targets(taxonomy);
  }
  const std::string name = taxonomy.name();
  taxonomies_.insert_or_assign(name, std::move(taxonomy));
}

void TaxonomyRegistry::add_file(const std::string& path) {
  add(Taxonomy::load(path));
}

const Taxonomy* TaxonomyRegistry::find(std::string_view name) const {
  auto it = taxonomies_.find(name);
  return it == taxonomies_.end() ? nullptr : &it->second;
}

const Taxonomy& TaxonomyRegistry::get(std::string_view name) const {
  if (const Taxonomy* taxonomy = find(name)) return *taxonomy;
  throw ValidationError("unknown taxonomy '" + std::string(name) + "'");
}

std::vector<std::string> TaxonomyRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, taxonomy] : taxonomies_) out.push_back(name);
  return out;
}

AnnotatedEmail map_annotation(const AnnotatedEmail& annotated,
                              const TaxonomyMapping& mapping) {
  std::vector<std::string> zones;
  zones.reserve(annotated.size());
  for (std::size_t i = 0; i < annotated.size(); ++i) {
    zones.push_back(mapping.apply(annotated.zones()[i], i));
  }
  return AnnotatedEmail(annotated.email(), std::move(zones),
                        annotated.annotator());
}

}  // namespace zoneseg
