#pragma once

#include <istream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace zoneseg::cli {

// CLI11 config formatter for JSON files. Subcommand settings nest under the
// subcommand name: {"seed": 3, "train": {"hidden": 32}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    return render(app, default_also).dump();
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

  // Typed values where an option's text parses as JSON, strings otherwise.
  static nlohmann::ordered_json render(const CLI::App* app, bool default_also) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string& name = opt->get_lnames().front();
      if (name == "help" || name == "config") continue;
      if (opt->get_expected_min() == 0) {  // flag
        if (opt->count() > 0 || default_also) out[name] = opt->count() > 0;
        continue;
      }
      std::vector<std::string> values = opt->results();
      if (values.empty() && default_also && !opt->get_default_str().empty()) {
        values = {opt->get_default_str()};
      }
      if (values.empty()) {
        if (default_also) out[name] = nullptr;
      } else if (values.size() == 1 && opt->get_expected_max() <= 1) {
        out[name] = typed(values.front());
      } else {
        auto& array = out[name] = nlohmann::ordered_json::array();
        for (const auto& v : values) array.push_back(typed(v));
      }
    }
    for (const CLI::App* sub : app->get_subcommands()) {
      out[sub->get_name()] = render(sub, default_also);
    }
    return out;
  }

 private:
  static nlohmann::ordered_json typed(const std::string& text) {
    if (text == "true" || text == "false") return text == "true";
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(text.c_str(), &end);
    if (!text.empty() && end == text.c_str() + text.size() && errno == 0 &&
        text.find_first_not_of("+-.0123456789eE") == std::string::npos) {
      if (text.find_first_of(".eE") == std::string::npos) return std::stoll(text);
      return value;
    }
    return text;
  }

  static std::string scalar(const nlohmann::json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
    if (j.is_number()) return j.dump();
    throw CLI::ConversionError("unsupported config value " + j.dump());
  }

  static void collect(const nlohmann::json& object, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : object.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        collect(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

}  // namespace zoneseg::cli
