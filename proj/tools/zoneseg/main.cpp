// zoneseg: email zoning from the command line.
//
// Exit codes: 0 success, 1 runtime failure (I/O, service), 2 usage or
// validation error (bad flags, inconsistent or malformed inputs).

#include <cstdlib>
#include <iostream>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "context.hpp"
#include "json_config.hpp"
#include "zoneseg/error.hpp"

namespace {

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

void setup_logging() {
  auto logger = spdlog::stderr_logger_st("zoneseg");
  logger->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("ZONESEG_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off
    if (level == spdlog::level::off && std::string_view(env) != "off") {
      spdlog::warn("ignoring unknown ZONESEG_LOG level '{}'", env);
    } else {
      spdlog::set_level(level);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  zoneseg::cli::Context context;

  CLI::App app{"zoneseg - multilingual email zoning (BiLSTM-CRF over line embeddings)"};
  app.config_formatter(std::make_shared<zoneseg::cli::JsonConfig>());
  app.set_config("--config", "", "JSON file with flag values, nested by subcommand");
  app.option_defaults()->always_capture_default();
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option("--taxonomy-file", context.taxonomy_files,
                 "Extra or overriding taxonomy definition (JSON); repeatable")
      ->check(CLI::ExistingFile);
  app.require_subcommand(1);
  app.footer("Environment: ZONESEG_LOG=trace|debug|info|warn|error|off (default info)");

  zoneseg::cli::add_synth(app, context);
  zoneseg::cli::add_train(app, context);
  zoneseg::cli::add_predict(app, context);
  zoneseg::cli::add_evaluate(app, context);
  zoneseg::cli::add_agreement(app, context);
  zoneseg::cli::add_encode(app, context);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ConfigError& e) {
    // CLI11 words config errors in terms of INI files
    std::string what = e.what();
    if (const auto at = what.find("INI was not able to parse "); at != std::string::npos) {
      what = "unknown config key " + what.substr(at + 26);
    }
    std::cerr << what << "\n";
    return kUsageError;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  } catch (const zoneseg::ValidationError& e) {
    spdlog::error("{}", e.what());
    return kUsageError;
  } catch (const zoneseg::ParseError& e) {
    spdlog::error("{}", e.what());
    return kUsageError;
  } catch (const zoneseg::FormatError& e) {
    spdlog::error("{}", e.what());
    return kUsageError;
  } catch (const zoneseg::MissingIdError& e) {
    spdlog::error("{}", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRuntimeFailure;
  }
  return 0;
}
