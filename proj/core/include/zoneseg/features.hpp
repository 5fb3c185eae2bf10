#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>

namespace zoneseg {

// Positions in the hand-crafted line feature vector. All entries lie in
// [0, 1]; counts are divided by the matching cap after clamping.
enum class Feature : int {
  kQuoteDepth = 0,
  kIsEmpty,
  kIsSigDelimiter,
  kIsSeparator,
  kLeadingWhitespace,
  kLength,
  kDigitFraction,
  kPunctuationFraction,
  kUppercaseFraction,
  kHasAt,
  kHasUrl,
  kEndsWithColon,
  kGreeting,
  kClosing,
  kCodeSymbolFraction,
  kTabCount,
};

inline constexpr int kFeatureCount = 16;

inline constexpr int kQuoteDepthCap = 5;
inline constexpr int kLeadingWhitespaceCap = 20;
inline constexpr int kLengthCap = 200;
inline constexpr int kTabCap = 8;

const std::array<std::string_view, kFeatureCount>& feature_names();

// Pure function of the line. Fractions are over Unicode code points, but
// only ASCII characters are classified (digit, punctuation, uppercase).
Eigen::VectorXd feature_vector(std::string_view line);

// Number of leading '>' characters, skipping spaces before and between them.
int quote_depth(std::string_view line);
bool is_greeting(std::string_view line);
bool is_closing(std::string_view line);

}  // namespace zoneseg
