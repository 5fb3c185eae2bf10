#include "zoneseg/features.hpp"

#include <algorithm>
#include <span>
#include <cctype>
#include <string>

namespace zoneseg {
namespace {

// Openers and sign-offs in English, Portuguese, Spanish and French.
constexpr std::string_view kGreetings[] = {
    "hi",           "hello",        "hey",          "dear",
    "good morning", "good afternoon", "good evening", "greetings",
    "olá",          "ola",          "oi",           "caro",
    "cara",         "prezado",      "prezada",      "bom dia",
    "boa tarde",    "boa noite",    "hola",         "estimado",
    "estimada",     "buenos días",  "buenos dias",  "buenas tardes",
    "querido",      "querida",      "bonjour",      "bonsoir",
    "salut",        "cher",         "chère",        "madame",
    "monsieur",
};

constexpr std::string_view kClosings[] = {
    "regards",       "best regards",  "kind regards",   "warm regards",
    "best",          "cheers",        "thanks",         "thank you",
    "many thanks",   "sincerely",     "yours",          "all the best",
    "abraços",       "abraço",        "obrigado",       "obrigada",
    "atenciosamente", "cumprimentos", "saudações",      "saludos",
    "un saludo",     "gracias",       "atentamente",    "muchas gracias",
    "cordialement",  "merci",         "bien à vous",    "amicalement",
    "bien cordialement", "à bientôt",
};

// Lexicon hits only count on short lines so prose that happens to start
// with "thanks" or "dear" is not flagged.
constexpr std::size_t kGreetingMaxChars = 48;
constexpr std::size_t kClosingMaxChars = 32;

bool is_continuation_byte(unsigned char ch) { return (ch & 0xC0) == 0x80; }

std::size_t code_points(std::string_view text) {
  return static_cast<std::size_t>(std::count_if(
      text.begin(), text.end(),
      [](char ch) { return !is_continuation_byte(static_cast<unsigned char>(ch)); }));
}

bool is_space(char ch) { return ch == ' ' || ch == '\t'; }

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

// Non-ASCII bytes count as letters so "olá" does not match "ol".
bool is_word_byte(char ch) {
  const auto u = static_cast<unsigned char>(ch);
  return std::isalpha(u) || u >= 0x80;
}

bool starts_with_phrase(std::string_view line,
                        std::span<const std::string_view> phrases,
                        std::size_t max_chars) {
  const std::string_view trimmed = trim(line);
  if (trimmed.empty() || code_points(trimmed) > max_chars) return false;
  const std::string lowered = ascii_lower(trimmed);
  return std::any_of(phrases.begin(), phrases.end(), [&](std::string_view phrase) {
    if (!std::string_view(lowered).starts_with(phrase)) return false;
    return lowered.size() == phrase.size() || !is_word_byte(lowered[phrase.size()]);
  });
}

bool is_separator_line(std::string_view line) {
  std::size_t run = 0;
  while (run < line.size() && std::string_view("-_=*.").find(line[run]) !=
                                  std::string_view::npos) {
    ++run;
  }
  if (run < 3) return false;
  return std::all_of(line.begin() + static_cast<std::ptrdiff_t>(run), line.end(),
                     [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
}

double scaled(std::size_t count, int cap) {
  return static_cast<double>(std::min<std::size_t>(count, static_cast<std::size_t>(cap))) /
         cap;
}

}  // namespace

const std::array<std::string_view, kFeatureCount>& feature_names() {
  static const std::array<std::string_view, kFeatureCount> names = {
      "quote_depth",   "is_empty",       "is_sig_delimiter", "is_separator",
      "leading_ws",    "length",         "digit_fraction",   "punct_fraction",
      "upper_fraction", "has_at",        "has_url",          "ends_with_colon",
      "greeting",      "closing",        "code_fraction",    "tab_count",
  };
  return names;
}

int quote_depth(std::string_view line) {
  int depth = 0;
  for (char ch : line) {
    if (ch == '>') {
      ++depth;
    } else if (ch != ' ') {
      break;
    }
  }
  return depth;
}

bool is_greeting(std::string_view line) {
  return starts_with_phrase(line, kGreetings, kGreetingMaxChars);
}

bool is_closing(std::string_view line) {
  return starts_with_phrase(line, kClosings, kClosingMaxChars);
}

Eigen::VectorXd feature_vector(std::string_view line) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(kFeatureCount);
  auto set = [&](Feature f, double value) { v(static_cast<int>(f)) = value; };

  const std::size_t chars = code_points(line);
  std::size_t digits = 0, punct = 0, upper = 0, code = 0, tabs = 0;
  for (char ch : line) {
    const auto u = static_cast<unsigned char>(ch);
    if (u >= 0x80) continue;
    if (std::isdigit(u)) ++digits;
    if (std::ispunct(u)) ++punct;
    if (std::isupper(u)) ++upper;
    if (std::string_view("{}[]();=<>").find(ch) != std::string_view::npos) ++code;
    if (ch == '\t') ++tabs;
  }
  std::size_t leading = 0;
  while (leading < line.size() && is_space(line[leading])) ++leading;

  const std::string_view trimmed = trim(line);
  set(Feature::kQuoteDepth, scaled(static_cast<std::size_t>(quote_depth(line)), kQuoteDepthCap));
  set(Feature::kIsEmpty, trimmed.empty() ? 1.0 : 0.0);
  set(Feature::kIsSigDelimiter, (line == "--" || line == "-- ") ? 1.0 : 0.0);
  set(Feature::kIsSeparator, is_separator_line(line) ? 1.0 : 0.0);
  set(Feature::kLeadingWhitespace, scaled(leading, kLeadingWhitespaceCap));
  set(Feature::kLength, scaled(chars, kLengthCap));
  if (chars > 0) {
    const double n = static_cast<double>(chars);
    set(Feature::kDigitFraction, static_cast<double>(digits) / n);
    set(Feature::kPunctuationFraction, static_cast<double>(punct) / n);
    set(Feature::kUppercaseFraction, static_cast<double>(upper) / n);
    set(Feature::kCodeSymbolFraction, static_cast<double>(code) / n);
  }
  set(Feature::kHasAt, line.find('@') != std::string_view::npos ? 1.0 : 0.0);
  set(Feature::kHasUrl, line.find("://") != std::string_view::npos ? 1.0 : 0.0);
  set(Feature::kEndsWithColon, !trimmed.empty() && trimmed.back() == ':' ? 1.0 : 0.0);
  set(Feature::kGreeting, is_greeting(line) ? 1.0 : 0.0);
  set(Feature::kClosing, is_closing(line) ? 1.0 : 0.0);
  set(Feature::kTabCount, scaled(tabs, kTabCap));
  return v;
}

}  // namespace zoneseg
