#include "zoneseg/email.hpp"

#include "zoneseg/error.hpp"

namespace zoneseg {

std::vector<std::string> split_lines(std::string_view body) {
  std::vector<std::string> lines;
  std::string current;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char ch = body[i];
    if (ch == '\r' || ch == '\n') {
      if (ch == '\r' && i + 1 < body.size() && body[i + 1] == '\n') ++i;
      lines.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  // A trailing terminator does not open a new line.
  const bool terminated =
      !body.empty() && (body.back() == '\n' || body.back() == '\r');
  if (!terminated || lines.empty()) lines.push_back(std::move(current));
  return lines;
}

Email::Email(std::string id, std::string lang, std::vector<std::string> lines)
    : id_(std::move(id)), lang_(std::move(lang)), lines_(std::move(lines)) {
  if (id_.empty()) throw ValidationError("email id must not be empty");
  if (lines_.empty()) {
    throw ValidationError("email '" + id_ + "' has no lines");
  }
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    if (lines_[i].find_first_of("\r\n") != std::string::npos) {
      throw ValidationError("email '" + id_ + "' line " + std::to_string(i) +
                            " contains a line break");
    }
  }
}

AnnotatedEmail::AnnotatedEmail(Email email, std::vector<std::string> zones,
                               std::optional<std::string> annotator)
    : email_(std::move(email)),
      zones_(std::move(zones)),
      annotator_(std::move(annotator)) {
  if (zones_.size() != email_.size()) {
    throw ValidationError("email '" + email_.id() + "' has " +
                          std::to_string(email_.size()) + " lines but " +
                          std::to_string(zones_.size()) + " zones");
  }
}

}  // namespace zoneseg
