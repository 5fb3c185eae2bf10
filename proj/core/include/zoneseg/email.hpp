#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zoneseg {

// Splits a body into lines. CRLF and lone CR become LF; a single trailing LF
// does not produce an extra empty line. Always returns at least one element.
std::vector<std::string> split_lines(std::string_view body);

// One email body as an ordered list of lines. Immutable once built.
class Email {
 public:
  // Throws ValidationError if id is empty, lines is empty, or any line holds
  // a CR or LF.
  Email(std::string id, std::string lang, std::vector<std::string> lines);

  const std::string& id() const { return id_; }
  const std::string& lang() const { return lang_; }
  const std::vector<std::string>& lines() const { return lines_; }
  std::size_t size() const { return lines_.size(); }

  friend bool operator==(const Email&, const Email&) = default;

 private:
  std::string id_;
  std::string lang_;
  std::vector<std::string> lines_;
};

// An email with one zone name per line.
class AnnotatedEmail {
 public:
  AnnotatedEmail(Email email, std::vector<std::string> zones,
                 std::optional<std::string> annotator = std::nullopt);

  const Email& email() const { return email_; }
  const std::string& id() const { return email_.id(); }
  const std::vector<std::string>& zones() const { return zones_; }
  const std::optional<std::string>& annotator() const { return annotator_; }
  std::size_t size() const { return zones_.size(); }

  friend bool operator==(const AnnotatedEmail&,
                         const AnnotatedEmail&) = default;

 private:
  Email email_;
  std::vector<std::string> zones_;
  std::optional<std::string> annotator_;
};

}  // namespace zoneseg
