#pragma once

// Command reports. The text form is one "key: value" line per field followed
// by profile blocks:
//
//   begin NAME
//   <profile in the profile-file format>
//   end NAME
//
// The JSON form carries the same data as a single document. Both parse back
// to an equal Report.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace balance {

class Report {
 public:
  explicit Report(std::string command = {}) : command_(std::move(command)) {}

  const std::string& command() const noexcept { return command_; }

  /// Appends, or replaces an existing key in place. Values are single-line.
  void set(const std::string& key, std::string value);
  std::optional<std::string> get(std::string_view key) const;
  void erase(std::string_view key);
  const std::vector<std::pair<std::string, std::string>>& fields() const noexcept { return fields_; }

  /// `text` is a profile in the file format (multi-line).
  void add_block(const std::string& name, std::string text);
  std::optional<std::string> block(std::string_view name) const;
  const std::vector<std::pair<std::string, std::string>>& blocks() const noexcept { return blocks_; }

  std::string to_text() const;
  std::string to_json() const;

  static Report parse_text(std::string_view text);
  static Report parse_json(std::string_view text);

  friend bool operator==(const Report&, const Report&) = default;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> fields_;
  std::vector<std::pair<std::string, std::string>> blocks_;
};

}  // namespace balance
