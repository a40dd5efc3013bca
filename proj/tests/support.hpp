#pragma once

#include <set>
#include <string>
#include <vector>

#include "balance/prefs.hpp"

namespace testing {

// Each row is one voter's ordering, best first, one character per label.
// Ids follow alphabetical label order, as in profile files.
inline balance::LabeledProfile rows(const std::vector<std::string>& voters) {
  std::set<char> letters(voters.front().begin(), voters.front().end());
  std::string text = std::to_string(letters.size()) + " " + std::to_string(voters.size()) + "\n";
  for (const auto& v : voters) {
    for (std::size_t k = 0; k < v.size(); ++k) text += std::string(k ? " " : "") + v[k];
    text += "\n";
  }
  return balance::parse_profile(text);
}

inline balance::Profile prof(const std::vector<std::string>& voters) { return rows(voters).profile; }

}  // namespace testing
