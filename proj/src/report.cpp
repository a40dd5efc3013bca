#include "balance/report.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "balance/errors.hpp"

namespace balance {
namespace {

using ordered_json = nlohmann::ordered_json;

template <typename Vec>
auto find_key(Vec& v, std::string_view key) {
  return std::find_if(v.begin(), v.end(), [&](const auto& kv) { return kv.first == key; });
}

void check_single_line(const std::string& s, const char* what) {
  if (s.find('\n') != std::string::npos) throw PreconditionError(std::string(what) + " must be a single line");
}

}  // namespace

void Report::set(const std::string& key, std::string value) {
  check_single_line(key, "report key");
  check_single_line(value, "report value");
  if (key.empty() || key.find(':') != std::string::npos || key == "command") {
    throw PreconditionError("invalid report key '" + key + "'");
  }
  if (auto it = find_key(fields_, key); it != fields_.end()) {
    it->second = std::move(value);
  } else {
    fields_.emplace_back(key, std::move(value));
  }
}

std::optional<std::string> Report::get(std::string_view key) const {
  auto it = find_key(fields_, key);
  if (it == fields_.end()) return std::nullopt;
  return it->second;
}

void Report::erase(std::string_view key) {
  std::erase_if(fields_, [&](const auto& kv) { return kv.first == key; });
}

void Report::add_block(const std::string& name, std::string text) {
  if (name.empty() || name.find_first_of(" \n") != std::string::npos) {
    throw PreconditionError("invalid block name '" + name + "'");
  }
  if (find_key(blocks_, name) != blocks_.end()) throw PreconditionError("duplicate block '" + name + "'");
  if (!text.empty() && text.back() != '\n') text += '\n';
  blocks_.emplace_back(name, std::move(text));
}

std::optional<std::string> Report::block(std::string_view name) const {
  auto it = find_key(blocks_, name);
  if (it == blocks_.end()) return std::nullopt;
  return it->second;
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "command: " << command_ << '\n';
  for (const auto& [k, v] : fields_) out << k << ": " << v << '\n';
  for (const auto& [name, text] : blocks_) out << "begin " << name << '\n' << text << "end " << name << '\n';
  return out.str();
}

std::string Report::to_json() const {
  ordered_json doc;
  doc["command"] = command_;
  doc["fields"] = ordered_json::object();
  for (const auto& [k, v] : fields_) doc["fields"][k] = v;
  doc["blocks"] = ordered_json::object();
  for (const auto& [name, text] : blocks_) doc["blocks"][name] = text;
  return doc.dump(2) + "\n";
}

Report Report::parse_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::optional<Report> report;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.starts_with("begin ")) {
      if (!report) throw ParseError(line_no, "block before the command line");
      const std::string name = line.substr(6);
      std::string body;
      bool closed = false;
      while (std::getline(in, line)) {
        ++line_no;
        if (line == "end " + name) {
          closed = true;
          break;
        }
        body += line + '\n';
      }
      if (!closed) throw ParseError(line_no, "unterminated block '" + name + "'");
      report->add_block(name, std::move(body));
      continue;
    }
    const auto colon = line.find(": ");
    if (colon == std::string::npos) throw ParseError(line_no, "expected 'key: value'");
    const std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 2);
    if (!report) {
      if (key != "command") throw ParseError(line_no, "report must start with 'command:'");
      report.emplace(std::move(value));
    } else {
      report->set(key, std::move(value));
    }
  }
  if (!report) throw ParseError(line_no, "empty report");
  return *report;
}

Report Report::parse_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
    Report r(doc.at("command").get<std::string>());
    for (const auto& [k, v] : doc.at("fields").items()) r.set(k, v.get<std::string>());
    for (const auto& [k, v] : doc.at("blocks").items()) r.add_block(k, v.get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed JSON report: ") + e.what());
  }
}

}  // namespace balance
