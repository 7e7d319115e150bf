#pragma once

// Reader and writer for the TOML subset used by scene files: [table] and
// [table.sub] headers, key = value with strings, numbers, booleans and
// single-line arrays of those. Values land in an nlohmann::json object.

#include <cctype>
#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "framed/errors.hpp"

namespace framed::toml {

namespace detail {

class Reader {
 public:
  explicit Reader(std::string text) : text_(std::move(text)) {}

  nlohmann::json parse() {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    std::istringstream in(text_);
    std::string line;
    while (std::getline(in, line)) {
      ++lineno_;
      line_ = line;
      pos_ = 0;
      skip();
      if (done() || peek() == '#') continue;
      if (peek() == '[') {
        ++pos_;
        table = &root;
        for (;;) {
          const std::string key = bare_or_quoted_key();
          nlohmann::json& next = (*table)[key];
          if (next.is_null()) next = nlohmann::json::object();
          if (!next.is_object()) fail("'" + key + "' is not a table");
          table = &next;
          skip();
          if (accept('.')) continue;
          break;
        }
        if (!accept(']')) fail("expected ']'");
      } else {
        const std::string key = bare_or_quoted_key();
        skip();
        if (!accept('=')) fail("expected '='");
        if (table->contains(key)) fail("duplicate key '" + key + "'");
        (*table)[key] = value();
      }
      skip();
      if (!done() && peek() != '#') fail("trailing characters");
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(lineno_) + ": " + msg);
  }
  bool done() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }
  void skip() {
    while (!done() && (line_[pos_] == ' ' || line_[pos_] == '\t' || line_[pos_] == '\r')) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (!done() && peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string bare_or_quoted_key() {
    skip();
    if (!done() && (peek() == '"' || peek() == '\'')) return string_value();
    const std::size_t start = pos_;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) ++pos_;
    if (start == pos_) fail("expected a key");
    return line_.substr(start, pos_ - start);
  }

  std::string string_value() {
    const char q = line_[pos_++];
    std::string out;
    while (!done() && peek() != q) {
      char c = line_[pos_++];
      if (q == '"' && c == '\\') {
        if (done()) fail("unterminated escape");
        const char e = line_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out += c;
    }
    if (done()) fail("unterminated string");
    ++pos_;
    return out;
  }

  nlohmann::json value() {
    skip();
    if (done()) fail("missing value");
    const char c = peek();
    if (c == '"' || c == '\'') return string_value();
    if (c == '[') {
      ++pos_;
      nlohmann::json arr = nlohmann::json::array();
      skip();
      if (accept(']')) return arr;
      for (;;) {
        arr.push_back(value());
        if (accept(',')) {
          if (accept(']')) return arr;
          continue;
        }
        if (accept(']')) return arr;
        fail("expected ',' or ']'");
      }
    }
    const std::size_t start = pos_;
    while (!done() && peek() != ',' && peek() != ']' && peek() != '#' && !std::isspace(static_cast<unsigned char>(peek())))
      ++pos_;
    const std::string tok = line_.substr(start, pos_ - start);
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::string clean;
    for (char ch : tok)
      if (ch != '_') clean += ch;
    char* end = nullptr;
    if (clean.find_first_of(".eEin") == std::string::npos) {
      const long long v = std::strtoll(clean.c_str(), &end, 10);
      if (end && *end == '\0' && !clean.empty()) return v;
    }
    const double d = std::strtod(clean.c_str(), &end);
    if (clean.empty() || !end || *end != '\0') fail("bad value '" + tok + "'");
    return d;
  }

  std::string text_;
  std::string line_;
  std::size_t pos_ = 0;
  int lineno_ = 0;
};

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

inline std::string scalar(const nlohmann::json& v) {
  if (v.is_string()) return quote(v.get<std::string>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    std::string s = buf;
    if (s.find_first_of(".eni") == std::string::npos) s += ".0";
    return s;
  }
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar(v[i]);
    return s + "]";
  }
  throw Error("cannot write this value as TOML");
}

inline void write_table(std::string& out, const nlohmann::json& t, const std::string& prefix) {
  for (auto it = t.begin(); it != t.end(); ++it)
    if (!it->is_object()) out += it.key() + " = " + scalar(*it) + "\n";
  for (auto it = t.begin(); it != t.end(); ++it) {
    if (!it->is_object()) continue;
    const std::string name = prefix.empty() ? it.key() : prefix + "." + it.key();
    out += "\n[" + name + "]\n";
    write_table(out, *it, name);
  }
}

}  // namespace detail

inline nlohmann::json parse(const std::string& text) { return detail::Reader(text).parse(); }

inline std::string dump(const nlohmann::json& j) {
  std::string out;
  detail::write_table(out, j, "");
  return out;
}

}  // namespace framed::toml
