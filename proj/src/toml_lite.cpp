#include "toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace advt::toml_lite {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::invalid_argument("toml: line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Strip a trailing comment, respecting double-quoted strings.
std::string_view strip_comment(std::string_view s) {
  bool in_string = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

Value parse_scalar(std::string_view text, int line) {
  Value v;
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    v.kind = Value::Kind::string;
    std::string out;
    for (size_t i = 1; i + 1 < text.size(); ++i) {
      char c = text[i];
      if (c == '\\' && i + 2 < text.size()) {
        char n = text[i + 1];
        if (n == '"' || n == '\\') {
          out.push_back(n);
          ++i;
          continue;
        }
      }
      out.push_back(c);
    }
    v.str = std::move(out);
    return v;
  }
  if (text == "true" || text == "false") {
    v.kind = Value::Kind::boolean;
    v.bool_v = (text == "true");
    return v;
  }
  const std::string s(text);
  if (s.find_first_of(".eE") == std::string::npos) {
    char* end = nullptr;
    long long iv = std::strtoll(s.c_str(), &end, 10);
    if (end && *end == '\0' && !s.empty()) {
      v.kind = Value::Kind::integer;
      v.int_v = iv;
      return v;
    }
  }
  {
    char* end = nullptr;
    double fv = std::strtod(s.c_str(), &end);
    if (end && *end == '\0' && !s.empty()) {
      v.kind = Value::Kind::floating;
      v.float_v = fv;
      return v;
    }
  }
  fail(line, "cannot parse value '" + s + "'");
}

Value parse_value(std::string_view text, int line) {
  text = trim(text);
  if (text.empty()) fail(line, "missing value");
  if (text.front() == '[') {
    if (text.back() != ']') fail(line, "unterminated array");
    Value v;
    v.kind = Value::Kind::array;
    std::string_view body = trim(text.substr(1, text.size() - 2));
    size_t pos = 0;
    while (pos < body.size()) {
      bool in_string = false;
      size_t end = pos;
      for (; end < body.size(); ++end) {
        char c = body[end];
        if (c == '"' && (end == 0 || body[end - 1] != '\\')) in_string = !in_string;
        if (c == ',' && !in_string) break;
      }
      std::string_view item = trim(body.substr(pos, end - pos));
      if (!item.empty()) v.array.push_back(parse_scalar(item, line));
      pos = end + 1;
    }
    return v;
  }
  return parse_scalar(text, line);
}

}  // namespace

double Value::as_number() const {
  if (kind == Kind::integer) return static_cast<double>(int_v);
  if (kind == Kind::floating) return float_v;
  throw std::invalid_argument("toml: value is not numeric");
}

Document parse(std::istream& is) {
  Document doc;
  Table* current = &doc.root;
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string_view text = trim(strip_comment(raw));
    if (text.empty()) continue;
    if (text.front() == '[') {
      bool is_array = text.size() >= 2 && text[1] == '[';
      size_t open = is_array ? 2 : 1;
      size_t close = text.find(is_array ? "]]" : "]", open);
      if (close == std::string_view::npos ||
          trim(text.substr(close + (is_array ? 2 : 1))) != "") {
        fail(line, "malformed table header");
      }
      std::string name(trim(text.substr(open, close - open)));
      if (!valid_key(name)) fail(line, "bad table name '" + name + "'");
      if (is_array) {
        doc.table_arrays[name].emplace_back();
        current = &doc.table_arrays[name].back();
      } else {
        current = &doc.tables[name];
      }
      continue;
    }
    size_t eq = std::string_view::npos;
    bool in_string = false;
    for (size_t i = 0; i < text.size(); ++i) {
      char c = text[i];
      if (c == '"' && (i == 0 || text[i - 1] != '\\')) in_string = !in_string;
      if (c == '=' && !in_string) {
        eq = i;
        break;
      }
    }
    if (eq == std::string_view::npos) fail(line, "expected key = value");
    std::string key(trim(text.substr(0, eq)));
    if (!valid_key(key)) fail(line, "bad key '" + key + "'");
    if (current->count(key)) fail(line, "duplicate key '" + key + "'");
    (*current)[key] = parse_value(text.substr(eq + 1), line);
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("toml: cannot open " + path);
  return parse(in);
}

}  // namespace advt::toml_lite
