// Minimal TOML subset reader for the corpus file format: bare keys, string /
// integer / float / boolean scalars, single-line homogeneous arrays, [table]
// and [[array-of-table]] headers, and # comments. Internal to the library.
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace advt::toml_lite {

struct Value {
  enum class Kind { string, integer, floating, boolean, array };
  Kind kind = Kind::string;
  std::string str;
  long long int_v = 0;
  double float_v = 0.0;
  bool bool_v = false;
  std::vector<Value> array;

  // Numeric accessor: integers promote to double.
  double as_number() const;
};

using Table = std::map<std::string, Value>;

struct Document {
  Table root;
  std::map<std::string, Table> tables;
  std::map<std::string, std::vector<Table>> table_arrays;
};

/// Throws std::invalid_argument with a line number on malformed input.
Document parse(std::istream& is);
Document parse_file(const std::string& path);

}  // namespace advt::toml_lite
