#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace shearstab::cli {

// `v`, `a:b` (the two endpoints), `a:b:n` (n points, inclusive) or
// `log:a:b:n` (geometric).
std::vector<double> parse_range(const std::string& text);
double parse_number(const std::string& text, const std::string& what);
std::vector<double> parse_list(const std::string& text, char sep = ',');

// Flat key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path);

// Option values as given on the command line, with config-file fallbacks.
class Params {
 public:
  std::map<std::string, std::string> values;
  std::set<std::string> given;

  // Keys not given on the command line are taken from the file; unknown keys fail.
  void merge(const std::map<std::string, std::string>& config);

  bool has(const std::string& key) const { return given.count(key) > 0; }
  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::vector<double> range(const std::string& key, const std::string& fallback) const;
};

// %.15g, locale independent.
std::string format_number(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

void write_csv(std::ostream& os, const Table& table);
// Array of row objects; numeric and boolean cells are emitted as such.
void write_json(std::ostream& os, const Table& table);

}  // namespace shearstab::cli
