#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "shearstab/errors.hpp"

namespace shearstab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

bool as_number(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t == "inf" || t == "+inf") {
    out = INFINITY;
    return true;
  }
  if (t == "-inf") {
    out = -INFINITY;
    return true;
  }
  const char* b = t.data();
  if (!t.empty() && *b == '+') ++b;
  const auto [p, ec] = std::from_chars(b, t.data() + t.size(), out);
  return ec == std::errc() && p == t.data() + t.size() && b != p;
}

}  // namespace

double parse_number(const std::string& text, const std::string& what) {
  double v;
  if (!as_number(text, v)) fail(ErrorKind::Configuration, "invalid number '" + text + "' for " + what);
  return v;
}

std::vector<double> parse_list(const std::string& text, char sep) {
  std::vector<double> out;
  for (const auto& p : split(text, sep)) out.push_back(parse_number(p, "list '" + text + "'"));
  if (out.empty()) fail(ErrorKind::Configuration, "empty list");
  return out;
}

std::vector<double> parse_range(const std::string& text) {
  std::string body = trim(text);
  bool geometric = false;
  if (body.rfind("log:", 0) == 0) {
    geometric = true;
    body = body.substr(4);
  }
  const auto parts = split(body, ':');
  const std::string what = "range '" + text + "'";
  if (parts.empty() || parts.size() > 3) fail(ErrorKind::Configuration, "invalid " + what);
  if (parts.size() == 1) {
    if (geometric) fail(ErrorKind::Configuration, "log range needs a:b:n in " + what);
    return {parse_number(parts[0], what)};
  }
  const double a = parse_number(parts[0], what), b = parse_number(parts[1], what);
  if (parts.size() == 2) {
    if (geometric) fail(ErrorKind::Configuration, "log range needs a:b:n in " + what);
    return {a, b};
  }
  const double nd = parse_number(parts[2], what);
  if (!(nd >= 1.0) || nd != std::floor(nd)) fail(ErrorKind::Configuration, "point count must be a positive integer in " + what);
  const int n = static_cast<int>(nd);
  if (geometric && !(a > 0.0 && b > 0.0)) fail(ErrorKind::Configuration, "log range needs positive endpoints");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(geometric ? std::exp(std::log(a) + f * (std::log(b) - std::log(a))) : a + f * (b - a));
  }
  if (n > 1) {
    out.front() = a;
    out.back() = b;
  }
  return out;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Configuration, "cannot open config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::Configuration, path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty()) fail(ErrorKind::Configuration, path + ":" + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

void Params::merge(const std::map<std::string, std::string>& config) {
  for (const auto& [k, v] : config) {
    if (!values.count(k)) fail(ErrorKind::Configuration, "unknown config key '" + k + "'");
    if (!given.count(k)) {
      values[k] = v;
      given.insert(k);
    }
  }
}

std::string Params::str(const std::string& key, const std::string& fallback) const {
  return has(key) ? values.at(key) : fallback;
}

double Params::num(const std::string& key, double fallback) const {
  return has(key) ? parse_number(values.at(key), "--" + key) : fallback;
}

int Params::integer(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = parse_number(values.at(key), "--" + key);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(ErrorKind::Configuration, "--" + key + " must be an integer");
  return static_cast<int>(v);
}

std::vector<double> Params::range(const std::string& key, const std::string& fallback) const {
  return parse_range(str(key, fallback));
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

void Table::add(std::vector<std::string> row) {
  if (row.size() != header.size()) fail(ErrorKind::Numerical, "row width does not match the header");
  rows.push_back(std::move(row));
}

void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& table) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      double v;
      if (row[i] == "true" || row[i] == "false") {
        obj[table.header[i]] = row[i] == "true";
      } else if (as_number(row[i], v) && std::isfinite(v)) {
        const bool integral = row[i].find_first_of(".eE") == std::string::npos && std::abs(v) < 9.0e15;
        if (integral) {
          obj[table.header[i]] = static_cast<long long>(v);
        } else {
          obj[table.header[i]] = v;
        }
      } else if (row[i] == "nan") {
        obj[table.header[i]] = nullptr;
      } else {
        obj[table.header[i]] = row[i];
      }
    }
    doc.push_back(obj);
  }
  os << doc.dump(2) << '\n';
}

}  // namespace shearstab::cli
