#include "dissrel/cli/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dissrel::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

double parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw ConfigError(key + "=" + text + ": not a number");
  }
  if (!std::isfinite(v) || errno == ERANGE) throw ConfigError(key + "=" + text + ": value must be finite");
  return v;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string k = trim(key);
  if (k.empty()) throw ConfigError("empty key");
  if (restricted_ && allowed_.count(k) == 0) {
    std::string known;
    for (const auto& a : allowed_) known += (known.empty() ? "" : ", ") + a;
    throw ConfigError("unknown key '" + k + "'" + (known.empty() ? std::string(" (this command takes no keys)") : " (known: " + known + ")"));
  }
  const std::string v = trim(value);
  if (v.empty()) throw ConfigError("key '" + k + "' has an empty value");
  for (const auto& item : split_list(v)) {
    if (item.empty()) throw ConfigError("key '" + k + "' has an empty list item");
  }
  values_[k] = v;
}

void RunConfig::set_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + text + "'");
  set(text.substr(0, eq), text.substr(eq + 1));
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      set_assignment(line);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::string RunConfig::str(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double RunConfig::num(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number(key, it->second);
}

std::size_t RunConfig::count(const std::string& key, std::size_t fallback) const {
  const double v = num(key, static_cast<double>(fallback));
  if (v < 0.0 || v != std::floor(v) || v > 1e9) {
    throw ConfigError(key + ": expected a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

int RunConfig::integer(const std::string& key, int fallback) const {
  const double v = num(key, fallback);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key + ": expected an integer");
  return static_cast<int>(v);
}

double RunConfig::tol(double fallback) const {
  const double v = num("tol", fallback);
  if (!(v > 0.0 && v <= 1e-3)) {
    std::ostringstream msg;
    msg << "tol=" << v << ": tol in (0, 1e-3] violated";
    throw ConfigError(msg.str());
  }
  return v;
}

std::vector<RunConfig> expand_sweep(const RunConfig& cfg) {
  RunConfig base = cfg;
  base.clear();
  std::vector<RunConfig> cases = {base};
  for (const auto& [key, value] : cfg.values()) {
    const auto items = split_list(value);
    std::vector<RunConfig> next;
    next.reserve(cases.size() * items.size());
    for (const auto& c : cases) {
      for (const auto& item : items) {
        RunConfig n = c;
        n.set(key, item);
        next.push_back(std::move(n));
      }
    }
    cases = std::move(next);
  }
  return cases;
}

}  // namespace dissrel::cli
