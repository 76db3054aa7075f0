#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dissrel::cli {

// Bad key, malformed value or failed precondition in a run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key=value map. Values stay strings until read; a value may be a
// comma-separated list, which expand_sweep turns into separate cases.
class RunConfig {
 public:
  // Accepts any key.
  RunConfig() = default;
  // Accepts only the listed keys.
  explicit RunConfig(std::set<std::string> allowed)
      : allowed_(std::move(allowed)), restricted_(true) {}

  void set(const std::string& key, const std::string& value);
  // "key=value"
  void set_assignment(const std::string& text);
  // key=value lines; '#' starts a comment.
  void load_file(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key, double fallback) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  int integer(const std::string& key, int fallback) const;
  // tol in (0, 1e-3]
  double tol(double fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  void clear() { values_.clear(); }

 private:
  std::set<std::string> allowed_;
  bool restricted_ = false;
  std::map<std::string, std::string> values_;
};

// Cartesian product over comma-separated values, in key order with the last
// key varying fastest.
std::vector<RunConfig> expand_sweep(const RunConfig& cfg);

double parse_number(const std::string& key, const std::string& text);

}  // namespace dissrel::cli
