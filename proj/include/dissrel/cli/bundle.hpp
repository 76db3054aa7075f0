#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace dissrel::cli {

struct Check {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<", "<=" or ">="
  bool pass = false;
};

class Report {
 public:
  // pass iff measured < threshold (NaN fails)
  void below(const std::string& name, double measured, double threshold);
  // pass iff measured <= threshold
  void at_most(const std::string& name, double measured, double threshold);
  // pass iff measured >= threshold
  void at_least(const std::string& name, double measured, double threshold);
  // Boolean check recorded as measured 1/0 against threshold 1.
  void holds(const std::string& name, bool ok);
  void note(const std::string& text) { notes_.push_back(text); }

  const std::vector<Check>& checks() const { return checks_; }
  const std::vector<std::string>& notes() const { return notes_; }
  int failures() const;
  // Appends another report's checks with a name prefix.
  void merge(const Report& other, const std::string& prefix);

  // One line per check: `PASS name measured=... threshold=... cmp=<`, notes as
  // `# ...`, and a closing `checks=N failed=M`.
  void write(std::ostream& os) const;

 private:
  std::vector<Check> checks_;
  std::vector<std::string> notes_;
};

// Files of one report bundle, written into `dir`.
class BundleWriter {
 public:
  explicit BundleWriter(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  void csv(const std::string& name, const std::function<void(std::ostream&)>& body,
           const std::string& x_column, const std::vector<std::string>& y_columns);
  void text(const std::string& name, const std::string& body);
  void report(const Report& r);
  // plot.py over every CSV written so far; it also runs the plot.py of each
  // listed subdirectory.
  void plot_script(const std::vector<std::string>& subdirs = {});

 private:
  struct PlotEntry {
    std::string file;
    std::string x;
    std::vector<std::string> ys;
  };
  std::filesystem::path dir_;
  std::vector<PlotEntry> plots_;
};

// Output directory populated under a hidden staging name and renamed into
// place by commit(). Abandoned staging directories are removed.
class StagedDir {
 public:
  StagedDir(const std::filesystem::path& out_root, const std::string& name);
  ~StagedDir();
  StagedDir(const StagedDir&) = delete;
  StagedDir& operator=(const StagedDir&) = delete;

  const std::filesystem::path& path() const { return staging_; }
  const std::filesystem::path& final_path() const { return final_; }
  void commit();

 private:
  std::filesystem::path staging_;
  std::filesystem::path final_;
  bool committed_ = false;
};

}  // namespace dissrel::cli
