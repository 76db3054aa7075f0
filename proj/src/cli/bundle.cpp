#include "dissrel/cli/bundle.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace dissrel::cli {

namespace fs = std::filesystem;

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

void open_or_throw(std::ofstream& os, const fs::path& p) {
  os.open(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

void Report::below(const std::string& name, double measured, double threshold) {
  checks_.push_back({name, measured, threshold, "<", measured < threshold});
}

void Report::at_most(const std::string& name, double measured, double threshold) {
  checks_.push_back({name, measured, threshold, "<=", measured <= threshold});
}

void Report::at_least(const std::string& name, double measured, double threshold) {
  checks_.push_back({name, measured, threshold, ">=", measured >= threshold});
}

void Report::holds(const std::string& name, bool ok) {
  checks_.push_back({name, ok ? 1.0 : 0.0, 1.0, ">=", ok});
}

int Report::failures() const {
  int n = 0;
  for (const auto& c : checks_) n += c.pass ? 0 : 1;
  return n;
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (auto c : other.checks_) {
    c.name = prefix + c.name;
    checks_.push_back(std::move(c));
  }
  for (const auto& n : other.notes_) notes_.push_back(prefix + n);
}

void Report::write(std::ostream& os) const {
  for (const auto& n : notes_) os << "# " << n << '\n';
  for (const auto& c : checks_) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << " measured=" << sci(c.measured)
       << " threshold=" << sci(c.threshold) << " cmp=" << c.relation << '\n';
  }
  os << "checks=" << checks_.size() << " failed=" << failures() << '\n';
}

BundleWriter::BundleWriter(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

void BundleWriter::csv(const std::string& name, const std::function<void(std::ostream&)>& body,
                       const std::string& x_column, const std::vector<std::string>& y_columns) {
  std::ofstream os;
  open_or_throw(os, dir_ / name);
  body(os);
  if (!os) throw std::runtime_error("write failed for " + (dir_ / name).string());
  if (!x_column.empty()) plots_.push_back({name, x_column, y_columns});
}

void BundleWriter::text(const std::string& name, const std::string& body) {
  std::ofstream os;
  open_or_throw(os, dir_ / name);
  os << body;
}

void BundleWriter::report(const Report& r) {
  std::ostringstream s;
  r.write(s);
  text("report.txt", s.str());
}

void BundleWriter::plot_script(const std::vector<std::string>& subdirs) {
  std::ostringstream py;
  py << "import os\n"
        "import runpy\n"
        "import sys\n\n"
        "import matplotlib\n"
        "matplotlib.use(\"Agg\")\n"
        "import matplotlib.pyplot as plt\n"
        "import numpy as np\n\n"
        "here = os.path.dirname(os.path.abspath(__file__))\n\n"
        "PLOTS = [\n";
  for (const auto& p : plots_) {
    py << "    (\"" << p.file << "\", \"" << p.x << "\", [";
    for (std::size_t i = 0; i < p.ys.size(); ++i) py << (i ? ", " : "") << '"' << p.ys[i] << '"';
    py << "]),\n";
  }
  py << "]\n\nSUBDIRS = [";
  for (std::size_t i = 0; i < subdirs.size(); ++i) py << (i ? ", " : "") << '"' << subdirs[i] << '"';
  py << "]\n\n"
        "for name, xcol, ycols in PLOTS:\n"
        "    data = np.genfromtxt(os.path.join(here, name), delimiter=\",\", names=True, dtype=None, encoding=\"utf-8\")\n"
        "    fig, ax = plt.subplots()\n"
        "    for y in ycols:\n"
        "        x = data[xcol]\n"
        "        style = \"-\" if np.all(np.diff(x) > 0) else \".\"\n"
        "        ax.plot(x, data[y], style, ms=2, label=y)\n"
        "    ax.set_xlabel(xcol)\n"
        "    ax.legend()\n"
        "    ax.set_title(name)\n"
        "    out = os.path.join(here, os.path.splitext(name)[0] + \".png\")\n"
        "    fig.savefig(out, dpi=120)\n"
        "    plt.close(fig)\n"
        "    print(out, file=sys.stderr)\n\n"
        "for sub in SUBDIRS:\n"
        "    runpy.run_path(os.path.join(here, sub, \"plot.py\"), run_name=\"__main__\")\n";
  text("plot.py", py.str());
}

StagedDir::StagedDir(const fs::path& out_root, const std::string& name) {
  fs::create_directories(out_root);
  final_ = out_root / name;
  staging_ = out_root / ("." + name + ".staging-" + std::to_string(::getpid()));
  fs::remove_all(staging_);
  fs::create_directories(staging_);
}

StagedDir::~StagedDir() {
  if (!committed_) {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }
}

void StagedDir::commit() {
  // Move any previous bundle aside first so the rename itself cannot fail on
  // a non-empty target.
  const fs::path old = final_.parent_path() / ("." + final_.filename().string() + ".old-" + std::to_string(::getpid()));
  const bool had_old = fs::exists(final_);
  if (had_old) {
    fs::remove_all(old);
    fs::rename(final_, old);
  }
  fs::rename(staging_, final_);
  committed_ = true;
  if (had_old) fs::remove_all(old);
}

}  // namespace dissrel::cli
