#include "dissrel/csv.hpp"

#include <cstdio>

namespace dissrel::csv {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void header(std::ostream& os, std::initializer_list<const char*> columns) {
  bool first = true;
  for (const char* c : columns) {
    if (!first) os << ',';
    first = false;
    os << c;
  }
  os << '\n';
}

}  // namespace dissrel::csv
