#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <type_traits>

namespace dissrel::csv {

// Fixed 17-significant-digit form; byte-identical across runs.
std::string num(double x);

void header(std::ostream& os, std::initializer_list<const char*> columns);

template <typename... Ts>
void row(std::ostream& os, const Ts&... values) {
  bool first = true;
  auto emit = [&](const auto& v) {
    if (!first) os << ',';
    first = false;
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) {
      os << num(v);
    } else {
      os << v;
    }
  };
  (emit(values), ...);
  os << '\n';
}

}  // namespace dissrel::csv
