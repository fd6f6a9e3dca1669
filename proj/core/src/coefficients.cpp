#include "tensorfn/coefficients.hpp"

namespace tensorfn {

int count_classes(int n) {
  if (n < 0) throw ArgumentError("derivative order must be non-negative");
  return ((n + 4) * (n + 4) + 4) / 12;
}

std::vector<std::array<int, 3>> enumerate_classes(int n) {
  if (n < 0) throw ArgumentError("derivative order must be non-negative");
  std::vector<std::array<int, 3>> out;
  const int total = n + 1;
  for (int i = 0; 3 * i <= total; ++i) {
    for (int j = i; i + 2 * j <= total; ++j) out.push_back({i, j, total - i - j});
  }
  return out;
}

CoeffMethod parse_coeff_method(std::string_view name) {
  if (name == "dd" || name == "divided_difference") return CoeffMethod::divided_difference;
  if (name == "residue") return CoeffMethod::residue;
  if (name == "interp" || name == "interpolation") return CoeffMethod::interpolation;
  throw ArgumentError("unknown coefficient method '" + std::string(name) + "' (dd|residue|interp)");
}

std::string to_string(CoeffMethod m) {
  switch (m) {
    case CoeffMethod::divided_difference:
      return "dd";
    case CoeffMethod::residue:
      return "residue";
    case CoeffMethod::interpolation:
      return "interp";
  }
  return "?";
}

}  // namespace tensorfn
