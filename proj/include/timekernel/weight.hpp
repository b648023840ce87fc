#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace timekernel {

/// Piecewise factor w(x): 1, sgn(x), H(x) or H(-x).
enum class Weight { one, sgn, hplus, hminus };

inline const char* weight_tag(Weight w) {
  switch (w) {
    case Weight::one: return "one";
    case Weight::sgn: return "sgn";
    case Weight::hplus: return "hplus";
    case Weight::hminus: return "hminus";
  }
  return "one";
}

inline std::optional<Weight> parse_weight(std::string_view tag) {
  if (tag == "one") return Weight::one;
  if (tag == "sgn") return Weight::sgn;
  if (tag == "hplus") return Weight::hplus;
  if (tag == "hminus") return Weight::hminus;
  return std::nullopt;
}

/// w on the side x > 0 (side = +1) or x < 0 (side = -1).
inline int weight_on_side(Weight w, int side) {
  switch (w) {
    case Weight::one: return 1;
    case Weight::sgn: return side > 0 ? 1 : -1;
    case Weight::hplus: return side > 0 ? 1 : 0;
    case Weight::hminus: return side > 0 ? 0 : 1;
  }
  return 0;
}

/// True when w(0+) != w(0-).
inline bool weight_jumps(Weight w) { return w != Weight::one; }

}  // namespace timekernel
