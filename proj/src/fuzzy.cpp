#include "fvrptw/fuzzy.hpp"

#include <algorithm>
#include <sstream>

namespace fvrptw {

std::string to_string(const Tfn& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << x.a << ", " << x.b << ", " << x.c << ')';
  return os.str();
}

double membership(const Tfn& t, double x) {
  if (x < t.a || x > t.c) return 0.0;
  if (x <= t.b) {
    if (t.b == t.a) return 1.0;
    return (x - t.a) / (t.b - t.a);
  }
  // b < x <= c, so c > b
  return (t.c - x) / (t.c - t.b);
}

double possibility_le(const Tfn& t, double x0) {
  if (x0 < t.a) return 0.0;
  if (x0 >= t.b) return 1.0;
  return (x0 - t.a) / (t.b - t.a);
}

double possibility_gt(const Tfn& t, double x0) {
  if (x0 < t.b) return 1.0;
  if (x0 >= t.c) return 0.0;
  return (t.c - x0) / (t.c - t.b);
}

double necessity_le(const Tfn& t, double x0) {
  if (x0 < t.b) return 0.0;
  if (x0 >= t.c) return 1.0;
  return (x0 - t.b) / (t.c - t.b);
}

double credibility_le(const Tfn& t, double x0) {
  if (x0 < t.a) return 0.0;
  if (x0 >= t.c) return 1.0;
  if (x0 < t.b) return (x0 - t.a) / (2.0 * (t.b - t.a));
  return (x0 - 2.0 * t.b + t.c) / (2.0 * (t.c - t.b));
}

Tfn fuzzy_add(const Tfn& x, const Tfn& y) {
  return {x.a + y.a, x.b + y.b, x.c + y.c};
}

Tfn fuzzy_max_crisp(const Tfn& x, double e) {
  return {std::max(x.a, e), std::max(x.b, e), std::max(x.c, e)};
}

}  // namespace fvrptw
