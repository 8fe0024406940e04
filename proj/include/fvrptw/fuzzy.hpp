#pragma once

#include <string>

namespace fvrptw {

// Triangular fuzzy number (a, b, c): support [a, c], mode b.
// Crisp values are the degenerate case a == b == c.
struct TriangularFuzzyNumber {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  static constexpr TriangularFuzzyNumber crisp(double v) { return {v, v, v}; }

  constexpr bool valid() const { return a <= b && b <= c; }
  constexpr bool degenerate() const { return a == b && b == c; }

  friend constexpr bool operator==(const TriangularFuzzyNumber&,
                                   const TriangularFuzzyNumber&) = default;
};

using Tfn = TriangularFuzzyNumber;

std::string to_string(const Tfn& x);

// Membership degree of x. For a degenerate number: 1 iff x == a.
double membership(const Tfn& tfn, double x);

// Measures of the event {X <= x0}. All three are non-decreasing in x0,
// bounded to [0, 1], and satisfy Nec <= Cr <= Pos. For a degenerate
// number every measure is the step 1{x0 >= a}.
double possibility_le(const Tfn& tfn, double x0);
double necessity_le(const Tfn& tfn, double x0);
double credibility_le(const Tfn& tfn, double x0);

// Pos{X > x0} = sup of membership over (x0, inf). Necessity is its
// complement: necessity_le(t, x) == 1 - possibility_gt(t, x).
double possibility_gt(const Tfn& tfn, double x0);

Tfn fuzzy_add(const Tfn& x, const Tfn& y);

// Componentwise max with a crisp value. This is the usual triangular
// approximation; the exact extension-principle max is not triangular
// when e falls inside (a, b).
Tfn fuzzy_max_crisp(const Tfn& x, double e);

inline Tfn operator+(const Tfn& x, const Tfn& y) { return fuzzy_add(x, y); }

}  // namespace fvrptw
