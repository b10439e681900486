#include "fluxmaj/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fluxmaj/errors.hpp"

namespace fluxmaj {

namespace {

// Symmetric orbits in barycentric coordinates; weights normalized to area 1.
struct Orbit {
  enum Kind { kCentroid, kTwoEqual, kGeneral } kind;
  double a;
  double b;
  double weight;
};

QuadRule from_orbits(std::initializer_list<Orbit> orbits, int degree) {
  QuadRule rule;
  rule.exactness_degree = degree;
  const auto add = [&rule](double l1, double l2, double w) {
    // barycentric (l0, l1, l2) -> reference point (l1, l2)
    rule.points.push_back({l1, l2});
    rule.weights.push_back(0.5 * w);
  };
  for (const Orbit& o : orbits) {
    switch (o.kind) {
      case Orbit::kCentroid:
        add(1.0 / 3.0, 1.0 / 3.0, o.weight);
        break;
      case Orbit::kTwoEqual: {
        const double c = 1.0 - 2.0 * o.a;
        add(o.a, o.a, o.weight);
        add(c, o.a, o.weight);
        add(o.a, c, o.weight);
        break;
      }
      case Orbit::kGeneral: {
        const double c = 1.0 - o.a - o.b;
        add(o.a, o.b, o.weight);
        add(o.b, o.a, o.weight);
        add(o.b, c, o.weight);
        add(c, o.b, o.weight);
        add(c, o.a, o.weight);
        add(o.a, c, o.weight);
        break;
      }
    }
  }
  return rule;
}

// Collapsed (Duffy) Gauss product rule: x = u, y = v (1 - u), dx dy = (1 - u) du dv.
QuadRule collapsed_rule(int degree) {
  const LineRule gu = gauss_legendre((degree + 3) / 2);
  const LineRule gv = gauss_legendre((degree + 2) / 2);
  QuadRule rule;
  rule.exactness_degree = degree;
  for (std::size_t i = 0; i < gu.size(); ++i) {
    const double u = gu.points[i];
    for (std::size_t j = 0; j < gv.size(); ++j) {
      rule.points.push_back({u, gv.points[j] * (1.0 - u)});
      rule.weights.push_back(gu.weights[i] * gv.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

std::array<QuadRule, kMaxQuadratureDegree + 1> build_table() {
  std::array<QuadRule, kMaxQuadratureDegree + 1> table;
  table[1] = from_orbits({{Orbit::kCentroid, 0.0, 0.0, 1.0}}, 1);
  table[2] = from_orbits({{Orbit::kTwoEqual, 1.0 / 6.0, 0.0, 1.0 / 3.0}}, 2);
  // Dunavant degree 4 (6 points) also covers degree 3 with positive weights.
  table[4] = from_orbits({{Orbit::kTwoEqual, 0.445948490915965, 0.0, 0.223381589678011},
                          {Orbit::kTwoEqual, 0.091576213509771, 0.0, 0.109951743655322}},
                         4);
  table[3] = table[4];
  table[5] = from_orbits({{Orbit::kCentroid, 0.0, 0.0, 0.225},
                          {Orbit::kTwoEqual, 0.470142064105115, 0.0, 0.132394152788506},
                          {Orbit::kTwoEqual, 0.101286507323456, 0.0, 0.125939180544827}},
                         5);
  table[6] = from_orbits({{Orbit::kTwoEqual, 0.249286745170910, 0.0, 0.116786275726379},
                          {Orbit::kTwoEqual, 0.063089014491502, 0.0, 0.050844906370207},
                          {Orbit::kGeneral, 0.053145049844817, 0.310352451033784,
                           0.082851075618374}},
                         6);
  for (int d = 7; d <= kMaxQuadratureDegree; ++d) table[d] = collapsed_rule(d);
  return table;
}

}  // namespace

const QuadRule& rule_for_degree(int d) {
  if (d < 1 || d > kMaxQuadratureDegree) {
    throw UnsupportedDegree("rule_for_degree: degree " + std::to_string(d) +
                            " outside [1, " + std::to_string(kMaxQuadratureDegree) + "]");
  }
  static const std::array<QuadRule, kMaxQuadratureDegree + 1> table = build_table();
  return table[d];
}

LineRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: need at least one point");
  LineRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Newton on P_n with the Chebyshev-like initial guess; nodes symmetric about 0.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    const auto legendre = [n](double t) {
      // returns {P_n(t), P_n'(t)}
      double p0 = 1.0;
      double p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      return std::array<double, 2>{p1, n * (t * p1 - p0) / (t * t - 1.0)};
    };
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double dp = legendre(x)[1];
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1, 1] -> [0, 1]
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

}  // namespace fluxmaj
