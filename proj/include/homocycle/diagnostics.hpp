#pragma once

#include <array>
#include <optional>
#include <vector>

#include "homocycle/census.hpp"

namespace homocycle {

// Weak-mixing test: do all primitive-cycle lengths lie in a common delta*Z?
// Exact: every length is an element of Q(sqrt2,sqrt3,sqrt5), so pairwise
// rational dependence is decidable, and when all lengths are rational
// multiples of the first the generator is a gcd.  A single irrational ratio
// certifies a dense (non-lattice) length group.
struct WeakMixingReport {
  bool lattice = false;
  std::optional<ExactLength> delta;
  int cycles_inspected = 0;
  int distinct_lengths = 0;
};

inline WeakMixingReport condition_lattice(const std::vector<PrimCycle>& cycles) {
  WeakMixingReport rep;
  rep.cycles_inspected = static_cast<int>(cycles.size());
  std::vector<ExactLength> distinct;
  for (const auto& c : cycles) {
    bool seen = false;
    for (const auto& d : distinct) {
      if (d == c.length) {
        seen = true;
        break;
      }
    }
    if (!seen) distinct.push_back(c.length);
  }
  rep.distinct_lengths = static_cast<int>(distinct.size());
  if (distinct.empty()) return rep;

  std::vector<rational> ratios;
  for (const auto& len : distinct) {
    auto r = rational_ratio(len, distinct.front());
    if (!r) {
      rep.lattice = false;
      return rep;
    }
    ratios.push_back(*r);
  }
  rational g = 0;
  for (const auto& r : ratios) g = rational_gcd(g, r);
  rep.lattice = true;
  rep.delta = g * distinct.front();
  return rep;
}

// Diophantine diagnostic: xi = (L1 - L2)/(L2 - L3) for the three shortest
// distinct primitive-cycle lengths, with its continued-fraction partial
// quotients.  Bounded quotients (the badly-approximable property) cannot be
// decided from finitely many terms; this reports evidence only.
struct DiophantineDiagnostic {
  bool conclusive = false;
  std::array<ExactLength, 3> shortest{};
  double xi = 0;
  bool xi_rational = false;
  std::vector<long long> quotients;
  long long max_quotient = 0;
  int depth = 0;
};

inline DiophantineDiagnostic condition_b(const std::vector<PrimCycle>& cycles,
                                         int depth = 30) {
  DiophantineDiagnostic diag;
  diag.depth = depth;
  std::vector<ExactLength> distinct;
  for (const auto& c : cycles) {
    bool seen = false;
    for (const auto& d : distinct) {
      if (d == c.length) {
        seen = true;
        break;
      }
    }
    if (!seen) distinct.push_back(c.length);
  }
  if (distinct.size() < 3) return diag;
  std::sort(distinct.begin(), distinct.end(),
            [](const ExactLength& a, const ExactLength& b) {
              return compare(a, b) < 0;
            });
  diag.conclusive = true;
  diag.shortest = {distinct[0], distinct[1], distinct[2]};

  ExactLength num = distinct[0] - distinct[1];
  ExactLength den = distinct[1] - distinct[2];
  auto ratio = rational_ratio(num, den);
  diag.xi_rational = ratio.has_value();

  if (ratio) {
    // exact Euclidean continued fraction, necessarily finite
    rational x = *ratio;
    diag.xi = static_cast<double>(x);
    if (x < 0) x = -x;
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    bigint p = numerator(x), q = denominator(x);
    while (q != 0 && static_cast<int>(diag.quotients.size()) < depth) {
      bigint a = p / q;
      diag.quotients.push_back(a.convert_to<long long>());
      bigint r = p - a * q;
      p = q;
      q = r;
    }
  } else {
    float100 x = num.value_as<float100>() / den.value_as<float100>();
    diag.xi = static_cast<double>(x);
    if (x < 0) x = -x;
    for (int i = 0; i < depth; ++i) {
      float100 fl = floor(x);
      if (fl > float100(9.0e17)) break;  // precision exhausted
      long long a = fl.convert_to<long long>();
      diag.quotients.push_back(a);
      float100 frac = x - fl;
      if (frac < float100(1e-40)) break;
      x = 1 / frac;
    }
  }
  for (long long a : diag.quotients) diag.max_quotient = std::max(diag.max_quotient, a);
  return diag;
}

}  // namespace homocycle
