#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "wocr/components.hpp"
#include "wocr/errors.hpp"
#include "wocr/weights.hpp"

namespace wocr {

/// Closed interval with the number of equal sub-intervals each bracketing
/// search is run in. Subdividing guards against the mild nonconvexity of the
/// criterion curves.
struct SearchRange {
  double lo = 0.0;
  double hi = 1.0;
  int subdivisions = 8;
};

struct ScalarMinResult {
  double x = 0.0;
  double value = std::numeric_limits<double>::infinity();
  long evaluations = 0;
};

struct PairMinResult {
  double x1 = 0.0;
  double x2 = 0.0;
  double value = std::numeric_limits<double>::infinity();
  long evaluations = 0;
};

namespace detail {

// Bounded Brent minimization (golden section + parabolic interpolation) on
// [lo, hi] with absolute x tolerance xatol. +inf objective values are allowed;
// the parabolic step degenerates to golden section around them.
template <class F>
ScalarMinResult brent_bounded(F&& f, double lo, double hi, double xatol,
                              long& evaluations) {
  constexpr double golden = 0.3819660112501051;  // (3 - sqrt(5)) / 2
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  constexpr int max_iter = 200;

  double a = lo, b = hi;
  double xf = a + golden * (b - a);
  double nfc = xf, fulc = xf;
  double fx = f(xf);
  ++evaluations;
  double fnfc = fx, ffulc = fx;
  double rat = 0.0, e = 0.0;

  double xm = 0.5 * (a + b);
  double tol1 = sqrt_eps * std::abs(xf) + xatol / 3.0;
  double tol2 = 2.0 * tol1;

  for (int iter = 0; iter < max_iter && std::abs(xf - xm) > tol2 - 0.5 * (b - a);
       ++iter) {
    bool use_golden = true;
    if (std::abs(e) > tol1) {
      // fit a parabola through (xf, nfc, fulc)
      double r = (xf - nfc) * (fx - ffulc);
      double q = (xf - fulc) * (fx - fnfc);
      double p = (xf - fulc) * q - (xf - nfc) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      r = e;
      e = rat;
      if (std::abs(p) < std::abs(0.5 * q * r) && p > q * (a - xf) &&
          p < q * (b - xf)) {
        use_golden = false;
        rat = p / q;
        const double xtrial = xf + rat;
        if (xtrial - a < tol2 || b - xtrial < tol2)
          rat = xm - xf >= 0.0 ? tol1 : -tol1;
      }
    }
    if (use_golden) {
      e = (xf >= xm ? a : b) - xf;
      rat = golden * e;
    }

    const double step = std::abs(rat) >= tol1 ? rat : (rat >= 0.0 ? tol1 : -tol1);
    const double x = xf + step;
    const double fu = f(x);
    ++evaluations;

    if (fu <= fx) {
      if (x >= xf) a = xf; else b = xf;
      fulc = nfc; ffulc = fnfc;
      nfc = xf; fnfc = fx;
      xf = x; fx = fu;
    } else {
      if (x < xf) a = x; else b = x;
      if (fu <= fnfc || nfc == xf) {
        fulc = nfc; ffulc = fnfc;
        nfc = x; fnfc = fu;
      } else if (fu <= ffulc || fulc == xf || fulc == nfc) {
        fulc = x; ffulc = fu;
      }
    }
    xm = 0.5 * (a + b);
    tol1 = sqrt_eps * std::abs(xf) + xatol / 3.0;
    tol2 = 2.0 * tol1;
  }
  return {xf, fx, 0};
}

}  // namespace detail

/// Derivative-free bounded minimization: the range is split into
/// range.subdivisions equal brackets, Brent's method runs in each, and the
/// best point wins (sub-interval boundaries are probed as well, so the result
/// is never worse than any endpoint). Deterministic for deterministic f.
template <class F>
ScalarMinResult minimize_1d(F&& f, const SearchRange& range, double tol) {
  if (!(range.lo < range.hi)) throw std::invalid_argument("search range: lo must be < hi");
  if (range.subdivisions < 1) throw std::invalid_argument("subdivisions must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

  ScalarMinResult best;
  const int k = range.subdivisions;
  const double width = (range.hi - range.lo) / k;

  for (int i = 0; i <= k; ++i) {
    const double x = i < k ? range.lo + i * width : range.hi;
    const double fx = f(x);
    ++best.evaluations;
    if (fx < best.value) { best.x = x; best.value = fx; }
  }
  for (int i = 0; i < k; ++i) {
    const double lo = range.lo + i * width;
    const double hi = i + 1 < k ? lo + width : range.hi;
    const ScalarMinResult local = detail::brent_bounded(f, lo, hi, tol, best.evaluations);
    if (local.value < best.value) { best.x = local.x; best.value = local.value; }
  }
  if (std::isinf(best.value)) throw AllInfinite();
  return best;
}

inline double default_1d_tol(const SearchRange& range) {
  return 1e-6 * (range.hi - range.lo);
}

template <class F>
ScalarMinResult minimize_1d(F&& f, const SearchRange& range) {
  return minimize_1d(std::forward<F>(f), range, default_1d_tol(range));
}

/// Seeded global minimization over a box: a coarse scan, a simulated-annealing
/// walk from the incumbent, and a compass-search polish, all within `budget`
/// objective evaluations. Bit-reproducible for a fixed seed.
template <class F>
PairMinResult minimize_2d(F&& f, const SearchRange& range1, const SearchRange& range2,
                          long budget = 2000, std::uint64_t seed = 0) {
  if (!(range1.lo < range1.hi) || !(range2.lo < range2.hi))
    throw std::invalid_argument("search range: lo must be < hi");
  if (budget < 100) throw std::invalid_argument("budget must be >= 100");

  const double span1 = range1.hi - range1.lo;
  const double span2 = range2.hi - range2.lo;
  PairMinResult best;

  double worst_finite = -std::numeric_limits<double>::infinity();
  auto probe = [&](double x1, double x2) {
    const double fx = f(x1, x2);
    ++best.evaluations;
    if (fx < best.value) { best.x1 = x1; best.x2 = x2; best.value = fx; }
    if (std::isfinite(fx) && fx > worst_finite) worst_finite = fx;
    return fx;
  };

  // coarse scan, endpoints included
  const int grid_n = std::clamp(static_cast<int>(std::sqrt(budget / 4.0)), 8, 32);
  for (int i = 0; i < grid_n; ++i)
    for (int j = 0; j < grid_n; ++j)
      probe(range1.lo + span1 * i / (grid_n - 1), range2.lo + span2 * j / (grid_n - 1));
  if (std::isinf(best.value)) {
    // nothing finite anywhere; the annealing walk below cannot start
    throw AllInfinite();
  }

  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  auto reflect = [](double x, double lo, double hi) {
    const double span = hi - lo;
    double t = std::fmod(x - lo, 2.0 * span);
    if (t < 0.0) t += 2.0 * span;
    return t <= span ? lo + t : hi - (t - span);
  };

  // annealing walk from the incumbent; half the remaining budget
  const long anneal_budget = std::max<long>(0, (budget - best.evaluations) / 2);
  double cx1 = best.x1, cx2 = best.x2, cf = best.value;
  double temp = std::max(1e-12, 0.3 * (worst_finite - best.value));
  const double cooling = std::pow(1e-6, 1.0 / std::max<long>(1, anneal_budget));
  for (long it = 0; it < anneal_budget; ++it) {
    const double scale = 0.5 * std::pow(cooling, static_cast<double>(it) * 0.7);
    const double u1 = uniform(), u2 = uniform();
    // Box-Muller pair
    const double radius = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
    const double z1 = radius * std::cos(2.0 * std::numbers::pi * u2);
    const double z2 = radius * std::sin(2.0 * std::numbers::pi * u2);
    const double x1 = reflect(cx1 + z1 * scale * span1, range1.lo, range1.hi);
    const double x2 = reflect(cx2 + z2 * scale * span2, range2.lo, range2.hi);
    const double fx = probe(x1, x2);
    const bool accept =
        fx < cf || (std::isfinite(fx) && uniform() < std::exp(-(fx - cf) / temp));
    if (accept) { cx1 = x1; cx2 = x2; cf = fx; }
    temp *= cooling;
  }

  // compass polish around the incumbent
  double step1 = span1 / grid_n, step2 = span2 / grid_n;
  while (best.evaluations + 4 <= budget && (step1 > 1e-10 * span1 || step2 > 1e-10 * span2)) {
    const double bx1 = best.x1, bx2 = best.x2, bv = best.value;
    probe(std::min(range1.hi, bx1 + step1), bx2);
    probe(std::max(range1.lo, bx1 - step1), bx2);
    probe(bx1, std::min(range2.hi, bx2 + step2));
    probe(bx1, std::max(range2.lo, bx2 - step2));
    if (best.value >= bv) { step1 *= 0.5; step2 *= 0.5; }
  }

  if (std::isinf(best.value)) throw AllInfinite();
  return best;
}

/// Search ranges for the free tuning parameters of a weight family, derived
/// from the basis: lambda spans [0, 10 max s*], c covers the ordering
/// statistic's observed interval with a small pad, a spans [0.1, 200].
struct ParamRanges {
  std::optional<SearchRange> lambda;
  std::optional<SearchRange> a;
  std::optional<SearchRange> c;
};

inline ParamRanges default_ranges(const WeightSpec& spec, const OrthoBasis& basis) {
  ParamRanges ranges;
  if (spec.family == WeightFamily::RidgeShrink) {
    double hi;
    if (spec.ordering == Ordering::SingularValue) {
      hi = 10.0 * basis.d(0) * basis.d(0);
    } else {
      hi = 10.0 * basis.gamma.array().square().maxCoeff();
      if (hi <= 0.0) hi = 1.0;  // y orthogonal to the column space
    }
    ranges.lambda = SearchRange{0.0, hi};
  } else {
    ranges.a = SearchRange{0.1, 200.0};
    if (spec.ordering == Ordering::SingularValue) {
      const double d1 = basis.d(0), dm = basis.d(basis.m - 1);
      const double pad = 0.01 * (d1 - dm + 1.0);
      ranges.c = SearchRange{dm - pad, d1 + pad};
    } else {
      const double gmax = basis.gamma.array().square().maxCoeff();
      const double pad = 0.01 * (gmax + 1.0);
      ranges.c = SearchRange{0.0, gmax + pad};
    }
  }
  return ranges;
}

}  // namespace wocr
