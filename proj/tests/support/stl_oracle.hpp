#pragma once

// Reference evaluators for the monitor. They expand every temporal operator
// by explicit enumeration straight from the min/max definitions and share no
// code with the library's monitor.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "alstl/stl.hpp"

namespace oracle {

using alstl::stl::Formula;
using alstl::stl::FormulaPtr;
using alstl::stl::Trajectory;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double affine_value(const alstl::stl::Predicate& p, const Trajectory& tau, std::size_t t) {
  double v = p.offset;
  for (const auto& term : p.terms) {
    std::size_t idx = 0;
    while (tau.schema()[idx].name != term.channel) ++idx;
    v += term.coeff * tau.at(t, idx);
  }
  return v;
}

// Sample indices covered by t + [lo, hi], clipped to [0, L].
inline std::vector<std::size_t> window(const alstl::stl::Interval& w, std::size_t t, std::size_t last) {
  std::vector<std::size_t> out;
  const std::size_t hi = w.hi ? t + *w.hi : last;
  for (std::size_t i = t + w.lo; i <= std::min(hi, last); ++i) out.push_back(i);
  return out;
}

inline double rho(const Formula& f, const Trajectory& tau, std::size_t t) {
  using namespace alstl::stl;
  const std::size_t last = tau.last_index();
  if (std::holds_alternative<TrueLit>(f.node)) return kInf;
  if (std::holds_alternative<FalseLit>(f.node)) return -kInf;
  if (const auto* p = std::get_if<Predicate>(&f.node)) {
    const double e = affine_value(*p, tau, t);
    const bool below = p->cmp == Comparison::Less || p->cmp == Comparison::LessEqual;
    return below ? p->threshold - e : e - p->threshold;
  }
  if (const auto* n = std::get_if<Not>(&f.node)) return -rho(*n->arg, tau, t);
  if (const auto* n = std::get_if<And>(&f.node)) return std::min(rho(*n->lhs, tau, t), rho(*n->rhs, tau, t));
  if (const auto* n = std::get_if<Or>(&f.node)) return std::max(rho(*n->lhs, tau, t), rho(*n->rhs, tau, t));
  if (const auto* n = std::get_if<Implies>(&f.node)) return std::max(-rho(*n->lhs, tau, t), rho(*n->rhs, tau, t));
  if (const auto* n = std::get_if<Always>(&f.node)) {
    double v = kInf;
    for (std::size_t i : window(n->window, t, last)) v = std::min(v, rho(*n->arg, tau, i));
    return v;
  }
  if (const auto* n = std::get_if<Eventually>(&f.node)) {
    double v = -kInf;
    for (std::size_t i : window(n->window, t, last)) v = std::max(v, rho(*n->arg, tau, i));
    return v;
  }
  const auto& u = std::get<Until>(f.node);
  double best = -kInf;
  for (std::size_t t1 : window(u.window, t, last)) {
    double v = rho(*u.rhs, tau, t1);
    for (std::size_t t2 = t; t2 < t1; ++t2) v = std::min(v, rho(*u.lhs, tau, t2));
    best = std::max(best, v);
  }
  return best;
}

// Boolean satisfaction. At zero margin a strict comparison fails and a
// non-strict one holds.
inline bool holds(const Formula& f, const Trajectory& tau, std::size_t t) {
  using namespace alstl::stl;
  const std::size_t last = tau.last_index();
  if (std::holds_alternative<TrueLit>(f.node)) return true;
  if (std::holds_alternative<FalseLit>(f.node)) return false;
  if (const auto* p = std::get_if<Predicate>(&f.node)) {
    const double e = affine_value(*p, tau, t);
    switch (p->cmp) {
      case Comparison::Less: return e < p->threshold;
      case Comparison::LessEqual: return e <= p->threshold;
      case Comparison::Greater: return e > p->threshold;
      case Comparison::GreaterEqual: return e >= p->threshold;
    }
  }
  if (const auto* n = std::get_if<Not>(&f.node)) return !holds(*n->arg, tau, t);
  if (const auto* n = std::get_if<And>(&f.node)) return holds(*n->lhs, tau, t) && holds(*n->rhs, tau, t);
  if (const auto* n = std::get_if<Or>(&f.node)) return holds(*n->lhs, tau, t) || holds(*n->rhs, tau, t);
  if (const auto* n = std::get_if<Implies>(&f.node)) return !holds(*n->lhs, tau, t) || holds(*n->rhs, tau, t);
  if (const auto* n = std::get_if<Always>(&f.node)) {
    for (std::size_t i : window(n->window, t, last))
      if (!holds(*n->arg, tau, i)) return false;
    return true;
  }
  if (const auto* n = std::get_if<Eventually>(&f.node)) {
    for (std::size_t i : window(n->window, t, last))
      if (holds(*n->arg, tau, i)) return true;
    return false;
  }
  const auto& u = std::get<Until>(f.node);
  for (std::size_t t1 : window(u.window, t, last)) {
    if (!holds(*u.rhs, tau, t1)) continue;
    bool prefix = true;
    for (std::size_t t2 = t; t2 < t1; ++t2) prefix = prefix && holds(*u.lhs, tau, t2);
    if (prefix) return true;
  }
  return false;
}

inline alstl::stl::Schema xy_schema() { return {{"x", ""}, {"y", ""}}; }

// All trajectories over channels {x, y} with values in {-1, 1} and
// 1..max_len samples.
inline std::vector<Trajectory> enumerate_binary_trajectories(std::size_t max_len) {
  std::vector<Trajectory> out;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t combos = std::size_t{1} << (2 * len);
    for (std::size_t code = 0; code < combos; ++code) {
      std::vector<std::vector<double>> samples(len, std::vector<double>(2));
      for (std::size_t t = 0; t < len; ++t) {
        samples[t][0] = (code >> (2 * t)) & 1 ? 1.0 : -1.0;
        samples[t][1] = (code >> (2 * t + 1)) & 1 ? 1.0 : -1.0;
      }
      out.emplace_back(xy_schema(), std::move(samples));
    }
  }
  return out;
}

inline Trajectory random_trajectory(std::mt19937_64& rng, std::size_t len) {
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  std::vector<std::vector<double>> samples(len, std::vector<double>(2));
  for (auto& s : samples) {
    // Round to quarters so exact ties and zero margins show up.
    s[0] = std::round(val(rng) * 4.0) / 4.0;
    s[1] = std::round(val(rng) * 4.0) / 4.0;
  }
  return Trajectory(xy_schema(), std::move(samples));
}

inline alstl::stl::Interval random_interval(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> lo(0, 3), span(0, 3), coin(0, 3);
  alstl::stl::Interval w;
  w.lo = static_cast<std::size_t>(lo(rng));
  if (coin(rng) != 0) w.hi = w.lo + static_cast<std::size_t>(span(rng));
  return w;
}

inline FormulaPtr random_atom(std::mt19937_64& rng) {
  using namespace alstl::stl;
  std::uniform_int_distribution<int> kind(0, 9), cmp(0, 3), thr(-2, 2);
  const int k = kind(rng);
  if (k == 0) return make_true();
  if (k == 1) return make_false();
  Predicate p;
  p.cmp = static_cast<Comparison>(cmp(rng));
  p.threshold = thr(rng) * 0.5;
  if (k == 2) {
    p.terms = {{2.0, "x"}, {-1.0, "y"}};
    p.offset = 0.5;
  } else {
    p.terms = {{1.0, k % 2 ? "x" : "y"}};
  }
  return make_pred(std::move(p));
}

inline FormulaPtr random_formula(std::mt19937_64& rng, int max_depth) {
  using namespace alstl::stl;
  std::uniform_int_distribution<int> op(0, 8);
  if (max_depth == 0) return random_atom(rng);
  switch (op(rng)) {
    case 0: return random_atom(rng);
    case 1: return make_not(random_formula(rng, max_depth - 1));
    case 2: return make_and(random_formula(rng, max_depth - 1), random_formula(rng, max_depth - 1));
    case 3: return make_or(random_formula(rng, max_depth - 1), random_formula(rng, max_depth - 1));
    case 4: return make_implies(random_formula(rng, max_depth - 1), random_formula(rng, max_depth - 1));
    case 5: return make_always(random_interval(rng), random_formula(rng, max_depth - 1));
    case 6: return make_eventually(random_interval(rng), random_formula(rng, max_depth - 1));
    default:
      return make_until(random_interval(rng), random_formula(rng, max_depth - 1), random_formula(rng, max_depth - 1));
  }
}

// Same value up to 1e-9, with matching infinities.
inline bool same(double a, double b, double tol = 1e-9) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

}  // namespace oracle
