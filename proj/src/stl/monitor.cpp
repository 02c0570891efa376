#include <algorithm>
#include <cmath>

#include "alstl/kernels.hpp"
#include "alstl/stl.hpp"

namespace alstl::stl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Window t+I intersected with [0, last]; first > last when empty.
struct Window {
  std::size_t first;
  std::size_t last;
  bool empty() const { return first > last; }
};

Window clip(const Interval& w, std::size_t t, std::size_t last) {
  const std::size_t first = t + w.lo;
  std::size_t hi = last;
  if (w.hi) hi = std::min(last, t + *w.hi);
  if (first > last) return {1, 0};
  return {first, hi};
}

class SignalEvaluator {
 public:
  explicit SignalEvaluator(const Trajectory& tau) : tau_(tau), n_(tau.sample_count()) {}

  std::vector<double> eval(const Formula& f) const {
    return std::visit(
        overloaded{
            [&](const TrueLit&) { return std::vector<double>(n_, kTop); },
            [&](const FalseLit&) { return std::vector<double>(n_, kBottom); },
            [&](const Predicate& p) {
              std::vector<double> out(n_);
              for (std::size_t t = 0; t < n_; ++t) out[t] = predicate_margin(p, tau_.schema(), tau_.sample(t));
              return out;
            },
            [&](const Not& n) {
              auto v = eval(*n.arg);
              for (double& x : v) x = -x;
              return v;
            },
            [&](const And& n) { return pointwise(eval(*n.lhs), eval(*n.rhs), [](double a, double b) { return std::min(a, b); }); },
            [&](const Or& n) { return pointwise(eval(*n.lhs), eval(*n.rhs), [](double a, double b) { return std::max(a, b); }); },
            [&](const Implies& n) {
              return pointwise(eval(*n.lhs), eval(*n.rhs), [](double a, double b) { return std::max(-a, b); });
            },
            [&](const Always& n) { return fold_window(n.window, eval(*n.arg), kernels::reduce_min, kTop); },
            [&](const Eventually& n) { return fold_window(n.window, eval(*n.arg), kernels::reduce_max, kBottom); },
            [&](const Until& n) { return until(n.window, eval(*n.lhs), eval(*n.rhs)); },
        },
        f.node);
  }

 private:
  template <class Op>
  static std::vector<double> pointwise(std::vector<double> a, const std::vector<double>& b, Op op) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = op(a[i], b[i]);
    return a;
  }

  std::vector<double> fold_window(const Interval& w, const std::vector<double>& arg,
                                  double (*reduce)(std::span<const double>), double identity) const {
    std::vector<double> out(n_);
    const std::span<const double> s(arg);
    for (std::size_t t = 0; t < n_; ++t) {
      const Window win = clip(w, t, n_ - 1);
      out[t] = win.empty() ? identity : reduce(s.subspan(win.first, win.last - win.first + 1));
    }
    return out;
  }

  // max over t1 in window of min(rhs[t1], min over t2 in [t, t1) of lhs[t2]);
  // the prefix over [t, t) is empty and folds to top.
  std::vector<double> until(const Interval& w, const std::vector<double>& lhs, const std::vector<double>& rhs) const {
    std::vector<double> out(n_, kBottom);
    for (std::size_t t = 0; t < n_; ++t) {
      const Window win = clip(w, t, n_ - 1);
      if (win.empty()) continue;
      double prefix = kTop;
      for (std::size_t k = t; k < win.first; ++k) prefix = std::min(prefix, lhs[k]);
      double best = kBottom;
      for (std::size_t t1 = win.first; t1 <= win.last; ++t1) {
        best = std::max(best, std::min(rhs[t1], prefix));
        prefix = std::min(prefix, lhs[t1]);
      }
      out[t] = best;
    }
    return out;
  }

  const Trajectory& tau_;
  std::size_t n_;
};

}  // namespace

double predicate_margin(const Predicate& p, const Schema& schema, std::span<const double> sample) {
  double expr = p.offset;
  for (const auto& term : p.terms) {
    const auto idx = find_channel(schema, term.channel);
    if (!idx) throw UnknownChannelError(term.channel);
    expr += term.coeff * sample[*idx];
  }
  switch (p.cmp) {
    case Comparison::Less:
    case Comparison::LessEqual: return p.threshold - expr;
    case Comparison::Greater:
    case Comparison::GreaterEqual: return expr - p.threshold;
  }
  return 0.0;
}

std::vector<double> robustness_signal(const Formula& phi, const Trajectory& tau) {
  return SignalEvaluator(tau).eval(phi);
}

double robustness(const Formula& phi, const Trajectory& tau, std::size_t t) {
  if (t > tau.last_index()) {
    throw StlError("time " + std::to_string(t) + " outside trajectory [0, " + std::to_string(tau.last_index()) + "]");
  }
  return robustness_signal(phi, tau)[t];
}

double robustness_full(const Formula& phi, const Trajectory& tau) { return robustness(phi, tau, 0); }

void validate(const RobustnessBounds& b) {
  if (!(b.delta > 0.0) || !std::isfinite(b.delta)) throw StlError("robustness delta must be positive and finite");
  if (!(b.raw_min < b.raw_max)) throw StlError("raw_min must be below raw_max");
}

double normalize(double raw, const RobustnessBounds& b) {
  if (raw == 0.0) return 0.0;
  if (raw > 0.0) {
    if (b.raw_max <= 0.0 || raw >= b.raw_max) return b.delta;
    return b.delta * (raw / b.raw_max);
  }
  if (b.raw_min >= 0.0 || raw <= b.raw_min) return -b.delta;
  return b.delta * (raw / -b.raw_min);
}

RobustnessVector evaluate_specs(const SpecSet& specs, const Trajectory& tau) {
  RobustnessVector v;
  v.values.reserve(specs.size());
  v.spec_ids.reserve(specs.size());
  for (const auto& s : specs.specs) {
    v.values.push_back(normalize(robustness_full(*s.formula, tau), s.bounds));
    v.spec_ids.push_back(s.name);
  }
  return v;
}

}  // namespace alstl::stl
