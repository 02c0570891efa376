#include <algorithm>
#include <charconv>
#include <sstream>

#include "alstl/stl.hpp"

namespace alstl {

RobustnessVector make_robustness_vector(std::vector<double> values) {
  RobustnessVector v;
  v.spec_ids.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v.spec_ids.push_back("phi" + std::to_string(i + 1));
  v.values = std::move(values);
  return v;
}

}  // namespace alstl

namespace alstl::stl {

ParseError::ParseError(const std::string& what, std::size_t position)
    : StlError("parse error at " + std::to_string(position) + ": " + what), position_(position) {}

UnknownChannelError::UnknownChannelError(std::string name)
    : StlError("unknown channel '" + name + "'"), name_(std::move(name)) {}

Schema make_schema(std::span<const std::string> names) {
  Schema s;
  s.reserve(names.size());
  for (const auto& n : names) s.push_back({n, ""});
  return s;
}

std::optional<std::size_t> find_channel(const Schema& schema, std::string_view name) {
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].name == name) return i;
  }
  return std::nullopt;
}

Trajectory::Trajectory(Schema schema, std::vector<std::vector<double>> samples, std::vector<int> actions)
    : schema_(std::move(schema)), sample_count_(samples.size()), actions_(std::move(actions)) {
  if (schema_.empty()) throw StlError("trajectory schema has no channels");
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    for (std::size_t j = i + 1; j < schema_.size(); ++j) {
      if (schema_[i].name == schema_[j].name) throw StlError("duplicate channel '" + schema_[i].name + "'");
    }
  }
  if (samples.empty()) throw StlError("trajectory has no samples");
  data_.reserve(samples.size() * schema_.size());
  for (std::size_t t = 0; t < samples.size(); ++t) {
    if (samples[t].size() != schema_.size()) {
      throw StlError("sample " + std::to_string(t) + " has " + std::to_string(samples[t].size()) +
                     " values, schema has " + std::to_string(schema_.size()));
    }
    data_.insert(data_.end(), samples[t].begin(), samples[t].end());
  }
}

std::vector<double> Trajectory::channel_values(std::size_t channel) const {
  std::vector<double> out(sample_count_);
  for (std::size_t t = 0; t < sample_count_; ++t) out[t] = at(t, channel);
  return out;
}

namespace {
FormulaPtr wrap(auto node) { return std::make_shared<const Formula>(Formula{std::move(node)}); }

void check_window(const Interval& w) {
  if (w.hi && *w.hi < w.lo) {
    throw StlError("interval lower bound " + std::to_string(w.lo) + " exceeds upper bound " + std::to_string(*w.hi));
  }
}
}  // namespace

FormulaPtr make_true() { return wrap(TrueLit{}); }
FormulaPtr make_false() { return wrap(FalseLit{}); }
FormulaPtr make_pred(Predicate p) { return wrap(std::move(p)); }
FormulaPtr make_pred(std::string channel, Comparison cmp, double threshold) {
  Predicate p;
  p.terms.push_back({1.0, std::move(channel)});
  p.cmp = cmp;
  p.threshold = threshold;
  return make_pred(std::move(p));
}
FormulaPtr make_not(FormulaPtr f) { return wrap(Not{std::move(f)}); }
FormulaPtr make_and(FormulaPtr a, FormulaPtr b) { return wrap(And{std::move(a), std::move(b)}); }
FormulaPtr make_or(FormulaPtr a, FormulaPtr b) { return wrap(Or{std::move(a), std::move(b)}); }
FormulaPtr make_implies(FormulaPtr a, FormulaPtr b) { return wrap(Implies{std::move(a), std::move(b)}); }
FormulaPtr make_always(Interval w, FormulaPtr f) {
  check_window(w);
  return wrap(Always{w, std::move(f)});
}
FormulaPtr make_eventually(Interval w, FormulaPtr f) {
  check_window(w);
  return wrap(Eventually{w, std::move(f)});
}
FormulaPtr make_until(Interval w, FormulaPtr a, FormulaPtr b) {
  check_window(w);
  return wrap(Until{w, std::move(a), std::move(b)});
}

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [](const TrueLit&) { return true; },
          [](const FalseLit&) { return true; },
          [&](const Predicate& p) { return p == std::get<Predicate>(b.node); },
          [&](const Not& n) { return structurally_equal(*n.arg, *std::get<Not>(b.node).arg); },
          [&](const And& n) {
            const auto& o = std::get<And>(b.node);
            return structurally_equal(*n.lhs, *o.lhs) && structurally_equal(*n.rhs, *o.rhs);
          },
          [&](const Or& n) {
            const auto& o = std::get<Or>(b.node);
            return structurally_equal(*n.lhs, *o.lhs) && structurally_equal(*n.rhs, *o.rhs);
          },
          [&](const Implies& n) {
            const auto& o = std::get<Implies>(b.node);
            return structurally_equal(*n.lhs, *o.lhs) && structurally_equal(*n.rhs, *o.rhs);
          },
          [&](const Always& n) {
            const auto& o = std::get<Always>(b.node);
            return n.window == o.window && structurally_equal(*n.arg, *o.arg);
          },
          [&](const Eventually& n) {
            const auto& o = std::get<Eventually>(b.node);
            return n.window == o.window && structurally_equal(*n.arg, *o.arg);
          },
          [&](const Until& n) {
            const auto& o = std::get<Until>(b.node);
            return n.window == o.window && structurally_equal(*n.lhs, *o.lhs) && structurally_equal(*n.rhs, *o.rhs);
          },
      },
      a.node);
}

std::size_t depth(const Formula& f) {
  return std::visit(overloaded{
                        [](const TrueLit&) -> std::size_t { return 0; },
                        [](const FalseLit&) -> std::size_t { return 0; },
                        [](const Predicate&) -> std::size_t { return 0; },
                        [](const Not& n) { return 1 + depth(*n.arg); },
                        [](const And& n) { return 1 + std::max(depth(*n.lhs), depth(*n.rhs)); },
                        [](const Or& n) { return 1 + std::max(depth(*n.lhs), depth(*n.rhs)); },
                        [](const Implies& n) { return 1 + std::max(depth(*n.lhs), depth(*n.rhs)); },
                        [](const Always& n) { return 1 + depth(*n.arg); },
                        [](const Eventually& n) { return 1 + depth(*n.arg); },
                        [](const Until& n) { return 1 + std::max(depth(*n.lhs), depth(*n.rhs)); },
                    },
                    f.node);
}

namespace {

std::string number_text(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string window_text(const Interval& w) {
  if (w.is_unbounded_from_zero()) return "";
  std::string s = "[" + std::to_string(w.lo) + ",";
  s += w.hi ? std::to_string(*w.hi) : std::string("inf");
  return s + "]";
}

std::string until_window_text(const Interval& w) {
  std::string s = "[" + std::to_string(w.lo) + ",";
  s += w.hi ? std::to_string(*w.hi) : std::string("inf");
  return s + "]";
}

const char* cmp_text(Comparison c) {
  switch (c) {
    case Comparison::Less: return "<";
    case Comparison::LessEqual: return "<=";
    case Comparison::Greater: return ">";
    case Comparison::GreaterEqual: return ">=";
  }
  return "?";
}

std::string predicate_text(const Predicate& p) {
  std::string s;
  bool first = true;
  auto emit_sign = [&](double v) -> double {
    if (first) {
      first = false;
      if (v < 0) {
        s += "-";
        return -v;
      }
      return v;
    }
    if (v < 0) {
      s += " - ";
      return -v;
    }
    s += " + ";
    return v;
  };
  for (const auto& t : p.terms) {
    double c = emit_sign(t.coeff);
    if (c != 1.0) s += number_text(c) + "*";
    s += t.channel;
  }
  if (p.offset != 0.0 || p.terms.empty()) {
    double c = emit_sign(p.offset);
    s += number_text(c);
  }
  s += " ";
  s += cmp_text(p.cmp);
  s += " " + number_text(p.threshold);
  return s;
}

}  // namespace

std::string to_string(const Formula& f) {
  return std::visit(overloaded{
                        [](const TrueLit&) -> std::string { return "true"; },
                        [](const FalseLit&) -> std::string { return "false"; },
                        [](const Predicate& p) { return predicate_text(p); },
                        [](const Not& n) { return "not (" + to_string(*n.arg) + ")"; },
                        [](const And& n) { return "(" + to_string(*n.lhs) + ") and (" + to_string(*n.rhs) + ")"; },
                        [](const Or& n) { return "(" + to_string(*n.lhs) + ") or (" + to_string(*n.rhs) + ")"; },
                        [](const Implies& n) { return "(" + to_string(*n.lhs) + ") -> (" + to_string(*n.rhs) + ")"; },
                        [](const Always& n) { return "G" + window_text(n.window) + "(" + to_string(*n.arg) + ")"; },
                        [](const Eventually& n) { return "F" + window_text(n.window) + "(" + to_string(*n.arg) + ")"; },
                        [](const Until& n) {
                          return "(" + to_string(*n.lhs) + ") U" + until_window_text(n.window) + " (" +
                                 to_string(*n.rhs) + ")";
                        },
                    },
                    f.node);
}

bool Spec::is_safety() const { return formula && std::holds_alternative<Always>(formula->node); }

std::vector<std::string> SpecSet::names() const {
  std::vector<std::string> out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back(s.name);
  return out;
}

Spec make_spec(std::string name, std::string text, RobustnessBounds bounds, const Schema& schema) {
  validate(bounds);
  Spec s;
  s.formula = parse_formula(text, schema);
  s.name = std::move(name);
  s.text = std::move(text);
  s.bounds = bounds;
  return s;
}

}  // namespace alstl::stl
