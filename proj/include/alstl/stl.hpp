#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "alstl/robustness_vector.hpp"

namespace alstl::stl {

constexpr double kTop = std::numeric_limits<double>::infinity();
constexpr double kBottom = -kTop;

class StlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the parser. `position()` is a byte offset into the source text.
class ParseError : public StlError {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownChannelError : public StlError {
 public:
  explicit UnknownChannelError(std::string name);
  const std::string& channel() const noexcept { return name_; }

 private:
  std::string name_;
};

struct Channel {
  std::string name;
  std::string description;
};

using Schema = std::vector<Channel>;

Schema make_schema(std::span<const std::string> names);
std::optional<std::size_t> find_channel(const Schema& schema, std::string_view name);

/// A finite, integer-indexed signal. Sample t holds one value per channel.
/// Optional actions are carried along for trajectories produced by an agent
/// (actions[t] was taken in sample t); the monitor never looks at them.
class Trajectory {
 public:
  Trajectory(Schema schema, std::vector<std::vector<double>> samples, std::vector<int> actions = {});

  const Schema& schema() const noexcept { return schema_; }
  std::size_t channel_count() const noexcept { return schema_.size(); }
  std::size_t sample_count() const noexcept { return sample_count_; }
  /// Final sample index L.
  std::size_t last_index() const noexcept { return sample_count_ - 1; }

  double at(std::size_t t, std::size_t channel) const { return data_[t * schema_.size() + channel]; }
  std::span<const double> sample(std::size_t t) const {
    return {data_.data() + t * schema_.size(), schema_.size()};
  }
  std::vector<double> channel_values(std::size_t channel) const;
  const std::vector<int>& actions() const noexcept { return actions_; }

  bool operator==(const Trajectory&) const = default;

 private:
  Schema schema_;
  std::size_t sample_count_;
  std::vector<double> data_;
  std::vector<int> actions_;
};

inline bool operator==(const Channel& a, const Channel& b) { return a.name == b.name; }

/// Closed interval of sample offsets; `hi` empty means unbounded.
struct Interval {
  std::size_t lo = 0;
  std::optional<std::size_t> hi;

  static Interval unbounded() { return {}; }
  bool is_unbounded_from_zero() const { return lo == 0 && !hi; }
  bool operator==(const Interval&) const = default;
};

enum class Comparison { Less, LessEqual, Greater, GreaterEqual };

struct AffineTerm {
  double coeff = 1.0;
  std::string channel;
  bool operator==(const AffineTerm&) const = default;
};

/// `sum(coeff_i * channel_i) + offset  <cmp>  threshold`
struct Predicate {
  std::vector<AffineTerm> terms;
  double offset = 0.0;
  Comparison cmp = Comparison::Greater;
  double threshold = 0.0;

  bool strict() const { return cmp == Comparison::Less || cmp == Comparison::Greater; }
  bool operator==(const Predicate&) const = default;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct TrueLit {};
struct FalseLit {};
struct Not { FormulaPtr arg; };
struct And { FormulaPtr lhs, rhs; };
struct Or { FormulaPtr lhs, rhs; };
struct Implies { FormulaPtr lhs, rhs; };
struct Always { Interval window; FormulaPtr arg; };
struct Eventually { Interval window; FormulaPtr arg; };
struct Until { Interval window; FormulaPtr lhs, rhs; };

struct Formula {
  std::variant<TrueLit, FalseLit, Predicate, Not, And, Or, Implies, Always, Eventually, Until> node;
};

FormulaPtr make_true();
FormulaPtr make_false();
FormulaPtr make_pred(Predicate p);
FormulaPtr make_pred(std::string channel, Comparison cmp, double threshold);
FormulaPtr make_not(FormulaPtr f);
FormulaPtr make_and(FormulaPtr a, FormulaPtr b);
FormulaPtr make_or(FormulaPtr a, FormulaPtr b);
FormulaPtr make_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr make_always(Interval w, FormulaPtr f);
FormulaPtr make_eventually(Interval w, FormulaPtr f);
FormulaPtr make_until(Interval w, FormulaPtr a, FormulaPtr b);

bool structurally_equal(const Formula& a, const Formula& b);
std::size_t depth(const Formula& f);

/// Parses the concrete syntax. Every channel must exist in `schema`; pass an
/// empty schema to skip the channel check.
FormulaPtr parse_formula(std::string_view text, const Schema& schema);
FormulaPtr parse_formula(std::string_view text);

/// Canonical text form; `parse_formula(to_string(f))` is structurally equal to f.
std::string to_string(const Formula& f);

/// Signed margin of a predicate at one sample: positive iff the comparison holds
/// with slack. Channel indices are resolved against `schema`.
double predicate_margin(const Predicate& p, const Schema& schema, std::span<const double> sample);

/// rho(phi, tau, t) for every t in [0, L], extended reals. Windows are
/// truncated to [0, L]; an empty window folds to the operator identity.
std::vector<double> robustness_signal(const Formula& phi, const Trajectory& tau);

double robustness(const Formula& phi, const Trajectory& tau, std::size_t t);
double robustness_full(const Formula& phi, const Trajectory& tau);

struct RobustnessBounds {
  double delta = 1.0;
  double raw_min = -1.0;
  double raw_max = 1.0;
};

void validate(const RobustnessBounds& b);

/// Two-piece linear map [raw_min, 0] -> [-delta, 0], [0, raw_max] -> [0, delta],
/// clamped outside the raw range. Infinite inputs clamp to +-delta.
double normalize(double raw, const RobustnessBounds& bounds);

struct Spec {
  std::string name;
  std::string text;
  FormulaPtr formula;
  RobustnessBounds bounds;

  /// Top-level Always: a violated safety spec changes how rewards are propagated.
  bool is_safety() const;
};

struct SpecSet {
  std::vector<Spec> specs;
  double delta = 1.0;

  std::size_t size() const noexcept { return specs.size(); }
  std::vector<std::string> names() const;
};

Spec make_spec(std::string name, std::string text, RobustnessBounds bounds, const Schema& schema);

RobustnessVector evaluate_specs(const SpecSet& specs, const Trajectory& tau);

}  // namespace alstl::stl
