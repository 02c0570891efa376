#include <algorithm>
#include <cmath>
#include <numeric>

#include "alstl/al_loop.hpp"

namespace alstl::loop {

Record make_record(stl::Trajectory tau, const stl::SpecSet& specs, double lambda, std::uint64_t serial) {
  RobustnessVector rho = stl::evaluate_specs(specs, tau);
  const double p = graph::pga_of(rho, lambda).pga;
  return Record{std::move(tau), std::move(rho), p, serial};
}

Buffer::Buffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw LoopError("buffer capacity must be positive");
}

std::vector<double> Buffer::pgas() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.pga);
  return out;
}

std::vector<stl::Trajectory> Buffer::trajectories() const {
  std::vector<stl::Trajectory> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.trajectory);
  return out;
}

namespace {
bool better(const Record& a, const Record& b) {
  if (a.pga != b.pga) return a.pga > b.pga;
  return a.serial > b.serial;
}
}  // namespace

void Buffer::push(Record r) {
  records_.push_back(std::move(r));
  if (records_.size() > capacity_) {
    auto worst = std::min_element(records_.begin(), records_.end(),
                                  [](const Record& a, const Record& b) { return better(b, a); });
    records_.erase(worst);
  }
}

Buffer Buffer::top_p(std::vector<Record> records, std::size_t capacity) {
  std::stable_sort(records.begin(), records.end(), better);
  if (records.size() > capacity) records.erase(records.begin() + static_cast<std::ptrdiff_t>(capacity), records.end());
  Buffer b(capacity);
  b.records_ = std::move(records);
  return b;
}

MergeOp parse_merge_op(std::string_view s) {
  if (s == "min") return MergeOp::Min;
  if (s == "max") return MergeOp::Max;
  if (s == "mean") return MergeOp::Mean;
  throw LoopError("unknown merge operator '" + std::string(s) + "' (expected min, max or mean)");
}

UpdateStrategy parse_update_strategy(std::string_view s) {
  if (s == "strategic" || s == "strategic_merge") return UpdateStrategy::StrategicMerge;
  if (s == "naive" || s == "naive_merge") return UpdateStrategy::NaiveMerge;
  if (s == "replace" || s == "replace_all") return UpdateStrategy::ReplaceAll;
  throw LoopError("unknown update strategy '" + std::string(s) + "' (expected strategic, naive or replace)");
}

std::string_view to_string(MergeOp op) {
  switch (op) {
    case MergeOp::Min: return "min";
    case MergeOp::Max: return "max";
    case MergeOp::Mean: return "mean";
  }
  return "?";
}

std::string_view to_string(UpdateStrategy s) {
  switch (s) {
    case UpdateStrategy::StrategicMerge: return "strategic";
    case UpdateStrategy::NaiveMerge: return "naive";
    case UpdateStrategy::ReplaceAll: return "replace";
  }
  return "?";
}

double metric(std::span<const double> pgas, MergeOp op) {
  if (pgas.empty()) throw LoopError("metric of an empty buffer");
  switch (op) {
    case MergeOp::Min: return *std::min_element(pgas.begin(), pgas.end());
    case MergeOp::Max: return *std::max_element(pgas.begin(), pgas.end());
    case MergeOp::Mean: return std::accumulate(pgas.begin(), pgas.end(), 0.0) / static_cast<double>(pgas.size());
  }
  return 0.0;
}

double metric(const Buffer& buffer, MergeOp op) {
  const auto p = buffer.pgas();
  return metric(p, op);
}

MergeResult strategic_merge(const Buffer& frontier, const Buffer& candidate, MergeOp op) {
  if (frontier.empty() || candidate.empty()) throw LoopError("strategic merge needs two non-empty buffers");
  const double f_hat = metric(frontier, op);
  const double c_hat = metric(candidate, op);
  if (!(c_hat > f_hat)) return {frontier, false};
  std::vector<Record> kept;
  for (const auto* buf : {&frontier, &candidate}) {
    for (const auto& r : buf->records()) {
      if (r.pga > f_hat) kept.push_back(r);
    }
  }
  return {Buffer::top_p(std::move(kept), frontier.capacity()), true};
}

Buffer naive_merge(const Buffer& frontier, const Buffer& candidate) {
  std::vector<Record> all = frontier.records();
  all.insert(all.end(), candidate.records().begin(), candidate.records().end());
  return Buffer::top_p(std::move(all), frontier.capacity());
}

Buffer replace_all(const Buffer& frontier, const Buffer& candidate) {
  return Buffer::top_p(candidate.records(), frontier.capacity());
}

bool check_convergence(double frontier_metric, double candidate_metric, double threshold, bool exploration_budget_met) {
  if (!std::isfinite(frontier_metric) || !std::isfinite(candidate_metric)) throw LoopError("metrics must be finite");
  return exploration_budget_met && std::abs(frontier_metric - candidate_metric) < threshold;
}

}  // namespace alstl::loop
