#include "kq/geometry/chart.hpp"

#include <cmath>
#include <sstream>

#include "kq/common/error.hpp"

namespace kq {

Chart::Chart(std::vector<std::string> labels, std::vector<Interval> domain)
    : labels_(std::move(labels)), domain_(std::move(domain)), box_(domain_) {
  if (labels_.size() != domain_.size()) throw ConfigError("chart labels and domain differ in length");
  if (labels_.empty() || labels_.size() > static_cast<std::size_t>(kMaxJetDim)) {
    throw ConfigError("chart dimension out of range");
  }
  for (const auto& iv : domain_) {
    if (!(iv.lo < iv.hi)) throw ConfigError("empty chart interval");
  }
}

Chart& Chart::set_sampling_box(std::vector<Interval> box) {
  if (box.size() != domain_.size()) throw ConfigError("sampling box has the wrong dimension");
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (!(box[i].lo < box[i].hi) || box[i].lo < domain_[i].lo || box[i].hi > domain_[i].hi) {
      throw ConfigError("sampling box must be a non-empty sub-box of the domain");
    }
  }
  box_ = std::move(box);
  return *this;
}

Chart& Chart::add_constraint(ScalarField f) {
  if (f.max_variable() >= dim()) throw ConfigError("constraint references a coordinate outside the chart");
  constraints_.push_back(std::move(f));
  return *this;
}

bool Chart::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (!std::isfinite(x[i])) return false;
    if (!(x[i] > domain_[i].lo + kBoundaryMargin && x[i] < domain_[i].hi - kBoundaryMargin)) return false;
  }
  for (const auto& c : constraints_) {
    if (!(c.value(x) > kBoundaryMargin)) return false;
  }
  return true;
}

void Chart::require(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw DomainError("point has " + std::to_string(x.size()) + " coordinates, chart has " +
                      std::to_string(dim()));
  }
  for (int i = 0; i < dim(); ++i) {
    if (!(x[i] > domain_[i].lo + kBoundaryMargin && x[i] < domain_[i].hi - kBoundaryMargin)) {
      std::ostringstream os;
      os << "coordinate " << labels_[i] << " = " << x[i] << " outside (" << domain_[i].lo << ", "
         << domain_[i].hi << ") or within " << kBoundaryMargin << " of its boundary";
      throw DomainError(os.str(), x[i]);
    }
  }
  for (std::size_t k = 0; k < constraints_.size(); ++k) {
    const double v = constraints_[k].value(x);
    if (!(v > kBoundaryMargin)) {
      throw DomainError("chart constraint " + std::to_string(k) + " violated: value " + std::to_string(v), v);
    }
  }
}

std::vector<double> Chart::sample(std::mt19937_64& rng) const {
  std::vector<double> x(dim());
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (int i = 0; i < dim(); ++i) {
      const auto& b = box_[i];
      if (!std::isfinite(b.lo) || !std::isfinite(b.hi)) throw ConfigError("cannot sample an unbounded chart box");
      const double eps = 1e-3 * (b.hi - b.lo);
      x[i] = std::uniform_real_distribution<double>(b.lo + eps, b.hi - eps)(rng);
    }
    if (contains(x)) return x;
  }
  throw ConfigError("chart sampling box contains no admissible points");
}

std::vector<std::vector<double>> Chart::sample(std::mt19937_64& rng, int count) const {
  std::vector<std::vector<double>> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) pts.push_back(sample(rng));
  return pts;
}

namespace {

nlohmann::json bound_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double bound_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j == "inf") return std::numeric_limits<double>::infinity();
  if (j == "-inf") return -std::numeric_limits<double>::infinity();
  throw ConfigError("interval bound must be a number, \"inf\" or \"-inf\"");
}

std::vector<Interval> intervals_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("intervals must be an array of [lo, hi] pairs");
  std::vector<Interval> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw ConfigError("interval must be a [lo, hi] pair");
    out.push_back({bound_from_json(p[0]), bound_from_json(p[1])});
  }
  return out;
}

}  // namespace

nlohmann::json Chart::to_json() const {
  nlohmann::json j;
  j["coordinates"] = labels_;
  auto iv = [](const std::vector<Interval>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& i : v) a.push_back({bound_to_json(i.lo), bound_to_json(i.hi)});
    return a;
  };
  j["domain"] = iv(domain_);
  j["sampling_box"] = iv(box_);
  j["constraints"] = nlohmann::json::array();
  for (const auto& c : constraints_) j["constraints"].push_back(c.to_json());
  return j;
}

Chart Chart::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("coordinates") || !j.contains("domain")) {
    throw ConfigError("chart needs \"coordinates\" and \"domain\"");
  }
  Chart c(j.at("coordinates").get<std::vector<std::string>>(), intervals_from_json(j.at("domain")));
  if (j.contains("sampling_box")) c.set_sampling_box(intervals_from_json(j.at("sampling_box")));
  if (j.contains("constraints")) {
    for (const auto& f : j.at("constraints")) c.add_constraint(ScalarField::from_json(f));
  }
  return c;
}

}  // namespace kq
