#include "cubic_euler/periodic.hpp"

#include <algorithm>
#include <sstream>

namespace cubic_euler {

namespace {

class SequenceBuilder {
 public:
  explicit SequenceBuilder(int period) : period_(period) {}

  // Appends first, first+1, ..., last (nothing when last < first).
  SequenceBuilder& run(int first, int last) {
    for (int v = first; v <= last; ++v) values_.push_back(v);
    return *this;
  }
  SequenceBuilder& put(std::initializer_list<int> vs) {
    values_.insert(values_.end(), vs);
    return *this;
  }

  // Completes with the tail rule tau(n) = n - p and cuts at the first index
  // on the tail.
  PeriodicTau finish() const {
    std::vector<int> v = values_;
    const int horizon = std::max(period_, 2 * period_ - 2);
    while (static_cast<int>(v.size()) < horizon) v.push_back(static_cast<int>(v.size()) + 1 - period_);
    std::size_t n0 = 0;
    while (v[n0] != static_cast<int>(n0) + 1 - period_) ++n0;
    v.resize(n0 + 1);
    return PeriodicTau(TauPrefix(std::span<const int>(v)), period_);
  }

 private:
  int period_;
  std::vector<int> values_;
};

}  // namespace

std::vector<ExceptionFamily> exception_families(int period) {
  const int p = period;
  if (p < 5) throw std::invalid_argument("exception families are defined for p >= 5");
  std::vector<ExceptionFamily> out;
  auto add = [&](std::string name, const SequenceBuilder& b) { out.push_back({std::move(name), b.finish()}); };
  auto seq = [&] { return SequenceBuilder(p); };

  // Off the tail at 2p-3.
  add("2p-3", seq().run(0, p - 3).run(0, p - 2));

  // On the tail from 2p-3, off it at 2p-4.
  add("2p-4/a", seq().run(0, p - 4).put({0}).run(0, p - 3));
  add("2p-4/b", seq().run(0, p - 4).run(0, p - 3).put({p - 3}));
  if (p % 2 == 1) add("2p-4/odd", seq().put({0}).run(0, p - 4).run(1, p - 2));

  // On the tail from 2p-4, off it at 2p-5.
  add("2p-5/a", seq().run(0, p - 5).run(0, p - 4).put({p - 4, p - 4}));
  add("2p-5/b", seq().run(0, p - 5).put({0}).run(0, p - 4).put({p - 4}));
  add("2p-5/c", seq().run(0, p - 5).put({0, 0}).run(0, p - 4));
  // At p = 5 this form reads 0,0,1,0,1 and tau(4) = 0 is not admissible.
  if (p > 5) add("2p-5/d", seq().run(0, p - 5).put({0, 1}).run(0, p - 4));
  if (p % 2 == 1) add("2p-5/odd", seq().put({0}).run(0, p - 5).run(0, p - 3));
  if (p % 2 == 0) add("2p-5/even", seq().put({0}).run(0, p - 5).put({1}).run(1, p - 3));
  if ((p - 1) % 3 == 0) add("2p-5/3|p-1", seq().put({0, 1}).run(0, p - 5).run(2, p - 2));
  if ((p - 2) % 3 == 0) add("2p-5/3|p-2", seq().put({0, 0, 1}).run(1, p - 5).run(2, p - 2));

  // Small periods collapse some of the closed forms onto each other.
  std::vector<ExceptionFamily> unique;
  for (auto& f : out) {
    if (std::none_of(unique.begin(), unique.end(), [&](const ExceptionFamily& u) { return u.tau == f.tau; })) {
      unique.push_back(std::move(f));
    }
  }
  return unique;
}

ExceptionAudit::ExceptionAudit(int period) : period_(period) {
  if (period >= 5) families_ = exception_families(period);
}

bool ExceptionAudit::observe(const PeriodicTau& tau) {
  if (period_ < 5) return false;
  // The tail starts at 2p-4 or earlier iff the prefix is short enough.
  if (tau.defining_length() <= 2 * period_ - 5) return false;
  for (std::size_t i = 0; i < families_.size(); ++i) {
    if (families_[i].tau == tau) {
      found_.insert(i);
      return true;
    }
  }
  ++unexpected_;
  if (samples_.size() < 8) samples_.push_back(tau.to_string());
  return true;
}

void ExceptionAudit::merge(const ExceptionAudit& other) {
  found_.insert(other.found_.begin(), other.found_.end());
  unexpected_ += other.unexpected_;
  for (const auto& s : other.samples_) {
    if (samples_.size() < 8) samples_.push_back(s);
  }
}

void ExceptionAudit::restore(std::set<std::size_t> found, std::uint64_t unexpected) {
  for (std::size_t i : found) {
    if (i >= families_.size()) throw std::invalid_argument("exception family index out of range");
  }
  found_ = std::move(found);
  unexpected_ = unexpected;
}

bool ExceptionAudit::passed() const { return unexpected_ == 0 && found_.size() == families_.size(); }

std::string ExceptionAudit::diagnostic() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < families_.size(); ++i) {
    if (!found_.contains(i)) os << "missing family " << families_[i].name << ' ' << families_[i].tau.to_string() << "; ";
  }
  if (unexpected_ > 0) {
    os << unexpected_ << " emitted tau(s) outside the families:";
    for (const auto& s : samples_) os << ' ' << s;
  }
  return os.str();
}

}  // namespace cubic_euler
