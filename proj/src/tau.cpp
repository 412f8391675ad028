#include "cubic_euler/tau.hpp"

#include <algorithm>
#include <sstream>

namespace cubic_euler {

std::vector<int> ExtensionLadder::next_values() const {
  std::vector<int> out;
  out.reserve(levels.size() + 1);
  for (int l : levels) out.push_back(l + 1);
  if (zero_allowed) out.push_back(0);
  return out;
}

int ExtensionLadder::index_of(int value) const {
  if (value == 0) return zero_allowed ? k() + 1 : -1;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] + 1 == value) return static_cast<int>(i);
    if (levels[i] + 1 < value) break;
  }
  return -1;
}

TauStack::TauStack(int capacity)
    : capacity_(capacity),
      values_(static_cast<std::size_t>(capacity) + 1, 0),
      ord_(static_cast<std::size_t>(capacity) + 1, 0),
      marked_(static_cast<std::size_t>(capacity) + 1, 0) {
  if (capacity < 1 || capacity > kMaxLength) throw std::invalid_argument("TauStack capacity out of range");
  marked_[0] = 1;
  marked_log_.reserve(static_cast<std::size_t>(capacity));
  log_offsets_.reserve(static_cast<std::size_t>(capacity));
}

int TauStack::value(int n) const {
  if (n < 1 || n > length_) throw std::out_of_range("tau index " + std::to_string(n) + " out of range");
  return values_[n];
}

void TauStack::push_unchecked(int value) {
  log_offsets_.push_back(static_cast<int>(marked_log_.size()));
  const int n = length_;
  if (n >= 1 && value <= values_[n]) {
    // n just became a marker; its forward orbit is marked. The marked set is
    // closed under tau, so the walk stops at the first marked level.
    for (int x = values_[n]; !marked_[x]; x = values_[x]) {
      marked_[x] = 1;
      marked_log_.push_back(x);
    }
  }
  ++length_;
  values_[length_] = value;
  ord_[length_] = ord_[value] + 1;
}

void TauStack::push(int value) {
  if (length_ == capacity_) throw std::length_error("TauStack capacity exceeded");
  if (length_ == 0) {
    if (value != 0) throw InadmissibleError("tau(1) must be 0");
    push_unchecked(0);
    return;
  }
  if (value < 0 || ladder().index_of(value) < 0) {
    throw InadmissibleError("tau(" + std::to_string(length_ + 1) + ") = " + std::to_string(value) +
                            " is not an admissible extension");
  }
  push_unchecked(value);
}

void TauStack::pop() {
  if (length_ == 0) throw std::logic_error("pop on empty TauStack");
  const auto offset = static_cast<std::size_t>(log_offsets_.back());
  log_offsets_.pop_back();
  while (marked_log_.size() > offset) {
    marked_[marked_log_.back()] = 0;
    marked_log_.pop_back();
  }
  --length_;
}

void TauStack::clear() {
  while (length_ > 0) pop();
}

void TauStack::ladder_into(ExtensionLadder& out) const {
  out.clear();
  const int n = length_;
  out.levels.push_back(values_[n]);
  for (int x = values_[n]; x > 0; x = values_[x]) {
    if (is_marker(x)) {
      out.marker_levels.push_back(x);
      out.levels.push_back(values_[x]);
    }
  }
  out.zero_allowed = out.marker_levels.empty() || out.levels.back() > 0;
}

ExtensionLadder TauStack::ladder() const {
  ExtensionLadder out;
  ladder_into(out);
  return out;
}

std::vector<int> TauStack::values() const {
  return {values_.begin() + 1, values_.begin() + 1 + length_};
}

TauPrefix::TauPrefix(std::span<const int> values) {
  if (values.empty()) throw InadmissibleError("tau prefix must be non-empty");
  if (values.size() > static_cast<std::size_t>(kMaxLength)) throw InadmissibleError("tau prefix too long");
  TauStack stack(static_cast<int>(values.size()));
  for (int v : values) stack.push(v);
  values_.assign(values.begin(), values.end());
}

TauPrefix::TauPrefix(std::initializer_list<int> values)
    : TauPrefix(std::span<const int>(values.begin(), values.size())) {}

TauPrefix TauPrefix::trusted(std::vector<int> values) {
  TauPrefix t;
  t.values_ = std::move(values);
  return t;
}

int TauPrefix::at(int n) const {
  if (n < 1 || n > length()) throw std::out_of_range("tau index " + std::to_string(n) + " out of range");
  return (*this)(n);
}

TauStack TauPrefix::to_stack(int capacity) const {
  TauStack stack(std::max(capacity, length()));
  for (int v : values_) stack.push_unchecked(v);
  return stack;
}

std::string TauPrefix::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < values_.size(); ++i) os << (i ? "," : "") << values_[i];
  os << ')';
  return os.str();
}

bool is_admissible(std::span<const int> seq) {
  if (seq.empty() || seq.size() > static_cast<std::size_t>(kMaxLength)) return false;
  if (seq[0] != 0) return false;
  TauStack stack(static_cast<int>(seq.size()));
  stack.push_unchecked(0);
  ExtensionLadder ladder;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    stack.ladder_into(ladder);
    if (seq[i] < 0 || ladder.index_of(seq[i]) < 0) return false;
    stack.push_unchecked(seq[i]);
  }
  return true;
}

int order(const TauPrefix& tau, int n) {
  if (n < 1 || n > tau.length()) throw std::out_of_range("order: index " + std::to_string(n) + " out of range");
  int steps = 0;
  for (int x = n; x != 0; x = tau(x)) ++steps;
  return steps;
}

MarkerData marker_data(const TauPrefix& tau) {
  MarkerData out;
  const TauStack stack = tau.to_stack();
  out.order.resize(static_cast<std::size_t>(tau.length()) + 1);
  for (int n = 0; n <= tau.length(); ++n) out.order[static_cast<std::size_t>(n)] = stack.ord(n);
  for (int m = 1; m < tau.length(); ++m) {
    if (stack.is_marker(m)) out.markers.insert(m);
  }
  for (int l = 0; l < tau.length(); ++l) {
    if (stack.is_marked_level(l)) out.marked_levels.insert(l);
  }
  return out;
}

ExtensionLadder extension_ladder(const TauPrefix& tau) { return tau.to_stack().ladder(); }

std::vector<int> admissible_extensions(const TauPrefix& tau) { return extension_ladder(tau).next_values(); }

}  // namespace cubic_euler
