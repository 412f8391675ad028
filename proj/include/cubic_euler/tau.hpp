#pragma once

// Yoccoz tau-functions: admissible prefixes, markers, marked levels and the
// one-step extension ladder.
//
// All indices are 1-based: value(n) is tau(n) for 1 <= n <= length().
// Level 0 is never a domain point; it only appears as a value and as the
// always-marked level.

#include <cstdint>
#include <initializer_list>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubic_euler {

// Longest prefix the library will build. Periods are capped so that every
// prefix (length <= 2p-2) fits and tau values fit in a byte.
inline constexpr int kMaxLength = 254;
inline constexpr int kMaxPeriod = 64;

class InadmissibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The values l_0 > l_1 > ... > l_k reachable as tau(N+1) - 1, together with
// the markers l_1' > ... > l_k' on the orbit of N that produced them.
struct ExtensionLadder {
  std::vector<int> levels;         // l_0 .. l_k, l_i = tau(l_i')
  std::vector<int> marker_levels;  // l_1' .. l_k' (l_0' = N is implicit)
  bool zero_allowed = true;

  int k() const { return static_cast<int>(levels.size()) - 1; }

  // Admissible values for tau(N+1), largest first.
  std::vector<int> next_values() const;

  // Ladder index i with value == l_i + 1, k()+1 for the zero extension,
  // or -1 if value is not admissible.
  int index_of(int value) const;

  void clear() {
    levels.clear();
    marker_levels.clear();
    zero_allowed = true;
  }

  friend bool operator==(const ExtensionLadder&, const ExtensionLadder&) = default;
};

struct MarkerData {
  std::set<int> markers;
  std::set<int> marked_levels;  // always contains 0
  std::vector<int> order;       // order[n] = ord(n) for 0 <= n <= N; order[0] = 0

  friend bool operator==(const MarkerData&, const MarkerData&) = default;
};

// Mutable admissible prefix with O(1) push/pop and incrementally maintained
// orders and marked levels. This is the working representation used by the
// enumerator and the invariant computations; TauPrefix is the value type.
class TauStack {
 public:
  explicit TauStack(int capacity = kMaxLength);

  int length() const { return length_; }
  int capacity() const { return capacity_; }
  bool empty() const { return length_ == 0; }

  int operator[](int n) const { return values_[n]; }
  int value(int n) const;
  int last() const { return values_[length_]; }

  // ord(n) for 0 <= n <= length(); ord(0) = 0.
  int ord(int n) const { return ord_[n]; }

  // m is a marker iff 1 <= m < length() and tau(m+1) <= tau(m).
  bool is_marker(int m) const { return m >= 1 && m < length_ && values_[m + 1] <= values_[m]; }
  bool is_marked_level(int l) const { return marked_[l] != 0; }
  int marked_level_count() const { return static_cast<int>(marked_log_.size()) + 1; }

  // Appends without checking admissibility. The caller guarantees the value
  // comes from the current ladder.
  void push_unchecked(int value);
  // Appends after checking the value against the extension ladder.
  void push(int value);
  void pop();
  void clear();

  void ladder_into(ExtensionLadder& out) const;
  ExtensionLadder ladder() const;

  std::vector<int> values() const;

 private:
  int capacity_;
  int length_ = 0;
  std::vector<int> values_;  // values_[0] unused
  std::vector<int> ord_;
  std::vector<std::uint8_t> marked_;
  std::vector<int> marked_log_;   // levels marked by pushes, in order
  std::vector<int> log_offsets_;  // marked_log_ size before each push
};

// Immutable admissible prefix tau(1..N), N >= 1.
class TauPrefix {
 public:
  // Validates admissibility step by step against the extension ladder.
  explicit TauPrefix(std::span<const int> values);
  TauPrefix(std::initializer_list<int> values);

  // Skips validation; for values produced by an admissible construction.
  static TauPrefix trusted(std::vector<int> values);

  int length() const { return static_cast<int>(values_.size()); }
  int operator()(int n) const { return values_[static_cast<std::size_t>(n - 1)]; }
  int at(int n) const;
  int last() const { return values_.back(); }
  const std::vector<int>& values() const { return values_; }

  TauStack to_stack(int capacity = 0) const;
  std::string to_string() const;

  friend bool operator==(const TauPrefix&, const TauPrefix&) = default;
  friend auto operator<=>(const TauPrefix&, const TauPrefix&) = default;

 private:
  TauPrefix() = default;
  std::vector<int> values_;
};

bool is_admissible(std::span<const int> seq);
inline bool is_admissible(std::initializer_list<int> seq) {
  return is_admissible(std::span<const int>(seq.begin(), seq.size()));
}

int order(const TauPrefix& tau, int n);
MarkerData marker_data(const TauPrefix& tau);
ExtensionLadder extension_ladder(const TauPrefix& tau);
std::vector<int> admissible_extensions(const TauPrefix& tau);

}  // namespace cubic_euler
