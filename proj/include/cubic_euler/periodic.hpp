#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "cubic_euler/tau.hpp"

namespace cubic_euler {

// A tau-function of exact period p, stored as its minimal defining prefix
// tau(1..n0) with tau(n0) = n0 - p; tau(n) = n - p for every n >= n0.
class PeriodicTau {
 public:
  PeriodicTau(TauPrefix prefix, int period);

  const TauPrefix& prefix() const { return prefix_; }
  int period() const { return period_; }
  int defining_length() const { return prefix_.length(); }

  // tau(n) for any n >= 1, using the tail rule past the prefix.
  int operator()(int n) const { return n <= prefix_.length() ? prefix_(n) : n - period_; }

  // The first `length` values of the infinite sequence.
  std::vector<int> values(int length) const;
  std::string to_string() const;

  friend bool operator==(const PeriodicTau&, const PeriodicTau&) = default;
  friend auto operator<=>(const PeriodicTau&, const PeriodicTau&) = default;

 private:
  TauPrefix prefix_;
  int period_;
};

struct LengthCounts {
  std::uint64_t periodic = 0;
  std::uint64_t discard = 0;
  std::uint64_t cont = 0;

  friend bool operator==(const LengthCounts&, const LengthCounts&) = default;
};

// Periodic / Discard / Continue counts per prefix length p .. max(p, 2p-2).
class EnumStats {
 public:
  explicit EnumStats(int period = 1);

  int period() const { return period_; }
  int first_length() const { return period_; }
  int last_length() const { return period_ + static_cast<int>(rows_.size()) - 1; }

  const LengthCounts& at(int length) const;
  LengthCounts& at(int length);

  std::uint64_t total_periodic() const;

  void merge(const EnumStats& other);

  friend bool operator==(const EnumStats&, const EnumStats&) = default;

 private:
  int period_;
  std::vector<LengthCounts> rows_;
};

// Work items: the Continue list at length p, stored flat.
class Frontier {
 public:
  explicit Frontier(int period = 1) : period_(period) {}

  int period() const { return period_; }
  std::size_t size() const { return period_ ? flat_.size() / static_cast<std::size_t>(period_) : 0; }
  bool empty() const { return flat_.empty(); }

  void push(const TauStack& stack);
  void push(const TauPrefix& item);
  TauPrefix item(std::size_t i) const;
  void load_into(std::size_t i, TauStack& stack) const;

  // Items [from, size()).
  Frontier suffix(std::size_t from) const;

  friend bool operator==(const Frontier&, const Frontier&) = default;

 private:
  int period_;
  std::vector<std::uint8_t> flat_;
};

using TauSink = std::function<void(const PeriodicTau&)>;
// Invoked with the index of the worker making the call. Calls carrying the
// same worker index never overlap; calls from different workers may.
using WorkerTauSink = std::function<void(const PeriodicTau&, unsigned worker)>;

// Pruned depth-first enumeration of period-p tau-functions. The length-p
// initialization runs once; the Continue items it produces are independent
// subtrees that may be processed in any order, by any number of workers, and
// across a checkpoint boundary.
class PeriodicEnumerator {
 public:
  explicit PeriodicEnumerator(int period);

  int period() const { return period_; }

  // Generates every admissible prefix of length p, emits the periodic ones
  // on worker 0, and stores the Continue items as the frontier.
  void initialize(const WorkerTauSink& sink);

  // Replaces the state with one read from a checkpoint.
  void restore(EnumStats stats, Frontier remaining);

  // Processes up to max_items pending work items (in frontier order) on
  // `workers` threads. Returns the number processed.
  std::size_t run(std::size_t max_items, unsigned workers, const WorkerTauSink& sink);

  std::size_t pending() const { return frontier_.size() - next_; }
  bool done() const { return initialized_ && pending() == 0; }
  const EnumStats& stats() const { return stats_; }
  Frontier remaining() const { return frontier_.suffix(next_); }

 private:
  int period_;
  bool initialized_ = false;
  EnumStats stats_;
  Frontier frontier_;
  std::size_t next_ = 0;
};

EnumStats enumerate_periodic(int period, const TauSink& sink);
EnumStats enumerate_periodic(int period, unsigned workers, const WorkerTauSink& sink);

// Largest tau(m) over the markers m of the prefix, or -1 when there is none.
int max_marker_level(const TauStack& stack);

// The Continue test: some marker m of tau has tau(m) > n - p, n = length.
bool continuation_bound_check(const TauPrefix& tau, int period);

// Closed-form period-p tau-functions that are not yet on the tail n - p at
// index 2p-5; one entry per family that exists for p.
struct ExceptionFamily {
  std::string name;
  PeriodicTau tau;
};
std::vector<ExceptionFamily> exception_families(int period);

// Streaming audit of one period's emission against exception_families: every
// family must be emitted, and every emitted tau off the tail at 2p-5 must be
// a family member.
class ExceptionAudit {
 public:
  explicit ExceptionAudit(int period);

  // Returns true if tau lies off the n - p tail at 2p-5 or later.
  bool observe(const PeriodicTau& tau);
  void merge(const ExceptionAudit& other);

  bool passed() const;
  std::string diagnostic() const;

  const std::vector<ExceptionFamily>& families() const { return families_; }
  const std::set<std::size_t>& found() const { return found_; }
  std::uint64_t unexpected() const { return unexpected_; }
  void restore(std::set<std::size_t> found, std::uint64_t unexpected);

 private:
  int period_;
  std::vector<ExceptionFamily> families_;
  std::set<std::size_t> found_;
  std::uint64_t unexpected_ = 0;
  std::vector<std::string> samples_;
};

}  // namespace cubic_euler
