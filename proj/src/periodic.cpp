#include "cubic_euler/periodic.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "cubic_euler/checked.hpp"

namespace cubic_euler {

namespace {

int max_length_for(int period) { return std::max(period, 2 * period - 2); }

void check_period(int period) {
  if (period < 1 || period > kMaxPeriod) {
    throw std::invalid_argument("period must be in [1, " + std::to_string(kMaxPeriod) + "], got " +
                                std::to_string(period));
  }
}

void bump(std::uint64_t& counter) { counter = checked_add(counter, 1, "enumeration counter"); }

PeriodicTau emit_from(const TauStack& stack, int period) {
  return PeriodicTau(TauPrefix::trusted(stack.values()), period);
}

// One depth-first walker. Owns its stack and ladder buffers; reports into
// its own stats.
class Walker {
 public:
  Walker(int period, EnumStats& stats, const WorkerTauSink& sink, unsigned worker)
      : period_(period),
        stack_(max_length_for(period)),
        ladders_(static_cast<std::size_t>(max_length_for(period)) + 1),
        stats_(stats),
        sink_(sink),
        worker_(worker) {}

  TauStack& stack() { return stack_; }

  // Builds every admissible prefix of length p and classifies it.
  void initialize(Frontier& frontier) { grow_to_period(frontier); }

  void extend_item(const Frontier& frontier, std::size_t i) {
    stack_.clear();
    frontier.load_into(i, stack_);
    extend(max_marker_level(stack_));
  }

 private:
  void grow_to_period(Frontier& frontier) {
    const int n = stack_.length();
    if (n == period_) {
      classify_initial(frontier);
      return;
    }
    if (n == 0) {
      stack_.push_unchecked(0);
      grow_to_period(frontier);
      stack_.pop();
      return;
    }
    ExtensionLadder& ladder = ladders_[static_cast<std::size_t>(n)];
    stack_.ladder_into(ladder);
    for (int v : ladder.next_values()) {
      stack_.push_unchecked(v);
      grow_to_period(frontier);
      stack_.pop();
    }
  }

  void classify_initial(Frontier& frontier) {
    LengthCounts& row = stats_.at(period_);
    if (stack_.last() == 0) {
      bump(row.periodic);
      sink_(emit_from(stack_, period_), worker_);
      return;
    }
    bool has_marker = false;
    for (int m = 1; m < period_ && !has_marker; ++m) has_marker = stack_.is_marker(m);
    if (!has_marker) {
      bump(row.discard);
      return;
    }
    bump(row.cont);
    frontier.push(stack_);
  }

  // Stack holds a Continue item of length n, tau(n) > n - p. Every
  // admissible extension is classified: onto the tail n+1-p is Periodic,
  // below the tail is Discard, above it is Continue when a marker level can
  // still reach the tail and Discard otherwise.
  void extend(int max_marker_level) {
    const int n = stack_.length();
    const int floor_level = n - period_;
    ExtensionLadder& ladder = ladders_[static_cast<std::size_t>(n)];
    stack_.ladder_into(ladder);
    LengthCounts& row = stats_.at(n + 1);
    const bool may_continue = n < 2 * period_ - 3 && max_marker_level > floor_level;
    for (int level : ladder.levels) {
      if (level == floor_level) {
        bump(row.periodic);
        stack_.push_unchecked(level + 1);
        sink_(emit_from(stack_, period_), worker_);
        stack_.pop();
      } else if (level > floor_level && may_continue) {
        bump(row.cont);
        // n becomes a marker exactly when the new value does not climb.
        const int child_max = level + 1 <= stack_[n] ? std::max(max_marker_level, stack_[n]) : max_marker_level;
        stack_.push_unchecked(level + 1);
        extend(child_max);
        stack_.pop();
      } else {
        bump(row.discard);
      }
    }
    if (ladder.zero_allowed) bump(row.discard);
  }

  int period_;
  TauStack stack_;
  std::vector<ExtensionLadder> ladders_;
  EnumStats& stats_;
  const WorkerTauSink& sink_;
  unsigned worker_;
};

}  // namespace

PeriodicTau::PeriodicTau(TauPrefix prefix, int period) : prefix_(std::move(prefix)), period_(period) {
  check_period(period);
  const int n0 = prefix_.length();
  if (prefix_(n0) != n0 - period) {
    throw std::invalid_argument("periodic prefix " + prefix_.to_string() + " does not end on the tail n - " +
                                std::to_string(period));
  }
  for (int n = 1; n < n0; ++n) {
    if (prefix_(n) <= n - period) {
      throw std::invalid_argument("prefix " + prefix_.to_string() + " is not minimal for period " +
                                  std::to_string(period));
    }
  }
}

std::vector<int> PeriodicTau::values(int length) const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(std::max(length, 0)));
  for (int n = 1; n <= length; ++n) out.push_back((*this)(n));
  return out;
}

std::string PeriodicTau::to_string() const {
  return prefix_.to_string() + " p=" + std::to_string(period_);
}

EnumStats::EnumStats(int period)
    : period_(period), rows_(static_cast<std::size_t>(max_length_for(period) - period + 1)) {}

const LengthCounts& EnumStats::at(int length) const {
  if (length < first_length() || length > last_length()) {
    throw std::out_of_range("no statistics for length " + std::to_string(length));
  }
  return rows_[static_cast<std::size_t>(length - period_)];
}

LengthCounts& EnumStats::at(int length) {
  return const_cast<LengthCounts&>(std::as_const(*this).at(length));
}

std::uint64_t EnumStats::total_periodic() const {
  std::uint64_t total = 0;
  for (const auto& row : rows_) total = checked_add(total, row.periodic, "periodic total");
  return total;
}

void EnumStats::merge(const EnumStats& other) {
  if (other.period_ != period_) throw std::invalid_argument("merging statistics of different periods");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    rows_[i].periodic = checked_add(rows_[i].periodic, other.rows_[i].periodic, "periodic count");
    rows_[i].discard = checked_add(rows_[i].discard, other.rows_[i].discard, "discard count");
    rows_[i].cont = checked_add(rows_[i].cont, other.rows_[i].cont, "continue count");
  }
}

void Frontier::push(const TauStack& stack) {
  if (stack.length() != period_) throw std::invalid_argument("frontier items must have length p");
  for (int n = 1; n <= period_; ++n) flat_.push_back(static_cast<std::uint8_t>(stack[n]));
}

void Frontier::push(const TauPrefix& item) {
  if (item.length() != period_) throw std::invalid_argument("frontier items must have length p");
  for (int v : item.values()) flat_.push_back(static_cast<std::uint8_t>(v));
}

TauPrefix Frontier::item(std::size_t i) const {
  const auto p = static_cast<std::size_t>(period_);
  return TauPrefix::trusted(std::vector<int>(flat_.begin() + static_cast<std::ptrdiff_t>(i * p),
                                             flat_.begin() + static_cast<std::ptrdiff_t>((i + 1) * p)));
}

void Frontier::load_into(std::size_t i, TauStack& stack) const {
  const auto p = static_cast<std::size_t>(period_);
  for (std::size_t j = 0; j < p; ++j) stack.push_unchecked(flat_[i * p + j]);
}

Frontier Frontier::suffix(std::size_t from) const {
  Frontier out(period_);
  const auto p = static_cast<std::size_t>(period_);
  out.flat_.assign(flat_.begin() + static_cast<std::ptrdiff_t>(std::min(from, size()) * p), flat_.end());
  return out;
}

PeriodicEnumerator::PeriodicEnumerator(int period) : period_(period), stats_(period), frontier_(period) {
  check_period(period);
}

void PeriodicEnumerator::initialize(const WorkerTauSink& sink) {
  stats_ = EnumStats(period_);
  frontier_ = Frontier(period_);
  next_ = 0;
  Walker walker(period_, stats_, sink, 0);
  walker.initialize(frontier_);
  initialized_ = true;
}

void PeriodicEnumerator::restore(EnumStats stats, Frontier remaining) {
  if (stats.period() != period_ || remaining.period() != period_) {
    throw std::invalid_argument("restored state belongs to a different period");
  }
  stats_ = std::move(stats);
  frontier_ = std::move(remaining);
  next_ = 0;
  initialized_ = true;
}

std::size_t PeriodicEnumerator::run(std::size_t max_items, unsigned workers, const WorkerTauSink& sink) {
  if (!initialized_) throw std::logic_error("PeriodicEnumerator::run before initialize");
  if (workers == 0) throw std::invalid_argument("worker count must be >= 1");
  const std::size_t begin = next_;
  const std::size_t end = begin + std::min(max_items, pending());
  if (begin == end) return 0;

  std::vector<EnumStats> local(workers, EnumStats(period_));
  std::atomic<std::size_t> cursor{begin};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&](unsigned w) {
    try {
      Walker walker(period_, local[w], sink, w);
      for (std::size_t i = cursor.fetch_add(1); i < end; i = cursor.fetch_add(1)) {
        walker.extend_item(frontier_, i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      cursor.store(end);
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& s : local) stats_.merge(s);
  next_ = end;
  return end - begin;
}

EnumStats enumerate_periodic(int period, const TauSink& sink) {
  return enumerate_periodic(period, 1, [&](const PeriodicTau& t, unsigned) { sink(t); });
}

EnumStats enumerate_periodic(int period, unsigned workers, const WorkerTauSink& sink) {
  PeriodicEnumerator e(period);
  e.initialize(sink);
  e.run(e.pending(), workers, sink);
  return e.stats();
}

int max_marker_level(const TauStack& stack) {
  int best = -1;
  for (int m = 1; m < stack.length(); ++m) {
    if (stack.is_marker(m)) best = std::max(best, stack[m]);
  }
  return best;
}

bool continuation_bound_check(const TauPrefix& tau, int period) {
  check_period(period);
  const int n = tau.length();
  if (n < period) throw std::invalid_argument("continuation_bound_check needs length >= p");
  return max_marker_level(tau.to_stack()) > n - period;
}

}  // namespace cubic_euler
