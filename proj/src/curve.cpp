#include "cubic_euler/curve.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>

namespace cubic_euler {

namespace {

__extension__ using Int128 = __int128;
__extension__ using UInt128 = unsigned __int128;

// Memoized solution of target(n) = sum_{q | n} f(q).
class DivisorRecursion {
 public:
  DivisorRecursion(std::uint64_t base, const char* name) : base_(base), name_(name) {}

  std::uint64_t operator()(int n) {
    if (n < 1) throw std::invalid_argument(std::string(name_) + " needs n >= 1");
    std::lock_guard lock(mutex_);
    return solve(n);
  }

 private:
  std::uint64_t solve(int n) {
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    std::uint64_t value = checked_pow(base_, n - 1, name_);
    for (int q : divisors(n)) {
      if (q < n) value = checked_sub(value, solve(q), name_);
    }
    memo_.emplace(n, value);
    return value;
  }

  std::uint64_t base_;
  const char* name_;
  std::map<int, std::uint64_t> memo_;
  std::mutex mutex_;
};

DivisorRecursion& centers_table() {
  static DivisorRecursion table(2, "nu_2");
  return table;
}

DivisorRecursion& degree_table() {
  static DivisorRecursion table(3, "curve degree");
  return table;
}

}  // namespace

std::vector<int> divisors(int n) {
  if (n < 1) throw std::invalid_argument("divisors needs n >= 1");
  std::vector<int> out;
  for (int q = 1; q <= n; ++q) {
    if (n % q == 0) out.push_back(q);
  }
  return out;
}

std::uint64_t quadratic_centers(int n) { return centers_table()(n); }

std::uint64_t curve_degree(int p) { return degree_table()(p); }

std::uint64_t end_weight(const TauInvariants& inv) {
  const std::uint64_t w = checked_mul(inv.spines, inv.twist_factor, "Spines * TF");
  return inv.twist_period > 1 ? checked_mul(w, 2, "Ends") : w;
}

std::uint64_t ends(const PeriodicTau& tau, const TauInvariants& inv, int p) {
  const int k = tau.period();
  if (p < 1 || p % k != 0) {
    throw std::invalid_argument("tau period " + std::to_string(k) + " does not divide " + std::to_string(p));
  }
  return checked_mul(quadratic_centers(p / k), end_weight(inv), "Ends");
}

void PeriodSummary::add(const TauInvariants& inv) {
  const std::uint64_t w = end_weight(inv);
  tau_count = checked_add(tau_count, 1, "tau count");
  weighted_ends = checked_add(weighted_ends, w, "central ends");
  weighted_multiplicity = checked_add(weighted_multiplicity, checked_mul(inv.multiplicity, w, "m * Ends"), "m * Ends");
}

void PeriodSummary::merge(const PeriodSummary& other) {
  if (other.period != period) throw std::invalid_argument("merging summaries of different periods");
  tau_count = checked_add(tau_count, other.tau_count, "tau count");
  weighted_ends = checked_add(weighted_ends, other.weighted_ends, "central ends");
  weighted_multiplicity = checked_add(weighted_multiplicity, other.weighted_multiplicity, "m * Ends");
}

void TauInventory::set(PeriodSummary summary) { summaries_[summary.period] = summary; }

void TauInventory::set(PeriodSummary summary, std::vector<Entry> taus) {
  if (taus.size() != summary.tau_count) throw std::invalid_argument("tau list size disagrees with its summary");
  taus_[summary.period] = std::move(taus);
  set(summary);
}

const PeriodSummary& TauInventory::summary(int k) const {
  auto it = summaries_.find(k);
  if (it == summaries_.end()) throw std::out_of_range("inventory has no period " + std::to_string(k));
  return it->second;
}

const std::vector<TauInventory::Entry>& TauInventory::taus(int k) const {
  auto it = taus_.find(k);
  if (it == taus_.end()) throw std::out_of_range("inventory kept no taus for period " + std::to_string(k));
  return it->second;
}

bool TauInventory::complete_for(int p) const {
  const auto ds = divisors(p);
  return std::all_of(ds.begin(), ds.end(), [&](int k) { return has(k); });
}

DegreeCheckError::DegreeCheckError(int period, std::uint64_t total, std::uint64_t degree)
    : std::runtime_error("degree check failed for p=" + std::to_string(period) + ": sum m*Ends = " +
                         std::to_string(total) + ", d_p = " + std::to_string(degree)),
      period_(period) {}

double PeriodReport::ratio() const {
  return -static_cast<double>(euler_characteristic) / static_cast<double>(checked_pow(3, period - 1));
}

std::string PeriodReport::ratio_string() const { return format_ratio(euler_characteristic, period); }

std::string format_ratio(std::int64_t euler_characteristic, int p) {
  const auto den = static_cast<UInt128>(checked_pow(3, p - 1, "3^{p-1}"));
  const Int128 num = -static_cast<Int128>(euler_characteristic);
  const bool negative = num < 0;
  const auto scaled = static_cast<UInt128>(negative ? -num : num) * 1000u;
  auto q = scaled / den;
  if (2 * (scaled % den) >= den) ++q;
  const auto whole = static_cast<std::uint64_t>(q / 1000);
  const auto frac = static_cast<unsigned>(q % 1000);
  std::string digits = std::to_string(frac);
  digits.insert(0, 3 - digits.size(), '0');
  return (negative && q != 0 ? "-" : "") + std::to_string(whole) + "." + digits;
}

PeriodReport period_report(int p, const TauInventory& inventory, bool verify) {
  if (!inventory.complete_for(p)) throw std::invalid_argument("inventory is missing a divisor of " + std::to_string(p));
  PeriodReport r;
  r.period = p;
  const PeriodSummary& own = inventory.summary(p);
  r.tau_count = own.tau_count;
  r.central_ends = own.weighted_ends;
  for (int k : divisors(p)) {
    const PeriodSummary& s = inventory.summary(k);
    const std::uint64_t centers = quadratic_centers(p / k);
    r.total_ends = checked_add(r.total_ends, checked_mul(centers, s.weighted_ends, "N_p"), "N_p");
    r.multiplicity_total =
        checked_add(r.multiplicity_total, checked_mul(centers, s.weighted_multiplicity, "m * Ends"), "m * Ends");
  }
  r.degree = curve_degree(p);
  const auto degree = static_cast<std::int64_t>(r.degree);
  const auto total = static_cast<std::int64_t>(r.total_ends);
  if (degree < 0 || total < 0) throw OverflowError("overflow converting to signed Euler characteristic");
  r.euler_characteristic = checked_add(checked_mul(degree, std::int64_t{2} - p, "chi"), total, "chi");
  r.degree_ok = r.multiplicity_total == r.degree;
  if (verify && !r.degree_ok) throw DegreeCheckError(p, r.multiplicity_total, r.degree);
  return r;
}

bool degree_check(int p, const TauInventory& inventory) { return period_report(p, inventory, false).degree_ok; }

PeriodAccumulator::PeriodAccumulator(int period, const SummaryOptions& options)
    : period_(period), options_(options), slots_(std::max(options.workers, 1u)) {
  for (auto& slot : slots_) {
    slot.summary.period = period;
    if (options.audit_exceptions) slot.audit.emplace(period);
  }
}

WorkerTauSink PeriodAccumulator::sink() {
  return [this](const PeriodicTau& tau, unsigned worker) {
    Slot& slot = slots_.at(worker);
    const TauInvariants inv = slot.calc(tau);
    slot.summary.add(inv);
    if (slot.audit) slot.audit->observe(tau);
    if (options_.keep_taus) slot.taus.emplace_back(tau, inv);
  };
}

void PeriodAccumulator::seed(const PeriodSummary& summary, const std::optional<ExceptionAudit>& audit) {
  if (summary.period != period_) throw std::invalid_argument("seed summary has a different period");
  slots_[0].summary.merge(summary);
  if (audit && slots_[0].audit) slots_[0].audit->merge(*audit);
}

PeriodSummary PeriodAccumulator::summary() const {
  PeriodSummary out;
  out.period = period_;
  for (const auto& slot : slots_) out.merge(slot.summary);
  return out;
}

std::optional<ExceptionAudit> PeriodAccumulator::audit() const {
  if (!options_.audit_exceptions) return std::nullopt;
  ExceptionAudit out(period_);
  for (const auto& slot : slots_) out.merge(*slot.audit);
  return out;
}

std::vector<TauInventory::Entry> PeriodAccumulator::taus() const {
  std::vector<TauInventory::Entry> out;
  for (const auto& slot : slots_) out.insert(out.end(), slot.taus.begin(), slot.taus.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

PeriodRun summarize_period(int k, const SummaryOptions& options) {
  PeriodAccumulator acc(k, options);
  PeriodRun run;
  run.stats = enumerate_periodic(k, std::max(options.workers, 1u), acc.sink());
  run.summary = acc.summary();
  run.audit = acc.audit();
  if (options.keep_taus) run.taus = acc.taus();
  if (run.summary.tau_count != run.stats.total_periodic()) {
    throw std::logic_error("emitted tau count disagrees with enumeration statistics");
  }
  return run;
}

TauInventory build_inventory(int p, const SummaryOptions& options) {
  TauInventory inv;
  for (int k : divisors(p)) {
    PeriodRun run = summarize_period(k, options);
    if (options.keep_taus) {
      inv.set(run.summary, std::move(run.taus));
    } else {
      inv.set(run.summary);
    }
  }
  return inv;
}

}  // namespace cubic_euler
