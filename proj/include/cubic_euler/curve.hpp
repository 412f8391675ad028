#pragma once

// Escape-region counts, curve degree and Euler characteristic per period.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cubic_euler/invariants.hpp"
#include "cubic_euler/periodic.hpp"

namespace cubic_euler {

// nu_2(n): centers of exact period n in the Mandelbrot set, from
// 2^{n-1} = sum_{q | n} nu_2(q).
std::uint64_t quadratic_centers(int n);

// d_p: degree of the period-p curve, from 3^{p-1} = sum_{q | p} d_q.
std::uint64_t curve_degree(int p);

std::vector<int> divisors(int n);

// Ends(tau, p) for tau of period k dividing p.
std::uint64_t ends(const PeriodicTau& tau, const TauInvariants& inv, int p);

// Spines * TF, doubled when T > 1: the factor multiplying nu_2(p/k).
std::uint64_t end_weight(const TauInvariants& inv);

// Exact aggregates over all taus of one exact period k. Everything the
// per-period report needs is linear in these.
struct PeriodSummary {
  int period = 0;
  std::uint64_t tau_count = 0;
  std::uint64_t weighted_ends = 0;         // sum of end_weight
  std::uint64_t weighted_multiplicity = 0; // sum of m(tau) * end_weight

  void add(const TauInvariants& inv);
  void merge(const PeriodSummary& other);

  friend bool operator==(const PeriodSummary&, const PeriodSummary&) = default;
};

// Per-divisor results. Summaries are always present; the tau lists are kept
// only when requested, for inspection and tests.
class TauInventory {
 public:
  using Entry = std::pair<PeriodicTau, TauInvariants>;

  void set(PeriodSummary summary);
  void set(PeriodSummary summary, std::vector<Entry> taus);

  bool has(int k) const { return summaries_.contains(k); }
  const PeriodSummary& summary(int k) const;
  const std::vector<Entry>& taus(int k) const;
  bool has_taus(int k) const { return taus_.contains(k); }

  bool complete_for(int p) const;

 private:
  std::map<int, PeriodSummary> summaries_;
  std::map<int, std::vector<Entry>> taus_;
};

class DegreeCheckError : public std::runtime_error {
 public:
  DegreeCheckError(int period, std::uint64_t total, std::uint64_t degree);
  int period() const { return period_; }

 private:
  int period_;
};

struct PeriodReport {
  int period = 0;
  std::uint64_t tau_count = 0;
  std::uint64_t central_ends = 0;
  std::uint64_t total_ends = 0;  // N_p
  std::uint64_t degree = 0;      // d_p
  std::int64_t euler_characteristic = 0;
  std::uint64_t multiplicity_total = 0;  // sum m(tau) Ends(tau, p)
  bool degree_ok = false;

  double ratio() const;  // -chi / 3^{p-1}
  std::string ratio_string() const;

  friend bool operator==(const PeriodReport&, const PeriodReport&) = default;
};

// -chi / 3^{p-1} to three decimals, half away from zero, computed exactly.
std::string format_ratio(std::int64_t euler_characteristic, int p);

// Throws DegreeCheckError when `verify` is set and the identity fails.
PeriodReport period_report(int p, const TauInventory& inventory, bool verify = true);
bool degree_check(int p, const TauInventory& inventory);

struct SummaryOptions {
  unsigned workers = 1;
  bool keep_taus = false;
  bool audit_exceptions = false;
};

// Folds emitted taus into per-worker state; merged views are exact and
// independent of the worker count.
class PeriodAccumulator {
 public:
  PeriodAccumulator(int period, const SummaryOptions& options);

  WorkerTauSink sink();

  // Starts from partial results, e.g. restored from a checkpoint.
  void seed(const PeriodSummary& summary, const std::optional<ExceptionAudit>& audit);

  PeriodSummary summary() const;
  std::optional<ExceptionAudit> audit() const;
  std::vector<TauInventory::Entry> taus() const;

 private:
  struct Slot {
    PeriodSummary summary;
    InvariantCalculator calc;
    std::optional<ExceptionAudit> audit;
    std::vector<TauInventory::Entry> taus;
  };
  int period_;
  SummaryOptions options_;
  std::vector<Slot> slots_;
};

struct PeriodRun {
  PeriodSummary summary;
  EnumStats stats;
  std::vector<TauInventory::Entry> taus;  // sorted by prefix; empty unless keep_taus
  std::optional<ExceptionAudit> audit;
};

// Enumerates one exact period and folds every tau into a summary.
PeriodRun summarize_period(int k, const SummaryOptions& options = {});

// Runs summarize_period for every divisor of p.
TauInventory build_inventory(int p, const SummaryOptions& options = {});

}  // namespace cubic_euler
