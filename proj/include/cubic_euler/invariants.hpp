#pragma once

// Per-tau counting invariants: number of pictographs (product of spine
// factors), twist period, twist factor, and escape-region multiplicity.

#include <cstdint>
#include <vector>

#include "cubic_euler/dyadic.hpp"
#include "cubic_euler/periodic.hpp"
#include "cubic_euler/tau.hpp"

namespace cubic_euler {

// Data attached to the ladder of a prefix of length N that the spine factor
// of step N+1 needs.
struct SpineContext {
  ExtensionLadder ladder;
  std::vector<int> special_orders;  // n_0 .. n_k
  int symmetry = 0;                 // s
  std::vector<int> successor_of_marker;  // tau(l_i' + 1) at index i = 1..k; slot 0 unused

  // delta(i, j) for 0 < i < j <= k+1, with l_{k+1} = -1.
  bool delta(int i, int j) const;
};

SpineContext spine_context(const TauStack& stack);
SpineContext spine_context(const TauPrefix& prefix);

// SF(tau, N+1) for tau(N+1) = next_value.
std::uint64_t spine_factor(const SpineContext& ctx, int next_value);
std::uint64_t spine_factor(const TauPrefix& prefix, int next_value);

struct TauInvariants {
  std::uint64_t spines = 1;
  int marked_count = 0;  // L, non-zero marked levels
  std::uint64_t twist_period = 1;
  std::uint64_t twist_factor = 1;
  std::uint64_t multiplicity = 1;

  friend bool operator==(const TauInvariants&, const TauInvariants&) = default;
};

// Product of spine factors over steps 2..length. Using any length past n0
// gives the same value.
std::uint64_t spines(const PeriodicTau& tau, int through_length = 0);

DyadicRational level_modulus(const PeriodicTau& tau, int level);
std::uint64_t twist_period(const PeriodicTau& tau);
std::uint64_t twist_factor(const PeriodicTau& tau);
std::uint64_t multiplicity(const PeriodicTau& tau);
std::uint64_t multiplicity_for_twist_period(std::uint64_t twist_period);

// Non-zero marked levels of the infinite periodic tau, ascending.
std::vector<int> nonzero_marked_levels(const PeriodicTau& tau);

// Computes all invariants with reusable scratch space; one per worker.
class InvariantCalculator {
 public:
  InvariantCalculator() : stack_(kMaxLength) {}
  TauInvariants operator()(const PeriodicTau& tau);

 private:
  TauStack stack_;
  SpineContext ctx_;
};

TauInvariants invariants_of(const PeriodicTau& tau);

}  // namespace cubic_euler
