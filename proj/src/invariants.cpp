#include "cubic_euler/invariants.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace cubic_euler {

namespace {

void fill_spine_context(const TauStack& stack, SpineContext& ctx) {
  if (stack.empty()) throw std::invalid_argument("spine context of an empty prefix");
  stack.ladder_into(ctx.ladder);
  const auto& levels = ctx.ladder.levels;
  const int k = ctx.ladder.k();

  ctx.special_orders.resize(levels.size());
  for (int i = 0; i < k; ++i) ctx.special_orders[i] = stack.ord(levels[i]) - stack.ord(levels[i + 1]);
  ctx.special_orders[k] = stack.ord(levels[k]);

  ctx.successor_of_marker.assign(levels.size(), 0);
  for (int i = 1; i <= k; ++i) ctx.successor_of_marker[i] = stack[ctx.ladder.marker_levels[i - 1] + 1];

  int s = 0;
  for (int x = levels[0]; !stack.is_marked_level(x); x = stack[x]) ++s;
  ctx.symmetry = s;
  if (s > ctx.special_orders[0]) throw std::logic_error("symmetry exceeds n_0");
}

struct TwistData {
  int marked_count = 0;
  std::uint64_t twist_period = 1;
};

// Stack must hold at least the defining prefix of tau.
TwistData twist_data(const TauStack& stack, const PeriodicTau& tau) {
  const int p = tau.period();
  TwistData out;
  int top = 0;
  for (int l = 1; l < stack.length(); ++l) {
    if (stack.is_marked_level(l)) top = l;
  }
  if (top > p - 1) {
    throw std::logic_error("marked level " + std::to_string(top) + " exceeds p-1 for " + tau.to_string());
  }
  DyadicRational modulus;
  for (int l = 1; l <= top; ++l) {
    modulus += DyadicRational::inverse_power_of_two(stack.ord(l));
    if (!stack.is_marked_level(l)) continue;
    ++out.marked_count;
    out.twist_period = std::max(out.twist_period, modulus.denominator());
  }
  return out;
}

std::uint64_t twist_factor_from(const TwistData& d, const PeriodicTau& tau) {
  const std::uint64_t states = checked_pow2(d.marked_count, "2^L");
  if (d.twist_period > states || states % d.twist_period != 0) {
    throw std::domain_error("twist factor 2^L/T is not integral for " + tau.to_string());
  }
  return states / d.twist_period;
}

}  // namespace

bool SpineContext::delta(int i, int j) const {
  const int k = ladder.k();
  if (i <= 0 || i >= j || j > k + 1) throw std::out_of_range("delta(i, j) needs 0 < i < j <= k+1");
  const int lj = j == k + 1 ? -1 : ladder.levels[j];
  return successor_of_marker[i] == lj + 1;
}

SpineContext spine_context(const TauStack& stack) {
  SpineContext ctx;
  fill_spine_context(stack, ctx);
  return ctx;
}

SpineContext spine_context(const TauPrefix& prefix) { return spine_context(prefix.to_stack()); }

std::uint64_t spine_factor(const SpineContext& ctx, int next_value) {
  const int i = ctx.ladder.index_of(next_value);
  if (i < 0) throw InadmissibleError("spine factor requested for a non-admissible extension " + std::to_string(next_value));
  if (i == 0) return 1;
  // B(i) = 1, B(j) = 2^{n_j} B(j+1) - delta(j, i), SF = 2^{n_0 - s} B(1).
  std::uint64_t b = 1;
  for (int j = i - 1; j >= 1; --j) {
    b = checked_mul(checked_pow2(ctx.special_orders[j], "spine factor"), b, "spine factor");
    if (ctx.delta(j, i)) b = checked_sub(b, 1, "spine factor");
  }
  return checked_mul(checked_pow2(ctx.special_orders[0] - ctx.symmetry, "spine factor"), b, "spine factor");
}

std::uint64_t spine_factor(const TauPrefix& prefix, int next_value) {
  return spine_factor(spine_context(prefix), next_value);
}

std::uint64_t spines(const PeriodicTau& tau, int through_length) {
  const int length = std::max(through_length, tau.defining_length());
  TauStack stack(length);
  SpineContext ctx;
  std::uint64_t product = 1;
  stack.push_unchecked(0);
  for (int j = 2; j <= length; ++j) {
    fill_spine_context(stack, ctx);
    product = checked_mul(product, spine_factor(ctx, tau(j)), "Spines product");
    stack.push_unchecked(tau(j));
  }
  return product;
}

std::vector<int> nonzero_marked_levels(const PeriodicTau& tau) {
  const TauStack stack = tau.prefix().to_stack();
  std::vector<int> out;
  for (int l = 1; l < stack.length(); ++l) {
    if (stack.is_marked_level(l)) out.push_back(l);
  }
  return out;
}

DyadicRational level_modulus(const PeriodicTau& tau, int level) {
  const TauStack stack = tau.prefix().to_stack();
  if (level <= 0 || level >= stack.length() || !stack.is_marked_level(level)) {
    throw std::invalid_argument(std::to_string(level) + " is not a non-zero marked level of " + tau.to_string());
  }
  DyadicRational sum;
  for (int i = 1; i <= level; ++i) sum += DyadicRational::inverse_power_of_two(stack.ord(i));
  return sum;
}

std::uint64_t twist_period(const PeriodicTau& tau) { return twist_data(tau.prefix().to_stack(), tau).twist_period; }

std::uint64_t twist_factor(const PeriodicTau& tau) {
  return twist_factor_from(twist_data(tau.prefix().to_stack(), tau), tau);
}

std::uint64_t multiplicity_for_twist_period(std::uint64_t twist_period) {
  if (twist_period == 1) return 1;
  if (!std::has_single_bit(twist_period)) {
    throw std::logic_error("twist period " + std::to_string(twist_period) + " is not a power of two");
  }
  return twist_period / 2;
}

std::uint64_t multiplicity(const PeriodicTau& tau) { return multiplicity_for_twist_period(twist_period(tau)); }

TauInvariants InvariantCalculator::operator()(const PeriodicTau& tau) {
  TauInvariants out;
  const int n0 = tau.defining_length();
  stack_.clear();
  stack_.push_unchecked(0);
  for (int j = 2; j <= n0; ++j) {
    fill_spine_context(stack_, ctx_);
    out.spines = checked_mul(out.spines, spine_factor(ctx_, tau(j)), "Spines product");
    stack_.push_unchecked(tau(j));
  }
  const TwistData twist = twist_data(stack_, tau);
  out.marked_count = twist.marked_count;
  out.twist_period = twist.twist_period;
  out.twist_factor = twist_factor_from(twist, tau);
  out.multiplicity = multiplicity_for_twist_period(twist.twist_period);
  return out;
}

TauInvariants invariants_of(const PeriodicTau& tau) {
  InvariantCalculator calc;
  return calc(tau);
}

}  // namespace cubic_euler
