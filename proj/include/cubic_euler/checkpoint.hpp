#pragma once

// Plain-text snapshot of an interrupted single-period enumeration.
//
//   CUBIC-EULER v1 period=<p>
//   stats <length> <periodic> <discard> <continue>     (one per length)
//   summary <tau_count> <weighted_ends> <weighted_multiplicity>
//   audit found=<i,j,...> unexpected=<n>               (or: audit none)
//   <tau(1)>,...,<tau(p)>                              (one per work item)
//   END <item count>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "cubic_euler/curve.hpp"
#include "cubic_euler/periodic.hpp"

namespace cubic_euler {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AuditState {
  std::set<std::size_t> found;
  std::uint64_t unexpected = 0;

  friend bool operator==(const AuditState&, const AuditState&) = default;
};

struct Checkpoint {
  int period = 1;
  EnumStats stats;
  PeriodSummary summary;
  std::optional<AuditState> audit;
  Frontier remaining;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

void write_checkpoint(std::ostream& out, const Checkpoint& cp);
// Writes to a sibling temp file, then renames over `path`.
void write_checkpoint(const std::string& path, const Checkpoint& cp);

// expected_period = 0 accepts any period.
Checkpoint read_checkpoint(std::istream& in, int expected_period = 0);
Checkpoint read_checkpoint(const std::string& path, int expected_period = 0);

}  // namespace cubic_euler
