#include "cubic_euler/runner.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "cubic_euler/checkpoint.hpp"

namespace cubic_euler {

namespace {

class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown out of the driver when a requested stop leaves work pending.
struct Stopped {
  std::size_t pending;
};

std::optional<AuditState> audit_state(const std::optional<ExceptionAudit>& audit) {
  if (!audit) return std::nullopt;
  return AuditState{audit->found(), audit->unexpected()};
}

class Driver {
 public:
  explicit Driver(const RunConfig& config) : config_(config) {}

  PeriodResult result(int p) {
    for (int k : divisors(p)) ensure(k);
    return {period_report(p, inventory_, config_.verify), stats_.at(p)};
  }

  // The period that may be checkpointed, resumed or stopped early.
  void run_resumable(int p) {
    const SummaryOptions options = options_for(p);
    PeriodAccumulator acc(p, options);
    PeriodicEnumerator enumerator(p);
    if (!config_.resume_path.empty()) {
      Checkpoint cp = read_checkpoint(config_.resume_path, p);
      std::optional<ExceptionAudit> audit;
      if (options.audit_exceptions) {
        if (!cp.audit) throw CheckpointError("checkpoint carries no audit state; resume with --no-verify");
        audit.emplace(p);
        for (std::size_t i : cp.audit->found) {
          if (i >= audit->families().size()) throw CheckpointError("checkpoint audit names an unknown family");
        }
        audit->restore(cp.audit->found, cp.audit->unexpected);
      }
      acc.seed(cp.summary, audit);
      enumerator.restore(std::move(cp.stats), std::move(cp.remaining));
    } else {
      enumerator.initialize(acc.sink());
    }

    auto save = [&] {
      if (config_.checkpoint_path.empty()) return;
      write_checkpoint(config_.checkpoint_path,
                       Checkpoint{p, enumerator.stats(), acc.summary(), audit_state(acc.audit()), enumerator.remaining()});
    };
    if (config_.resume_path.empty()) save();

    std::size_t processed = 0;
    const unsigned workers = std::max(config_.workers, 1u);
    while (!enumerator.done()) {
      std::size_t batch = enumerator.pending();
      if (config_.checkpoint_every) batch = std::min(batch, config_.checkpoint_every);
      if (config_.stop_after) {
        if (processed >= config_.stop_after) {
          save();
          throw Stopped{enumerator.pending()};
        }
        batch = std::min(batch, config_.stop_after - processed);
      }
      processed += enumerator.run(batch, workers, acc.sink());
      if (config_.checkpoint_every && !enumerator.done()) save();
    }
    save();

    const PeriodSummary summary = acc.summary();
    if (summary.tau_count != enumerator.stats().total_periodic()) {
      throw CheckpointError("resumed totals disagree with the enumeration statistics");
    }
    check_audit(acc.audit());
    inventory_.set(summary);
    stats_.insert_or_assign(p, enumerator.stats());
  }

 private:
  SummaryOptions options_for(int k) const {
    SummaryOptions o;
    o.workers = std::max(config_.workers, 1u);
    o.audit_exceptions = config_.verify && k >= 5;
    return o;
  }

  void check_audit(const std::optional<ExceptionAudit>& audit) const {
    if (audit && !audit->passed()) throw VerificationError(audit->diagnostic());
  }

  void ensure(int k) {
    if (inventory_.has(k)) return;
    PeriodRun run = summarize_period(k, options_for(k));
    check_audit(run.audit);
    inventory_.set(run.summary);
    stats_.insert_or_assign(k, std::move(run.stats));
  }

  const RunConfig& config_;
  TauInventory inventory_;
  std::map<int, EnumStats> stats_;
};

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

// Right-aligned columns separated by two spaces.
std::string render_grid(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()));
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += "  ";
      out += pad_left(row[c], width[c]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> report_fields(const PeriodReport& r) {
  return {std::to_string(r.period),       std::to_string(r.tau_count),
          std::to_string(r.central_ends), std::to_string(r.total_ends),
          std::to_string(r.degree),       std::to_string(r.euler_characteristic),
          r.ratio_string()};
}

std::string render_table(const std::vector<PeriodResult>& results, bool with_stats) {
  std::vector<std::vector<std::string>> rows{
      {"Period", "Tau-functions", "Central ends", "Ends", "Degree", "Euler characteristic", "-chi/3^(p-1)"}};
  for (const auto& r : results) rows.push_back(report_fields(r.report));
  std::string out = render_grid(rows);
  if (!with_stats) return out;
  for (const auto& r : results) {
    std::vector<std::vector<std::string>> s{{"Length", "Periodic", "Discard", "Continue"}};
    for (int len = r.stats.first_length(); len <= r.stats.last_length(); ++len) {
      const LengthCounts& c = r.stats.at(len);
      s.push_back({std::to_string(len), std::to_string(c.periodic), std::to_string(c.discard), std::to_string(c.cont)});
    }
    out += "\nPeriod " + std::to_string(r.report.period) + " details\n" + render_grid(s);
  }
  return out;
}

std::string render_csv(const std::vector<PeriodResult>& results, bool with_stats) {
  std::string out = "period,tau_count,central_ends,num_ends,degree,euler_char,neg_ratio\n";
  for (const auto& r : results) {
    const auto f = report_fields(r.report);
    for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + f[i];
    out += '\n';
  }
  if (!with_stats) return out;
  out += "\nperiod,length,periodic,discard,continue\n";
  for (const auto& r : results) {
    for (int len = r.stats.first_length(); len <= r.stats.last_length(); ++len) {
      const LengthCounts& c = r.stats.at(len);
      out += std::to_string(r.report.period) + "," + std::to_string(len) + "," + std::to_string(c.periodic) + "," +
             std::to_string(c.discard) + "," + std::to_string(c.cont) + "\n";
    }
  }
  return out;
}

std::string render_json(const std::vector<PeriodResult>& results, bool with_stats) {
  nlohmann::ordered_json periods = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    const PeriodReport& p = r.report;
    nlohmann::ordered_json row = {
        {"period", p.period},
        {"tau_count", p.tau_count},
        {"central_ends", p.central_ends},
        {"num_ends", p.total_ends},
        {"degree", p.degree},
        {"euler_char", p.euler_characteristic},
        // Exact decimal string; a double would not round-trip the rounding.
        {"neg_ratio", p.ratio_string()},
        {"degree_ok", p.degree_ok},
    };
    if (with_stats) {
      nlohmann::ordered_json stats = nlohmann::ordered_json::array();
      for (int len = r.stats.first_length(); len <= r.stats.last_length(); ++len) {
        const LengthCounts& c = r.stats.at(len);
        stats.push_back({{"length", len}, {"periodic", c.periodic}, {"discard", c.discard}, {"continue", c.cont}});
      }
      row["stats"] = std::move(stats);
    }
    periods.push_back(std::move(row));
  }
  return nlohmann::ordered_json{{"periods", std::move(periods)}}.dump(2) + "\n";
}

}  // namespace

std::string validate(const RunConfig& c) {
  if ((c.period > 0) == (c.through > 0)) return "exactly one of --period and --through is required";
  const int p = std::max(c.period, c.through);
  if (p < 1) return "period must be at least 1";
  if (p > kMaxPeriod) return "period must be at most " + std::to_string(kMaxPeriod);
  if (c.workers < 1) return "worker count must be at least 1";
  const bool resumable = !c.checkpoint_path.empty() || !c.resume_path.empty() || c.stop_after || c.checkpoint_every;
  if (resumable && c.through > 0) return "checkpointing applies to --period runs only";
  if (c.stop_after && c.checkpoint_path.empty()) return "--stop-after needs --checkpoint";
  if (c.checkpoint_every && c.checkpoint_path.empty()) return "--checkpoint-every needs --checkpoint";
  return {};
}

std::string render(const std::vector<PeriodResult>& results, OutputFormat format, bool with_stats) {
  switch (format) {
    case OutputFormat::csv:
      return render_csv(results, with_stats);
    case OutputFormat::json:
      return render_json(results, with_stats);
    case OutputFormat::table:
      break;
  }
  return render_table(results, with_stats);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (const std::string problem = validate(config); !problem.empty()) {
    err << "error: " << problem << '\n';
    return kExitUsage;
  }
  std::vector<PeriodResult> results;
  try {
    Driver driver(config);
    if (config.period > 0) {
      driver.run_resumable(config.period);
      results.push_back(driver.result(config.period));
    } else {
      for (int p = 1; p <= config.through; ++p) results.push_back(driver.result(p));
    }
  } catch (const Stopped& s) {
    err << "stopped with " << s.pending << " work items pending; checkpoint written to " << config.checkpoint_path
        << '\n';
    return kExitStopped;
  } catch (const DegreeCheckError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const VerificationError& e) {
    err << "error: exception-family audit failed: " << e.what() << '\n';
    return kExitFailure;
  } catch (const CheckpointError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const OverflowError& e) {
    err << "error: arithmetic overflow: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  const std::string text = render(results, config.format, config.stats);
  if (config.out_path.empty()) {
    out << text << std::flush;
    if (!out) {
      err << "error: failed writing output\n";
      return kExitFailure;
    }
    return kExitOk;
  }
  std::ofstream file(config.out_path, std::ios::trunc);
  file << text;
  file.flush();
  if (!file) {
    err << "error: cannot write " << config.out_path << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace cubic_euler
