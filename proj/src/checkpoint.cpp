#include "cubic_euler/checkpoint.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace cubic_euler {

namespace {

constexpr const char* kMagic = "CUBIC-EULER";
constexpr const char* kVersion = "v1";

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(s);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& s, int line_no) {
  T value{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw CheckpointError("checkpoint line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return value;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string line;
    if (!std::getline(in_, line)) throw CheckpointError("checkpoint truncated after line " + std::to_string(no_));
    ++no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }
  int line_no() const { return no_; }
  [[noreturn]] void fail(const std::string& why) const {
    throw CheckpointError("checkpoint line " + std::to_string(no_) + ": " + why);
  }

 private:
  std::istream& in_;
  int no_ = 0;
};

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& cp) {
  if (cp.stats.period() != cp.period || cp.summary.period != cp.period || cp.remaining.period() != cp.period) {
    throw std::invalid_argument("checkpoint parts disagree on the period");
  }
  out << kMagic << ' ' << kVersion << " period=" << cp.period << '\n';
  for (int len = cp.stats.first_length(); len <= cp.stats.last_length(); ++len) {
    const LengthCounts& c = cp.stats.at(len);
    out << "stats " << len << ' ' << c.periodic << ' ' << c.discard << ' ' << c.cont << '\n';
  }
  out << "summary " << cp.summary.tau_count << ' ' << cp.summary.weighted_ends << ' '
      << cp.summary.weighted_multiplicity << '\n';
  if (cp.audit) {
    out << "audit found=";
    bool first = true;
    for (std::size_t i : cp.audit->found) {
      out << (first ? "" : ",") << i;
      first = false;
    }
    out << " unexpected=" << cp.audit->unexpected << '\n';
  } else {
    out << "audit none\n";
  }
  for (std::size_t i = 0; i < cp.remaining.size(); ++i) {
    const TauPrefix item = cp.remaining.item(i);
    for (int n = 1; n <= item.length(); ++n) out << (n > 1 ? "," : "") << item(n);
    out << '\n';
  }
  out << "END " << cp.remaining.size() << '\n';
  if (!out) throw std::runtime_error("failed writing checkpoint");
}

void write_checkpoint(const std::string& path, const Checkpoint& cp) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    write_checkpoint(out, cp);
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot move checkpoint into place at " + path + ": " + ec.message());
}

Checkpoint read_checkpoint(std::istream& in, int expected_period) {
  LineReader lines(in);
  Checkpoint cp;

  {
    const auto w = words(lines.next());
    if (w.size() != 3 || w[0] != kMagic) lines.fail("not a checkpoint header");
    if (w[1] != kVersion) lines.fail("unsupported checkpoint version " + w[1]);
    if (w[2].rfind("period=", 0) != 0) lines.fail("header lacks period=");
    cp.period = parse_number<int>(w[2].substr(7), lines.line_no());
    if (cp.period < 1 || cp.period > kMaxPeriod) lines.fail("period out of range");
    if (expected_period != 0 && cp.period != expected_period) {
      throw CheckpointError("checkpoint is for period " + std::to_string(cp.period) + ", expected " +
                            std::to_string(expected_period));
    }
  }

  cp.stats = EnumStats(cp.period);
  for (int len = cp.stats.first_length(); len <= cp.stats.last_length(); ++len) {
    const auto w = words(lines.next());
    if (w.size() != 5 || w[0] != "stats") lines.fail("expected stats for length " + std::to_string(len));
    if (parse_number<int>(w[1], lines.line_no()) != len) lines.fail("stats lines out of order");
    LengthCounts& c = cp.stats.at(len);
    c.periodic = parse_number<std::uint64_t>(w[2], lines.line_no());
    c.discard = parse_number<std::uint64_t>(w[3], lines.line_no());
    c.cont = parse_number<std::uint64_t>(w[4], lines.line_no());
  }

  {
    const auto w = words(lines.next());
    if (w.size() != 4 || w[0] != "summary") lines.fail("expected summary");
    cp.summary.period = cp.period;
    cp.summary.tau_count = parse_number<std::uint64_t>(w[1], lines.line_no());
    cp.summary.weighted_ends = parse_number<std::uint64_t>(w[2], lines.line_no());
    cp.summary.weighted_multiplicity = parse_number<std::uint64_t>(w[3], lines.line_no());
    if (cp.summary.tau_count != cp.stats.total_periodic()) lines.fail("summary disagrees with stats");
  }

  {
    const auto w = words(lines.next());
    if (w.empty() || w[0] != "audit") lines.fail("expected audit");
    if (w.size() == 2 && w[1] == "none") {
      cp.audit.reset();
    } else {
      if (w.size() != 3 || w[1].rfind("found=", 0) != 0 || w[2].rfind("unexpected=", 0) != 0) {
        lines.fail("malformed audit line");
      }
      AuditState a;
      const std::string found = w[1].substr(6);
      if (!found.empty()) {
        for (const auto& f : split(found, ',')) a.found.insert(parse_number<std::size_t>(f, lines.line_no()));
      }
      a.unexpected = parse_number<std::uint64_t>(w[2].substr(11), lines.line_no());
      cp.audit = std::move(a);
    }
  }

  cp.remaining = Frontier(cp.period);
  std::vector<int> values;
  for (;;) {
    const std::string line = lines.next();
    if (line.rfind("END", 0) == 0) {
      const auto w = words(line);
      if (w.size() != 2 || w[0] != "END") lines.fail("malformed END line");
      if (parse_number<std::size_t>(w[1], lines.line_no()) != cp.remaining.size()) {
        lines.fail("END count disagrees with " + std::to_string(cp.remaining.size()) + " items read");
      }
      break;
    }
    values.clear();
    for (const auto& f : split(line, ',')) values.push_back(parse_number<int>(f, lines.line_no()));
    if (static_cast<int>(values.size()) != cp.period) lines.fail("work item does not have length p");
    try {
      cp.remaining.push(TauPrefix(values));
    } catch (const InadmissibleError& e) {
      lines.fail(std::string("inadmissible work item: ") + e.what());
    }
  }
  std::string trailing;
  while (std::getline(in, trailing)) {
    if (!words(trailing).empty()) throw CheckpointError("checkpoint has content after END");
  }
  return cp;
}

Checkpoint read_checkpoint(const std::string& path, int expected_period) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open checkpoint " + path);
  return read_checkpoint(in, expected_period);
}

}  // namespace cubic_euler
