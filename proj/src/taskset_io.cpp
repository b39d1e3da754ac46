#include "mcsim/taskset_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace mcsim {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  throw ModelError(ModelErrorKind::Parse,
                   "parse error (line " + std::to_string(line) + "): " + msg);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) throw std::invalid_argument("not an integer: " + std::string(s));
  return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Rational parse_quantity(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty quantity");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = parse_int(trim(text.substr(0, slash)));
    const auto den = parse_int(trim(text.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  }
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  const auto int_part = text.substr(0, dot);
  const auto frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) throw std::invalid_argument("bad quantity");
  for (char c : int_part) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad quantity: " + std::string(text));
  }
  for (char c : frac_part) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad quantity: " + std::string(text));
  }
  if (frac_part.size() > 15) throw std::invalid_argument("too many decimals");
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
  const std::int64_t ip = int_part.empty() ? 0 : parse_int(int_part);
  const std::int64_t fp = frac_part.empty() ? 0 : parse_int(frac_part);
  Rational r(ip * den + fp, den);
  return negative ? -r : r;
}

Tick to_ticks(const Rational& model_time, std::int64_t time_scale) {
  const Rational ticks = model_time * time_scale;
  if (ticks.denominator() != 1) {
    std::ostringstream os;
    os << model_time << " at time_scale " << time_scale;
    throw ModelError(ModelErrorKind::NonIntegralTicks, std::string(to_string(ModelErrorKind::NonIntegralTicks)) + ": " + os.str());
  }
  return ticks.numerator();
}

std::string format_ticks(Tick ticks, std::int64_t time_scale) {
  const Rational r(ticks, time_scale);
  if (r.denominator() == 1) return std::to_string(r.numerator());
  // Finite decimal iff the reduced denominator only has factors 2 and 5.
  std::int64_t d = r.denominator();
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  const int digits = std::max(twos, fives);
  std::int64_t pow10 = 1;
  for (int i = 0; i < digits; ++i) pow10 *= 10;
  const std::int64_t scaled = r.numerator() * (pow10 / r.denominator());
  const bool neg = scaled < 0;
  const std::int64_t mag = neg ? -scaled : scaled;
  std::string frac = std::to_string(mag % pow10);
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  return (neg ? "-" : "") + std::to_string(mag / pow10) + "." + frac;
}

TaskSet load_taskset(std::string_view text) {
  TaskSet ts;
  bool seen_task = false;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.rfind("time_scale", 0) == 0) {
      if (seen_task) parse_fail(lineno, "time_scale must precede task lines");
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) parse_fail(lineno, "expected 'time_scale = N'");
      try {
        ts.time_scale = parse_int(trim(line.substr(eq + 1)));
      } catch (const std::exception& e) {
        parse_fail(lineno, e.what());
      }
      if (ts.time_scale <= 0) {
        throw ModelError(ModelErrorKind::BadTimeScale, "bad time_scale: " + std::to_string(ts.time_scale));
      }
      continue;
    }

    const auto words = split_ws(line);
    if (words.empty() || words[0] != "task") parse_fail(lineno, "unknown directive '" + std::string(line) + "'");
    if (words.size() < 2 || words[1].find('=') != std::string_view::npos) parse_fail(lineno, "missing task id");
    seen_task = true;

    std::map<std::string, std::string, std::less<>> kv;
    for (std::size_t i = 2; i < words.size(); ++i) {
      const auto eq = words[i].find('=');
      if (eq == std::string_view::npos) parse_fail(lineno, "expected key=value, got '" + std::string(words[i]) + "'");
      auto key = std::string(words[i].substr(0, eq));
      if (!kv.emplace(key, std::string(words[i].substr(eq + 1))).second) parse_fail(lineno, "repeated key " + key);
    }
    static const char* const kKnown[] = {"period", "wcet_lo", "wcet_hi", "crit", "priority"};
    for (const auto& [k, v] : kv) {
      if (std::find_if(std::begin(kKnown), std::end(kKnown), [&](const char* n) { return k == n; }) == std::end(kKnown)) {
        parse_fail(lineno, "unknown key " + k);
      }
    }
    auto require = [&](const char* key) -> const std::string& {
      auto it = kv.find(key);
      if (it == kv.end()) parse_fail(lineno, std::string("missing ") + key);
      return it->second;
    };

    Task t;
    t.id = std::string(words[1]);
    const auto& crit = require("crit");
    if (crit == "HC") {
      t.crit = Criticality::HC;
    } else if (crit == "LC") {
      t.crit = Criticality::LC;
    } else {
      parse_fail(lineno, "crit must be HC or LC");
    }
    try {
      t.period = to_ticks(parse_quantity(require("period")), ts.time_scale);
      t.wcet_lo = to_ticks(parse_quantity(require("wcet_lo")), ts.time_scale);
      auto hi = kv.find("wcet_hi");
      if (hi == kv.end() || hi->second == "-") {
        if (t.is_hc()) parse_fail(lineno, "HC task needs wcet_hi");
        t.wcet_hi = t.wcet_lo;
      } else {
        t.wcet_hi = to_ticks(parse_quantity(hi->second), ts.time_scale);
      }
      t.priority = static_cast<int>(parse_int(require("priority")));
    } catch (const ModelError&) {
      throw;
    } catch (const std::exception& e) {
      parse_fail(lineno, e.what());
    }
    ts.tasks.push_back(std::move(t));
  }
  validate(ts);
  return ts;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

TaskSet load_taskset_file(const std::filesystem::path& path) { return load_taskset(read_text_file(path)); }

std::string serialize(const TaskSet& ts) {
  std::ostringstream os;
  os << "time_scale = " << ts.time_scale << "\n";
  for (const auto& t : ts.tasks) {
    os << "task " << t.id << " period=" << format_ticks(t.period, ts.time_scale)
       << " wcet_lo=" << format_ticks(t.wcet_lo, ts.time_scale)
       << " wcet_hi=" << (t.is_hc() ? format_ticks(t.wcet_hi, ts.time_scale) : "-")
       << " crit=" << to_string(t.crit) << " priority=" << t.priority << "\n";
  }
  return os.str();
}

}  // namespace mcsim
