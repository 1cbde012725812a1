#include "svc/klm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "svc/error.hpp"
#include "svc/serialize.hpp"

namespace svc::klm {

using nlohmann::json;

Seconds Seconds::from_double(double seconds) {
  if (!std::isfinite(seconds)) throw Error(Errc::invalid_argument, "duration is not finite");
  double scaled = seconds * 100.0;
  double rounded = std::round(scaled);
  if (std::fabs(scaled - rounded) > 1e-6)
    throw Error(Errc::invalid_argument, "duration " + std::to_string(seconds) + " is finer than 0.01 s");
  return Seconds(static_cast<std::int64_t>(std::llround(rounded)));
}

Seconds Seconds::parse(std::string_view text) {
  std::string s(text);
  for (char& c : s)
    if (c == ',') c = '.';
  bool negative = !s.empty() && s[0] == '-';
  std::size_t i = negative ? 1 : 0;
  std::int64_t whole = 0;
  std::size_t digits = 0;
  for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i, ++digits) whole = whole * 10 + (s[i] - '0');
  std::int64_t frac = 0;
  int frac_digits = 0;
  if (i < s.size() && s[i] == '.') {
    for (++i; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      if (frac_digits == 2) {
        if (s[i] != '0') throw Error(Errc::invalid_argument, "duration '" + s + "' is finer than 0.01 s");
        continue;
      }
      frac = frac * 10 + (s[i] - '0');
      ++frac_digits;
      ++digits;
    }
  }
  if (i != s.size() || digits == 0) throw Error(Errc::invalid_argument, "not a duration: '" + s + "'");
  if (frac_digits == 1) frac *= 10;
  std::int64_t c = whole * 100 + frac;
  return Seconds(negative ? -c : c);
}

std::string Seconds::str() const {
  std::int64_t c = centis_ < 0 ? -centis_ : centis_;
  std::string out = (centis_ < 0 ? "-" : "") + std::to_string(c / 100) + ".";
  std::int64_t frac = c % 100;
  if (frac % 10 == 0) {
    out += std::to_string(frac / 10);
  } else {
    out += (frac < 10 ? "0" : "") + std::to_string(frac);
  }
  return out;
}

OperatorTable OperatorTable::defaults() {
  OperatorTable t;
  t.times = {{"H", Seconds::from_centis(40)},
             {"B", Seconds::from_centis(20)},
             {"P", Seconds::from_centis(110)},
             {"K", Seconds::from_centis(28)},
             {"M", Seconds::from_centis(135)}};
  return t;
}

Seconds OperatorTable::at(const std::string& symbol) const {
  auto it = times.find(symbol);
  if (it == times.end()) throw Error(Errc::unknown_operator, "unknown KLM operator '" + symbol + "'");
  return it->second;
}

namespace {

Seconds step_time(const KlmStep& step, const OperatorTable& table) {
  if (step.fixed_seconds) return *step.fixed_seconds;
  Seconds total;
  for (const auto& [symbol, repeat] : step.operators) total += table.at(symbol) * repeat;
  return total;
}

Seconds seconds_of(const json& v, const std::string& where) {
  if (v.is_number()) return Seconds::from_double(v.get<double>());
  if (v.is_string()) return Seconds::parse(v.get<std::string>());
  throw Error(Errc::parse_error, where + ": expected a number of seconds");
}

}  // namespace

Estimate estimate(const KlmScenario& scenario, const OperatorTable& table) {
  Estimate e;
  for (const auto& step : scenario.steps) {
    Seconds s = step_time(step, table);
    e.per_step.push_back({step.label, s});
    e.total += s;
  }
  return e;
}

Comparison compare(const KlmScenario& a, const KlmScenario& b, const OperatorTable& table) {
  Estimate ea = estimate(a, table);
  Estimate eb = estimate(b, table);
  Comparison c{ea.total, eb.total, ea.total - eb.total, {}};

  std::vector<bool> used(eb.per_step.size(), false);
  for (const auto& sa : ea.per_step) {
    StepDelta d{sa.label, sa.seconds, std::nullopt, sa.seconds};
    for (std::size_t j = 0; j < eb.per_step.size(); ++j) {
      if (!used[j] && eb.per_step[j].label == sa.label) {
        used[j] = true;
        d.b = eb.per_step[j].seconds;
        d.delta = sa.seconds - eb.per_step[j].seconds;
        break;
      }
    }
    c.steps.push_back(d);
  }
  for (std::size_t j = 0; j < eb.per_step.size(); ++j) {
    if (used[j]) continue;
    c.steps.push_back({eb.per_step[j].label, std::nullopt, eb.per_step[j].seconds, Seconds() - eb.per_step[j].seconds});
  }
  return c;
}

KlmScenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::parse_error, "scenario: expected an object");
  KlmScenario s;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw Error(Errc::parse_error, "scenario.name: expected a string");
    s.name = j["name"].get<std::string>();
  }
  if (!j.contains("steps") || !j["steps"].is_array()) throw Error(Errc::parse_error, "scenario.steps: missing array");
  const json& steps = j["steps"];
  for (std::size_t i = 0; i < steps.size(); ++i) {
    std::string where = "scenario.steps[" + std::to_string(i) + "]";
    const json& st = steps[i];
    if (!st.is_object()) throw Error(Errc::parse_error, where + ": expected an object");
    KlmStep step;
    if (st.contains("label")) {
      if (!st["label"].is_string()) throw Error(Errc::parse_error, where + ".label: expected a string");
      step.label = st["label"].get<std::string>();
    }
    bool has_seconds = st.contains("seconds");
    bool has_ops = st.contains("operators");
    if (has_seconds == has_ops)
      throw Error(Errc::parse_error, where + ": exactly one of seconds or operators is required");
    if (has_seconds) {
      step.fixed_seconds = seconds_of(st["seconds"], where + ".seconds");
      if (*step.fixed_seconds < Seconds())
        throw Error(Errc::invalid_argument, where + ".seconds: must not be negative");
    } else {
      const json& ops = st["operators"];
      if (!ops.is_array()) throw Error(Errc::parse_error, where + ".operators: expected an array");
      for (std::size_t k = 0; k < ops.size(); ++k) {
        std::string owhere = where + ".operators[" + std::to_string(k) + "]";
        const json& op = ops[k];
        if (op.is_string()) {
          step.operators.emplace_back(op.get<std::string>(), 1);
        } else if (op.is_array() && op.size() == 2 && op[0].is_string() && op[1].is_number_integer() &&
                   op[1].get<int>() >= 0) {
          step.operators.emplace_back(op[0].get<std::string>(), op[1].get<int>());
        } else {
          throw Error(Errc::parse_error, owhere + ": expected [symbol, repeat]");
        }
      }
    }
    s.steps.push_back(std::move(step));
  }
  return s;
}

KlmScenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::not_found, "cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(parse_json(buf.str()));
}

OperatorTable table_from_json(const json& j, OperatorTable base) {
  if (j.is_null()) return base;
  if (!j.is_object()) throw Error(Errc::parse_error, "operator table: expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    Seconds s = seconds_of(*it, "operator table." + it.key());
    if (s <= Seconds()) throw Error(Errc::invalid_argument, "operator " + it.key() + " must take a positive time");
    base.times[it.key()] = s;
  }
  return base;
}

json to_json(const KlmScenario& s) {
  json steps = json::array();
  for (const auto& st : s.steps) {
    json j = {{"label", st.label}};
    if (st.fixed_seconds) {
      j["seconds"] = st.fixed_seconds->value();
    } else {
      json ops = json::array();
      for (const auto& [sym, n] : st.operators) ops.push_back(json::array({sym, n}));
      j["operators"] = ops;
    }
    steps.push_back(j);
  }
  return {{"name", s.name}, {"steps", steps}};
}

json to_json(const Estimate& e) {
  json steps = json::array();
  for (const auto& s : e.per_step) steps.push_back({{"label", s.label}, {"seconds", s.seconds.value()}});
  return {{"total", e.total.value()}, {"per_step", steps}};
}

json to_json(const Comparison& c) {
  json steps = json::array();
  for (const auto& s : c.steps) {
    json j = {{"label", s.label}, {"delta", s.delta.value()}};
    j["a"] = s.a ? json(s.a->value()) : json(nullptr);
    j["b"] = s.b ? json(s.b->value()) : json(nullptr);
    steps.push_back(j);
  }
  return {{"total_a", c.total_a.value()}, {"total_b", c.total_b.value()}, {"delta", c.delta.value()}, {"steps", steps}};
}

}  // namespace svc::klm
