#pragma once

// Keystroke-level model estimates in exact centisecond arithmetic.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace svc::klm {

class Seconds {
 public:
  constexpr Seconds() = default;
  static constexpr Seconds from_centis(std::int64_t c) { return Seconds(c); }
  /// Throws Error(Errc::invalid_argument) for values finer than 0.01 s.
  static Seconds from_double(double seconds);
  /// Parses "8.7", "8,7", "19.60". Same precision rule as from_double.
  static Seconds parse(std::string_view text);

  std::int64_t centis() const { return centis_; }
  double value() const { return static_cast<double>(centis_) / 100.0; }
  /// "46.6", "18.0", "1.15": one decimal at least, two when needed.
  std::string str() const;

  Seconds operator+(Seconds o) const { return Seconds(centis_ + o.centis_); }
  Seconds operator-(Seconds o) const { return Seconds(centis_ - o.centis_); }
  Seconds operator*(std::int64_t n) const { return Seconds(centis_ * n); }
  Seconds& operator+=(Seconds o) {
    centis_ += o.centis_;
    return *this;
  }
  auto operator<=>(const Seconds&) const = default;

 private:
  constexpr explicit Seconds(std::int64_t c) : centis_(c) {}
  std::int64_t centis_ = 0;
};

struct OperatorTable {
  std::map<std::string, Seconds> times;

  /// H 0.40, B 0.20, P 1.10, K 0.28, M 1.35.
  static OperatorTable defaults();
  /// Throws Error(Errc::unknown_operator).
  Seconds at(const std::string& symbol) const;
};

struct KlmStep {
  std::string label;
  std::optional<Seconds> fixed_seconds;
  std::vector<std::pair<std::string, int>> operators;  // used when fixed_seconds is empty
};

struct KlmScenario {
  std::string name;
  std::vector<KlmStep> steps;
};

struct StepEstimate {
  std::string label;
  Seconds seconds;
};

struct Estimate {
  Seconds total;
  std::vector<StepEstimate> per_step;
};

Estimate estimate(const KlmScenario& scenario, const OperatorTable& table = OperatorTable::defaults());

struct StepDelta {
  std::string label;
  std::optional<Seconds> a;  // empty when the label only occurs in b
  std::optional<Seconds> b;
  Seconds delta;             // a - b, treating a missing side as 0
};

struct Comparison {
  Seconds total_a;
  Seconds total_b;
  Seconds delta;
  std::vector<StepDelta> steps;
};

/// Steps are matched by label; the k-th repeat of a label in `a` pairs with
/// the k-th in `b`. Unmatched steps are reported one-sided.
Comparison compare(const KlmScenario& a, const KlmScenario& b, const OperatorTable& table = OperatorTable::defaults());

KlmScenario scenario_from_json(const nlohmann::json& j);
KlmScenario load_scenario(const std::string& path);
/// Applies {"K": 0.2, ...} overrides on top of `base`.
OperatorTable table_from_json(const nlohmann::json& j, OperatorTable base = OperatorTable::defaults());

nlohmann::json to_json(const KlmScenario& s);
nlohmann::json to_json(const Estimate& e);
nlohmann::json to_json(const Comparison& c);

}  // namespace svc::klm
