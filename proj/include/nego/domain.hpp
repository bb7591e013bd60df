#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nego/rng.hpp"

namespace nego {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class IssueKind { NumericDiscrete, NumericContinuous, Categorical };

/// One negotiable dimension. Numeric issues span [lo, hi] (discrete ones on a
/// step grid); categorical issues enumerate their values by name.
struct Issue {
  std::string key;
  IssueKind kind = IssueKind::NumericDiscrete;
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  std::vector<std::string> values;  // categorical only

  int discreteCount() const {
    return static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
  }
  void validate() const;
};

/// A complete assignment of one value per issue, in domain issue order.
/// Numeric issues store the value itself; categorical issues store the index
/// into Issue::values.
struct Bid {
  std::vector<double> slots;

  double numeric(std::size_t issue) const { return slots[issue]; }
  int categoryIndex(std::size_t issue) const {
    return static_cast<int>(std::lround(slots[issue]));
  }
  bool operator==(const Bid&) const = default;
};

/// One clause of a constraint: an interval (numeric issues) or a value set
/// (categorical issues) on a single issue.
struct Clause {
  int issue = 0;
  double min = 0.0;
  double max = 0.0;
  std::vector<int> allowed;  // categorical value indices
  bool categorical = false;

  bool satisfied(const Bid& bid) const;
};

struct Constraint {
  std::vector<Clause> clauses;  // conjunction
  double weight = 0.0;

  bool satisfied(const Bid& bid) const {
    for (const auto& c : clauses)
      if (!c.satisfied(bid)) return false;
    return true;
  }
};

/// Weighted-constraint utility: u(bid) = sum of satisfied weights / normalizer.
/// The generator certifies normalizer = max achievable weight sum, so the
/// range is [0, 1].
struct PreferenceProfile {
  std::vector<Constraint> constraints;
  double normalizer = 1.0;
  double reserve = 0.0;

  double utility(const Bid& bid) const;
};

struct DomainSpec {
  std::vector<Issue> issues;
  std::array<PreferenceProfile, 2> profiles;

  int indexOf(std::string_view key) const;
  /// Number of distinct bids; +inf when any issue is continuous.
  double bidSpaceSize() const;
  bool validBid(const Bid& bid) const;
  void requireValid(const Bid& bid) const;

  Bid sampleRandomBid(Rng& rng) const;
  void sampleRandomBid(Rng& rng, Bid& out) const;  // allocation-free variant

  nlohmann::json bidToJson(const Bid& bid) const;
  Bid bidFromJson(const nlohmann::json& j) const;
  nlohmann::json toJson() const;
  static DomainSpec fromJson(const nlohmann::json& j);
};

/// Four bids a,b,c,d differing in two issues with u(a)+u(d) != u(b)+u(c),
/// witnessing that the profile is not additive across issues.
struct NonlinearityWitness {
  std::array<Bid, 4> bids;
  double gap = 0.0;  // |u(a)+u(d) - u(b)-u(c)|
};

struct GeneratedDomain {
  DomainSpec spec;
  std::array<Bid, 2> maximizers;  // per profile, utility exactly 1
  std::array<std::optional<NonlinearityWitness>, 2> witnesses;
};

/// Benchmark domain: issueCount numeric-discrete issues over 1..10 (step 1)
/// and two asymmetric nonlinear profiles with reserve 0. Profile 2's
/// constraints are systematically easier to satisfy. Deterministic per seed.
GeneratedDomain generateBenchmarkDomain(std::uint64_t seed, int issueCount = 10);

}  // namespace nego
