#include "nego/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nego {

namespace {

constexpr double kGridTol = 1e-9;

std::string kindName(IssueKind k) {
  switch (k) {
    case IssueKind::NumericDiscrete: return "numeric-discrete";
    case IssueKind::NumericContinuous: return "numeric-continuous";
    case IssueKind::Categorical: return "categorical";
  }
  return "?";
}

IssueKind kindFromName(const std::string& s) {
  if (s == "numeric-discrete") return IssueKind::NumericDiscrete;
  if (s == "numeric-continuous") return IssueKind::NumericContinuous;
  if (s == "categorical") return IssueKind::Categorical;
  throw ValidationError("unknown issue kind: " + s);
}

}  // namespace

void Issue::validate() const {
  if (key.empty()) throw ValidationError("issue key must be non-empty");
  if (kind == IssueKind::Categorical) {
    if (values.empty()) throw ValidationError(key + ": categorical value list is empty");
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = i + 1; j < values.size(); ++j)
        if (values[i] == values[j])
          throw ValidationError(key + ": duplicate categorical value " + values[i]);
  } else {
    if (!(lo < hi)) throw ValidationError(key + ": requires lo < hi");
    if (kind == IssueKind::NumericDiscrete && !(step > 0.0))
      throw ValidationError(key + ": requires step > 0");
  }
}

bool Clause::satisfied(const Bid& bid) const {
  if (issue < 0 || static_cast<std::size_t>(issue) >= bid.slots.size())
    throw ValidationError("bid is missing issue index " + std::to_string(issue));
  if (categorical) {
    const int v = bid.categoryIndex(static_cast<std::size_t>(issue));
    return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
  }
  const double v = bid.slots[static_cast<std::size_t>(issue)];
  return v >= min && v <= max;
}

double PreferenceProfile::utility(const Bid& bid) const {
  double sum = 0.0;
  for (const auto& c : constraints)
    if (c.satisfied(bid)) sum += c.weight;
  return sum / normalizer;
}

int DomainSpec::indexOf(std::string_view key) const {
  for (std::size_t i = 0; i < issues.size(); ++i)
    if (issues[i].key == key) return static_cast<int>(i);
  throw ValidationError("unknown issue key: " + std::string(key));
}

double DomainSpec::bidSpaceSize() const {
  double size = 1.0;
  for (const auto& issue : issues) {
    switch (issue.kind) {
      case IssueKind::NumericDiscrete: size *= issue.discreteCount(); break;
      case IssueKind::NumericContinuous: return std::numeric_limits<double>::infinity();
      case IssueKind::Categorical: size *= static_cast<double>(issue.values.size()); break;
    }
  }
  return size;
}

bool DomainSpec::validBid(const Bid& bid) const {
  if (bid.slots.size() != issues.size()) return false;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    const auto& issue = issues[i];
    const double v = bid.slots[i];
    switch (issue.kind) {
      case IssueKind::NumericDiscrete: {
        if (v < issue.lo - kGridTol || v > issue.hi + kGridTol) return false;
        const double steps = (v - issue.lo) / issue.step;
        if (std::abs(steps - std::round(steps)) > kGridTol) return false;
        break;
      }
      case IssueKind::NumericContinuous:
        if (v < issue.lo || v > issue.hi) return false;
        break;
      case IssueKind::Categorical: {
        const double r = std::round(v);
        if (std::abs(v - r) > kGridTol) return false;
        const int idx = static_cast<int>(r);
        if (idx < 0 || idx >= static_cast<int>(issue.values.size())) return false;
        break;
      }
    }
  }
  return true;
}

void DomainSpec::requireValid(const Bid& bid) const {
  if (!validBid(bid)) throw ValidationError("bid is not valid for this domain");
}

Bid DomainSpec::sampleRandomBid(Rng& rng) const {
  Bid bid;
  sampleRandomBid(rng, bid);
  return bid;
}

void DomainSpec::sampleRandomBid(Rng& rng, Bid& out) const {
  out.slots.resize(issues.size());
  for (std::size_t i = 0; i < issues.size(); ++i) {
    const auto& issue = issues[i];
    switch (issue.kind) {
      case IssueKind::NumericDiscrete:
        out.slots[i] = issue.lo + issue.step * rng.uniformInt(0, issue.discreteCount() - 1);
        break;
      case IssueKind::NumericContinuous:
        out.slots[i] = rng.uniform(issue.lo, issue.hi);
        break;
      case IssueKind::Categorical:
        out.slots[i] = rng.uniformInt(0, static_cast<int>(issue.values.size()) - 1);
        break;
    }
  }
}

nlohmann::json DomainSpec::bidToJson(const Bid& bid) const {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < issues.size(); ++i) {
    const auto& issue = issues[i];
    if (issue.kind == IssueKind::Categorical)
      j[issue.key] = issue.values[static_cast<std::size_t>(bid.categoryIndex(i))];
    else
      j[issue.key] = bid.slots[i];
  }
  return j;
}

Bid DomainSpec::bidFromJson(const nlohmann::json& j) const {
  Bid bid;
  bid.slots.resize(issues.size());
  for (std::size_t i = 0; i < issues.size(); ++i) {
    const auto& issue = issues[i];
    if (!j.contains(issue.key)) throw ValidationError("bid is missing issue " + issue.key);
    if (issue.kind == IssueKind::Categorical) {
      const auto name = j.at(issue.key).get<std::string>();
      const auto it = std::find(issue.values.begin(), issue.values.end(), name);
      if (it == issue.values.end())
        throw ValidationError(issue.key + ": unknown categorical value " + name);
      bid.slots[i] = static_cast<double>(it - issue.values.begin());
    } else {
      bid.slots[i] = j.at(issue.key).get<double>();
    }
  }
  return bid;
}

nlohmann::json DomainSpec::toJson() const {
  nlohmann::json j;
  j["issues"] = nlohmann::json::array();
  for (const auto& issue : issues) {
    nlohmann::json ji;
    ji["key"] = issue.key;
    ji["kind"] = kindName(issue.kind);
    if (issue.kind == IssueKind::Categorical) {
      ji["values"] = issue.values;
    } else {
      ji["lo"] = issue.lo;
      ji["hi"] = issue.hi;
      if (issue.kind == IssueKind::NumericDiscrete) ji["step"] = issue.step;
    }
    j["issues"].push_back(std::move(ji));
  }
  j["profiles"] = nlohmann::json::array();
  for (const auto& profile : profiles) {
    nlohmann::json jp;
    jp["reserve"] = profile.reserve;
    jp["normalizer"] = profile.normalizer;
    jp["constraints"] = nlohmann::json::array();
    for (const auto& c : profile.constraints) {
      nlohmann::json jc;
      jc["weight"] = c.weight;
      jc["clauses"] = nlohmann::json::array();
      for (const auto& cl : c.clauses) {
        nlohmann::json jcl;
        jcl["key"] = issues[static_cast<std::size_t>(cl.issue)].key;
        if (cl.categorical) {
          auto names = nlohmann::json::array();
          for (int idx : cl.allowed)
            names.push_back(issues[static_cast<std::size_t>(cl.issue)].values[static_cast<std::size_t>(idx)]);
          jcl["allowed"] = std::move(names);
        } else {
          jcl["min"] = cl.min;
          jcl["max"] = cl.max;
        }
        jc["clauses"].push_back(std::move(jcl));
      }
      jp["constraints"].push_back(std::move(jc));
    }
    j["profiles"].push_back(std::move(jp));
  }
  return j;
}

DomainSpec DomainSpec::fromJson(const nlohmann::json& j) {
  DomainSpec d;
  for (const auto& ji : j.at("issues")) {
    Issue issue;
    issue.key = ji.at("key").get<std::string>();
    issue.kind = kindFromName(ji.at("kind").get<std::string>());
    if (issue.kind == IssueKind::Categorical) {
      issue.values = ji.at("values").get<std::vector<std::string>>();
    } else {
      issue.lo = ji.at("lo").get<double>();
      issue.hi = ji.at("hi").get<double>();
      if (issue.kind == IssueKind::NumericDiscrete) issue.step = ji.at("step").get<double>();
    }
    issue.validate();
    d.issues.push_back(std::move(issue));
  }
  const auto& jprofiles = j.at("profiles");
  if (jprofiles.size() != 2) throw ValidationError("domain must define exactly two profiles");
  for (std::size_t p = 0; p < 2; ++p) {
    const auto& jp = jprofiles[p];
    PreferenceProfile profile;
    profile.reserve = jp.at("reserve").get<double>();
    profile.normalizer = jp.at("normalizer").get<double>();
    if (!(profile.normalizer > 0.0)) throw ValidationError("normalizer must be positive");
    if (profile.reserve < 0.0 || profile.reserve > 1.0)
      throw ValidationError("reserve must be in [0,1]");
    for (const auto& jc : jp.at("constraints")) {
      Constraint c;
      c.weight = jc.at("weight").get<double>();
      if (!(c.weight > 0.0)) throw ValidationError("constraint weight must be positive");
      for (const auto& jcl : jc.at("clauses")) {
        Clause cl;
        cl.issue = d.indexOf(jcl.at("key").get<std::string>());
        const auto& issue = d.issues[static_cast<std::size_t>(cl.issue)];
        if (issue.kind == IssueKind::Categorical) {
          cl.categorical = true;
          for (const auto& name : jcl.at("allowed")) {
            const auto it = std::find(issue.values.begin(), issue.values.end(),
                                      name.get<std::string>());
            if (it == issue.values.end())
              throw ValidationError(issue.key + ": unknown categorical value in clause");
            cl.allowed.push_back(static_cast<int>(it - issue.values.begin()));
          }
        } else {
          cl.min = jcl.at("min").get<double>();
          cl.max = jcl.at("max").get<double>();
        }
        c.clauses.push_back(std::move(cl));
      }
      profile.constraints.push_back(std::move(c));
    }
    d.profiles[p] = std::move(profile);
  }
  return d;
}

namespace {

// Clause interval of the given halfwidth around the anchor value, clamped to
// the issue range so the anchor always satisfies it.
Clause intervalAround(const Issue& issue, int issueIdx, double anchor, double halfwidth) {
  Clause cl;
  cl.issue = issueIdx;
  cl.min = std::max(issue.lo, anchor - halfwidth);
  cl.max = std::min(issue.hi, anchor + halfwidth);
  return cl;
}

std::optional<NonlinearityWitness> findWitness(const DomainSpec& spec,
                                               const PreferenceProfile& profile,
                                               const Bid& anchor) {
  for (const auto& c : profile.constraints) {
    if (c.clauses.size() < 2) continue;
    const auto& ci = c.clauses[0];
    const auto& cj = c.clauses[1];
    const auto& issueI = spec.issues[static_cast<std::size_t>(ci.issue)];
    const auto& issueJ = spec.issues[static_cast<std::size_t>(cj.issue)];
    // Scan the grids for a value inside and a value outside each clause.
    auto pickOutside = [](const Issue& issue, const Clause& cl) -> std::optional<double> {
      for (int k = 0; k < issue.discreteCount(); ++k) {
        const double v = issue.lo + issue.step * k;
        if (v < cl.min || v > cl.max) return v;
      }
      return std::nullopt;
    };
    const auto xOut = pickOutside(issueI, ci);
    const auto yOut = pickOutside(issueJ, cj);
    if (!xOut || !yOut) continue;
    Bid a = anchor, b = anchor, cc = anchor, d = anchor;
    b.slots[static_cast<std::size_t>(cj.issue)] = *yOut;
    cc.slots[static_cast<std::size_t>(ci.issue)] = *xOut;
    d.slots[static_cast<std::size_t>(ci.issue)] = *xOut;
    d.slots[static_cast<std::size_t>(cj.issue)] = *yOut;
    const double gap = profile.utility(a) + profile.utility(d) -
                       profile.utility(b) - profile.utility(cc);
    if (std::abs(gap) > 1e-9)
      return NonlinearityWitness{{a, b, cc, d}, std::abs(gap)};
  }
  return std::nullopt;
}

}  // namespace

GeneratedDomain generateBenchmarkDomain(std::uint64_t seed, int issueCount) {
  if (issueCount < 1) throw ValidationError("issueCount must be >= 1");
  Rng rng(deriveSeed(seed, 0xd0511a1));

  GeneratedDomain out;
  auto& spec = out.spec;
  for (int i = 0; i < issueCount; ++i) {
    Issue issue;
    char buf[16];
    std::snprintf(buf, sizeof buf, "issue%02d", i + 1);
    issue.key = buf;
    issue.kind = IssueKind::NumericDiscrete;
    issue.lo = 1.0;
    issue.hi = 10.0;
    issue.step = 1.0;
    spec.issues.push_back(std::move(issue));
  }

  // Profile 2 gets wider constraint windows than profile 1, which makes a
  // random bid score systematically higher under it.
  const int kBroad = 20, kSharp = 30;
  for (int p = 0; p < 2; ++p) {
    Bid anchor = spec.sampleRandomBid(rng);
    PreferenceProfile profile;
    profile.reserve = 0.0;
    double total = 0.0;
    for (int k = 0; k < kBroad; ++k) {
      Constraint c;
      const int issueIdx = rng.uniformInt(0, issueCount - 1);
      const double hw = p == 0 ? rng.uniformInt(2, 3) : rng.uniformInt(3, 5);
      c.clauses.push_back(intervalAround(spec.issues[static_cast<std::size_t>(issueIdx)],
                                         issueIdx, anchor.slots[static_cast<std::size_t>(issueIdx)], hw));
      c.weight = rng.uniform(0.8, 1.2);
      total += c.weight;
      profile.constraints.push_back(std::move(c));
    }
    for (int k = 0; k < kSharp; ++k) {
      Constraint c;
      const int arity = std::min(issueCount, rng.uniformInt(2, 3));
      std::vector<int> chosen;
      while (static_cast<int>(chosen.size()) < arity) {
        const int idx = rng.uniformInt(0, issueCount - 1);
        if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end()) chosen.push_back(idx);
      }
      for (int idx : chosen) {
        const double hw = p == 0 ? rng.uniformInt(0, 1) : rng.uniformInt(1, 2);
        c.clauses.push_back(intervalAround(spec.issues[static_cast<std::size_t>(idx)], idx,
                                           anchor.slots[static_cast<std::size_t>(idx)], hw));
      }
      c.weight = rng.uniform(0.4, 1.0);
      total += c.weight;
      profile.constraints.push_back(std::move(c));
    }
    profile.normalizer = total;  // the anchor satisfies every constraint
    spec.profiles[static_cast<std::size_t>(p)] = std::move(profile);
    out.maximizers[static_cast<std::size_t>(p)] = std::move(anchor);
  }
  if (issueCount >= 2) {
    for (int p = 0; p < 2; ++p)
      out.witnesses[static_cast<std::size_t>(p)] =
          findWitness(spec, spec.profiles[static_cast<std::size_t>(p)],
                      out.maximizers[static_cast<std::size_t>(p)]);
  }
  return out;
}

}  // namespace nego
