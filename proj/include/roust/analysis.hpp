#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "roust/semantics.hpp"
#include "roust/types.hpp"

namespace roust {

using Trace = std::vector<ActionLabel>;

std::string to_string(const Trace& t);

struct TraceSet {
  std::size_t depth = 0;
  std::set<Trace> traces;

  bool contains(const Trace& t) const { return traces.count(t) > 0; }
  std::size_t size() const { return traces.size(); }
  bool prefix_closed() const;
  bool operator==(const TraceSet&) const = default;
};

class StateBudgetExceeded : public ExplorationLimit {
 public:
  explicit StateBudgetExceeded(std::size_t cap)
      : ExplorationLimit("state budget of " + std::to_string(cap) + " exceeded"), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

struct ExploreOptions {
  std::size_t depth = 8;
  std::size_t state_cap = 1'000'000;
  RuleSet rules;
};

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

struct ExplorationReport {
  std::string check;
  std::string target;
  Verdict verdict = Verdict::Pass;
  std::size_t states = 0;
  std::size_t depth_reached = 0;
  std::optional<Trace> counterexample;  // present iff verdict == Fail
  std::string state;                    // pretty-printed state at the failure
  std::string note;

  bool passed() const { return verdict == Verdict::Pass; }
};

TraceSet global_traces(const Global& g, std::size_t depth, const ExploreOptions& opts = {});

/// Traces of the configuration projected from g.
TraceSet config_traces(const Global& g, std::size_t depth, const ExploreOptions& opts = {});

/// Global LTS vs configuration LTS, up to opts.depth. The counterexample is a
/// shortest trace enabled on one side only.
ExplorationReport check_trace_equivalence(const Global& g, const ExploreOptions& opts = {});

/// Every reachable state is End or can step. Depth is unbounded; only the
/// state cap limits exploration.
ExplorationReport check_deadlock_freedom(const Global& g, const Role& router,
                                         const ExploreOptions& opts = {});

/// G and its encoding step in lockstep under the label encoding, with
/// successors again related by the encoding, up to opts.depth.
ExplorationReport check_encoding_bisim(const Global& g, const Role& s,
                                       const ExploreOptions& opts = {});

/// key=value lines, one block per report, closed by an overall verdict line.
std::string format_report(const std::vector<ExplorationReport>& reports);

}  // namespace roust
