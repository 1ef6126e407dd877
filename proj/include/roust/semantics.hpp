#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "roust/types.hpp"

namespace roust {

/// A step derivation or exploration hit one of its resource bounds.
class ExplorationLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Rule : std::uint8_t {
  Gr1, Gr2, Gr3, Gr4, Gr5, Gr6, Gr7, Gr8, Gr9,
  Lr1, Lr2, Lr3, Lr4, Lr5, Lr6, Lr7, Lr8, Lr9, Lr10, Lr11,
};

/// Which transition rules are active. Everything is on by default; switching
/// rules off is how the mutation harness checks that verifiers are not vacuous.
class RuleSet {
 public:
  RuleSet() = default;
  bool enabled(Rule r) const { return !(disabled_ & bit(r)); }
  RuleSet without(Rule r) const {
    RuleSet out = *this;
    out.disabled_ |= bit(r);
    return out;
  }
  bool operator==(const RuleSet&) const = default;

 private:
  static std::uint32_t bit(Rule r) { return 1u << static_cast<unsigned>(r); }
  std::uint32_t disabled_ = 0;
};

template <class T>
struct Step {
  ActionLabel label;
  T next;
};

/// One-step successors, deduplicated and ordered by (label, canonical key).
std::vector<Step<Global>> global_steps(const Global& g, const RuleSet& rules = {});

/// Local steps as seen by `self`.
std::vector<Step<Local>> local_steps(const Local& t, const Role& self,
                                     const RuleSet& rules = {});

using Channel = std::pair<Role, Role>;

struct Configuration {
  std::map<Role, Local> locals;
  std::map<Channel, std::deque<MsgLabel>> buffers;

  /// Locals for the given roles, all buffers between them empty.
  static Configuration initial(std::map<Role, Local> locals);

  std::string key() const;
  std::string to_string() const;
};

std::vector<Step<Configuration>> config_steps(const Configuration& c, const RuleSet& rules = {});

/// Projections of g plus the buffer contents its in-transit nodes imply.
Configuration project_configuration(const Global& g);

/// Wider branchings are subtypes of narrower ones; selections are invariant.
/// Recursion is compared by bounded unfolding under memoized assumptions.
bool subtype_local(const Local& a, const Local& b, int fuel = 8, bool* fuel_exhausted = nullptr);

bool subtype_config(const Configuration& a, const Configuration& b, int fuel = 8);

}  // namespace roust
