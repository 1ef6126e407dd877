#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roust/types.hpp"

namespace roust {

class ConformanceViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MaxStepsExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// How an endpoint resolves its selections.
struct ChoicePolicy {
  enum class Kind { Fixed, RoundRobin, SeededRandom, Rounds };
  Kind kind = Kind::RoundRobin;
  std::vector<std::string> labels;  // Fixed: decisions in order, one per real choice
  std::size_t rounds = 1;           // Rounds: loop n-1 times, then leave

  static ChoicePolicy fixed(std::vector<std::string> labels) {
    return {Kind::Fixed, std::move(labels), 1};
  }
  static ChoicePolicy round_robin() { return {Kind::RoundRobin, {}, 1}; }
  static ChoicePolicy seeded_random() { return {Kind::SeededRandom, {}, 1}; }
  static ChoicePolicy rounds_of(std::size_t n) { return {Kind::Rounds, {}, n}; }
};

enum class SchedulerKind { RoundRobin, SeededRandom };

struct SimConfig {
  std::uint64_t seed = 0;
  SchedulerKind scheduler = SchedulerKind::RoundRobin;
  std::size_t max_steps = 1'000'000;
  std::optional<std::pair<Role, std::size_t>> cancel;  // initiator, step index
  bool route_via_router = true;
};

struct Envelope {
  enum class Kind { Data, Cancel };
  std::size_t step = 0;
  Role from, to;
  MsgLabel msg;
  std::string payload;
  Kind kind = Kind::Data;
  std::string reason;  // cancel only
};

/// One communication action as seen by the endpoint performing it.
struct Observation {
  Role peer;
  bool send = false;
  std::string label;
  bool operator==(const Observation&) const = default;
};

struct SessionLog {
  std::vector<Envelope> entries;  // in delivery order
  std::map<Role, std::vector<Observation>> observed;
  bool completed = false;
  std::optional<Role> cancelled_by;
  std::vector<Role> notified;
  std::size_t steps = 0;

  std::size_t data_count() const;
  /// Line-delimited `step,from,to,kind,label`.
  std::string serialize() const;
  static SessionLog parse(const std::string& text);
};

/// Roles without a script use round-robin selection.
SessionLog run_session(const Global& g, const Role& router,
                       const std::map<Role, ChoicePolicy>& scripts, const SimConfig& cfg);

struct LogCheck {
  bool ok = true;
  std::size_t index = 0;  // first offending envelope when !ok
  std::string message;
  explicit operator bool() const { return ok; }
};

/// The cancel-free prefix of the log must be the delivery order of some
/// execution of the encoded protocol's configuration semantics.
LogCheck validate_log(const Global& g, const Role& router, const SessionLog& log);

}  // namespace roust
