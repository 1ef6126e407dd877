#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "roust/types.hpp"

namespace roust {

class NotCanonical : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AlreadyRouted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Routes every interaction that does not involve s through s.
Global encode_global(const Global& g, const Role& s);

/// Local encoding from the perspective of q. When q == s a warning is appended
/// to `warnings` (if given) and the rewrite still proceeds.
Local encode_local(const Local& t, const Role& q, const Role& s,
                   std::vector<std::string>* warnings = nullptr);

ActionLabel encode_label(const ActionLabel& l, const Role& s);

/// encode_global extended to runtime states: in-transit direct interactions
/// not involving s become routed in-transit interactions.
Global encode_state(const Global& g, const Role& s);

}  // namespace roust
