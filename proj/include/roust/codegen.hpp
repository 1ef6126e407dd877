#pragma once

// Callback-style endpoint skeletons rendered from an EFSM through templates.
//
// A template file (<dir>/<flavor>.tmpl) is a list of sections, each opened by
// a line "@@ <name>". For every unit U in {message, handler, state, factory}
// the emitter renders, in order:
//
//   U.header                            once
//   U.state.<kind>                      per state, kind in {send, receive, terminal}
//   U.transition.<send|receive>         per outgoing transition of that state
//   U.close.<kind>                      per state, after its transitions
//   U.footer                            once
//
// Missing sections render as nothing. The section "extension" gives the file
// extension of the emitted units. Placeholders:
//
//   {{role}} {{protocol}} {{initial}} {{terminal}}           everywhere
//   {{state}} {{alternatives}}                               state sections
//   {{label}} {{payloads}} {{payload_params}} {{successor}} {{peer}}
//                                                            transition sections
//
// {{alternatives}} concatenates section U.alternative rendered for each
// outgoing transition (label names joined by ", " when that section is absent).
// Any other placeholder is a TemplateError.

#include <stdexcept>
#include <string>
#include <vector>

#include "roust/efsm.hpp"

namespace roust {

class UnsupportedFlavor : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeneratedFile {
  std::string path;  // relative: <Protocol>/<Role>/<Unit>.<ext>
  std::string content;
};

std::string default_template_dir();

/// Forwarding legs (transitions routed via the endpoint itself) are not part
/// of any emitted surface.
std::vector<GeneratedFile> emit_skeleton(const Efsm& e, const std::string& protocol,
                                         const std::string& flavor,
                                         const std::string& template_dir = default_template_dir());

/// Writes files under out_dir, creating directories. Returns written paths.
std::vector<std::string> write_files(const std::vector<GeneratedFile>& files,
                                     const std::string& out_dir);

}  // namespace roust
