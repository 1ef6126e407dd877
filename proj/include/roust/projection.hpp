#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "roust/types.hpp"

namespace roust {

class MergeFailure : public std::runtime_error {
 public:
  MergeFailure(Role role, std::vector<std::string> labels, std::string left, std::string right,
               std::vector<std::string> path = {});

  const Role& role() const { return role_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& left() const { return left_; }
  const std::string& right() const { return right_; }
  /// Branch labels leading from the root of the global type to the failure.
  const std::vector<std::string>& path() const { return path_; }

  MergeFailure with_context(const Role& role, const std::string& step) const;

 private:
  Role role_;
  std::vector<std::string> labels_;
  std::string left_, right_;
  std::vector<std::string> path_;
};

/// Roles outside pt(g) project to end.
Local project(const Global& g, const Role& r);

Local merge(const Local& a, const Local& b);

}  // namespace roust
