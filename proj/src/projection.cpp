#include "roust/projection.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace roust {

namespace {

std::string describe(const Role& role, const std::vector<std::string>& labels,
                     const std::string& left, const std::string& right,
                     const std::vector<std::string>& path) {
  std::string msg = "cannot merge";
  if (!role.empty()) msg += " for role " + role.name();
  if (!labels.empty()) {
    msg += " (labels";
    for (const auto& l : labels) msg += " " + l;
    msg += ")";
  }
  if (!path.empty()) {
    msg += " at";
    for (const auto& p : path) msg += " " + p;
  }
  msg += ": " + left + " vs " + right;
  return msg;
}

}  // namespace

MergeFailure::MergeFailure(Role role, std::vector<std::string> labels, std::string left,
                           std::string right, std::vector<std::string> path)
    : std::runtime_error(describe(role, labels, left, right, path)),
      role_(std::move(role)),
      labels_(std::move(labels)),
      left_(std::move(left)),
      right_(std::move(right)),
      path_(std::move(path)) {}

MergeFailure MergeFailure::with_context(const Role& role, const std::string& step) const {
  std::vector<std::string> p;
  if (!step.empty()) p.push_back(step);
  p.insert(p.end(), path_.begin(), path_.end());
  return MergeFailure(role_.empty() ? role : role_, labels_, left_, right_, std::move(p));
}

// ---------------------------------------------------------------------------
// Merge

namespace {

void collect_binders(const Local& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case LKind::End: return;
    case LKind::Var: out.insert(t.var()); return;
    case LKind::Rec:
      out.insert(t.var());
      collect_binders(t.body(), out);
      return;
    default:
      for (const auto& b : t.branches()) collect_binders(b.cont, out);
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

[[noreturn]] void fail(const Local& a, const Local& b, std::vector<std::string> labels = {}) {
  throw MergeFailure(Role(), std::move(labels), to_string(a), to_string(b));
}

Local merge_branches(const Local& a, const Local& b) {
  Local::Branches out = a.branches();
  for (const auto& rb : b.branches()) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const auto& x) { return x.label.name == rb.label.name; });
    if (it == out.end()) {
      out.push_back(rb);
      continue;
    }
    try {
      it->cont = merge(it->cont, rb.cont);
    } catch (const MergeFailure& f) {
      throw f.with_context(Role(), rb.label.name);
    }
  }
  return a.with_branches(std::move(out));
}

}  // namespace

Local merge(const Local& a, const Local& b) {
  if (equivalent(a, b)) return a;
  if (a.kind() != b.kind()) fail(a, b);
  switch (a.kind()) {
    case LKind::Branch:
      if (a.peer() != b.peer()) fail(a, b);
      return merge_branches(a, b);
    case LKind::RoutedBranch:
      if (a.peer() != b.peer() || a.via() != b.via()) fail(a, b);
      return merge_branches(a, b);
    case LKind::Rec: {
      std::set<std::string> used;
      collect_binders(a, used);
      collect_binders(b, used);
      used.erase(a.var());
      std::string name = fresh_name(a.var(), used);
      Local ab = substitute(a.body(), a.var(), Local::var(name));
      Local bb = substitute(b.body(), b.var(), Local::var(name));
      return Local::rec(name, merge(ab, bb));
    }
    case LKind::Select:
    case LKind::RoutedSelect:
    case LKind::Router:
    case LKind::RouterTransit: {
      std::vector<std::string> labels;
      for (const auto& x : a.branches()) labels.push_back(x.label.name);
      for (const auto& x : b.branches())
        if (std::find(labels.begin(), labels.end(), x.label.name) == labels.end())
          labels.push_back(x.label.name);
      fail(a, b, std::move(labels));
    }
    default: fail(a, b);
  }
}

// ---------------------------------------------------------------------------
// Projection

namespace {

Local proj(const Global& g, const Role& r);

Local::Branches proj_branches(const Global& g, const Role& r) {
  Local::Branches out;
  out.reserve(g.branches().size());
  for (const auto& b : g.branches()) {
    try {
      out.push_back({b.label, proj(b.cont, r)});
    } catch (const MergeFailure& f) {
      throw f.with_context(r, b.label.name);
    }
  }
  return out;
}

Local merge_all(const Global& g, const Role& r) {
  std::optional<Local> acc;
  for (const auto& b : g.branches()) {
    Local t;
    try {
      t = proj(b.cont, r);
    } catch (const MergeFailure& f) {
      throw f.with_context(r, b.label.name);
    }
    if (!acc) {
      acc = t;
      continue;
    }
    try {
      acc = merge(*acc, t);
    } catch (const MergeFailure& f) {
      throw f.with_context(r, b.label.name);
    }
  }
  return *acc;
}

Local chosen_only(const Global& g, const Role& r) {
  try {
    return proj(g.branch(g.chosen()), r);
  } catch (const MergeFailure& f) {
    throw f.with_context(r, g.chosen());
  }
}

Local proj(const Global& g, const Role& r) {
  switch (g.kind()) {
    case GKind::End: return Local::end();
    case GKind::Var: return Local::var(g.var());
    case GKind::Rec: {
      Local body = proj(g.body(), r);
      if (body.kind() == LKind::Var) return Local::end();
      return Local::rec(g.var(), std::move(body));
    }
    case GKind::Comm:
      if (r == g.from()) return Local::select(g.to(), proj_branches(g, r));
      if (r == g.to()) return Local::branch(g.from(), proj_branches(g, r));
      return merge_all(g, r);
    case GKind::RoutedComm:
      if (r == g.from()) return Local::routed_select(g.to(), g.via(), proj_branches(g, r));
      if (r == g.to()) return Local::routed_branch(g.from(), g.via(), proj_branches(g, r));
      if (r == g.via()) return Local::router(g.from(), g.to(), proj_branches(g, r));
      return merge_all(g, r);
    case GKind::TransitComm:
      if (r == g.to()) return Local::branch(g.from(), proj_branches(g, r));
      return chosen_only(g, r);
    case GKind::TransitRouted:
      if (r == g.to()) return Local::routed_branch(g.from(), g.via(), proj_branches(g, r));
      if (r == g.via()) return Local::router_transit(g.from(), g.to(), g.chosen(), proj_branches(g, r));
      return chosen_only(g, r);
  }
  return Local::end();
}

}  // namespace

Local project(const Global& g, const Role& r) {
  if (!participants(g).count(r)) return Local::end();
  try {
    return proj(g, r);
  } catch (const MergeFailure& f) {
    throw f.with_context(r, "");
  }
}

}  // namespace roust
