#include "roust/wellformedness.hpp"

namespace roust {

namespace {

std::string interaction(const Global& g) {
  std::string out = g.from().name() + " -> " + g.to().name();
  if (g.is_routed_form()) out += " via " + g.via().name();
  out += " :";
  for (const auto& b : g.branches()) out += " " + b.label.name;
  return out;
}

bool centroid_rec(const Global& g, const Role& s, CentroidResult& res) {
  switch (g.kind()) {
    case GKind::End:
    case GKind::Var: return true;
    case GKind::Rec: return centroid_rec(g.body(), s, res);
    case GKind::Comm:
    case GKind::TransitComm:
      if (s != g.from() && s != g.to()) {
        res.witness = interaction(g);
        return false;
      }
      break;
    case GKind::RoutedComm:
    case GKind::TransitRouted:
      if (s != g.via()) {
        res.witness = interaction(g);
        return false;
      }
      break;
  }
  for (const auto& b : g.branches()) {
    res.path.push_back(b.label.name);
    if (!centroid_rec(b.cont, s, res)) return false;
    res.path.pop_back();
  }
  return true;
}

}  // namespace

CentroidResult is_centroid(const Global& g, const Role& s) {
  CentroidResult res;
  res.holds = centroid_rec(g, s, res);
  if (res.holds) res.path.clear();
  return res;
}

WfReport check_wf(const Global& g) {
  WfReport rep;
  for (const auto& r : participants(g)) {
    try {
      project(g, r);
    } catch (const MergeFailure& f) {
      rep.ok = false;
      rep.failures.push_back(f);
    }
  }
  return rep;
}

WfReport check_wf_routed(const Global& g, const Role& s) {
  WfReport rep = check_wf(g);
  rep.centroid = is_centroid(g, s);
  if (!rep.centroid->holds) rep.ok = false;
  return rep;
}

std::string WfReport::to_string() const {
  std::string out = ok ? "well-formed\n" : "not well-formed\n";
  for (const auto& f : failures) out += "  projection onto " + f.role().name() + ": " + f.what() + "\n";
  if (centroid && !centroid->holds) {
    out += "  centroid violated at " + centroid->witness;
    if (!centroid->path.empty()) {
      out += " (path";
      for (const auto& p : centroid->path) out += " " + p;
      out += ")";
    }
    out += "\n";
  }
  return out;
}

}  // namespace roust
