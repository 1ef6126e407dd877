#include "roust/encoding.hpp"

namespace roust {

namespace {

Global enc(const Global& g, const Role& s, bool allow_transit) {
  switch (g.kind()) {
    case GKind::End:
    case GKind::Var: return g;
    case GKind::Rec: return Global::rec(g.var(), enc(g.body(), s, allow_transit));
    case GKind::RoutedComm:
    case GKind::TransitRouted:
      throw NotCanonical("encoding expects a canonical global type, found routed interaction " +
                         g.from().name() + " -> " + g.to().name() + " via " + g.via().name());
    case GKind::TransitComm:
      if (!allow_transit)
        throw NotCanonical("encoding expects a canonical global type, found in-transit " +
                           g.from().name() + " ~> " + g.to().name());
      break;
    case GKind::Comm: break;
  }
  Global::Branches bs;
  bs.reserve(g.branches().size());
  for (const auto& b : g.branches()) bs.push_back({b.label, enc(b.cont, s, allow_transit)});
  bool direct = s == g.from() || s == g.to();
  if (g.kind() == GKind::Comm)
    return direct ? Global::comm(g.from(), g.to(), std::move(bs))
                  : Global::routed(g.from(), g.to(), s, std::move(bs));
  return direct ? Global::transit(g.from(), g.to(), g.chosen(), std::move(bs))
                : Global::transit_routed(g.from(), g.to(), s, g.chosen(), std::move(bs));
}

Local enc_local(const Local& t, const Role& q, const Role& s) {
  switch (t.kind()) {
    case LKind::End:
    case LKind::Var: return t;
    case LKind::Rec: return Local::rec(t.var(), enc_local(t.body(), q, s));
    case LKind::Select:
    case LKind::Branch: break;
    default:
      throw NotCanonical("local encoding expects a canonical local type, found " + to_string(t));
  }
  Local::Branches bs;
  bs.reserve(t.branches().size());
  for (const auto& b : t.branches()) bs.push_back({b.label, enc_local(b.cont, q, s)});
  bool direct = s == t.peer() || s == q;
  if (t.kind() == LKind::Select)
    return direct ? Local::select(t.peer(), std::move(bs))
                  : Local::routed_select(t.peer(), s, std::move(bs));
  return direct ? Local::branch(t.peer(), std::move(bs))
                : Local::routed_branch(t.peer(), s, std::move(bs));
}

}  // namespace

Global encode_global(const Global& g, const Role& s) { return enc(g, s, false); }

Global encode_state(const Global& g, const Role& s) { return enc(g, s, true); }

Local encode_local(const Local& t, const Role& q, const Role& s,
                   std::vector<std::string>* warnings) {
  if (q == s && warnings)
    warnings->push_back("encoding from the router's own perspective (" + s.name() +
                        ") is outside the correspondence with global encoding");
  return enc_local(t, q, s);
}

ActionLabel encode_label(const ActionLabel& l, const Role& s) {
  if (l.routed()) throw AlreadyRouted("label is already routed: " + l.to_string());
  if (s == l.from || s == l.to) return l;
  return l.is_send() ? ActionLabel::routed_send(s, l.from, l.to, l.msg)
                     : ActionLabel::routed_recv(s, l.from, l.to, l.msg);
}

}  // namespace roust
