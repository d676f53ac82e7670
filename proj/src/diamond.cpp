#include "rw2/diamond.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

namespace rw2 {

std::size_t RedGraph::add_vertex(const Term& t, int d) {
  if (auto it = index_.find(t); it != index_.end()) return it->second;
  std::size_t i = vertices.size();
  vertices.push_back(t);
  dist.push_back(d);
  frontier.push_back(false);
  index_.emplace(t, i);
  return i;
}

std::size_t RedGraph::add_edge(std::size_t from, std::size_t to, const std::string& rule, const Address& a) {
  edges.push_back({from, to, rule, a});
  return edges.size() - 1;
}

std::optional<std::size_t> RedGraph::find(const Term& t) const {
  if (auto it = index_.find(t); it != index_.end()) return it->second;
  return std::nullopt;
}

std::vector<std::size_t> RedGraph::out(std::size_t v) const {
  std::vector<std::size_t> r;
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (edges[e].from == v) r.push_back(e);
  return r;
}

std::vector<std::size_t> RedGraph::in(std::size_t v) const {
  std::vector<std::size_t> r;
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (edges[e].to == v) r.push_back(e);
  return r;
}

RedGraph build_graph(const Theory2& th, const std::vector<Term>& seeds, int depth) {
  RedGraph g;
  g.depth = std::max(depth, 0);
  auto canon = [&](const Term& t) { return th.modulo.empty() ? t : e_normalize(th, t); };
  std::deque<std::size_t> queue;
  for (const auto& s : seeds) {
    std::size_t before = g.vertices.size();
    std::size_t v = g.add_vertex(canon(s), 0);
    if (std::find(g.sources.begin(), g.sources.end(), v) == g.sources.end()) g.sources.push_back(v);
    if (g.vertices.size() > before) queue.push_back(v);
  }
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    Term t = g.vertices[v];
    auto rs = find_redexes(th, t);
    if (rs.empty()) continue;
    if (g.dist[v] >= g.depth) {
      g.frontier[v] = true;
      continue;
    }
    for (const auto& rx : rs) {
      auto st = rewrite_step(th, t, rx);
      std::size_t before = g.vertices.size();
      std::size_t w = g.add_vertex(canon(st.target), g.dist[v] + 1);
      if (g.vertices.size() > before) queue.push_back(w);
      g.add_edge(v, w, st.rule, st.address);
    }
  }
  return g;
}

std::vector<EdgePath> paths(const RedGraph& g, std::size_t s, std::size_t t, int max_len) {
  std::vector<EdgePath> out;
  if (s == t) {
    out.push_back({});
    return out;
  }
  std::vector<std::vector<std::size_t>> adj(g.vertices.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) adj[g.edges[e].from].push_back(e);
  std::vector<bool> on(g.vertices.size(), false);
  EdgePath cur;
  std::function<void(std::size_t)> go = [&](std::size_t v) {
    if (v == t) {
      out.push_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) >= max_len) return;
    on[v] = true;
    for (std::size_t e : adj[v]) {
      std::size_t w = g.edges[e].to;
      if (on[w]) continue;
      cur.push_back(e);
      go(w);
      cur.pop_back();
    }
    on[v] = false;
  };
  go(s);
  return out;
}

namespace {

std::vector<bool> reach(const RedGraph& g, std::size_t v, bool forward) {
  std::vector<std::vector<std::size_t>> adj(g.vertices.size());
  for (const auto& e : g.edges) {
    if (forward) adj[e.from].push_back(e.to);
    else adj[e.to].push_back(e.from);
  }
  std::vector<bool> seen(g.vertices.size(), false);
  std::vector<std::size_t> stack{v};
  seen[v] = true;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[u])
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return seen;
}

std::vector<std::size_t> interior(const RedGraph& g, const EdgePath& p) {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) r.push_back(g.edges[p[i]].to);
  return r;
}

}  // namespace

std::vector<std::size_t> interval(const RedGraph& g, std::size_t s, std::size_t t) {
  auto f = reach(g, s, true), b = reach(g, t, false);
  std::vector<std::size_t> r;
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    if (f[v] && b[v]) r.push_back(v);
  return r;
}

DiamondVerdict is_diamond(const RedGraph& g, const ParallelPair& p) {
  DiamondVerdict d;
  auto fwd = reach(g, p.s, true);
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    if (fwd[v] && v != p.t && g.frontier[v]) d.interval_truncated = true;
  auto iv = interval(g, p.s, p.t);
  std::vector<bool> inside(g.vertices.size(), false);
  for (auto v : iv)
    if (v != p.s && v != p.t) inside[v] = true;
  auto ia = interior(g, p.alpha), ib = interior(g, p.beta);
  if (ia.empty() || ib.empty()) {
    d.diamond = true;
    return d;
  }
  std::vector<std::vector<std::size_t>> adj(g.vertices.size());
  for (const auto& e : g.edges)
    if (inside[e.from] && inside[e.to]) {
      adj[e.from].push_back(e.to);
      adj[e.to].push_back(e.from);
    }
  std::vector<bool> seen(g.vertices.size(), false);
  std::vector<std::size_t> stack;
  for (auto v : ia) {
    seen[v] = true;
    stack.push_back(v);
  }
  std::set<std::size_t> target(ib.begin(), ib.end());
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    if (target.count(u)) return d;
    for (auto w : adj[u])
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  d.diamond = true;
  return d;
}

namespace {

std::vector<std::string> labels(const RedGraph& g, const EdgePath& p) {
  std::vector<std::string> r;
  for (auto e : p) r.push_back(g.edges[e].label());
  return r;
}

std::pair<std::vector<std::string>, std::vector<std::string>> label_pair(const RedGraph& g, const ParallelPair& p) {
  auto a = labels(g, p.alpha), b = labels(g, p.beta);
  if (b < a) std::swap(a, b);
  return {a, b};
}

bool whiskered(const RedGraph& g, const ParallelPair& p) {
  std::optional<Address> pre;
  for (const auto* path : {&p.alpha, &p.beta})
    for (auto e : *path) {
      const Address& a = g.edges[e].address;
      pre = pre ? common_prefix(*pre, a) : a;
    }
  return pre && !pre->empty();
}

bool internally_disjoint(const RedGraph& g, const EdgePath& a, const EdgePath& b) {
  auto ia = interior(g, a), ib = interior(g, b);
  for (auto v : ia)
    if (std::find(ib.begin(), ib.end(), v) != ib.end()) return false;
  return true;
}

}  // namespace

bool diamond_instance_of(const RedGraph& g, const ParallelPair& a, const ParallelPair& b) {
  return label_pair(g, a) == label_pair(g, b) && is_instance(g.vertices[a.s], g.vertices[b.s]);
}

std::vector<BasicDiamond> basic_diamonds(const RedGraph& g, const Theory2& th) {
  return basic_diamonds(g, th, g.depth);
}

std::vector<BasicDiamond> basic_diamonds(const RedGraph& g, const Theory2&, int max_len) {
  std::vector<BasicDiamond> found;
  for (std::size_t s = 0; s < g.vertices.size(); ++s) {
    if (g.out(s).size() < 2) continue;
    auto fwd = reach(g, s, true);
    for (std::size_t t = 0; t < g.vertices.size(); ++t) {
      if (t == s || !fwd[t]) continue;
      auto ps = paths(g, s, t, max_len);
      for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
          if (ps[i].front() == ps[j].front() || ps[i].back() == ps[j].back()) continue;
          if (!internally_disjoint(g, ps[i], ps[j])) continue;
          ParallelPair p{s, t, ps[i], ps[j]};
          if (whiskered(g, p)) continue;
          auto v = is_diamond(g, p);
          if (v.diamond) found.push_back({p, v.interval_truncated});
        }
    }
  }
  std::vector<BasicDiamond> minimal;
  for (std::size_t i = 0; i < found.size(); ++i) {
    bool proper = false;
    for (std::size_t j = 0; j < found.size() && !proper; ++j)
      proper = j != i && label_pair(g, found[i].pair) == label_pair(g, found[j].pair) &&
               is_proper_instance(g.vertices[found[i].pair.s], g.vertices[found[j].pair.s]);
    if (!proper) minimal.push_back(found[i]);
  }
  std::vector<BasicDiamond> out;
  std::set<std::string> keys;
  for (auto& d : minimal) {
    auto [a, b] = label_pair(g, d.pair);
    std::string key = variant_key({g.vertices[d.pair.s]});
    for (const auto& l : a) key += "|" + l;
    key += "#";
    for (const auto& l : b) key += "|" + l;
    if (keys.insert(key).second) out.push_back(d);
  }
  return out;
}

namespace {

// Terms reachable from t by at most k applications of the term equations in either direction.
std::vector<Term> unfold(const Theory2& th, const Term& t, int k, std::size_t cap) {
  std::vector<Rule> dirs;
  for (const auto& e : th.term_eqs) {
    dirs.push_back({e.label, e.lhs, e.rhs});
    dirs.push_back({e.label, e.rhs, e.lhs});
  }
  std::set<Term> seen{t};
  std::vector<Term> layer{t};
  for (int r = 0; r < k && seen.size() < cap; ++r) {
    std::vector<Term> next;
    for (const auto& u : layer)
      for (const auto& a : positions(u)) {
        Term sub = *subterm(u, a);
        for (const auto& d : dirs) {
          auto s = match(d.lhs, sub);
          if (!s) continue;
          // Variables only on the right are filled with the matched subterm.
          for (const auto& x : vars(d.rhs))
            if (!s->count(x)) (*s)[x] = sub;
          Term w = replace(u, a, rw2::apply(d.rhs, *s));
          if (seen.insert(w).second) next.push_back(w);
          if (seen.size() >= cap) break;
        }
      }
    layer = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

std::vector<Term> fillers(const Signature& sig, int depth, std::size_t cap) {
  std::vector<Term> level{Term::var("z")};
  for (const auto& s : sig.symbols)
    if (s.arity == 0) level.push_back(Term::app(s.name));
  for (int d = 1; d < depth && level.size() < cap; ++d) {
    std::vector<Term> next = level;
    for (const auto& s : sig.symbols) {
      if (s.arity == 0) continue;
      std::vector<std::size_t> idx(s.arity, 0);
      while (next.size() < cap) {
        std::vector<Term> args;
        for (auto i : idx) args.push_back(level[i]);
        next.push_back(Term::app(s.name, args));
        std::size_t p = 0;
        while (p < idx.size() && ++idx[p] == level.size()) idx[p++] = 0;
        if (p == idx.size()) break;
      }
    }
    std::set<Term> uniq(next.begin(), next.end());
    level.assign(uniq.begin(), uniq.end());
  }
  return level;
}

}  // namespace

BranchingReport reverse_branching_check(const Theory2& th, const std::vector<Term>& samples) {
  BranchingReport rep;
  bool linear = th.term_linear();
  if (!linear) rep.reasons.push_back("term equations are not linear");
  std::vector<const Rule*> erasing;
  for (const auto& r : th.rules)
    if (r.orientation > 0) {
      for (const auto& x : vars(r.lhs))
        if (occurrences(r.rhs, x) == 0) {
          rep.reasons.push_back("rule " + r.label + " erases variable " + x);
          erasing.push_back(&r);
          break;
        }
    }
  rep.syntactic = linear && erasing.empty();
  rep.evidence = rep.syntactic;
  if (rep.syntactic) {
    rep.reasons.push_back("reversed theory is term-linear and non-increasing");
    if (th.rank) {
      Theory2 pos = th;
      pos.rules.clear();
      for (const auto& r : th.rules)
        if (r.orientation > 0) pos.rules.push_back(r);
      auto v = check_rank_certificate(pos, *th.rank, default_sampler(pos, 5), 200, 11);
      rep.quasicycle_free_evidence = v.certified;
      rep.reasons.push_back(v.certified ? "rank certificate holds on samples: terminating, hence quasicycle-free"
                                        : "rank certificate fails on samples");
    }
    return rep;
  }
  constexpr std::size_t kCap = 4000;
  for (const auto& t : samples) {
    BranchingReport::Sample smp{t, {}};
    for (int k = 1; k <= 3; ++k) {
      std::set<Term> targets;
      if (!linear)
        for (const auto& u : unfold(th, t, k, kCap))
          for (const auto& rx : find_redexes(th, u))
            if (th.rules[rx.rule_index].orientation > 0) targets.insert(rewrite_step(th, u, rx).target);
      if (!erasing.empty()) {
        auto fill = fillers(th.sig, k, 200);
        for (const auto* r : erasing)
          for (const auto& a : positions(t)) {
            auto s = match(r->rhs, *subterm(t, a));
            if (!s) continue;
            std::vector<std::string> free;
            for (const auto& x : vars(r->lhs))
              if (!s->count(x)) free.push_back(x);
            for (const auto& f : fill) {
              Subst s2 = *s;
              for (const auto& x : free) s2[x] = f;
              targets.insert(replace(t, a, rw2::apply(r->lhs, s2)));
              if (targets.size() >= kCap) break;
            }
          }
      }
      smp.counts.push_back(targets.size());
    }
    rep.samples.push_back(std::move(smp));
  }
  return rep;
}

std::string export_graph(const RedGraph& g, const Signature& sig) {
  std::ostringstream os;
  for (const auto& e : g.edges)
    os << sig.show(g.vertices[e.from]) << '\t' << e.label() << '\t' << sig.show(g.vertices[e.to]) << '\n';
  return os.str();
}

}  // namespace rw2
