#include "rw2/coherence.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

namespace rw2 {

Orientation standard_orientation(const Theory2& th) {
  Orientation o;
  for (const auto& r : th.rules) o.sign[r.label] = r.orientation;
  return o;
}

void validate_orientation(const Theory2& th, const Orientation& o) {
  for (const auto& r : th.rules) {
    auto it = o.sign.find(r.label);
    if (it == o.sign.end()) throw OrientationError("invalid-orientation: no sign for rule " + r.label);
    if (it->second != 1 && it->second != -1)
      throw OrientationError("invalid-orientation: sign of " + r.label + " must be +1 or -1");
    if (!r.invertible && it->second != 1)
      throw OrientationError("invalid-orientation: non-invertible rule " + r.label + " must be positive");
    if (r.invertible && !r.inverse.empty()) {
      auto jt = o.sign.find(r.inverse);
      if (jt != o.sign.end() && jt->second == it->second)
        throw OrientationError("invalid-orientation: " + r.label + " and " + r.inverse +
                               " have the same sign");
    }
  }
  for (const auto& [label, s] : o.sign)
    if (!th.find_rule(label)) throw OrientationError("invalid-orientation: unknown rule " + label);
}

std::vector<std::string> rules_used(const Reduction& r) {
  std::vector<std::string> out;
  std::function<void(const Reduction&)> walk = [&](const Reduction& x) {
    if (x.kind() == Reduction::Kind::RuleApp &&
        std::find(out.begin(), out.end(), x.label()) == out.end())
      out.push_back(x.label());
    for (const auto& k : x.kids()) walk(k);
  };
  walk(r);
  return out;
}

Theory2 positive_subtheory(const Theory2& th, const Orientation& o) {
  validate_orientation(th, o);
  Theory2 out = th;
  out.rules.clear();
  std::set<std::string> negative;
  for (const auto& r : th.rules) {
    if (o.sign.at(r.label) < 0) {
      negative.insert(r.label);
      continue;
    }
    Rule k = r;
    k.orientation = 1;
    k.invertible = false;
    k.inverse.clear();
    k.is_formal_inverse = false;
    out.rules.push_back(k);
  }
  out.axioms.clear();
  for (const auto& ax : th.axioms) {
    bool keep = true;
    for (const Reduction* side : {&ax.lhs, &ax.rhs})
      for (const auto& l : rules_used(*side)) keep = keep && !negative.count(l);
    if (keep) out.axioms.push_back(ax);
  }
  if (!negative.empty()) out.name = th.name + "+";
  return out;
}

std::string to_string(UnjoinedReason r) {
  return r == UnjoinedReason::NotJoinableWithinFuel ? "not-joinable-within-fuel"
                                                    : "joinable-but-no-commuting-proof-found";
}

std::vector<Face> reverse_faces(const std::vector<Face>& faces) {
  std::vector<Face> out;
  for (auto it = faces.rbegin(); it != faces.rend(); ++it) {
    Face f = *it;
    std::swap(f.lhs, f.rhs);
    f.inner = reverse_faces(it->inner);
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

void shift(std::vector<Face>& faces, std::size_t by) {
  for (auto& f : faces) f.position += by;
}

void append(std::vector<Face>& out, std::vector<Face> more, std::size_t by = 0) {
  shift(more, by);
  for (auto& f : more) out.push_back(std::move(f));
}

Path slice(const Path& p, std::size_t from, std::size_t to) {
  return Path(p.begin() + static_cast<long>(from), p.begin() + static_cast<long>(to));
}

Path cat(const Path& a, const Path& b) {
  Path out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Path splice(const Path& p, std::size_t pos, std::size_t len, const Path& with) {
  Path out = slice(p, 0, pos);
  out.insert(out.end(), with.begin(), with.end());
  out.insert(out.end(), p.begin() + static_cast<long>(pos + len), p.end());
  return out;
}

Path positive_nf_trace(const Theory2& pos, const Term& t, long fuel, bool* exhausted = nullptr) {
  auto res = normalize(pos, t, Strategy::innermost(), fuel);
  if (exhausted) *exhausted = res.fuel_exhausted;
  return res.trace;
}

Theory2 positive_rules_only(const Theory2& th) {
  Theory2 out = th;
  out.rules.clear();
  for (const auto& r : th.rules)
    if (r.orientation > 0) out.rules.push_back(r);
  return out;
}

// Replays a path written over a general source inside `ctx` at address c, under sigma.
std::optional<Path> instantiate_path(const Theory2& th, const Path& pattern, const Subst& sigma,
                                     const Term& ctx, const Address& c) {
  Path out;
  if (pattern.empty()) return out;
  Term cur = replace(ctx, c, rw2::apply(pattern.front().source, sigma));
  for (const auto& st : pattern) {
    auto s = try_step(th, cur, st.rule, concat(c, st.address));
    if (!s) return std::nullopt;
    cur = s->target;
    out.push_back(std::move(*s));
  }
  return out;
}

std::optional<std::vector<Face>> instantiate_faces(const Theory2& th, const std::vector<Face>& faces,
                                                   const Subst& sigma, const Term& ctx, const Address& c) {
  std::vector<Face> out;
  for (const auto& f : faces) {
    Face g = f;
    auto l = instantiate_path(th, f.lhs, sigma, ctx, c);
    auto r = instantiate_path(th, f.rhs, sigma, ctx, c);
    auto in = instantiate_faces(th, f.inner, sigma, ctx, c);
    if (!l || !r || !in) return std::nullopt;
    g.lhs = std::move(*l);
    g.rhs = std::move(*r);
    g.inner = std::move(*in);
    out.push_back(std::move(g));
  }
  return out;
}

struct Eqn {
  std::string label;
  bool lemma = false;
  Term source;
  Path lhs;
  Path rhs;
  std::vector<Face> proof;
};

std::vector<Eqn> equations(const Theory2& th, const std::vector<Lemma>& lemmas) {
  std::vector<Eqn> out;
  for (const auto& ax : th.axioms) {
    Eqn e;
    e.label = ax.label;
    e.source = ax.lhs.source();
    try {
      e.lhs = singular_decompose(ax.lhs);
      e.rhs = singular_decompose(ax.rhs);
    } catch (const std::exception&) {
      continue;
    }
    out.push_back(std::move(e));
  }
  for (const auto& l : lemmas) {
    Eqn e;
    e.label = l.label;
    e.lemma = true;
    e.source = l.source;
    e.lhs = l.lhs;
    e.rhs = l.rhs;
    e.proof = l.proof;
    out.push_back(std::move(e));
  }
  return out;
}

// An instance of one side of an equation at the start of `seg`; returns the face replacing it.
std::optional<Face> match_equation(const Theory2& th, const Eqn& e, bool forward, const Path& cur,
                                   std::size_t i, bool whole = false) {
  const Path& m = forward ? e.lhs : e.rhs;
  const Path& o = forward ? e.rhs : e.lhs;
  if (m.empty() || i + m.size() > cur.size()) return std::nullopt;
  if (whole && i + m.size() != cur.size()) return std::nullopt;
  const SingularStep& first = cur[i];
  if (first.rule != m[0].rule) return std::nullopt;
  const Address& a = first.address;
  const Address& a0 = m[0].address;
  if (a0.size() > a.size() || !std::equal(a0.begin(), a0.end(), a.end() - static_cast<long>(a0.size())))
    return std::nullopt;
  Address c(a.begin(), a.end() - static_cast<long>(a0.size()));
  auto sub = subterm(first.source, c);
  if (!sub) return std::nullopt;
  auto sigma = match(e.source, *sub);
  if (!sigma) return std::nullopt;
  auto inst = instantiate_path(th, m, *sigma, first.source, c);
  if (!inst || !same_path(*inst, slice(cur, i, i + m.size()))) return std::nullopt;
  auto other = instantiate_path(th, o, *sigma, first.source, c);
  if (!other) return std::nullopt;
  if (!other->empty() && !(other->back().target == inst->back().target)) return std::nullopt;
  Face f;
  f.kind = e.lemma ? FaceKind::Composite : FaceKind::Axiom;
  f.label = e.label;
  f.position = i;
  f.lhs = std::move(*inst);
  f.rhs = std::move(*other);
  if (e.lemma) {
    auto in = instantiate_faces(th, e.proof, *sigma, first.source, c);
    if (!in) return std::nullopt;
    f.inner = forward ? std::move(*in) : reverse_faces(*in);
  }
  return f;
}

struct PathKey {
  std::size_t h;
  const Path* p;
};

struct Searcher {
  const Theory2& th;
  std::vector<Eqn> eqs;
  JoinOptions opt;
  long fuel;
  std::size_t nodes = 0;
  std::size_t node_budget = 400000;
  std::set<std::tuple<std::size_t, std::size_t, int>> failed;
  std::set<std::pair<std::size_t, std::size_t>> open;

  std::vector<std::pair<Face, Path>> moves(const Path& s) {
    std::vector<std::pair<Face, Path>> out;
    auto push = [&](Face f) {
      Path n = splice(s, f.position, f.lhs.size(), f.rhs);
      out.emplace_back(std::move(f), std::move(n));
    };
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      if (orthogonal(s[i].address, s[i + 1].address)) {
        if (auto sw = funct_swap(th, s[i], s[i + 1])) {
          Face f{FaceKind::Funct, "", i, slice(s, i, i + 2), *sw, {}};
          push(std::move(f));
        }
      }
      const Rule* r = th.find_rule(s[i].rule);
      if (r && r->inverse == s[i + 1].rule && s[i].address == s[i + 1].address &&
          s[i + 1].target == s[i].source) {
        Face f{FaceKind::Inverse, "", i, slice(s, i, i + 2), {}, {}};
        push(std::move(f));
      }
    }
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      if (auto m = nat_inward(th, s, i)) {
        Face f{FaceKind::Nat, "", m->position, slice(s, m->position, m->position + m->length),
               m->replacement, {}};
        push(std::move(f));
      }
      if (auto m = nat_outward(th, s, i)) {
        Face f{FaceKind::Nat, "", m->position, slice(s, m->position, m->position + m->length),
               m->replacement, {}};
        push(std::move(f));
      }
    }
    for (std::size_t i = 0; i < s.size(); ++i)
      for (const auto& e : eqs)
        for (bool fw : {true, false})
          if (auto f = match_equation(th, e, fw, s, i)) push(std::move(*f));
    return out;
  }

  // Bidirectional breadth-first search over single-face rewrites.
  std::optional<std::vector<Face>> meet(const Path& p, const Path& q) {
    struct Node {
      Path path;
      int parent;
      Face via;
    };
    std::vector<Node> side[2];
    std::unordered_multimap<std::size_t, int> index[2];
    side[0].push_back({p, -1, {}});
    side[1].push_back({q, -1, {}});
    index[0].emplace(path_hash(p), 0);
    index[1].emplace(path_hash(q), 0);
    auto find = [&](int k, const Path& x) -> int {
      auto [lo, hi] = index[k].equal_range(path_hash(x));
      for (auto it = lo; it != hi; ++it)
        if (same_path(side[k][static_cast<std::size_t>(it->second)].path, x)) return it->second;
      return -1;
    };
    auto chain = [&](int k, int at) {
      std::vector<Face> fs;
      for (int n = at; side[k][static_cast<std::size_t>(n)].parent >= 0;
           n = side[k][static_cast<std::size_t>(n)].parent)
        fs.push_back(side[k][static_cast<std::size_t>(n)].via);
      std::reverse(fs.begin(), fs.end());
      return fs;
    };
    auto result = [&](int a, int b) {
      std::vector<Face> fs = chain(0, a);
      append(fs, reverse_faces(chain(1, b)));
      return fs;
    };
    std::size_t begin[2] = {0, 0};
    for (int layer = 0; layer < 2 * opt.search_depth; ++layer) {
      int k = layer % 2;
      std::size_t end = side[k].size();
      for (std::size_t n = begin[k]; n < end; ++n) {
        if (side[k].size() >= opt.node_cap || nodes >= node_budget) return std::nullopt;
        Path cur = side[k][n].path;
        for (auto& [f, next] : moves(cur)) {
          ++nodes;
          if (find(k, next) >= 0) continue;
          int id = static_cast<int>(side[k].size());
          side[k].push_back({next, static_cast<int>(n), f});
          index[k].emplace(path_hash(next), id);
          int other = find(1 - k, next);
          if (other >= 0) return k == 0 ? result(id, other) : result(other, id);
        }
      }
      begin[k] = end;
    }
    return std::nullopt;
  }

  // Moves the step at `j` to the right through `p` while it commutes; returns its new index.
  std::size_t push_right(Path& p, std::size_t j, std::vector<Face>& faces) {
    while (j + 1 < p.size()) {
      if (orthogonal(p[j].address, p[j + 1].address)) {
        auto sw = funct_swap(th, p[j], p[j + 1]);
        if (!sw) break;
        faces.push_back({FaceKind::Funct, "", j, slice(p, j, j + 2), *sw, {}});
        p = splice(p, j, 2, *sw);
        ++j;
        continue;
      }
      auto m = nat_inward(th, p, j);
      if (!m || m->position != j) break;
      faces.push_back({FaceKind::Nat, "", j, slice(p, j, j + m->length), m->replacement, {}});
      p = splice(p, j, m->length, m->replacement);
      j = j + m->replacement.size() - 1;
    }
    return j;
  }

  std::size_t push_left(Path& p, std::size_t j, std::vector<Face>& faces) {
    while (j > 0) {
      if (orthogonal(p[j - 1].address, p[j].address)) {
        auto sw = funct_swap(th, p[j - 1], p[j]);
        if (!sw) break;
        faces.push_back({FaceKind::Funct, "", j - 1, slice(p, j - 1, j + 1), *sw, {}});
        p = splice(p, j - 1, 2, *sw);
        --j;
        continue;
      }
      std::optional<NatMove> m;
      for (std::size_t i = j; i-- > 0 && !m;) {
        auto t = nat_outward(th, p, i);
        if (t && t->position + t->length == j + 1) m = t;
        if (!is_prefix(p[j].address, p[i].address)) break;
      }
      if (!m) break;
      faces.push_back({FaceKind::Nat, "", m->position, slice(p, m->position, j + 1), m->replacement, {}});
      p = splice(p, m->position, m->length, m->replacement);
      j = m->position;
    }
    return j;
  }

  // Candidate loops [g ; g^-1] at a term.
  std::vector<Path> loops(const Term& t, bool collapse_root_only) {
    std::vector<Path> out;
    for (const auto& r : th.rules) {
      if (!r.invertible || r.inverse.empty()) continue;
      std::vector<Address> where;
      if (r.lhs.is_var()) {
        if (collapse_root_only) where.push_back({});
        else continue;
      } else {
        where = function_positions(t);
      }
      for (const auto& a : where) {
        auto g = try_step(th, t, r.label, a);
        if (!g) continue;
        auto back = try_step(th, g->target, r.inverse, a);
        if (!back || !(back->target == t)) continue;
        out.push_back({*g, *back});
      }
    }
    return out;
  }

  std::optional<std::vector<Face>> solve(const Path& p, const Path& q, const Term& src, int ext,
                                        bool strip_front = true, bool strip_back = true) {
    if (same_path(p, q)) return std::vector<Face>{};
    std::size_t k = 0;
    while (strip_front && k < p.size() && k < q.size() && same_step(p[k], q[k])) ++k;
    std::size_t m = 0;
    while (strip_back && m + k < p.size() && m + k < q.size() &&
           same_step(p[p.size() - 1 - m], q[q.size() - 1 - m]))
      ++m;
    if (k > 0 || m > 0) {
      Path p2 = slice(p, k, p.size() - m), q2 = slice(q, k, q.size() - m);
      Term s2 = k == 0 ? src : p[k - 1].target;
      auto sub = solve(p2, q2, s2, ext, strip_front, strip_back);
      if (!sub) return std::nullopt;
      shift(*sub, k);
      return sub;
    }
    auto key = std::make_tuple(path_hash(p), path_hash(q), ext * 4 + strip_front * 2 + strip_back);
    if (failed.count(key)) return std::nullopt;
    auto okey = std::make_pair(path_hash(p), path_hash(q));
    if (open.count(okey)) return std::nullopt;
    open.insert(okey);
    auto res = solve_fresh(p, q, src, ext, strip_front, strip_back);
    open.erase(okey);
    if (!res) failed.insert(key);
    return res;
  }

  std::optional<std::vector<Face>> solve_fresh(const Path& p, const Path& q, const Term& src, int ext,
                                              bool strip_front, bool strip_back) {
    if (auto f = meet(p, q)) return f;
    if (ext <= 0 || nodes >= node_budget) return std::nullopt;
    // Precomposition with an invertible step: g^-1 ; g ; p.
    for (const auto& loop : loops(src, true)) {
      Path p1 = cat(loop, p), q1 = cat(loop, q);
      std::vector<Face> fp{{FaceKind::Inverse, "", 0, {}, loop, {}}};
      std::vector<Face> fq{{FaceKind::Inverse, "", 0, {}, loop, {}}};
      bool through = push_right(p1, 1, fp) + 1 == p1.size();
      through = push_right(q1, 1, fq) + 1 == q1.size() && through;
      std::size_t cut = through ? 1 : 0;
      Path p2 = slice(p1, 1, p1.size() - cut), q2 = slice(q1, 1, q1.size() - cut);
      auto sub = solve(p2, q2, loop[0].target, ext - 1, through && strip_front, strip_back);
      if (sub) {
        append(fp, std::move(*sub), 1);
        append(fp, reverse_faces(fq));
        return fp;
      }
      if (nodes >= node_budget) return std::nullopt;
    }
    // Postcomposition with a loop out of the common target: p ; d ; d^-1.
    Term tgt = path_target(src, p);
    for (const auto& loop : loops(tgt, false)) {
      Path p1 = cat(p, loop), q1 = cat(q, loop);
      std::vector<Face> fp{{FaceKind::Inverse, "", p.size(), {}, loop, {}}};
      std::vector<Face> fq{{FaceKind::Inverse, "", q.size(), {}, loop, {}}};
      bool through = push_left(p1, p.size(), fp) == 0;
      through = push_left(q1, q.size(), fq) == 0 && through;
      std::size_t cut = through ? 1 : 0;
      Path p2 = slice(p1, cut, p1.size() - 1), q2 = slice(q1, cut, q1.size() - 1);
      Term s2 = through ? p1[0].target : src;
      auto sub = solve(p2, q2, s2, ext - 1, strip_front, through && strip_back);
      if (sub) {
        append(fp, std::move(*sub), cut);
        append(fp, reverse_faces(fq));
        return fp;
      }
      if (nodes >= node_budget) return std::nullopt;
    }
    return std::nullopt;
  }
};

Reduction completion(const Theory2& th, const Path& p) {
  Term s = p.front().target;
  return path_to_reduction(th, s, slice(p, 1, p.size()));
}

}  // namespace

JoinOutcome join_span(const Theory2& th, const CriticalSpan& s, long fuel, const JoinOptions& opt) {
  JoinOutcome out;
  out.unjoined.span_id = s.id;
  Theory2 pos = positive_rules_only(th);
  auto eqs = equations(th, opt.lemmas);
  auto done = [&](Path l, Path r, std::string by, std::vector<Face> faces) {
    Joining j;
    j.span_id = s.id;
    j.source = s.source;
    j.left_path = std::move(l);
    j.right_path = std::move(r);
    j.left_completion = completion(th, j.left_path);
    j.right_completion = completion(th, j.right_path);
    j.commutes_by = std::move(by);
    j.tiling.faces = std::move(faces);
    out.joining = std::move(j);
    return out;
  };
  // Direct instance of a declared axiom whose sides start with the two legs.
  for (const auto& e : eqs) {
    if (e.lemma) continue;
    for (bool fw : {true, false}) {
      const Path& m = fw ? e.lhs : e.rhs;
      if (m.empty()) continue;
      Path probe{s.left};
      Face f;
      const SingularStep& first = s.left;
      const Address& a0 = m[0].address;
      if (first.rule != m[0].rule || a0.size() > first.address.size()) continue;
      Address c(first.address.begin(), first.address.end() - static_cast<long>(a0.size()));
      if (concat(c, a0) != first.address) continue;
      auto sub = subterm(s.source, c);
      if (!sub) continue;
      auto sigma = match(e.source, *sub);
      if (!sigma) continue;
      auto l = instantiate_path(th, m, *sigma, s.source, c);
      auto r = instantiate_path(th, fw ? e.rhs : e.lhs, *sigma, s.source, c);
      if (!l || !r || l->empty() || r->empty()) continue;
      if (!same_step(l->front(), s.left) || !same_step(r->front(), s.right)) continue;
      f.kind = FaceKind::Axiom;
      f.label = e.label;
      f.position = 0;
      f.lhs = *l;
      f.rhs = *r;
      return done(*l, *r, e.label, {f});
    }
  }
  bool ex1 = false, ex2 = false;
  Path l = cat({s.left}, positive_nf_trace(pos, s.left.target, fuel, &ex1));
  Path r = cat({s.right}, positive_nf_trace(pos, s.right.target, fuel, &ex2));
  if (ex1 || ex2 || !(l.back().target == r.back().target)) {
    out.unjoined.reason = UnjoinedReason::NotJoinableWithinFuel;
    out.unjoined.detail = ex1 || ex2 ? "normalization ran out of fuel"
                                     : "legs reach distinct normal forms " + to_string(l.back().target) +
                                           " and " + to_string(r.back().target);
    return out;
  }
  Searcher sr{th, eqs, opt, fuel};
  for (int ext = 0; ext <= opt.max_extensions; ++ext) {
    sr.failed.clear();
    if (auto faces = sr.solve(l, r, s.source, ext)) {
      Tiling t{*faces};
      if (static_cast<long>(face_count(t)) <= fuel) return done(l, r, "derived", std::move(*faces));
    }
    if (sr.nodes >= sr.node_budget) break;
  }
  out.unjoined.reason = UnjoinedReason::NoCommutingProof;
  out.unjoined.detail = "no tiling found within the search bounds";
  return out;
}

bool CompletenessCertificate::valid() const {
  if (!rank.certified) return false;
  return std::all_of(spans.begin(), spans.end(), [](const SpanRecord& r) { return r.outcome.ok(); });
}

std::vector<std::string> CompletenessCertificate::unproven() const {
  std::vector<std::string> out;
  for (const auto& r : spans)
    if (!r.outcome.ok()) out.push_back(r.span.id);
  return out;
}

CompletenessCertificate certify_complete(const Theory2& positive, const RankFn& rk, long fuel,
                                         const Theory2* ambient) {
  CompletenessCertificate cert;
  cert.theory = positive.name;
  cert.positive = positive;
  cert.ambient = ambient ? *ambient : positive;
  cert.fuel = fuel;
  cert.rank = check_rank_certificate(positive, rk, default_sampler(positive, 5), 300, 7);
  cert.rank_description = rk.describe();
  auto spans = critical_spans(cert.positive, SpanRules::All);
  for (const auto& s : spans) cert.spans.push_back({s, {}});
  // Proven spans become lemmas for the remaining ones; repeat until nothing changes.
  JoinOptions opt;
  bool progress = true;
  std::vector<bool> tried(spans.size(), false);
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      if (cert.spans[i].outcome.ok()) continue;
      if (tried[i] && opt.lemmas.empty()) continue;
      tried[i] = true;
      auto res = join_span(cert.ambient, spans[i], fuel, opt);
      cert.spans[i].outcome = res;
      if (res.ok()) {
        const Joining& j = *res.joining;
        opt.lemmas.push_back({j.span_id, j.source, j.left_path, j.right_path, j.tiling.faces});
        progress = true;
      }
    }
  }
  return cert;
}

Path nf_trace(const CompletenessCertificate& cert, const Term& t) {
  if (!cert.valid()) throw CertificateError("invalid-certificate");
  bool ex = false;
  Path p = positive_nf_trace(cert.positive, t, cert.fuel > 0 ? std::max(cert.fuel, kDefaultFuel) : kDefaultFuel,
                             &ex);
  if (ex) throw CertificateError("invalid-certificate: normalization ran out of fuel");
  return p;
}

Reduction nf_reduction(const CompletenessCertificate& cert, const Term& t) {
  return path_to_reduction(cert.ambient, t, nf_trace(cert, t));
}

namespace {

struct Square {
  Path left;
  Path right;
  std::vector<Face> faces;
};

// Local square closing the divergence of two steps out of the same term.
std::optional<Square> local_square(const CompletenessCertificate& cert, const SingularStep& a,
                                   const SingularStep& b) {
  const Theory2& th = cert.ambient;
  if (orthogonal(a.address, b.address)) {
    auto b2 = try_step(th, a.target, b.rule, b.address);
    if (!b2) return std::nullopt;
    auto sw = funct_swap(th, a, *b2);
    if (!sw) return std::nullopt;
    Square sq{{a, *b2}, *sw, {}};
    sq.faces.push_back({FaceKind::Funct, "", 0, sq.left, sq.right, {}});
    return sq;
  }
  // b strictly below a variable of a's rule, or the reverse.
  auto nested = [&](const SingularStep& hi, const SingularStep& lo) -> std::optional<std::pair<Path, Path>> {
    if (!is_prefix(hi.address, lo.address)) return std::nullopt;
    const Rule* r = th.find_rule(hi.rule);
    if (!r) return std::nullopt;
    Address rel = suffix_after(hi.address, lo.address);
    Term cur = r->lhs;
    std::optional<std::string> x;
    Address base = hi.address;
    for (const auto& st : rel) {
      if (cur.is_var()) break;
      if (cur.name() != st.symbol || st.index < 1 || static_cast<std::size_t>(st.index) > cur.arity())
        return std::nullopt;
      cur = cur.arg(static_cast<std::size_t>(st.index - 1));
      base.push_back(st);
    }
    if (!cur.is_var()) return std::nullopt;
    x = cur.name();
    Address inner = suffix_after(base, lo.address);
    Path side{lo};
    Term t = lo.target;
    for (const auto& occ : var_occurrences(r->lhs, *x)) {
      Address b2 = concat(hi.address, occ);
      if (b2 == base) continue;
      auto s = try_step(th, t, lo.rule, concat(b2, inner));
      if (!s) return std::nullopt;
      side.push_back(*s);
      t = s->target;
    }
    auto h = try_step(th, t, hi.rule, hi.address);
    if (!h) return std::nullopt;
    side.push_back(*h);
    auto m = nat_outward(th, side, 0);
    if (!m || m->position != 0 || m->length != side.size()) return std::nullopt;
    return std::make_pair(m->replacement, side);
  };
  if (auto n = nested(a, b)) {
    Square sq{n->first, n->second, {}};
    sq.faces.push_back({FaceKind::Nat, "", 0, sq.left, sq.right, {}});
    return sq;
  }
  if (auto n = nested(b, a)) {
    Square sq{n->second, n->first, {}};
    sq.faces.push_back({FaceKind::Nat, "", 0, sq.left, sq.right, {}});
    return sq;
  }
  // Instance of a critical span.
  for (const auto& rec : cert.spans) {
    if (!rec.outcome.ok()) continue;
    const Joining& j = *rec.outcome.joining;
    for (bool swapped : {false, true}) {
      const SingularStep& x = swapped ? b : a;
      const SingularStep& y = swapped ? a : b;
      const SingularStep& jl = j.left_path.front();
      const SingularStep& jr = j.right_path.front();
      if (x.rule != jl.rule || y.rule != jr.rule) continue;
      const Address& a0 = jl.address;
      if (a0.size() > x.address.size()) continue;
      Address c(x.address.begin(), x.address.end() - static_cast<long>(a0.size()));
      if (concat(c, a0) != x.address || concat(c, jr.address) != y.address) continue;
      auto sub = subterm(x.source, c);
      if (!sub) continue;
      auto sigma = match(j.source, *sub);
      if (!sigma) continue;
      auto l = instantiate_path(th, j.left_path, *sigma, x.source, c);
      auto r = instantiate_path(th, j.right_path, *sigma, x.source, c);
      auto fs = instantiate_faces(th, j.tiling.faces, *sigma, x.source, c);
      if (!l || !r || !fs) continue;
      if (!same_step(l->front(), x) || !same_step(r->front(), y)) continue;
      if (!swapped) return Square{*l, *r, *fs};
      return Square{*r, *l, reverse_faces(*fs)};
    }
  }
  return std::nullopt;
}

std::vector<Face> newman(const CompletenessCertificate& cert, const Path& phi, const Path& psi, int depth) {
  if (depth > 100000) throw DivergenceError("divergence-unresolvable: recursion too deep");
  std::vector<Face> out;
  if (same_path(phi, psi)) return out;
  std::size_t k = 0;
  while (k < phi.size() && k < psi.size() && same_step(phi[k], psi[k])) ++k;
  if (k > 0) {
    auto sub = newman(cert, slice(phi, k, phi.size()), slice(psi, k, psi.size()), depth + 1);
    shift(sub, k);
    return sub;
  }
  if (phi.empty() || psi.empty()) throw DivergenceError("divergence-unresolvable: paths are not parallel");
  auto sq = local_square(cert, phi[0], psi[0]);
  if (!sq) throw DivergenceError("divergence-unresolvable: " + to_string(phi[0]) + " / " + to_string(psi[0]));
  Term w = sq->left.back().target;
  Path chi = nf_trace(cert, w);
  Path mid_l = cat(slice(sq->left, 1, sq->left.size()), chi);
  Path mid_r = cat(slice(sq->right, 1, sq->right.size()), chi);
  append(out, newman(cert, slice(phi, 1, phi.size()), mid_l, depth + 1), 1);
  append(out, sq->faces);
  append(out, newman(cert, mid_r, slice(psi, 1, psi.size()), depth + 1), 1);
  return out;
}

}  // namespace

Tiling prove_equal_to_nf(const CompletenessCertificate& cert, const Path& phi, const Path& psi) {
  if (!cert.valid()) throw CertificateError("invalid-certificate");
  Tiling t;
  if (same_path(phi, psi)) {
    t.faces.push_back({FaceKind::Composite, "reflexivity", 0, phi, psi, {}});
    return t;
  }
  t.faces = newman(cert, phi, psi, 0);
  return t;
}

MonicityReport syntactic_monicity(const Theory2& th) {
  MonicityReport rep;
  for (const auto& ax : th.axioms) {
    Path l, r;
    try {
      l = singular_decompose(ax.lhs);
      r = singular_decompose(ax.rhs);
    } catch (const std::exception&) {
      continue;
    }
    std::size_t m = 0;
    while (m < l.size() && m < r.size() && same_step(l[l.size() - 1 - m], r[r.size() - 1 - m])) ++m;
    if (m == 0) continue;
    Path l2 = slice(l, 0, l.size() - m), r2 = slice(r, 0, r.size() - m);
    if (same_path(l2, r2)) continue;
    bool declared = false;
    for (const auto& other : th.axioms) {
      if (&other == &ax) continue;
      Path ol, orr;
      try {
        ol = singular_decompose(other.lhs);
        orr = singular_decompose(other.rhs);
      } catch (const std::exception&) {
        continue;
      }
      if ((same_path(ol, l2) && same_path(orr, r2)) || (same_path(ol, r2) && same_path(orr, l2))) declared = true;
    }
    if (!declared) {
      rep.ok = false;
      rep.violations.push_back(ax.label + ": sides share a final step but the cancelled equation is not declared");
    }
  }
  return rep;
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::CoherentThm4:
      return "Coherent-by-thm-4";
    case VerdictKind::CoherentThm4Invertible:
      return "Coherent-by-thm-4-invertible";
    case VerdictKind::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

MacLaneVerdict maclane_verdict(const Theory2& th, const Orientation& o, const RankFn& rk, long fuel) {
  MacLaneVerdict v;
  Theory2 pos;
  try {
    pos = positive_subtheory(th, o);
  } catch (const OrientationError& e) {
    v.reasons.push_back(e.what());
    return v;
  }
  // The ambient theory carries the orientation so that normal forms use positive rules.
  Theory2 amb = th;
  for (auto& r : amb.rules) r.orientation = o.sign.at(r.label);
  bool invertible_case = pos.rules.size() != th.rules.size() || th.fully_invertible();
  v.certificate = certify_complete(pos, rk, fuel, invertible_case ? &amb : nullptr);
  const auto& cert = v.certificate;
  if (!cert.rank.certified) {
    std::string why = "rank does not decrease";
    if (!cert.rank.uncovered.empty()) why = "rank misses symbols";
    if (cert.rank.counterexample) why += " on step " + to_string(*cert.rank.counterexample);
    v.reasons.push_back(why);
  }
  for (const auto& rec : cert.spans)
    if (!rec.outcome.ok())
      v.reasons.push_back("span " + rec.span.id + " (" + th.sig.show(rec.span.source) + ": " +
                          to_string(rec.span.left) + " / " + to_string(rec.span.right) + ") " +
                          to_string(rec.outcome.unjoined.reason));
  auto mono = syntactic_monicity(th);
  for (const auto& s : mono.violations) v.reasons.push_back("monicity: " + s);
  if (!v.reasons.empty()) return v;
  if (invertible_case) {
    if (th.fully_invertible()) v.kind = VerdictKind::CoherentThm4Invertible;
    else v.reasons.push_back("theory has negative rules but is not fully invertible");
  } else {
    v.kind = VerdictKind::CoherentThm4;
  }
  return v;
}

}  // namespace rw2
