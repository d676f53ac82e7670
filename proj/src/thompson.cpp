#include "rw2/thompson.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>

#include "rw2/presets.hpp"

namespace rw2 {

NTree leaf() { return {}; }

NTree caret(int n) {
  NTree t;
  t.kids.assign(n, leaf());
  return t;
}

int leaf_count(const NTree& t) {
  if (t.is_leaf()) return 1;
  int c = 0;
  for (const auto& k : t.kids) c += leaf_count(k);
  return c;
}

int caret_count(const NTree& t) {
  if (t.is_leaf()) return 0;
  int c = 1;
  for (const auto& k : t.kids) c += caret_count(k);
  return c;
}

namespace {

void collect_leaves(const NTree& t, TreeAddr& cur, std::vector<TreeAddr>& out) {
  if (t.is_leaf()) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = 0; i < t.kids.size(); ++i) {
    cur.push_back(static_cast<int>(i));
    collect_leaves(t.kids[i], cur, out);
    cur.pop_back();
  }
}

NTree* node_at(NTree& t, const TreeAddr& a) {
  NTree* p = &t;
  for (int i : a) {
    if (p->is_leaf() || i < 0 || i >= static_cast<int>(p->kids.size())) return nullptr;
    p = &p->kids[i];
  }
  return p;
}

}  // namespace

std::vector<TreeAddr> leaf_addresses(const NTree& t) {
  std::vector<TreeAddr> out;
  TreeAddr cur;
  collect_leaves(t, cur, out);
  return out;
}

void check_arity(const NTree& t, int n) {
  if (t.is_leaf()) return;
  if (static_cast<int>(t.kids.size()) != n)
    throw ThompsonError("arity-mismatch: node with " + std::to_string(t.kids.size()) + " children, expected " +
                        std::to_string(n));
  for (const auto& k : t.kids) check_arity(k, n);
}

NTree expand(const NTree& t, const TreeAddr& leaf_at, int n) {
  NTree r = t;
  NTree* p = node_at(r, leaf_at);
  if (!p || !p->is_leaf()) throw ThompsonError("not-a-leaf");
  *p = caret(n);
  return r;
}

NTree mce(const NTree& a, const NTree& b) {
  if (a.is_leaf()) return b;
  if (b.is_leaf()) return a;
  if (a.kids.size() != b.kids.size()) throw ThompsonError("arity-mismatch");
  NTree r;
  for (std::size_t i = 0; i < a.kids.size(); ++i) r.kids.push_back(mce(a.kids[i], b.kids[i]));
  return r;
}

bool is_expansion_of(const NTree& b, const NTree& a) {
  if (a.is_leaf()) return true;
  if (b.is_leaf() || a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!is_expansion_of(b.kids[i], a.kids[i])) return false;
  return true;
}

std::string to_string(const NTree& t) {
  if (t.is_leaf()) return ".";
  std::string s = "(";
  for (std::size_t i = 0; i < t.kids.size(); ++i) s += (i ? " " : "") + to_string(t.kids[i]);
  return s + ")";
}

NTree parse_tree(const std::string& text) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& m) {
    throw ThompsonError("tree parse error at column " + std::to_string(i + 1) + ": " + m);
  };
  std::function<NTree()> go = [&]() -> NTree {
    skip();
    if (i >= text.size()) fail("unexpected end");
    if (text[i] == '.') {
      ++i;
      return leaf();
    }
    if (text[i] != '(') fail("expected '.' or '('");
    ++i;
    NTree t;
    for (;;) {
      skip();
      if (i < text.size() && text[i] == ')') {
        ++i;
        break;
      }
      t.kids.push_back(go());
    }
    if (t.kids.size() < 2) fail("a node needs at least two children");
    return t;
  };
  NTree t = go();
  skip();
  if (i != text.size()) fail("trailing input");
  return t;
}

NTree tree_of(const Term& t) {
  if (t.is_var() || t.arity() == 0) return leaf();
  NTree r;
  for (const auto& a : t.args()) r.kids.push_back(tree_of(a));
  return r;
}

std::string to_string(const TreeDiagram& d) {
  std::string p = "[";
  for (std::size_t i = 0; i < d.perm.size(); ++i) p += (i ? " " : "") + std::to_string(d.perm[i]);
  return to_string(d.dom) + " -> " + to_string(d.cod) + " " + p + "]";
}

void validate(const TreeDiagram& d) {
  check_arity(d.dom, d.n);
  check_arity(d.cod, d.n);
  int k = leaf_count(d.dom);
  if (k != leaf_count(d.cod)) throw ThompsonError("leaf counts differ");
  if (static_cast<int>(d.perm.size()) != k) throw ThompsonError("permutation has wrong length");
  std::vector<bool> seen(k, false);
  for (int v : d.perm) {
    if (v < 0 || v >= k || seen[v]) throw ThompsonError("not a bijection");
    seen[v] = true;
  }
}

TreeDiagram td_id(int n) { return {n, leaf(), leaf(), {0}}; }

TreeDiagram td_expand(const TreeDiagram& d, int i) {
  int m = d.n - 1;
  auto dl = leaf_addresses(d.dom), cl = leaf_addresses(d.cod);
  int c = d.perm.at(i);
  TreeDiagram r{d.n, expand(d.dom, dl[i], d.n), expand(d.cod, cl[c], d.n), {}};
  auto shift = [&](int q) { return q < c ? q : q + m; };
  for (int j = 0; j < static_cast<int>(d.perm.size()); ++j) {
    if (j == i)
      for (int k = 0; k < d.n; ++k) r.perm.push_back(c + k);
    else
      r.perm.push_back(shift(d.perm[j]));
  }
  return r;
}

namespace {

// First leaf of `t` (index) that is internal in `target`, or -1.
int leaf_to_grow(const NTree& t, const NTree& target) {
  auto ls = leaf_addresses(t);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const NTree* p = &target;
    for (int a : ls[i]) p = &p->kids[a];
    if (!p->is_leaf()) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

TreeDiagram td_expand_dom_to(const TreeDiagram& d, const NTree& target) {
  if (!is_expansion_of(target, d.dom)) throw ThompsonError("target is not an expansion of the domain");
  TreeDiagram r = d;
  for (int i; (i = leaf_to_grow(r.dom, target)) >= 0;) r = td_expand(r, i);
  return r;
}

TreeDiagram td_expand_cod_to(const TreeDiagram& d, const NTree& target) {
  if (!is_expansion_of(target, d.cod)) throw ThompsonError("target is not an expansion of the codomain");
  TreeDiagram r = d;
  for (int c; (c = leaf_to_grow(r.cod, target)) >= 0;) {
    int i = static_cast<int>(std::find(r.perm.begin(), r.perm.end(), c) - r.perm.begin());
    r = td_expand(r, i);
  }
  return r;
}

namespace {

// Internal nodes whose children are all leaves, with the index of their first leaf.
void carets_of(const NTree& t, TreeAddr& cur, int& next_leaf, std::vector<std::pair<TreeAddr, int>>& out) {
  if (t.is_leaf()) {
    ++next_leaf;
    return;
  }
  bool all = std::all_of(t.kids.begin(), t.kids.end(), [](const NTree& k) { return k.is_leaf(); });
  if (all) out.push_back({cur, next_leaf});
  for (std::size_t i = 0; i < t.kids.size(); ++i) {
    cur.push_back(static_cast<int>(i));
    carets_of(t.kids[i], cur, next_leaf, out);
    cur.pop_back();
  }
}

std::vector<std::pair<TreeAddr, int>> carets_of(const NTree& t) {
  std::vector<std::pair<TreeAddr, int>> out;
  TreeAddr cur;
  int next = 0;
  carets_of(t, cur, next, out);
  return out;
}

}  // namespace

TreeDiagram td_reduce(const TreeDiagram& d) {
  validate(d);
  TreeDiagram r = d;
  int m = r.n - 1;
  bool changed = true;
  while (changed) {
    changed = false;
    auto cod_carets = carets_of(r.cod);
    for (const auto& [addr, k] : carets_of(r.dom)) {
      int c = r.perm[k];
      bool block = true;
      for (int j = 1; j < r.n && block; ++j) block = r.perm[k + j] == c + j;
      if (!block) continue;
      auto it = std::find_if(cod_carets.begin(), cod_carets.end(), [&](const auto& p) { return p.second == c; });
      if (it == cod_carets.end()) continue;
      *node_at(r.dom, addr) = leaf();
      *node_at(r.cod, it->first) = leaf();
      std::vector<int> p;
      for (int j = 0; j < static_cast<int>(r.perm.size()); ++j) {
        if (j > k && j < k + r.n) continue;
        int q = r.perm[j];
        p.push_back(q > c ? q - m : q);
      }
      r.perm = std::move(p);
      changed = true;
      break;
    }
  }
  return r;
}

TreeDiagram td_mul(const TreeDiagram& a, const TreeDiagram& b) {
  if (a.n != b.n) throw ThompsonError("arity-mismatch");
  NTree m = mce(a.cod, b.dom);
  TreeDiagram x = td_expand_cod_to(a, m), y = td_expand_dom_to(b, m);
  TreeDiagram r{a.n, x.dom, y.cod, {}};
  for (int v : x.perm) r.perm.push_back(y.perm[v]);
  return td_reduce(r);
}

TreeDiagram td_inv(const TreeDiagram& d) {
  TreeDiagram r{d.n, d.cod, d.dom, std::vector<int>(d.perm.size())};
  for (std::size_t i = 0; i < d.perm.size(); ++i) r.perm[d.perm[i]] = static_cast<int>(i);
  return td_reduce(r);
}

bool is_order_preserving(const TreeDiagram& d) {
  for (std::size_t i = 0; i < d.perm.size(); ++i)
    if (d.perm[i] != static_cast<int>(i)) return false;
  return true;
}

TreeDiagram seed_diagram(const Operator& o, int n) {
  if (o.empty) throw ThompsonError("empty-operator");
  TreeDiagram d{n, tree_of(o.s), tree_of(o.t), {}};
  auto vs = vars(o.s), vt = vars(o.t);
  for (const auto& x : vs) d.perm.push_back(static_cast<int>(std::find(vt.begin(), vt.end(), x) - vt.begin()));
  validate(d);
  return d;
}

TreeDiagram theta(const Theory2& th, const OperatorWord& w, int n) {
  return td_reduce(seed_diagram(op_word(th, w), n));
}

NTree random_tree(int n, int carets, std::mt19937_64& rng) {
  NTree t = leaf();
  for (int k = 0; k < carets; ++k) {
    auto ls = leaf_addresses(t);
    std::uniform_int_distribution<std::size_t> pick(0, ls.size() - 1);
    t = expand(t, ls[pick(rng)], n);
  }
  return t;
}

TreeDiagram random_diagram(int n, int max_leaves, bool order_preserving, std::mt19937_64& rng) {
  int kmax = std::max(0, (max_leaves - 1) / (n - 1));
  int k = std::uniform_int_distribution<int>(0, kmax)(rng);
  TreeDiagram d{n, random_tree(n, k, rng), random_tree(n, k, rng), {}};
  d.perm.resize(1 + k * (n - 1));
  std::iota(d.perm.begin(), d.perm.end(), 0);
  if (!order_preserving) std::shuffle(d.perm.begin(), d.perm.end(), rng);
  return td_reduce(d);
}

namespace {

Term comb_over(int n, const std::vector<Term>& items) {
  Term t = items.at(0);
  std::size_t i = 1;
  while (i < items.size()) {
    std::vector<Term> args{t};
    for (int j = 1; j < n; ++j) args.push_back(items.at(i++));
    t = Term::app(kTensor, args);
  }
  return t;
}

std::vector<Term> leaf_vars(int leaves, const std::string& stem) {
  std::vector<Term> xs;
  for (int i = 1; i <= leaves; ++i) xs.push_back(Term::var(stem + std::to_string(i)));
  return xs;
}

}  // namespace

Term left_comb_term(int n, int leaves, const std::string& stem) {
  if (n < 2 || (leaves - 1) % (n - 1) != 0) throw ThompsonError("leaf count must be 1 mod n-1");
  return comb_over(n, leaf_vars(leaves, stem));
}

NTree left_comb(int n, int leaves) { return tree_of(left_comb_term(n, leaves)); }

OperatorWord adjacent_transposition_word(const Theory2& th, int n, int leaves, int i) {
  if (i < 1 || i >= leaves) throw ThompsonError("transposition index out of range");
  auto xs = leaf_vars(leaves, "x");
  int start = std::min(i, leaves - n + 1);
  std::vector<Term> grouped(xs.begin() + (start - 1), xs.begin() + (start - 1 + n));
  Term group = Term::app(kTensor, grouped);
  std::vector<Term> items(xs.begin(), xs.begin() + (start - 1));
  items.push_back(group);
  items.insert(items.end(), xs.begin() + (start - 1 + n), xs.end());
  Term shaped = comb_over(n, items);

  Theory2 assoc = th;
  assoc.rules.clear();
  for (const auto& r : th.rules)
    if (!r.is_formal_inverse && r.label.rfind("alpha", 0) == 0) assoc.rules.push_back(r);
  auto res = normalize(assoc, shaped, Strategy::innermost());
  if (!(res.nf == comb_over(n, xs))) throw ThompsonError("grouped tree does not normalize to the comb");

  Address at;
  for (const auto& a : positions(shaped))
    if (*subterm(shaped, a) == group) at = a;
  OperatorWord w;
  for (auto it = res.trace.rbegin(); it != res.trace.rend(); ++it) w.push_back(Letter{it->rule, it->address, true});
  w.push_back(Letter{"tau" + std::to_string(i - start + 1), at});
  for (const auto& st : res.trace) w.push_back(Letter{st.rule, st.address});
  return w;
}

std::vector<int> induced_permutation(const Operator& o, const Term& u) {
  auto img = op_apply(o, u);
  if (!img) throw ThompsonError("operator undefined on the given term");
  auto vs = vars(u), vt = vars(*img);
  std::vector<int> p;
  for (const auto& x : vs) p.push_back(static_cast<int>(std::find(vt.begin(), vt.end(), x) - vt.begin()));
  return p;
}

}  // namespace rw2
