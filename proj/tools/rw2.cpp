#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "rw2/coherence.hpp"
#include "rw2/critical.hpp"
#include "rw2/diamond.hpp"
#include "rw2/dsl.hpp"
#include "rw2/presets.hpp"
#include "rw2/prooft.hpp"
#include "rw2/structmon.hpp"
#include "rw2/thompson.hpp"

using json = nlohmann::ordered_json;
using namespace rw2;

namespace {

constexpr int kSchemaVersion = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Out {
  bool as_json = false;
  json doc;
  std::ostringstream text;

  explicit Out(const std::string& command) { doc = {{"schema_version", kSchemaVersion}, {"command", command}}; }
  int finish(int code) {
    if (as_json) {
      doc["exit_code"] = code;
      std::cout << doc.dump(2) << "\n";
    } else {
      std::cout << text.str();
    }
    return code;
  }
};

// "preset:NAME[:N]" or a path to a theory file.
Theory2 load(const std::string& arg, bool nested_squares) {
  if (arg.rfind("preset:", 0) == 0) {
    std::string rest = arg.substr(7);
    PresetId id{rest, 2, nested_squares};
    if (auto c = rest.find(':'); c != std::string::npos) {
      id.name = rest.substr(0, c);
      try {
        id.n = std::stoi(rest.substr(c + 1));
      } catch (const std::exception&) {
        throw UsageError("bad preset parameter in " + arg);
      }
    }
    return gen(id);
  }
  return load_theory(arg);
}

std::string show_path(const Path& p) {
  if (p.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " ; " : "") + to_string(p[i]);
  return s;
}

json path_json(const Path& p) {
  json a = json::array();
  for (const auto& s : p) a.push_back(to_string(s));
  return a;
}

json face_json(const Face& f) {
  json j = {{"kind", to_string(f.kind)}, {"label", f.label}, {"position", f.position},
            {"lhs", path_json(f.lhs)}, {"rhs", path_json(f.rhs)}};
  if (!f.inner.empty()) {
    json in = json::array();
    for (const auto& g : f.inner) in.push_back(face_json(g));
    j["inner"] = in;
  }
  return j;
}

Path word_path(const Theory2& th, const std::string& word) {
  return singular_decompose(parse_reduction(th, word, ParseContext{"<word>", 1, 1, true}));
}

Strategy strategy_of(const std::string& name, std::uint64_t seed) {
  if (name == "innermost") return Strategy::innermost();
  if (name == "outermost") return Strategy::outermost();
  if (name == "random") return Strategy::random(seed);
  throw UsageError("unknown strategy " + name);
}

long fuel_or_env(long given, long fallback) {
  if (given > 0) return given;
  if (const char* e = std::getenv("RW2_FUEL")) {
    try {
      return std::stol(e);
    } catch (const std::exception&) {
    }
  }
  return fallback;
}

// "rule[^-1][@addr]" with addr "λ", "" or dot-separated argument indices.
Letter parse_letter(const Theory2& th, const std::string& text) {
  Letter l;
  std::string head = text, addr;
  if (auto at = text.find('@'); at != std::string::npos) {
    head = text.substr(0, at);
    addr = text.substr(at + 1);
  }
  if (head.size() > 3 && head.compare(head.size() - 3, 3, "^-1") == 0) {
    l.inverse = true;
    head.resize(head.size() - 3);
  }
  if (head.rfind("e:", 0) == 0) {
    l.idempotent = true;
    head = head.substr(2);
  }
  if (!th.find_rule(head)) throw UsageError("unknown rule " + head);
  l.rule = head;
  if (!addr.empty() && addr != "λ" && addr != "lambda") {
    std::string sym = th.sig.symbols.front().name;
    std::stringstream ss(addr);
    std::string part;
    while (std::getline(ss, part, '.')) {
      try {
        l.address.push_back({sym, std::stoi(part)});
      } catch (const std::exception&) {
        throw UsageError("bad address " + addr);
      }
    }
  }
  return l;
}

OperatorWord parse_op_word(const Theory2& th, const std::string& text) {
  OperatorWord w;
  std::stringstream ss(text);
  std::string tok;
  while (ss >> tok)
    if (tok != "." && tok != ";") w.push_back(parse_letter(th, tok));
  return w;
}

// "DOM | COD | p0 p1 ..."
TreeDiagram parse_diagram(const std::string& text, int n) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '|')) parts.push_back(part);
  if (parts.size() != 3) throw UsageError("diagram must read 'DOM | COD | perm'");
  TreeDiagram d{n, parse_tree(parts[0]), parse_tree(parts[1]), {}};
  std::stringstream ps(parts[2]);
  int v;
  while (ps >> v) d.perm.push_back(v);
  validate(d);
  return d;
}

json diagram_json(const TreeDiagram& d) {
  return {{"n", d.n}, {"dom", to_string(d.dom)}, {"cod", to_string(d.cod)}, {"perm", d.perm},
          {"order_preserving", is_order_preserving(d)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rw2: rewriting 2-theory workbench"};
  app.require_subcommand(1);
  bool as_json = false;
  bool nested = false;
  app.add_flag("--json", as_json, "JSON report on stdout");
  app.add_flag("--nested-squares", nested, "catalan presets: also declare the nested-square axioms");

  std::string theory_arg;
  auto add_theory = [&](CLI::App* c) {
    c->add_option("theory", theory_arg, "theory file or preset:NAME[:N]")->required();
  };

  auto* parse = app.add_subcommand("parse", "parse a theory file and print it back");
  add_theory(parse);
  std::vector<std::string> parse_terms;
  parse->add_option("--term", parse_terms, "also parse these terms");

  auto* norm = app.add_subcommand("normalize", "normal form of a term under the positive rules");
  add_theory(norm);
  std::string norm_term, norm_strategy = "innermost";
  std::uint64_t norm_seed = 1;
  long norm_fuel = 0;
  bool norm_trace = false;
  norm->add_option("term", norm_term)->required();
  norm->add_option("--strategy", norm_strategy, "innermost | outermost | random");
  norm->add_option("--seed", norm_seed);
  norm->add_option("--fuel", norm_fuel);
  norm->add_flag("--trace", norm_trace);

  auto* crit = app.add_subcommand("critical", "critical spans");
  add_theory(crit);
  bool crit_all = false;
  crit->add_flag("--all-rules", crit_all, "include formal inverses and negative rules");

  auto* coh = app.add_subcommand("coherence", "Mac Lane coherence verdict");
  add_theory(coh);
  long coh_fuel = 0;
  coh->add_option("--fuel", coh_fuel, "face budget per span (default 200)");

  auto* prove = app.add_subcommand("prove-equal", "tiling proof that two reductions to the normal form are equal");
  add_theory(prove);
  std::string prove_left, prove_right;
  long prove_fuel = 0;
  prove->add_option("left", prove_left, "reduction word")->required();
  prove->add_option("right", prove_right, "reduction word")->required();
  prove->add_option("--fuel", prove_fuel);

  auto* dia = app.add_subcommand("diamonds", "reduction graph and basic diamonds");
  add_theory(dia);
  std::vector<std::string> dia_seeds;
  int dia_depth = 3;
  std::string dia_export;
  bool dia_branching = false;
  dia->add_option("--seed", dia_seeds, "seed terms (default: the theory's seeds)");
  dia->add_option("--depth", dia_depth)->check(CLI::NonNegativeNumber);
  dia->add_option("--export", dia_export, "write the graph as src TAB rule@address TAB dst");
  dia->add_flag("--branching", dia_branching, "also run the reverse branching check");

  auto* pre = app.add_subcommand("preset", "generate a preset theory");
  std::string pre_name, pre_emit;
  int pre_n = 2;
  pre->add_option("name", pre_name)->required();
  pre->add_option("--n", pre_n);
  pre->add_option("--emit", pre_emit, "output file (default stdout)");

  auto* thom = app.add_subcommand("thompson", "tree diagrams in F_{n,1} and G_{n,1}");
  int thom_n = 2;
  bool thom_sym = false;
  std::string thom_op;
  std::vector<std::string> thom_args;
  thom->add_option("--n", thom_n);
  thom->add_flag("--sym", thom_sym, "theta: use sym-catalan generators");
  thom->add_option("op", thom_op, "mul | inv | reduce | theta")->required();
  thom->add_option("args", thom_args);

  auto* sm = app.add_subcommand("structmon", "structure-monoid operators");
  std::string sm_preset = "catalan", sm_op;
  int sm_n = 2, sm_trials = 100;
  std::uint64_t sm_seed = 1;
  bool sm_group = false;
  std::vector<std::string> sm_args;
  sm->add_option("--preset", sm_preset, "catalan | sym-catalan");
  sm->add_option("--n", sm_n);
  sm->add_option("--trials", sm_trials);
  sm->add_option("--seed", sm_seed);
  sm->add_flag("--group", sm_group, "compare after dropping idempotent factors");
  sm->add_option("op", sm_op, "compose | apply | relation")->required();
  sm->add_option("args", sm_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto* sub = app.get_subcommands().front();
  Out out(sub->get_name());
  out.as_json = as_json;
  auto& T = out.text;
  auto& J = out.doc;

  try {
    if (sub == parse) {
      Theory2 th = load(theory_arg, nested);
      J["theory"] = th.name;
      J["rules"] = th.rules.size();
      J["axioms"] = th.axioms.size();
      J["warnings"] = th.warnings;
      json terms = json::array();
      for (const auto& s : parse_terms) terms.push_back(th.sig.show(parse_term(th.sig, s, ParseContext{"<term>", 1, 1, true})));
      J["terms"] = terms;
      J["emitted"] = emit_theory(th);
      T << emit_theory(th);
      for (const auto& t : terms) T << "term " << t.get<std::string>() << "\n";
      for (const auto& w : th.warnings) T << "warning: " << w << "\n";
      return out.finish(0);
    }

    if (sub == norm) {
      Theory2 th = load(theory_arg, nested);
      Theory2 pos = positive_subtheory(th, standard_orientation(th));
      Term t = parse_term(th.sig, norm_term, ParseContext{"<term>", 1, 1, true});
      auto r = normalize(pos, t, strategy_of(norm_strategy, norm_seed), fuel_or_env(norm_fuel, default_fuel()));
      J["input"] = th.sig.show(t);
      J["normal_form"] = th.sig.show(r.nf);
      J["steps"] = r.trace.size();
      J["fuel_exhausted"] = r.fuel_exhausted;
      if (norm_trace) J["trace"] = path_json(r.trace);
      T << th.sig.show(r.nf) << "\n";
      if (norm_trace)
        for (const auto& s : r.trace) T << "  " << to_string(s) << "  " << th.sig.show(s.target) << "\n";
      if (r.fuel_exhausted) T << "fuel exhausted after " << r.trace.size() << " steps\n";
      return out.finish(r.fuel_exhausted ? 1 : 0);
    }

    if (sub == crit) {
      Theory2 th = load(theory_arg, nested);
      auto spans = critical_spans(th, crit_all ? SpanRules::All : SpanRules::PositiveOnly);
      json a = json::array();
      for (const auto& s : spans) {
        a.push_back({{"id", s.id}, {"source", th.sig.show(s.source)}, {"left", to_string(s.left)},
                     {"right", to_string(s.right)}, {"left_target", th.sig.show(s.left.target)},
                     {"right_target", th.sig.show(s.right.target)}});
        T << s.id << "  " << th.sig.show(s.source) << "  " << to_string(s.left) << " / " << to_string(s.right)
          << "\n";
      }
      J["spans"] = a;
      J["count"] = spans.size();
      T << spans.size() << " critical span(s)\n";
      return out.finish(0);
    }

    if (sub == coh) {
      Theory2 th = load(theory_arg, nested);
      if (!th.rank) throw UsageError("theory declares no rank function");
      long fuel = fuel_or_env(coh_fuel, 200);
      auto v = maclane_verdict(th, standard_orientation(th), *th.rank, fuel);
      J["theory"] = th.name;
      J["verdict"] = to_string(v.kind);
      J["reasons"] = v.reasons;
      json spans = json::array();
      for (const auto& rec : v.certificate.spans) {
        json s = {{"id", rec.span.id}, {"source", th.sig.show(rec.span.source)},
                  {"left", to_string(rec.span.left)}, {"right", to_string(rec.span.right)}};
        if (rec.outcome.ok()) {
          s["joined"] = true;
          s["commutes_by"] = rec.outcome.joining->commutes_by;
          s["faces"] = face_count(rec.outcome.joining->tiling);
        } else {
          s["joined"] = false;
          s["reason"] = to_string(rec.outcome.unjoined.reason);
        }
        spans.push_back(s);
      }
      J["spans"] = spans;
      J["fuel"] = fuel;
      T << th.name << ": " << to_string(v.kind) << "\n";
      for (const auto& rec : v.certificate.spans)
        T << "  " << rec.span.id << "  " << th.sig.show(rec.span.source) << "  "
          << (rec.outcome.ok() ? "joined by " + rec.outcome.joining->commutes_by
                               : to_string(rec.outcome.unjoined.reason))
          << "\n";
      for (const auto& r : v.reasons) T << "  reason: " << r << "\n";
      return out.finish(v.kind == VerdictKind::Inconclusive ? 1 : 0);
    }

    if (sub == prove) {
      Theory2 th = load(theory_arg, nested);
      if (!th.rank) throw UsageError("theory declares no rank function");
      auto o = standard_orientation(th);
      Theory2 pos = positive_subtheory(th, o);
      Theory2 amb = th;
      for (auto& r : amb.rules) r.orientation = o.sign.at(r.label);
      long fuel = fuel_or_env(prove_fuel, 200);
      auto cert = certify_complete(pos, *th.rank, fuel, pos.rules.size() != th.rules.size() ? &amb : nullptr);
      if (!cert.valid()) {
        J["error"] = "invalid-certificate";
        J["unproven"] = cert.unproven();
        T << "invalid-certificate: unproven spans";
        for (const auto& u : cert.unproven()) T << " " << u;
        T << "\n";
        return out.finish(1);
      }
      Path phi = word_path(pos, prove_left), psi = word_path(pos, prove_right);
      if (phi.empty() || psi.empty()) throw UsageError("both reductions need at least one step");
      if (!(phi.front().source == psi.front().source)) throw UsageError("reductions have different sources");
      Term src = phi.front().source;
      Term tgt = phi.back().target;
      if (!(tgt == psi.back().target)) throw UsageError("reductions are not parallel");
      Path tail = nf_trace(cert, tgt);
      phi.insert(phi.end(), tail.begin(), tail.end());
      psi.insert(psi.end(), tail.begin(), tail.end());
      Tiling tl = prove_equal_to_nf(cert, phi, psi);
      auto chk = check_tiling_paths(cert.ambient, src, phi, psi, tl);
      J["source"] = th.sig.show(src);
      J["extended_by_normal_form"] = !tail.empty();
      J["left"] = path_json(phi);
      J["right"] = path_json(psi);
      json faces = json::array();
      for (const auto& f : tl.faces) faces.push_back(face_json(f));
      J["tiling"] = faces;
      J["faces"] = face_count(tl);
      J["check"] = chk.ok;
      if (!chk.ok) J["check_reason"] = chk.reason;
      T << "source " << th.sig.show(src) << "\n";
      if (!tail.empty()) T << "both sides extended to the normal form\n";
      T << "left  " << show_path(phi) << "\nright " << show_path(psi) << "\n";
      for (const auto& f : tl.faces)
        T << "  " << to_string(f.kind) << " " << f.label << " at " << f.position << ": " << show_path(f.lhs)
          << "  =>  " << show_path(f.rhs) << "\n";
      T << face_count(tl) << " face(s), check " << (chk.ok ? "ok" : "FAILED: " + chk.reason) << "\n";
      return out.finish(chk.ok ? 0 : 1);
    }

    if (sub == dia) {
      Theory2 th = load(theory_arg, nested);
      std::vector<Term> seeds = th.seeds;
      if (!dia_seeds.empty()) {
        seeds.clear();
        for (const auto& s : dia_seeds) seeds.push_back(parse_term(th.sig, s, ParseContext{"<seed>", 1, 1, true}));
      }
      if (seeds.empty()) throw UsageError("no seeds: pass --seed");
      auto g = build_graph(th, seeds, dia_depth);
      auto ds = basic_diamonds(g, th);
      auto labels = [&](const EdgePath& p) {
        json a = json::array();
        for (auto e : p) a.push_back(g.edges[e].label());
        return a;
      };
      json arr = json::array();
      for (const auto& d : ds)
        arr.push_back({{"source", th.sig.show(g.vertices[d.pair.s])},
                       {"target", th.sig.show(g.vertices[d.pair.t])},
                       {"alpha", labels(d.pair.alpha)},
                       {"beta", labels(d.pair.beta)},
                       {"interval_truncated", d.interval_truncated}});
      J["vertices"] = g.vertices.size();
      J["edges"] = g.edges.size();
      J["depth"] = g.depth;
      J["diamonds"] = arr;
      T << g.vertices.size() << " vertices, " << g.edges.size() << " edges, depth " << g.depth << "\n";
      for (const auto& d : ds) {
        T << "  " << th.sig.show(g.vertices[d.pair.s]) << " -> " << th.sig.show(g.vertices[d.pair.t]) << " :";
        for (auto e : d.pair.alpha) T << " " << g.edges[e].label();
        T << " /";
        for (auto e : d.pair.beta) T << " " << g.edges[e].label();
        if (d.interval_truncated) T << "  (interval truncated)";
        T << "\n";
      }
      T << ds.size() << " basic diamond(s)\n";
      if (!dia_export.empty()) {
        std::ofstream f(dia_export);
        if (!f) throw UsageError("cannot write " + dia_export);
        f << export_graph(g, th.sig);
      }
      if (dia_branching) {
        auto rep = reverse_branching_check(th, seeds);
        J["branching"] = {{"evidence", rep.evidence},
                          {"quasicycle_free_evidence", rep.quasicycle_free_evidence},
                          {"reasons", rep.reasons}};
        T << "branching: " << (rep.evidence ? "finitely-branching evidence" : "counter-witness") << "\n";
        for (const auto& r : rep.reasons) T << "  " << r << "\n";
        for (const auto& s : rep.samples) {
          T << "  " << th.sig.show(s.term) << ":";
          for (auto c : s.counts) T << " " << c;
          T << "\n";
        }
      }
      return out.finish(0);
    }

    if (sub == pre) {
      Theory2 th = gen(PresetId{pre_name, pre_n, nested});
      std::string txt = emit_theory(th);
      J["theory"] = th.name;
      J["warnings"] = th.warnings;
      if (pre_emit.empty()) {
        J["emitted"] = txt;
        T << txt;
      } else {
        std::ofstream f(pre_emit);
        if (!f) throw UsageError("cannot write " + pre_emit);
        f << txt;
        J["file"] = pre_emit;
        T << "wrote " << pre_emit << "\n";
      }
      return out.finish(0);
    }

    if (sub == thom) {
      auto need = [&](std::size_t k) {
        if (thom_args.size() != k) throw UsageError(thom_op + " takes " + std::to_string(k) + " argument(s)");
      };
      TreeDiagram r;
      if (thom_op == "mul") {
        need(2);
        r = td_mul(parse_diagram(thom_args[0], thom_n), parse_diagram(thom_args[1], thom_n));
      } else if (thom_op == "inv") {
        need(1);
        r = td_inv(parse_diagram(thom_args[0], thom_n));
      } else if (thom_op == "reduce") {
        need(1);
        r = td_reduce(parse_diagram(thom_args[0], thom_n));
      } else if (thom_op == "theta") {
        need(1);
        Theory2 th = gen(PresetId{thom_sym ? "sym-catalan" : "catalan", thom_n});
        r = theta(th, parse_op_word(th, thom_args[0]), thom_n);
      } else {
        throw UsageError("unknown thompson operation " + thom_op);
      }
      J["result"] = diagram_json(r);
      T << to_string(r) << "\n";
      return out.finish(0);
    }

    if (sub == sm) {
      Theory2 th = gen(PresetId{sm_preset, sm_n});
      auto show_op = [&](const Operator& o) {
        return o.empty ? std::string("eps") : th.sig.show(o.s) + " |-> " + th.sig.show(o.t);
      };
      if (sm_op == "compose") {
        if (sm_args.empty()) throw UsageError("compose takes one or more words");
        Operator o = Operator::from_seed(Term::var("x"), Term::var("x"));
        for (const auto& w : sm_args) o = op_compose(o, op_word(th, parse_op_word(th, w)));
        J["empty"] = o.empty;
        if (!o.empty) J["seed"] = {th.sig.show(o.s), th.sig.show(o.t)};
        T << show_op(o) << "\n";
        return out.finish(0);
      }
      if (sm_op == "apply") {
        if (sm_args.size() != 2) throw UsageError("apply takes a word and a term");
        Operator o = op_word(th, parse_op_word(th, sm_args[0]));
        Term u = parse_term(th.sig, sm_args[1], ParseContext{"<term>", 1, 1, true});
        auto r = op_apply(o, u);
        J["defined"] = r.has_value();
        if (r) J["result"] = th.sig.show(*r);
        T << (r ? th.sig.show(*r) : std::string("undefined")) << "\n";
        return out.finish(r ? 0 : 1);
      }
      if (sm_op == "relation") {
        if (sm_args.size() != 1) throw UsageError("relation takes a family name");
        auto kind = relation_kind_from_string(sm_args[0]);
        if (!kind) throw UsageError("unknown relation family " + sm_args[0]);
        std::mt19937_64 rng(sm_seed);
        auto rels = instantiate_relations(th, *kind, sm_trials, rng);
        int equal = 0, both = 0, unequal = 0;
        json bad = json::array();
        for (const auto& rel : rels) {
          auto v = check_relation(rel, sm_group);
          if (v == RelationVerdict::Equal) ++equal;
          else if (v == RelationVerdict::BothEmpty) ++both;
          else {
            ++unequal;
            bad.push_back(rel.description);
            T << "  unequal: " << rel.description << "\n";
          }
        }
        J["family"] = to_string(*kind);
        J["trials"] = rels.size();
        J["equal"] = equal;
        J["both_empty"] = both;
        J["unequal"] = unequal;
        J["failures"] = bad;
        T << to_string(*kind) << ": " << equal << " equal, " << both << " both-empty, " << unequal << " unequal\n";
        return out.finish(unequal ? 1 : 0);
      }
      throw UsageError("unknown structmon operation " + sm_op);
    }
  } catch (const ParseError& e) {
    J["error"] = "parse-error";
    J["file"] = e.file;
    J["line"] = e.line;
    J["column"] = e.col;
    J["message"] = e.message;
    if (!as_json) std::cerr << e.file << ":" << e.line << ":" << e.col << ": " << e.message << "\n";
    return out.finish(2);
  } catch (const InferError& e) {
    J["error"] = "type-error";
    J["message"] = e.what();
    J["line"] = e.line;
    J["column"] = e.col;
    if (!as_json) std::cerr << "<word>:" << e.line << ":" << e.col << ": " << e.what() << "\n";
    return out.finish(2);
  } catch (const UsageError& e) {
    J["error"] = "usage";
    J["message"] = e.what();
    if (!as_json) std::cerr << "rw2: " << e.what() << "\n";
    return out.finish(2);
  } catch (const std::exception& e) {
    J["error"] = "failed";
    J["message"] = e.what();
    if (!as_json) std::cerr << "rw2: " << e.what() << "\n";
    return out.finish(2);
  }
  return 2;
}
