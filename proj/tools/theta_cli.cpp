// Command-line front end: evaluate presheaf levels, nerves, precompletions,
// and run the Segal / completeness / homotopy-equivalence checks.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "theta/completion.hpp"
#include "theta/ncat_expr.hpp"

using nlohmann::json;
using namespace theta;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Category file format
//
//   objects: a b
//   morphisms:
//     ida a a
//     f a b
//   identities:
//     a ida
//   compose:
//     g f = ida
//   inverse:
//     f = g
//
// '#' starts a comment.  Identity compositions are filled in automatically;
// every other composable pair needs an explicit compose row.
// ---------------------------------------------------------------------------

FiniteCategory load_category(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  FiniteCategory c;
  std::map<std::string, int> oidx, midx;
  std::vector<std::array<std::string, 3>> compose_rows, inverse_rows;
  std::vector<int> compose_lines, inverse_lines;
  std::map<int, int> given_identity;
  std::string line, section;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw InputError(path + ":" + std::to_string(lineno) + ": " + msg);
  };
  std::vector<Mor> mors;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    if (tok.back() == ':') {
      section = tok.substr(0, tok.size() - 1);
      if (section != "objects" && section != "morphisms" && section != "identities" && section != "compose" &&
          section != "inverse")
        fail("unknown section '" + section + "'");
    } else {
      ss.clear();
      ss.str(line);
    }
    std::vector<std::string> words;
    while (ss >> tok)
      if (tok != "=") words.push_back(tok);
    if (words.empty()) continue;
    if (section == "objects") {
      for (auto& w : words) {
        if (oidx.count(w)) fail("duplicate object '" + w + "'");
        oidx[w] = (int)c.objects.size();
        c.objects.push_back(w);
      }
    } else if (section == "morphisms") {
      if (words.size() != 3) fail("morphism row needs: name src tgt");
      if (midx.count(words[0])) fail("duplicate morphism '" + words[0] + "'");
      if (!oidx.count(words[1]) || !oidx.count(words[2])) fail("unknown object in morphism row");
      midx[words[0]] = (int)mors.size();
      mors.push_back({oidx[words[1]], oidx[words[2]], words[0]});
    } else if (section == "identities") {
      if (words.size() != 2) fail("identity row needs: object morphism");
      if (!oidx.count(words[0]) || !midx.count(words[1])) fail("unknown name in identity row");
      given_identity[oidx[words[0]]] = midx[words[1]];
    } else if (section == "compose") {
      if (words.size() != 3) fail("compose row needs: g f = h");
      compose_rows.push_back({words[0], words[1], words[2]});
      compose_lines.push_back(lineno);
    } else if (section == "inverse") {
      if (words.size() != 2) fail("inverse row needs: f = g");
      inverse_rows.push_back({words[0], words[1], ""});
      inverse_lines.push_back(lineno);
    } else {
      fail("content before any section header");
    }
  }
  c.morphisms = mors;
  // identities: given or inferred as the unique self-morphism composing as a
  // unit in every listed row
  c.identity.assign(c.objects.size(), -1);
  for (auto& [x, m] : given_identity) {
    if (c.morphisms[m].src != x || c.morphisms[m].tgt != x)
      throw InputError(path + ": identity of '" + c.objects[x] + "' is not a self-morphism");
    c.identity[x] = m;
  }
  c.comp.assign(c.morphisms.size(), std::vector<int>(c.morphisms.size(), -1));
  for (size_t r = 0; r < compose_rows.size(); ++r) {
    lineno = compose_lines[r];
    auto& [g, f, h] = compose_rows[r];
    if (!midx.count(g) || !midx.count(f) || !midx.count(h)) fail("unknown morphism in compose row");
    if (!c.composable(midx[g], midx[f])) fail("compose row for non-composable pair");
    c.comp[midx[g]][midx[f]] = midx[h];
  }
  for (int x = 0; x < c.num_objects(); ++x) {
    if (c.identity[x] >= 0) continue;
    for (int m = 0; m < c.num_morphisms(); ++m) {
      if (c.morphisms[m].src != x || c.morphisms[m].tgt != x) continue;
      bool unit = c.comp[m][m] == m || c.comp[m][m] == -1;
      for (int f = 0; f < c.num_morphisms() && unit; ++f) {
        if (c.morphisms[f].src == x && c.comp[f][m] >= 0 && c.comp[f][m] != f) unit = false;
        if (c.morphisms[f].tgt == x && c.comp[m][f] >= 0 && c.comp[m][f] != f) unit = false;
      }
      if (unit && c.comp[m][m] == m) {
        if (c.identity[x] >= 0) throw InputError(path + ": ambiguous identity for '" + c.objects[x] + "'");
        c.identity[x] = m;
      }
    }
    if (c.identity[x] < 0)
      throw InputError(path + ": no identity for object '" + c.objects[x] +
                       "' (add an identities: row or a compose: i i = i row)");
  }
  // fill implicit unit compositions, then demand totality
  for (int f = 0; f < c.num_morphisms(); ++f) {
    int is = c.identity[c.morphisms[f].src], it = c.identity[c.morphisms[f].tgt];
    if (c.comp[f][is] < 0) c.comp[f][is] = f;
    if (c.comp[it][f] < 0) c.comp[it][f] = f;
  }
  for (int g = 0; g < c.num_morphisms(); ++g)
    for (int f = 0; f < c.num_morphisms(); ++f)
      if (c.composable(g, f) && c.comp[g][f] < 0)
        throw InputError(path + ": missing compose row for '" + c.morphisms[g].name + " " + c.morphisms[f].name +
                         "'");
  try {
    c.validate();
  } catch (const std::exception& ex) {
    throw InputError(path + ": " + ex.what());
  }
  for (size_t r = 0; r < inverse_rows.size(); ++r) {
    lineno = inverse_lines[r];
    auto& [f, g, unused] = inverse_rows[r];
    if (!midx.count(f) || !midx.count(g)) fail("unknown morphism in inverse row");
    if (c.inverse_of(midx[f]) != midx[g]) fail("'" + g + "' is not inverse to '" + f + "'");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Presheaf expressions:
//   F(<theta>)  E(p)@n  simplex(p)@n  N(<ncat-expr>)  empty[@n]  point@n
//   V<m>(e1,...,em)  prod(e1,e2)  sum(e1,e2)
// ---------------------------------------------------------------------------

LazyPresheaf parse_presheaf_at(const std::string& s, size_t& pos);

int expr_int(const std::string& s, size_t& pos) { return theta::detail::parse_int_at(s, pos); }
void expr_ch(const std::string& s, size_t& pos, char ch) { theta::detail::expect_ch(s, pos, ch); }

int opt_dim(const std::string& s, size_t& pos, int dflt) {
  theta::detail::skip_ws(s, pos);
  if (pos < s.size() && s[pos] == '@') {
    ++pos;
    return expr_int(s, pos);
  }
  return dflt;
}

LazyPresheaf parse_presheaf_at(const std::string& s, size_t& pos) {
  theta::detail::skip_ws(s, pos);
  size_t start = pos;
  while (pos < s.size() && isalpha((unsigned char)s[pos])) ++pos;
  std::string word = s.substr(start, pos - start);
  if (word == "F") {
    expr_ch(s, pos, '(');
    auto th = theta::detail::parse_theta_at(s, pos);
    expr_ch(s, pos, ')');
    return representable(th);
  }
  if (word == "E") {
    expr_ch(s, pos, '(');
    int p = expr_int(s, pos);
    expr_ch(s, pos, ')');
    return walking_equivalence(p, opt_dim(s, pos, 1));
  }
  if (word == "simplex") {
    expr_ch(s, pos, '(');
    int p = expr_int(s, pos);
    expr_ch(s, pos, ')');
    return constant_simplex(p, opt_dim(s, pos, 1));
  }
  if (word == "N") {
    expr_ch(s, pos, '(');
    auto e = theta::detail::parse_ncat_at(s, pos);
    expr_ch(s, pos, ')');
    return nerve(build_ncat(e));
  }
  if (word == "empty") return empty_presheaf(opt_dim(s, pos, 1));
  if (word == "point") return terminal_presheaf(opt_dim(s, pos, 1));
  if (word == "prod" || word == "sum") {
    expr_ch(s, pos, '(');
    auto a = parse_presheaf_at(s, pos);
    expr_ch(s, pos, ',');
    auto b = parse_presheaf_at(s, pos);
    expr_ch(s, pos, ')');
    return word == "prod" ? product(a, b) : coproduct({a, b});
  }
  if (word == "V") {
    int m = expr_int(s, pos);
    expr_ch(s, pos, '(');
    std::vector<LazyPresheaf> xs;
    xs.push_back(parse_presheaf_at(s, pos));
    theta::detail::skip_ws(s, pos);
    while (pos < s.size() && s[pos] == ',') {
      ++pos;
      xs.push_back(parse_presheaf_at(s, pos));
    }
    expr_ch(s, pos, ')');
    if ((int)xs.size() != m)
      throw InputError("presheaf parse: V" + std::to_string(m) + " applied to " + std::to_string(xs.size()) +
                       " factors at " + std::to_string(start));
    return intertwine(xs);
  }
  throw InputError("presheaf parse: unknown constructor '" + word + "' at " + std::to_string(start));
}

LazyPresheaf parse_presheaf(const std::string& s) {
  size_t pos = 0;
  auto w = parse_presheaf_at(s, pos);
  theta::detail::skip_ws(s, pos);
  if (pos != s.size()) throw InputError("presheaf parse: trailing input at " + std::to_string(pos));
  return w;
}

// ---------------------------------------------------------------------------
// Shared option plumbing
// ---------------------------------------------------------------------------

struct CommonOpts {
  std::string cat_file, ncat_expr, level = "[0]", window;
  int p = 0, k = 1;
  bool json_out = false, strict = false, force = false;
  int seed = 0;
};

StrictNCat load_ncat(const CommonOpts& o) {
  if (!o.ncat_expr.empty()) return build_ncat(parse_ncat_expr(o.ncat_expr));
  if (!o.cat_file.empty()) return ncat_from_category(load_category(o.cat_file));
  throw InputError("one of --cat or --ncat is required");
}

CompletionGuards guards_of(const CommonOpts& o) {
  CompletionGuards g;
  if (!o.window.empty()) {
    int a, d, deg;
    char c1, c2;
    std::istringstream ss(o.window);
    if (!(ss >> a >> c1 >> d >> c2 >> deg) || c1 != ',' || c2 != ',')
      throw InputError("--window expects arity,depth,degree");
    g.window_arity = a;
    g.max_arity = d;
    g.max_p = deg;
  }
  if (o.force) {
    g.max_cells = 1 << 20;
    g.max_arity = 64;
    g.max_p = 64;
    g.enum_guard = (long)1e18;
    std::cerr << "# force: size guards disabled; enumeration cost is unbounded" << std::endl;
  }
  return g;
}

ThetaObject level_for(const CommonOpts& o, int dim) {
  auto th = parse_theta(o.level);
  if (th.dim > dim) throw InputError("--level has depth " + std::to_string(th.dim) + " > input dimension");
  if (th.dim < dim) th = apply_tau({dim, th.dim}, th);
  return th;
}

int emit(const CommonOpts& o, json j, const std::vector<std::string>& caveats, bool verdict_known,
         bool verdict) {
  j["schema"] = 1;
  if (o.seed != 0) j["seed"] = o.seed;
  if (!caveats.empty()) j["caveats"] = caveats;
  if (o.json_out) {
    std::cout << j.dump(2) << std::endl;
  } else {
    if (j.contains("cardinality")) std::cout << j["cardinality"].get<long>() << std::endl;
    if (j.contains("verdict")) std::cout << (verdict ? "pass" : "fail") << std::endl;
    if (j.contains("detail")) std::cout << j["detail"].get<std::string>() << std::endl;
    if (j.contains("counterexample")) std::cout << "counterexample: " << j["counterexample"].dump() << std::endl;
    for (auto& c : caveats) std::cout << "caveat: " << c << std::endl;
  }
  if (verdict_known && !verdict) return 1;
  if (o.strict && !caveats.empty()) return 2;
  return 0;
}

json report_json(const CheckReport& r) {
  json j;
  j["verdict"] = r.verdict;
  if (r.counterexample) j["counterexample"] = {{"level", r.counterexample->first}, {"cell", r.counterexample->second.str()}};
  std::vector<std::string> ws;
  for (auto& w : r.witnesses) ws.push_back(w.str());
  if (!ws.empty()) j["witnesses"] = ws;
  return j;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_k) {
  cmd->add_option("--cat", o.cat_file, "category file");
  cmd->add_option("--ncat", o.ncat_expr, "strict n-category expression, e.g. susp(isochain(1)@1)");
  cmd->add_option("--level", o.level, "cell shape, e.g. [2]([1],[0])");
  cmd->add_option("--p", o.p, "simplicial degree");
  if (with_k) cmd->add_option("--k", o.k, "completion dimension");
  cmd->add_option("--window", o.window, "arity,depth,degree guard bounds");
  cmd->add_option("--seed", o.seed, "seed recorded in output");
  cmd->add_flag("--json", o.json_out, "machine-readable output");
  cmd->add_flag("--strict", o.strict, "exit 2 when results carry caveats");
  cmd->add_flag("--force", o.force, "bypass size guards");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite Segal-space completion calculator"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string presheaf_expr, check_what;

  auto* c_eval = app.add_subcommand("eval", "evaluate a presheaf expression at a level");
  c_eval->add_option("--presheaf", presheaf_expr, "presheaf expression, e.g. V1(empty)")->required();
  add_common(c_eval, o, false);

  auto* c_nerve = app.add_subcommand("nerve", "evaluate the nerve of a category at a level");
  add_common(c_nerve, o, false);

  auto* c_complete = app.add_subcommand("complete", "evaluate a precompletion level");
  add_common(c_complete, o, true);

  auto* c_total = app.add_subcommand("total", "evaluate the total precompletion at a level");
  add_common(c_total, o, false);

  auto* c_check = app.add_subcommand("check", "run a property check (segal | complete)");
  c_check->add_option("what", check_what, "segal or complete")->required();
  add_common(c_check, o, true);

  auto* c_ho = app.add_subcommand("ho", "homotopy category of the nerve");
  add_common(c_ho, o, false);

  auto* c_dk = app.add_subcommand("dk", "check that the completion map is an equivalence");
  add_common(c_dk, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 64;
  }

  try {
    if (*c_eval) {
      auto w = parse_presheaf(presheaf_expr);
      auto th = parse_theta(o.level);
      if (th.dim < w.base_dim()) th = apply_tau({w.base_dim(), th.dim}, th);
      auto lvl = w.eval(th, o.p);
      json j;
      j["cardinality"] = (long)lvl.size();
      if (o.json_out) {
        std::vector<std::string> es;
        for (auto& e : lvl) es.push_back(e.str());
        j["elements"] = es;
      }
      return emit(o, j, {}, false, true);
    }
    if (*c_nerve) {
      auto a = load_ncat(o);
      auto lvl = nerve(a).eval(level_for(o, a.dim), o.p);
      json j;
      j["cardinality"] = (long)lvl.size();
      return emit(o, j, {}, false, true);
    }
    if (*c_complete) {
      auto a = load_ncat(o);
      auto lvl = precompletion_level(a, o.k, level_for(o, a.dim), o.p, guards_of(o));
      json j;
      j["cardinality"] = (long)lvl.size();
      j["provenance"] = lvl.provenance;
      if (lvl.groupoid)
        j["groupoid"] = {{"objects", lvl.groupoid->cat.num_objects()},
                         {"morphisms", lvl.groupoid->cat.num_morphisms()}};
      return emit(o, j, lvl.caveats, false, true);
    }
    if (*c_total) {
      auto a = load_ncat(o);
      auto t = total_precompletion(a, guards_of(o));
      auto lvl = t.presheaf.eval(level_for(o, a.dim), o.p);
      json j;
      j["cardinality"] = (long)lvl.size();
      return emit(o, j, t.caveats, false, true);
    }
    if (*c_check) {
      auto a = load_ncat(o);
      json j;
      if (check_what == "segal") {
        std::vector<ThetaObject> shapes;
        for (auto& th : theta_objects_up_to(a.dim, 2))
          if (th.arity() == 2) shapes.push_back(th);
        auto r = check_segal(nerve(a), shapes, 1);
        j = report_json(r);
        j["detail"] = r.verdict ? "segal" : "not segal";
        return emit(o, j, r.caveats, true, r.verdict);
      }
      if (check_what == "complete") {
        auto r = check_completeness(a, o.k);
        j = report_json(r);
        j["detail"] = r.verdict ? "complete" : "incomplete";
        return emit(o, j, r.caveats, true, r.verdict);
      }
      throw InputError("check expects 'segal' or 'complete', got '" + check_what + "'");
    }
    if (*c_ho) {
      auto a = load_ncat(o);
      auto ho = homotopy_category(nerve(a));
      json j;
      j["detail"] = "objects " + std::to_string(ho.cat.num_objects()) + " morphisms " +
                    std::to_string(ho.cat.num_morphisms());
      return emit(o, j, {}, false, true);
    }
    if (*c_dk) {
      auto a = load_ncat(o);
      auto e = eta(a, o.k, guards_of(o));
      auto r = check_dk(PresheafMap{e.src, e.tgt, e.component});
      json j;
      j["verdict"] = r.verdict;
      j["detail"] = r.verdict ? "dk-equivalence" : "not a dk-equivalence";
      j["essential_surjectivity"] = r.essential_surjectivity.verdict;
      return emit(o, j, r.caveats, true, r.verdict);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 64;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 64;
  } catch (const SizeGuardError& e) {
    std::cerr << "refused: " << e.what() << " (use --force or --window to override)" << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
