#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "cubex/covers.hpp"
#include "cubex/graph_of_complexes.hpp"
#include "cubex/hyperplanes.hpp"
#include "cubex/pipeline.hpp"
#include "cubex/text_io.hpp"

namespace cubex::cli {
namespace {

using nlohmann::json;

enum class Format { Tabular, Structured };

struct Options {
  Format format = Format::Tabular;
  std::string file, second, complex_name, goc_name, dot_out, out_path, emit;
  bool strict = false;
  bool regular_only = false;
  std::size_t max_degree = 3;
  Budgets budgets;
};

OsculationRule rule_of(const Options& o) { return o.strict ? OsculationRule::Literal : OsculationRule::DirectedClass; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

// The complex a command works on: the named one, the total space of the
// file's graph of complexes, or the first complex in the file.
struct Subject {
  ComplexPtr complex;
  std::optional<GraphOfComplexes> goc;
  std::optional<TotalSpace> total;
};

Subject load_subject(const Options& o) {
  Workspace ws;
  ws.load_file(o.file);
  Subject s;
  if (!o.complex_name.empty()) {
    s.complex = ws.complex(o.complex_name);
    return s;
  }
  if (!ws.gocs().empty()) {
    s.goc = load_goc(o.file, o.goc_name);
    s.total = total_space(*s.goc);
    s.complex = s.total->complex;
    return s;
  }
  if (ws.complex_order().empty()) throw Error("'" + o.file + "' declares no complex");
  s.complex = ws.complex(ws.complex_order().front());
  return s;
}

std::string edge_list(const CubeComplex& x, const Hyperplane& h) {
  std::string s;
  for (EdgeId e : h.edges) s += (s.empty() ? "" : " ") + x.edge_name(e);
  return s;
}

int cmd_validate(const Options& o, std::ostream& out) {
  Workspace ws;
  ws.load_file(o.file);
  bool ok = true;
  json j = json::array();
  std::vector<std::string> rows;
  for (const auto& name : ws.complex_order()) {
    const ComplexPtr x = ws.complex(name);
    const ValidationReport r = validate(*x);
    ok = ok && r.npc;
    std::string detail;
    if (!r.npc) {
      const Violation& v = r.violations.front();
      detail = to_string(v.kind) + " at " + x->vertex_name(v.vertex);
    }
    rows.push_back("complex " + name + " " + (r.npc ? "npc" : "not-npc " + detail));
    j.push_back({{"kind", "complex"}, {"name", name}, {"ok", r.npc}, {"detail", detail}});
  }
  for (const auto& [name, f] : ws.maps()) {
    const bool iso = check_local_isometry(f).ok;
    rows.push_back("map " + name + " " + (iso ? "local-isometry" : "not-local-isometry"));
    j.push_back({{"kind", "map"}, {"name", name}, {"ok", true}, {"local_isometry", iso}});
  }
  for (const auto& decl : ws.gocs()) {
    std::string detail;
    try {
      build_goc(ws, decl);
    } catch (const Error& e) {
      detail = e.what();
      ok = false;
    }
    rows.push_back("goc " + decl.name + " " + (detail.empty() ? "valid" : "invalid " + detail));
    j.push_back({{"kind", "goc"}, {"name", decl.name}, {"ok", detail.empty()}, {"detail", detail}});
  }
  if (o.format == Format::Structured) {
    out << json{{"valid", ok}, {"items", j}}.dump(2) << "\n";
  } else {
    for (const auto& r : rows) out << r << "\n";
    out << (ok ? "valid" : "invalid") << "\n";
  }
  return ok ? kOk : kInvalidInput;
}

std::string dot_text(const CubeComplex& x, const HyperplaneStructure& h, const PathologyReport& r,
                     const std::vector<std::optional<std::size_t>>& vertical, const GraphOfComplexes* g) {
  std::ostringstream out;
  out << "graph hyperplanes {\n";
  for (const Hyperplane& hp : h.hyperplanes) {
    out << "  H" << hp.id << " [label=\"" << edge_list(x, hp) << "\"";
    if (hp.id < vertical.size() && vertical[hp.id]) {
      out << " shape=box vertical=true edge=\"" << g->edges[*vertical[hp.id]].name << "\"";
    }
    out << "];\n";
  }
  for (const auto& [a, b] : r.crossing_pairs) out << "  H" << a << " -- H" << b << ";\n";
  out << "}\n";
  return out.str();
}

int cmd_hyperplanes(const Options& o, std::ostream& out) {
  const Subject s = load_subject(o);
  const CubeComplex& x = *s.complex;
  HyperplaneStructure h;
  PathologyReport r;
  std::vector<std::optional<std::size_t>> vertical;
  if (s.goc) {
    HyperplaneClassification c = classify_hyperplanes(*s.goc, *s.total);
    h = std::move(c.hyperplanes);
    vertical = std::move(c.vertical_of);
    r = detect_pathologies(x, h, rule_of(o));
  } else {
    h = compute_hyperplanes(x);
    r = detect_pathologies(x, h, rule_of(o));
  }
  if (!o.dot_out.empty()) write_file(o.dot_out, dot_text(x, h, r, vertical, s.goc ? &*s.goc : nullptr));
  if (o.format == Format::Structured) {
    json hs = json::array();
    for (const Hyperplane& hp : h.hyperplanes) {
      json edges = json::array();
      for (EdgeId e : hp.edges) edges.push_back(x.edge_name(e));
      json item{{"id", hp.id}, {"edges", edges}, {"two_sided", hp.two_sided}};
      if (hp.id < vertical.size() && vertical[hp.id]) item["vertical"] = s.goc->edges[*vertical[hp.id]].name;
      hs.push_back(item);
    }
    json crossings = json::array();
    for (const auto& [a, b] : r.crossing_pairs) crossings.push_back({a, b});
    out << json{{"hyperplanes", hs}, {"crossings", crossings}}.dump(2) << "\n";
    return kOk;
  }
  for (const Hyperplane& hp : h.hyperplanes) {
    out << "H" << hp.id << "\t" << (hp.two_sided ? "2-sided" : "1-sided") << "\t";
    if (hp.id < vertical.size() && vertical[hp.id]) {
      out << "vertical:" << s.goc->edges[*vertical[hp.id]].name;
    } else {
      out << "-";
    }
    out << "\t" << edge_list(x, hp) << "\n";
  }
  for (const auto& [a, b] : r.crossing_pairs) out << "crossing\tH" << a << "\tH" << b << "\n";
  return kOk;
}

int cmd_special(const Options& o, std::ostream& out) {
  const Subject s = load_subject(o);
  const SpecialVerdict v = check_special(*s.complex, rule_of(o));
  if (o.format == Format::Structured) {
    const PathologyReport& r = v.report;
    out << json{{"special", v.special},
                {"witness", v.witness},
                {"self_crossings", r.self_crossings.size()},
                {"one_sided", r.one_sided.size()},
                {"direct_self_osculations", r.direct_self_osculations.size()},
                {"inter_osculations", r.inter_osculations.size()}}
               .dump(2)
        << "\n";
  } else {
    out << (v.special ? "special" : "not special") << "\n";
    if (!v.special) out << v.witness << "\n";
  }
  return v.special ? kOk : kRejected;
}

int cmd_covers(const Options& o, std::ostream& out) {
  const Subject s = load_subject(o);
  const CubeComplex& x = *s.complex;
  if (!is_connected(x)) throw Error("complex '" + x.name() + "' is disconnected");
  json list = json::array();
  std::size_t count = 0;
  for_each_cover(x, o.max_degree, [&](const VoltageAssignment& v) {
    const bool regular = is_regular(x, v);
    if (o.regular_only && !regular) return true;
    ++count;
    if (o.format == Format::Structured) {
      json perms = json::object();
      for (EdgeId e = 0; e < x.edge_count(); ++e) perms[x.edge_name(e)] = perm::to_cycles(v.perms[e]);
      list.push_back({{"degree", v.degree}, {"regular", regular}, {"perms", perms}});
    } else {
      if (count > 1) out << "\n";
      out << "# " << (regular ? "regular" : "irregular") << "\n" << write_voltages(x, v);
    }
    return true;
  });
  if (o.format == Format::Structured) out << list.dump(2) << "\n";
  return kOk;
}

int cmd_total(const Options& o, std::ostream& out) {
  const GraphOfComplexes g = load_goc(o.file, o.goc_name);
  const TotalSpace t = total_space(g);
  const CubeComplex& x = *t.complex;
  if (o.format == Format::Structured) {
    out << json{{"name", x.name()},
                {"vertices", x.vertex_count()},
                {"edges", x.edge_count()},
                {"squares", x.square_count()},
                {"cubes", x.cube_count()},
                {"euler", x.euler_characteristic()},
                {"complex", write_complex(x)}}
               .dump(2)
        << "\n";
  } else {
    out << write_complex(x);
  }
  return kOk;
}

std::string action_text(const CubicalMap& f) {
  const CubeComplex& x = f.source();
  std::string s;
  for (EdgeId e = 0; e < x.edge_count(); ++e) {
    const DirectedEdge d{e, true};
    s += (s.empty() ? "" : " ") + x.token(d) + "->" + f.target().token(f.edge(d));
  }
  return s;
}

int cmd_monodromy(const Options& o, std::ostream& out) {
  const GraphOfComplexes g = load_goc(o.file, o.goc_name);
  const MonodromyResult m = compute_monodromy(g, locally_constant_structure(g), 0, o.budgets.gamma_degree);
  if (o.format == Format::Structured) {
    json gens = json::array();
    for (std::size_t k = 0; k < m.generator_edges.size(); ++k) {
      gens.push_back({{"edge", g.edges[m.generator_edges[k]].name},
                      {"element", m.element_of_edge[m.generator_edges[k]]},
                      {"action", action_text(m.generators[k])}});
    }
    json group = json::array();
    for (const auto& a : m.group) group.push_back(action_text(a));
    out << json{{"base", g.vertex_names[m.base]}, {"order", m.group.size()}, {"trivial", m.trivial()},
                {"generators", gens}, {"group", group}}
               .dump(2)
        << "\n";
    return kOk;
  }
  out << "base\t" << g.vertex_names[m.base] << "\n";
  out << "order\t" << m.group.size() << "\n";
  for (std::size_t k = 0; k < m.generator_edges.size(); ++k) {
    out << "generator\t" << g.edges[m.generator_edges[k]].name << "\tg" << m.element_of_edge[m.generator_edges[k]] << "\n";
  }
  for (std::size_t i = 0; i < m.group.size(); ++i) out << "element\tg" << i << "\t" << action_text(m.group[i]) << "\n";
  return kOk;
}

int cmd_double(const Options& o, std::ostream& out) {
  Workspace ws;
  ws.load_file(o.file);
  CubicalMap f = ws.map(o.second);
  const GraphOfComplexes g = make_double(f, "double-" + o.second);
  validate_goc(g);
  const std::string text = write_goc(g);
  if (o.out_path.empty()) {
    out << text;
  } else {
    write_file(o.out_path, text);
    if (o.format == Format::Structured) {
      out << json{{"goc", g.name}, {"out", o.out_path}}.dump(2) << "\n";
    } else {
      out << "wrote " << o.out_path << "\n";
    }
  }
  return kOk;
}

int cmd_specialize(const Options& o, std::ostream& out) {
  const GraphOfComplexes g = load_goc(o.file, o.goc_name);
  const SpecializeResult res = specialize(g, o.budgets);
  if (!res.ok()) {
    const Inconclusive& inc = res.inconclusive();
    if (o.format == Format::Structured) {
      out << json{{"outcome", "inconclusive"}, {"stage", inc.stage}, {"reason", inc.reason}, {"transcript", inc.transcript}}
                 .dump(2)
          << "\n";
    } else {
      out << "inconclusive\t" << inc.stage << "\t" << inc.reason << "\n";
      for (const auto& line : inc.transcript) out << "| " << line << "\n";
    }
    return kInconclusive;
  }
  const Certificate& c = res.certificate();
  const std::string text = write_certificate(c, g);
  if (!o.emit.empty()) write_file(o.emit, text);
  if (o.format == Format::Structured) {
    out << json{{"outcome", "certificate"},
                {"gamma_degree", c.gamma_degree},
                {"vertex_degree", c.vertex_degree},
                {"stats", {c.vertices, c.edges, c.squares, c.cubes}},
                {"certificate", o.emit.empty() ? json(text) : json(o.emit)}}
               .dump(2)
        << "\n";
  } else if (o.emit.empty()) {
    out << text;
  } else {
    out << "certificate\t" << o.emit << "\tgamma-degree " << c.gamma_degree << "\tvertex-degree " << c.vertex_degree
        << "\n";
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const std::string text = read_file(o.file);
  const GraphOfComplexes g = load_goc(o.second, o.goc_name);
  parse_certificate(text, g);
  const VerifyResult v = verify_certificate(text, g);
  if (o.format == Format::Structured) {
    out << json{{"ok", v.ok}, {"reason", v.reason}}.dump(2) << "\n";
  } else {
    out << (v.ok ? "verified" : "rejected\t" + v.reason) << "\n";
  }
  return v.ok ? kOk : kRejected;
}

// CUBEX_BUDGET is "V" or "V:G" (vertex degree, Gamma degree).
bool apply_budget_env(Budgets& b, std::ostream& err) {
  const char* env = std::getenv("CUBEX_BUDGET");
  if (env == nullptr || *env == '\0') return true;
  const std::string s = env;
  try {
    std::size_t used = 0;
    b.vertex_degree = std::stoul(s, &used);
    if (used < s.size()) {
      if (s[used] != ':') throw std::invalid_argument(s);
      const std::string rest = s.substr(used + 1);
      b.gamma_degree = std::stoul(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(s);
    }
  } catch (const std::exception&) {
    err << "CUBEX_BUDGET: expected N or N:M, got '" << s << "'\n";
    return false;
  }
  return true;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  if (!apply_budget_env(o.budgets, err)) return kUsage;

  CLI::App app{"cube complex specialness toolkit", "cubex"};
  app.require_subcommand(1);
  app.fallthrough();
  std::map<std::string, Format> formats{{"tabular", Format::Tabular}, {"structured", Format::Structured}};
  app.add_option("--format", o.format, "output format")->transform(CLI::CheckedTransformer(formats))->default_str("tabular");

  auto file_arg = [&](CLI::App* sub, const char* what) { sub->add_option("FILE", o.file, what)->required(); };
  auto complex_opt = [&](CLI::App* sub) { sub->add_option("--complex", o.complex_name, "complex to use"); };
  auto goc_opt = [&](CLI::App* sub) { sub->add_option("--goc", o.goc_name, "graph of complexes to use"); };

  CLI::App* validate_cmd = app.add_subcommand("validate", "check complexes, maps and graphs of complexes");
  file_arg(validate_cmd, "workspace file");

  CLI::App* hyper = app.add_subcommand("hyperplanes", "list hyperplanes and crossings");
  file_arg(hyper, "complex or graph file");
  complex_opt(hyper);
  goc_opt(hyper);
  hyper->add_option("--dot", o.dot_out, "write a DOT graph");
  hyper->add_flag("--strict-defn", o.strict, "literal direct self-osculation");

  CLI::App* special = app.add_subcommand("special", "exit 0 when special, 1 with a witness otherwise");
  file_arg(special, "complex or graph file");
  complex_opt(special);
  goc_opt(special);
  special->add_flag("--strict-defn", o.strict, "literal direct self-osculation");

  CLI::App* covers = app.add_subcommand("covers", "list connected covers as voltage tables");
  file_arg(covers, "complex file");
  complex_opt(covers);
  goc_opt(covers);
  covers->add_option("--max-degree", o.max_degree, "largest degree")->required()->check(CLI::Range(1, 8));
  covers->add_flag("--regular-only", o.regular_only, "only regular covers");

  CLI::App* total = app.add_subcommand("total", "print the total space");
  file_arg(total, "graph file");
  goc_opt(total);

  CLI::App* mono = app.add_subcommand("monodromy", "monodromy group of the theta data");
  file_arg(mono, "graph file");
  goc_opt(mono);
  mono->add_option("--gamma-budget", o.budgets.gamma_degree, "group order cap");

  CLI::App* dbl = app.add_subcommand("double", "double of a complex along a map");
  file_arg(dbl, "workspace holding the map");
  dbl->add_option("EDGEMAP", o.second, "map X_e -> X")->required();
  dbl->add_option("--out", o.out_path, "write the graph here");

  CLI::App* spec = app.add_subcommand("specialize", "finite special cover with certificate");
  file_arg(spec, "graph file");
  goc_opt(spec);
  spec->add_option("--vertex-budget", o.budgets.vertex_degree, "largest vertex cover degree")->check(CLI::PositiveNumber);
  spec->add_option("--gamma-budget", o.budgets.gamma_degree, "largest graph cover degree")->check(CLI::PositiveNumber);
  spec->add_option("--emit", o.emit, "write the certificate here");

  CLI::App* verify = app.add_subcommand("verify", "replay a certificate");
  verify->add_option("CERT", o.file, "certificate")->required();
  verify->add_option("INPUT", o.second, "graph file")->required();
  goc_opt(verify);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(o, out);
    if (hyper->parsed()) return cmd_hyperplanes(o, out);
    if (special->parsed()) return cmd_special(o, out);
    if (covers->parsed()) return cmd_covers(o, out);
    if (total->parsed()) return cmd_total(o, out);
    if (mono->parsed()) return cmd_monodromy(o, out);
    if (dbl->parsed()) return cmd_double(o, out);
    if (spec->parsed()) return cmd_specialize(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kUsage;
}

}  // namespace cubex::cli
