#include "cx/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <list>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cx/constructions.hpp"
#include "cx/covering.hpp"
#include "cx/galois.hpp"

namespace cx {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& expected) {
  fail(Errc::ParseError, "line " + std::to_string(line) + ": " + expected);
}

std::string strip_code(const std::string& what) {
  auto pos = what.find(": ");
  return pos == std::string::npos ? what : what.substr(pos + 2);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

bool to_size(const std::string& s, std::size_t& v) {
  if (s.empty()) return false;
  for (unsigned char c : s)
    if (!std::isdigit(c)) return false;
  try {
    v = std::stoul(s);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

void check_cell_name(std::size_t line, const std::string& id, bool face) {
  if (is_inverse(id)) parse_fail(line, "declared names must not end in '^'");
  if (id.starts_with("v:")) parse_fail(line, "cell names must not start with 'v:'");
  if (face && id == "path") parse_fail(line, "'path' is reserved");
}

}  // namespace

std::shared_ptr<const TwoComplex> CxDocument::complex(const std::string& name) const {
  auto it = complexes.find(name);
  if (it == complexes.end())
    fail(Errc::UnknownCell, "no complex named '" + name + "' in the document");
  return it->second;
}

const ComplexMap& CxDocument::map(const std::string& name) const {
  auto it = maps.find(name);
  if (it == maps.end())
    fail(Errc::UnknownCell, "no map named '" + name + "' in the document");
  return it->second;
}

CxDocument parse_cx(const std::string& text) {
  CxDocument doc;
  struct OpenComplex {
    std::string name;
    TwoComplex c;
  };
  struct OpenMap {
    std::string name;
    ComplexMap m;
  };
  std::optional<OpenComplex> oc;
  std::optional<OpenMap> om;
  auto flush = [&] {
    if (oc) {
      doc.complex_order.push_back(oc->name);
      doc.complexes.emplace(oc->name,
                            std::make_shared<TwoComplex>(std::move(oc->c)));
      oc.reset();
    }
    if (om) {
      doc.map_order.push_back(om->name);
      doc.maps.emplace(om->name, std::move(om->m));
      om.reset();
    }
  };

  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::vector<std::string> t = tokenize(raw);
    if (t.empty()) continue;
    auto guarded = [&](auto&& fn) {
      try {
        fn();
      } catch (const Error& e) {
        parse_fail(line, strip_code(e.what()));
      }
    };

    const std::string& kw = t[0];
    if (kw == "complex") {
      if (t.size() != 2) parse_fail(line, "expected 'complex NAME'");
      flush();
      if (doc.complexes.count(t[1]))
        parse_fail(line, "duplicate complex '" + t[1] + "'");
      oc = OpenComplex{t[1], {}};
    } else if (kw == "map") {
      if (t.size() != 4) parse_fail(line, "expected 'map NAME SRC DST'");
      flush();
      if (doc.maps.count(t[1])) parse_fail(line, "duplicate map '" + t[1] + "'");
      auto s = doc.complexes.find(t[2]);
      if (s == doc.complexes.end())
        parse_fail(line, "unknown complex '" + t[2] + "'");
      auto d = doc.complexes.find(t[3]);
      if (d == doc.complexes.end())
        parse_fail(line, "unknown complex '" + t[3] + "'");
      om = OpenMap{t[1], {}};
      om->m.source = s->second;
      om->m.target = d->second;
    } else if (kw == "vertex" || kw == "edge" || kw == "face") {
      if (!oc) parse_fail(line, "'" + kw + "' outside a complex block");
      if (kw == "vertex") {
        if (t.size() != 2) parse_fail(line, "expected 'vertex ID'");
        check_cell_name(line, t[1], false);
        if (oc->c.skel.has_vertex(t[1]))
          parse_fail(line, "duplicate vertex '" + t[1] + "'");
        oc->c.skel.add_vertex(t[1]);
      } else if (kw == "edge") {
        if (t.size() != 4) parse_fail(line, "expected 'edge ID SRC DST'");
        check_cell_name(line, t[1], false);
        if (oc->c.skel.has_dart(t[1]))
          parse_fail(line, "duplicate edge '" + t[1] + "'");
        for (int i : {2, 3})
          if (!oc->c.skel.has_vertex(t[i]))
            parse_fail(line, "unknown vertex '" + t[i] + "'");
        guarded([&] { oc->c.skel.add_arc(t[1], t[2], t[3]); });
      } else {
        if (t.size() < 3) parse_fail(line, "expected 'face ID W1 W2 ...'");
        check_cell_name(line, t[1], true);
        if (oc->c.has_face(t[1]))
          parse_fail(line, "duplicate face '" + t[1] + "'");
        std::vector<Name> word(t.begin() + 2, t.end());
        for (const Name& d : word)
          if (!oc->c.skel.has_dart(d))
            parse_fail(line, "unknown dart '" + d + "' in face word");
        guarded([&] { oc->c.add_face(t[1], std::move(word)); });
      }
    } else if (kw == "v" || kw == "e" || kw == "f") {
      if (!om) parse_fail(line, "'" + kw + "' outside a map block");
      const TwoComplex& src = *om->m.source;
      const TwoComplex& dst = *om->m.target;
      if (kw == "v") {
        if (t.size() != 4 || t[2] != "->") parse_fail(line, "expected 'v A -> B'");
        if (!src.skel.has_vertex(t[1]))
          parse_fail(line, "unknown vertex '" + t[1] + "' in the source");
        if (!dst.skel.has_vertex(t[3]))
          parse_fail(line, "unknown vertex '" + t[3] + "' in the target");
        if (om->m.vmap.count(t[1]))
          parse_fail(line, "duplicate vertex image for '" + t[1] + "'");
        om->m.set_vertex(t[1], t[3]);
      } else if (kw == "e") {
        if (t.size() != 4 || t[2] != "->")
          parse_fail(line, "expected 'e d -> d2' or 'e d -> v:B'");
        if (!src.skel.has_dart(t[1]))
          parse_fail(line, "unknown dart '" + t[1] + "' in the source");
        if (om->m.dmap.count(t[1]) || om->m.dcollapse.count(t[1]))
          parse_fail(line, "duplicate dart image for '" + t[1] + "'");
        if (t[3].starts_with("v:")) {
          std::string b = t[3].substr(2);
          if (!dst.skel.has_vertex(b))
            parse_fail(line, "unknown vertex '" + b + "' in the target");
          guarded([&] { om->m.set_dart_collapsed(t[1], b); });
        } else {
          if (!dst.skel.has_dart(t[3]))
            parse_fail(line, "unknown dart '" + t[3] + "' in the target");
          guarded([&] { om->m.set_dart(t[1], t[3]); });
        }
      } else {
        if (t.size() < 4 || t[2] != "->")
          parse_fail(line, "expected 'f F -> G @K' or 'f F -> path ...'");
        if (is_inverse(t[1]))
          parse_fail(line, "face lines use the canonical face name");
        if (!src.has_face(t[1]))
          parse_fail(line, "unknown face '" + t[1] + "' in the source");
        if (om->m.fmap.count(t[1]))
          parse_fail(line, "duplicate face image for '" + t[1] + "'");
        if (t[3] == "path") {
          std::vector<Name> rest(t.begin() + 4, t.end());
          if (rest.empty())
            parse_fail(line, "expected path darts or 'v:VERTEX'");
          if (rest.size() == 1 && rest[0].starts_with("v:")) {
            std::string b = rest[0].substr(2);
            if (!dst.skel.has_vertex(b))
              parse_fail(line, "unknown vertex '" + b + "' in the target");
            om->m.set_face(t[1], FaceImage::to_path(Path{b, {}}));
          } else {
            for (const Name& d : rest)
              if (!dst.skel.has_dart(d))
                parse_fail(line, "unknown dart '" + d + "' in path");
            Path p{dst.skel.dart_src(rest[0]), rest};
            om->m.set_face(t[1], FaceImage::to_path(std::move(p)));
          }
        } else if (t.size() == 5 && t[4].size() >= 2 && t[4][0] == '@') {
          if (!dst.has_face(t[3]))
            parse_fail(line, "unknown face '" + t[3] + "' in the target");
          std::size_t k = 0;
          if (!to_size(t[4].substr(1), k)) parse_fail(line, "expected '@OFFSET'");
          std::size_t n = dst.face_size(t[3]);
          om->m.set_face(t[1], FaceImage::to_face(t[3], n ? k % n : 0));
        } else {
          parse_fail(line, "expected 'f F -> G @K' or 'f F -> path ...'");
        }
      }
    } else {
      parse_fail(line, "unknown directive '" + kw + "'");
    }
  }
  flush();
  return doc;
}

CxDocument parse_cx_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::UsageError, "cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_cx(text.str());
}

namespace {

std::string complex_name_of(const CxDocument& doc,
                            const std::shared_ptr<const TwoComplex>& c,
                            const std::string& owner) {
  for (const std::string& nm : doc.complex_order)
    if (doc.complexes.at(nm) == c) return nm;
  for (const std::string& nm : doc.complex_order)
    if (*doc.complexes.at(nm) == *c) return nm;
  fail(Errc::UsageError,
       "map '" + owner + "' references a complex that is not in the document");
}

}  // namespace

std::string write_cx(const CxDocument& doc) {
  std::ostringstream o;
  bool first = true;
  auto gap = [&] {
    if (!first) o << "\n";
    first = false;
  };
  for (const std::string& nm : doc.complex_order) {
    gap();
    const TwoComplex& c = *doc.complexes.at(nm);
    o << "complex " << nm << "\n";
    for (const Name& v : c.skel.vertices) o << "vertex " << v << "\n";
    for (const Name& a : c.skel.arcs())
      o << "edge " << a << " " << c.skel.dart_src(a) << " "
        << c.skel.dart_dst(a) << "\n";
    for (const Name& f : c.face_names()) {
      o << "face " << f;
      for (const Name& d : c.faces.at(f)) o << " " << d;
      o << "\n";
    }
  }
  for (const std::string& nm : doc.map_order) {
    gap();
    const ComplexMap& m = doc.maps.at(nm);
    o << "map " << nm << " " << complex_name_of(doc, m.source, nm) << " "
      << complex_name_of(doc, m.target, nm) << "\n";
    for (const auto& [a, b] : m.vmap) o << "  v " << a << " -> " << b << "\n";
    for (const Name& a : m.source->skel.arcs()) {
      if (auto it = m.dcollapse.find(a); it != m.dcollapse.end())
        o << "  e " << a << " -> v:" << it->second << "\n";
      else if (auto jt = m.dmap.find(a); jt != m.dmap.end())
        o << "  e " << a << " -> " << jt->second << "\n";
    }
    for (const auto& [f, fi] : m.fmap) {
      o << "  f " << f << " -> ";
      if (fi.kind == FaceImage::ToFace) {
        o << fi.face << " @" << fi.offset;
      } else {
        o << "path";
        if (fi.path.darts.empty())
          o << " v:" << fi.path.start;
        else
          for (const Name& d : fi.path.darts) o << " " << d;
      }
      o << "\n";
    }
  }
  return o.str();
}

namespace {

std::string dq(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

const char* kPalette[] = {"#e6194b", "#3cb44b", "#ffe119", "#4363d8",
                          "#f58231", "#911eb4", "#46f0f0", "#f032e6",
                          "#bcf60c", "#fabebe", "#008080", "#e6beff"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::map<Name, const char*> fiber_colors(const std::vector<Name>& cells) {
  std::map<Name, const char*> out;
  for (std::size_t i = 0; i < cells.size(); ++i)
    out[cells[i]] = kPalette[i % kPaletteSize];
  return out;
}

}  // namespace

std::string export_dot(const TwoComplex& x) {
  std::ostringstream o;
  o << "digraph complex {\n  rankdir=LR;\n  node [shape=circle fontsize=11];\n";
  for (const Name& v : x.skel.vertices) o << "  \"" << dq(v) << "\";\n";
  for (const Name& a : x.skel.arcs())
    o << "  \"" << dq(x.skel.dart_src(a)) << "\" -> \""
      << dq(x.skel.dart_dst(a)) << "\" [label=\"" << dq(a) << "\"];\n";
  if (!x.faces.empty()) {
    o << "  graph [labelloc=b label=\"";
    bool first = true;
    for (const Name& f : x.face_names()) {
      if (!first) o << "\\n";
      first = false;
      o << dq(f) << ":";
      for (const Name& d : x.faces.at(f)) o << " " << dq(d);
    }
    o << "\"];\n";
  }
  o << "}\n";
  return o.str();
}

std::string export_dot(const ComplexMap& m) {
  std::vector<Name> tverts(m.target->skel.vertices.begin(),
                           m.target->skel.vertices.end());
  std::map<Name, const char*> vcolor = fiber_colors(tverts);
  std::map<Name, const char*> acolor = fiber_colors(m.target->skel.arcs());

  std::ostringstream o;
  o << "digraph map {\n  rankdir=LR;\n"
    << "  node [shape=circle style=filled fontsize=11];\n";
  o << "  subgraph cluster_target {\n    label=\"target\";\n";
  for (const Name& v : m.target->skel.vertices)
    o << "    \"t:" << dq(v) << "\" [label=\"" << dq(v) << "\" fillcolor=\""
      << vcolor.at(v) << "\"];\n";
  for (const Name& a : m.target->skel.arcs())
    o << "    \"t:" << dq(m.target->skel.dart_src(a)) << "\" -> \"t:"
      << dq(m.target->skel.dart_dst(a)) << "\" [label=\"" << dq(a)
      << "\" color=\"" << acolor.at(a) << "\"];\n";
  o << "  }\n  subgraph cluster_source {\n    label=\"source\";\n";
  for (const Name& v : m.source->skel.vertices) {
    auto it = m.vmap.find(v);
    const char* color = it == m.vmap.end() ? "#ffffff" : vcolor.at(it->second);
    o << "    \"s:" << dq(v) << "\" [label=\"" << dq(v) << "\" fillcolor=\""
      << color << "\"];\n";
  }
  for (const Name& a : m.source->skel.arcs()) {
    o << "    \"s:" << dq(m.source->skel.dart_src(a)) << "\" -> \"s:"
      << dq(m.source->skel.dart_dst(a)) << "\" [label=\"" << dq(a) << "\"";
    if (m.dart_collapses(a))
      o << " style=dashed color=\"#aaaaaa\"";
    else if (auto it = m.dmap.find(a); it != m.dmap.end())
      o << " color=\"" << acolor.at(base_of(it->second)) << "\"";
    o << "];\n";
  }
  o << "  }\n}\n";
  return o.str();
}

std::string export_dot(const SubgroupLattice& l) {
  std::ostringstream o;
  o << "digraph lattice {\n  rankdir=BT;\n  node [shape=box fontsize=11];\n";
  for (std::size_t i = 0; i < l.subgroups.size(); ++i)
    o << "  h" << i << " [label=\"order " << l.subgroups[i].order() << "\"];\n";
  for (const auto& [lo, hi] : l.hasse_edges())
    o << "  h" << lo << " -> h" << hi << ";\n";
  o << "}\n";
  return o.str();
}

namespace {

struct Args {
  std::string file, out;
  std::vector<std::string> maps, bases, rest;
  std::size_t max_cosets = 10000;
  std::size_t max_len = 64;
  std::size_t max_moves = 16;
};

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::UsageError, "cannot write '" + path + "'");
  f << text;
}

std::string counts(const TwoComplex& c) {
  std::ostringstream o;
  o << "vertices=" << c.skel.vertices.size() << " arcs=" << c.skel.arcs().size()
    << " faces=" << c.faces.size();
  return o.str();
}

std::string display_name(const CxDocument& doc,
                         const std::shared_ptr<const TwoComplex>& c,
                         const std::string& fallback) {
  for (const std::string& nm : doc.complex_order)
    if (doc.complexes.at(nm) == c) return nm;
  return fallback;
}

std::string adopt_complex(CxDocument& d, std::string name,
                          std::shared_ptr<const TwoComplex> c) {
  for (const auto& [nm, ptr] : d.complexes)
    if (ptr == c) return nm;
  while (d.complexes.count(name)) name += "_";
  d.complex_order.push_back(name);
  d.complexes.emplace(name, std::move(c));
  return name;
}

void adopt_map(CxDocument& d, std::string name, ComplexMap m) {
  adopt_complex(d, "z", m.source);
  adopt_complex(d, "x", m.target);
  while (d.maps.count(name)) name += "_";
  d.map_order.push_back(name);
  d.maps.emplace(std::move(name), std::move(m));
}

void emit_doc(const Args& a, const CxDocument& doc) {
  if (!a.out.empty()) write_text_file(a.out, write_cx(doc));
}

const ComplexMap& only_map(const CxDocument& doc, const Args& a) {
  if (a.maps.size() != 1) fail(Errc::UsageError, "exactly one --map is required");
  return doc.map(a.maps[0]);
}

std::shared_ptr<const TwoComplex> pick_complex(const CxDocument& doc,
                                               const std::string& name) {
  if (!name.empty()) return doc.complex(name);
  if (doc.complex_order.size() == 1)
    return doc.complexes.at(doc.complex_order[0]);
  fail(Errc::UsageError,
       "the document declares " + std::to_string(doc.complex_order.size()) +
           " complexes; name one");
}

Name base_or_least(const Args& a, std::size_t i, const TwoComplex& x) {
  if (a.bases.size() > i) {
    if (!x.skel.has_vertex(a.bases[i]))
      fail(Errc::UnknownCell, "no vertex named '" + a.bases[i] + "'");
    return a.bases[i];
  }
  if (x.skel.vertices.empty())
    fail(Errc::UnknownCell, "the complex has no vertices");
  return *x.skel.vertices.begin();
}

std::vector<std::vector<Name>> parse_words(const Args& a,
                                           const Presentation& p) {
  std::set<Name> gens(p.generators.begin(), p.generators.end());
  std::vector<std::vector<Name>> words;
  for (const std::string& tok : a.rest) {
    std::vector<Name> word = split_on(tok, ',');
    for (const Name& d : word)
      if (!gens.count(base_of(d)))
        fail(Errc::UnknownArc,
             "'" + d + "' is not a presentation generator");
    words.push_back(std::move(word));
  }
  return words;
}

void run_validate(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  std::size_t bad = 0, total = 0;
  auto report = [&](const std::string& kind, const std::string& nm,
                    const ValidationReport& r, const std::string& extra) {
    ++total;
    if (r.ok()) {
      out << kind << " " << nm << ": ok" << extra << "\n";
    } else {
      ++bad;
      out << kind << " " << nm << ": invalid\n";
      for (const std::string& p : r.problems) out << "  problem: " << p << "\n";
    }
    for (const std::string& n : r.notes) out << "  note: " << n << "\n";
  };
  for (const std::string& nm : doc.complex_order) {
    const TwoComplex& c = *doc.complexes.at(nm);
    report("complex", nm, validate_complex(c), " (" + counts(c) + ")");
  }
  for (const std::string& nm : doc.map_order)
    report("map", nm, validate_map(doc.maps.at(nm)), "");
  if (bad)
    fail(Errc::ParseError, "validation failed for " + std::to_string(bad) +
                               " of " + std::to_string(total) + " objects");
}

void run_check_cover(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  CoveringCert c = check_covering(only_map(doc, a));
  out << "covering of degree " << c.degree << "\n";
}

void run_degree(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  out << check_covering(only_map(doc, a)).degree << "\n";
}

void run_lift_path(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  CoveringCert c = check_covering(only_map(doc, a));
  if (a.bases.size() != 1)
    fail(Errc::UsageError, "--base names the start of the lift");
  const Name& u = a.bases[0];
  if (!c.map.source->skel.has_vertex(u))
    fail(Errc::UnknownCell, "no vertex named '" + u + "' in the cover");
  Path gamma{c.map.vertex_image(u), a.rest};
  Path lifted = lift_path(c, gamma, u);
  out << "lift:";
  for (const Name& d : lifted.darts) out << " " << d;
  out << "\nend: " << c.map.source->skel.path_end(lifted) << "\n";
}

void run_lift_map(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  if (a.maps.size() != 2)
    fail(Errc::UsageError, "two --map legs are required: the covering, then "
                           "the map to lift");
  if (a.bases.size() != 2)
    fail(Errc::UsageError, "two --base vertices are required: the basepoint "
                           "and its lift");
  CoveringCert c = check_covering(doc.map(a.maps[0]));
  const ComplexMap& g = doc.map(a.maps[1]);
  ComplexMap h = lift_map(c, g, a.bases[0], a.bases[1]);
  out << "lift: " << display_name(doc, g.source, "source") << " -> "
      << display_name(doc, c.map.source, "cover") << " at " << a.bases[0]
      << " -> " << a.bases[1] << "\n";
  if (!a.out.empty()) {
    CxDocument od;
    adopt_complex(od, display_name(doc, g.source, "z"), g.source);
    adopt_complex(od, display_name(doc, c.map.source, "cover"), c.map.source);
    adopt_map(od, "lift", h);
    emit_doc(a, od);
  }
}

void run_pushout(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  if (a.maps.size() != 2)
    fail(Errc::UsageError, "two --map legs are required");
  PushoutResult p = pushout(doc.map(a.maps[0]), doc.map(a.maps[1]));
  out << "pushout: " << counts(*p.complex) << "\n";
  CxDocument od;
  adopt_complex(od, display_name(doc, p.t1.source, "x1"), p.t1.source);
  adopt_complex(od, display_name(doc, p.t2.source, "x2"), p.t2.source);
  adopt_complex(od, "pushout", p.complex);
  adopt_map(od, "t1", p.t1);
  adopt_map(od, "t2", p.t2);
  emit_doc(a, od);
}

void run_pullback(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  if (a.maps.size() != 2)
    fail(Errc::UsageError, "two --map legs are required");
  PullbackResult q = pullback(doc.map(a.maps[0]), doc.map(a.maps[1]));
  out << "pullback: " << counts(*q.complex)
      << " components=" << components(q.complex->skel).blocks.size() << "\n";
  CxDocument od;
  adopt_complex(od, "pullback", q.complex);
  adopt_complex(od, display_name(doc, q.t1.target, "x1"), q.t1.target);
  adopt_complex(od, display_name(doc, q.t2.target, "x2"), q.t2.target);
  adopt_map(od, "t1", q.t1);
  adopt_map(od, "t2", q.t2);
  emit_doc(a, od);
}

void run_higman(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  if (a.maps.empty()) fail(Errc::UsageError, "--map names at least one cover");
  std::vector<ComplexMap> ms;
  for (const std::string& nm : a.maps) ms.push_back(doc.map(nm));
  if (a.rest.size() < 4 || (a.rest.size() - 1) % 3 != 0)
    fail(Errc::UsageError,
         "expected a base edge followed by INDEX DART1 DART2 triples");
  HandleConfiguration hc;
  hc.edge = a.rest[0];
  for (std::size_t i = 1; i + 2 < a.rest.size() + 1; i += 3) {
    std::size_t idx = 0;
    if (!to_size(a.rest[i], idx))
      fail(Errc::UsageError, "'" + a.rest[i] + "' is not a source index");
    hc.pairs.push_back({idx, a.rest[i + 1], a.rest[i + 2]});
  }
  validate_handle_configuration(ms, hc);
  HigmanResult r = higman_composition(ms, hc);
  out << "higman: " << counts(*r.complex) << "\n";
  out << "connected: " << (is_connected(*r.complex) ? "true" : "false") << "\n";
  CxDocument od;
  adopt_complex(od, "higman", r.complex);
  adopt_complex(od, display_name(doc, r.map.target, "x"), r.map.target);
  adopt_map(od, "splice", r.map);
  emit_doc(a, od);
}

void run_quotient_group(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  if (a.maps.empty())
    fail(Errc::UsageError, "--map names at least one automorphism");
  std::vector<ComplexMap> gens;
  for (const std::string& nm : a.maps) gens.push_back(doc.map(nm));
  QuotientResult r =
      quotient_by_group_action(make_group_action(gens[0].source, gens));
  out << "quotient: " << counts(*r.complex) << "\n";
  CxDocument od;
  adopt_complex(od, display_name(doc, r.q.source, "x"), r.q.source);
  adopt_complex(od, "quotient", r.complex);
  adopt_map(od, "q", r.q);
  emit_doc(a, od);
}

void run_quotient_sub(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  if (a.rest.size() < 2)
    fail(Errc::UsageError, "expected the ambient complex and at least one part");
  std::shared_ptr<const TwoComplex> x = doc.complex(a.rest[0]);
  std::vector<TwoComplex> parts;
  for (std::size_t i = 1; i < a.rest.size(); ++i)
    parts.push_back(*doc.complex(a.rest[i]));
  QuotientResult r = quotient_by_subcomplexes(x, parts);
  out << "quotient: " << counts(*r.complex) << "\n";
  CxDocument od;
  adopt_complex(od, a.rest[0], x);
  adopt_complex(od, "quotient", r.complex);
  adopt_map(od, "q", r.q);
  emit_doc(a, od);
}

void run_excise(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  CoveringCert c = check_covering(only_map(doc, a));
  if (a.rest.size() != 1)
    fail(Errc::UsageError, "name the subcomplex to excise");
  ExciseResult r = excise(c, *doc.complex(a.rest[0]), a.max_len, a.max_moves);
  out << "excise: degree=" << r.cover.degree << "\n";
  out << "source quotient: " << counts(*r.cover.map.source) << "\n";
  out << "target quotient: " << counts(*r.cover.map.target) << "\n";
  CxDocument od;
  adopt_complex(od, display_name(doc, r.source_quotient.source, "y"),
                r.source_quotient.source);
  adopt_complex(od, display_name(doc, r.target_quotient.source, "x"),
                r.target_quotient.source);
  adopt_complex(od, "source_quotient", r.cover.map.source);
  adopt_complex(od, "target_quotient", r.cover.map.target);
  adopt_map(od, "cover", r.cover.map);
  adopt_map(od, "collapse_source", r.source_quotient);
  adopt_map(od, "collapse_target", r.target_quotient);
  emit_doc(a, od);
}

void run_monodromy(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  CoveringCert c = check_covering(only_map(doc, a));
  Name v = base_or_least(a, 0, *c.map.target);
  Graph tree = spanning_tree(c.map.target->skel, v);
  Monodromy mo = monodromy(c, v, tree);
  out << "fiber:";
  for (const Name& u : mo.fiber) out << " " << u;
  out << "\n";
  for (const auto& [arc, p] : mo.action)
    out << arc << ": " << p.cycle_string() << "\n";
}

void run_enumerate(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  std::shared_ptr<const TwoComplex> x = pick_complex(doc, "");
  Name v = base_or_least(a, 0, *x);
  Graph tree = spanning_tree(x->skel, v);
  Presentation p = presentation_of(*x, tree);
  CosetTable t = coset_enumerate(p, parse_words(a, p), a.max_cosets);
  out << "generators:";
  for (const Name& g : p.generators) out << " " << g;
  out << "\nrelators: " << p.relators.size() << "\n";
  if (t.status == CosetTable::Status::Closed)
    out << "status: closed\ncosets: " << t.size() << "\n";
  else
    out << "status: exhausted\nbound: " << t.bound << "\n";
}

void run_bottom_up(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  std::shared_ptr<const TwoComplex> x = pick_complex(doc, "");
  Name v = base_or_least(a, 0, *x);
  Graph tree = spanning_tree(x->skel, v);
  Presentation p = presentation_of(*x, tree);
  CosetTable t = coset_enumerate(p, parse_words(a, p), a.max_cosets);
  if (t.status != CosetTable::Status::Closed)
    fail(Errc::TableNotClosed,
         "coset enumeration exhausted at bound " + std::to_string(t.bound));
  CoveringCert c = bottom_up_cover(x, v, tree, t);
  out << "degree: " << c.degree << "\n";
  out << "cover: " << counts(*c.map.source) << "\n";
  CxDocument od;
  adopt_complex(od, "cover", c.map.source);
  adopt_complex(od, display_name(doc, x, "x"), x);
  adopt_map(od, "p", c.map);
  emit_doc(a, od);
}

void run_universal(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  std::shared_ptr<const TwoComplex> x = pick_complex(doc, "");
  Name v = base_or_least(a, 0, *x);
  UniversalBounds b;
  b.max_cosets = a.max_cosets;
  b.max_len = a.max_len;
  b.max_moves = a.max_moves;
  UniversalCoverResult r = universal_cover(x, v, b);
  CxDocument od;
  if (r.covered()) {
    out << "universal cover: degree=" << r.cover->degree << "\n";
    out << "cover: " << counts(*r.cover->map.source) << "\n";
    adopt_complex(od, "cover", r.cover->map.source);
    adopt_complex(od, display_name(doc, x, "x"), x);
    adopt_map(od, "p", r.cover->map);
  } else {
    const Truncation& tr = *r.truncation;
    out << "exhausted: radius=" << tr.radius
        << " vertices=" << tr.complex->skel.vertices.size()
        << " frontier=" << tr.frontier.size() << "\n";
    adopt_complex(od, "truncation", tr.complex);
    adopt_complex(od, display_name(doc, x, "x"), x);
    adopt_map(od, "p", tr.map);
  }
  emit_doc(a, od);
}

void run_galois(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  CoveringCert c = check_covering(only_map(doc, a));
  Name v = base_or_least(a, 0, *c.map.target);
  out << "order " << galois_group(c, v).order() << "\n";
}

void run_is_galois(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  GaloisVerdict v = is_galois(check_covering(only_map(doc, a)));
  out << "galois: " << (v.galois ? "true" : "false") << "\n";
  out << "order: " << v.group_order << "\ndegree: " << v.degree << "\n";
  if (!v.galois) out << "witness: " << v.witness << "\n";
}

void run_lattice(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  CoveringCert c = check_covering(only_map(doc, a));
  Name v = base_or_least(a, 0, *c.map.target);
  IntermediateLattice l = intermediate_lattice(c, v);
  out << "subgroups: " << l.subgroups.subgroups.size() << "\n";
  for (std::size_t i = 0; i < l.covers.elements.size(); ++i) {
    const PermGroup& h =
        l.subgroups.subgroups[static_cast<std::size_t>(l.phi[i])];
    bool lower = is_normal(h, l.gal.perm_rep);
    out << i << ": order=" << h.order()
        << " degree=" << l.covers.elements[i].h.degree
        << " galois=" << (lower ? "true" : "false") << "\n";
  }
  if (!a.out.empty()) write_text_file(a.out, export_dot(l.subgroups));
}

void run_inverse_galois(const Args& a, std::ostream& out) {
  if (a.rest.empty())
    fail(Errc::UsageError, "expected permutations as comma image lists");
  std::vector<Permutation> gens;
  for (const std::string& tok : a.rest) {
    Permutation p;
    for (const std::string& part : split_on(tok, ',')) {
      std::size_t v = 0;
      if (!to_size(part, v))
        fail(Errc::UsageError, "'" + tok + "' is not an image list");
      p.img.push_back(static_cast<int>(v));
    }
    std::vector<int> sorted = p.img;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted[i] != static_cast<int>(i))
        fail(Errc::UsageError,
             "'" + tok + "' is not a permutation of 0.." +
                 std::to_string(p.img.size() - 1));
    gens.push_back(std::move(p));
  }
  InverseGaloisResult r = inverse_galois(gens);
  out << "degree: " << r.cert.degree << "\n";
  out << "order: " << r.galois.order() << "\n";
  CxDocument od;
  adopt_complex(od, "cover", r.cert.map.source);
  adopt_complex(od, "base", r.cert.map.target);
  adopt_map(od, "p", r.cert.map);
  emit_doc(a, od);
}

void run_dot(const Args& a, std::ostream& out) {
  CxDocument doc = parse_cx_file(a.file);
  std::string text;
  if (a.maps.size() == 1) {
    text = export_dot(doc.map(a.maps[0]));
  } else if (a.maps.empty()) {
    if (a.rest.size() > 1)
      fail(Errc::UsageError, "name at most one complex");
    text = export_dot(*pick_complex(doc, a.rest.empty() ? "" : a.rest[0]));
  } else {
    fail(Errc::UsageError, "at most one --map");
  }
  if (a.out.empty())
    out << text;
  else
    write_text_file(a.out, text);
}

}  // namespace

int cli(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"finite 2-complexes, coverings and their Galois theory", "cx"};
  app.require_subcommand(1);
  std::list<Args> store;

  auto sub = [&](const char* name, const char* desc, bool with_file) {
    store.emplace_back();
    Args* a = &store.back();
    CLI::App* s = app.add_subcommand(name, desc);
    if (with_file) s->add_option("file", a->file, "input .cx document")->required();
    return std::pair<CLI::App*, Args*>(s, a);
  };
  auto opt_map = [](CLI::App* s, Args* a) {
    s->add_option("--map", a->maps, "map name in the document")
        ->allow_extra_args(false);
  };
  auto opt_base = [](CLI::App* s, Args* a) {
    s->add_option("--base", a->bases, "basepoint vertex")
        ->allow_extra_args(false);
  };
  auto opt_out = [](CLI::App* s, Args* a) {
    s->add_option("--out", a->out, "write the result here");
  };

  {
    auto [s, a] = sub("validate", "check every complex and map", true);
    s->callback([a, &out] { run_validate(*a, out); });
  }
  {
    auto [s, a] = sub("check-cover", "certify a map as a covering", true);
    opt_map(s, a);
    s->callback([a, &out] { run_check_cover(*a, out); });
  }
  {
    auto [s, a] = sub("degree", "print the covering degree", true);
    opt_map(s, a);
    s->callback([a, &out] { run_degree(*a, out); });
  }
  {
    auto [s, a] = sub("lift-path", "lift a dart word through a covering", true);
    opt_map(s, a);
    opt_base(s, a);
    s->add_option("darts", a->rest, "darts of the path downstairs");
    s->callback([a, &out] { run_lift_path(*a, out); });
  }
  {
    auto [s, a] = sub("lift-map", "lift a map through a covering", true);
    opt_map(s, a);
    opt_base(s, a);
    opt_out(s, a);
    s->callback([a, &out] { run_lift_map(*a, out); });
  }
  {
    auto [s, a] = sub("pushout", "pushout of two legs sharing a source", true);
    opt_map(s, a);
    opt_out(s, a);
    s->callback([a, &out] { run_pushout(*a, out); });
  }
  {
    auto [s, a] = sub("pullback", "pullback of two legs into a target", true);
    opt_map(s, a);
    opt_out(s, a);
    s->callback([a, &out] { run_pullback(*a, out); });
  }
  {
    auto [s, a] = sub("higman", "splice covers along a handle configuration", true);
    opt_map(s, a);
    opt_out(s, a);
    s->add_option("handles", a->rest,
                  "base edge, then INDEX DART1 DART2 per pair");
    s->callback([a, &out] { run_higman(*a, out); });
  }
  {
    auto [s, a] = sub("quotient-group", "quotient by a group of automorphisms", true);
    opt_map(s, a);
    opt_out(s, a);
    s->callback([a, &out] { run_quotient_group(*a, out); });
  }
  {
    auto [s, a] = sub("quotient-sub", "collapse subcomplexes to points", true);
    opt_out(s, a);
    s->add_option("names", a->rest, "ambient complex, then the parts");
    s->callback([a, &out] { run_quotient_sub(*a, out); });
  }
  {
    auto [s, a] = sub("excise", "collapse a simply connected piece of the base", true);
    opt_map(s, a);
    opt_out(s, a);
    s->add_option("--max-len", a->max_len, "homotopy search length bound");
    s->add_option("--max-moves", a->max_moves, "homotopy search move bound");
    s->add_option("subcomplex", a->rest, "name of the piece to excise");
    s->callback([a, &out] { run_excise(*a, out); });
  }
  {
    auto [s, a] = sub("monodromy", "fiber action of the generator loops", true);
    opt_map(s, a);
    opt_base(s, a);
    s->callback([a, &out] { run_monodromy(*a, out); });
  }
  {
    auto [s, a] = sub("enumerate", "coset enumeration over subgroup words", true);
    opt_base(s, a);
    s->add_option("--max-cosets", a->max_cosets, "enumeration bound");
    s->add_option("words", a->rest, "subgroup words, darts joined by commas");
    s->callback([a, &out] { run_enumerate(*a, out); });
  }
  {
    auto [s, a] = sub("bottom-up", "build the cover of an enumerated subgroup", true);
    opt_base(s, a);
    opt_out(s, a);
    s->add_option("--max-cosets", a->max_cosets, "enumeration bound");
    s->add_option("words", a->rest, "subgroup words, darts joined by commas");
    s->callback([a, &out] { run_bottom_up(*a, out); });
  }
  {
    auto [s, a] = sub("universal", "universal cover or its truncation", true);
    a->max_len = 8;
    a->max_moves = 4;
    opt_base(s, a);
    opt_out(s, a);
    s->add_option("--max-cosets", a->max_cosets, "enumeration bound");
    s->add_option("--max-len", a->max_len, "truncation path length bound");
    s->add_option("--max-moves", a->max_moves, "truncation move bound");
    s->callback([a, &out] { run_universal(*a, out); });
  }
  {
    auto [s, a] = sub("galois", "order of the deck transformation group", true);
    opt_map(s, a);
    opt_base(s, a);
    s->callback([a, &out] { run_galois(*a, out); });
  }
  {
    auto [s, a] = sub("is-galois", "decide regularity of a covering", true);
    opt_map(s, a);
    s->callback([a, &out] { run_is_galois(*a, out); });
  }
  {
    auto [s, a] = sub("lattice", "intermediate covers against the subgroup lattice", true);
    opt_map(s, a);
    opt_base(s, a);
    opt_out(s, a);
    s->callback([a, &out] { run_lattice(*a, out); });
  }
  {
    auto [s, a] = sub("inverse-galois", "cover of a bouquet with a given deck group", false);
    opt_out(s, a);
    s->add_option("perms", a->rest, "generators as comma image lists, e.g. 1,2,0");
    s->callback([a, &out] { run_inverse_galois(*a, out); });
  }
  {
    auto [s, a] = sub("dot", "DOT rendering of a complex or map", true);
    opt_map(s, a);
    opt_out(s, a);
    s->add_option("complex", a->rest, "complex to render");
    s->callback([a, &out] { run_dot(*a, out); });
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error[UsageError]: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error[" << errc_name(e.code()) << "]: " << strip_code(e.what())
        << "\n";
    return e.code() == Errc::UsageError ? 2 : 1;
  }
  return 0;
}

}  // namespace cx
