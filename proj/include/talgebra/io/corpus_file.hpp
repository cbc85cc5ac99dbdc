#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "talgebra/algebra.hpp"
#include "talgebra/collage/algebra.hpp"
#include "talgebra/collage/export.hpp"
#include "talgebra/dfa/examples.hpp"
#include "talgebra/dfa/instance.hpp"
#include "talgebra/errors.hpp"
#include "talgebra/grounding.hpp"
#include "talgebra/io/term_text.hpp"
#include "talgebra/io/text.hpp"
#include "talgebra/scene/algebra.hpp"
#include "talgebra/scene/generate.hpp"
#include "talgebra/scene/model.hpp"

namespace talgebra::io {

enum class CorpusKind { regular, scene, collage };

// A corpus file read back into engine form. The core examples view always
// holds; the per-kind surface views carry what the matching engine consumes
// directly. Regular object ids are canonical (o0, o1 by position, matching
// the engine's own encoding); scene and collage ids come from the file.
struct ParsedCorpus {
  CorpusKind kind;
  TemplateAlgebra skeleton;
  std::vector<Example> examples;
  dfa::RegularExampleSet regular;
  std::vector<scene::SceneExample> scenes;
  std::size_t dimension = 0;
  std::size_t num_predicates = 0;
};

namespace detail {

struct RawObject {
  std::string id;
  std::string payload;
};

struct RawRecord {
  std::size_t line_no = 0;
  std::string term;
  std::vector<RawObject> objects;
};

[[noreturn]] inline void record_fail(ErrorCode code, std::size_t line_no,
                                     const std::string& msg) {
  fail(code, "line " + std::to_string(line_no) + ": " + msg);
}

inline bool valid_name(const std::string& s) {
  if (s.empty() || !name_start(s[0])) return false;
  for (char c : s)
    if (!name_char(c)) return false;
  return true;
}

inline RawRecord parse_record_line(const std::string& line,
                                   std::size_t line_no) {
  std::size_t semi = line.find(';');
  if (semi == std::string::npos)
    record_fail(ErrorCode::syntax_error, line_no,
                "record needs '<term> ; <objects>'");
  if (line.find(';', semi + 1) != std::string::npos)
    record_fail(ErrorCode::syntax_error, line_no, "more than one ';'");
  RawRecord rec{line_no, line.substr(0, semi), {}};
  std::set<std::string> seen;
  for (const std::string& tok : split_ws(line.substr(semi + 1))) {
    std::size_t colon = tok.find(':');
    if (colon == std::string::npos)
      record_fail(ErrorCode::syntax_error, line_no,
                  "object needs '<id>:<payload>', got '" + tok + "'");
    RawObject obj{tok.substr(0, colon), tok.substr(colon + 1)};
    if (!valid_name(obj.id))
      record_fail(ErrorCode::syntax_error, line_no,
                  "bad object id '" + obj.id + "'");
    if (obj.payload.empty())
      record_fail(ErrorCode::syntax_error, line_no,
                  "object '" + obj.id + "' has an empty payload");
    if (!seen.insert(obj.id).second)
      record_fail(ErrorCode::syntax_error, line_no,
                  "duplicate object id '" + obj.id + "'");
    rec.objects.push_back(std::move(obj));
  }
  return rec;
}

// Variables sorted shortest-first then lexicographic, the canonical
// declaration order (x1 < x2 < x10).
inline bool var_order(const std::string& a, const std::string& b) {
  return a.size() != b.size() ? a.size() < b.size() : a < b;
}

inline void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) {
    out.insert(t.head());
    return;
  }
  for (const Term& a : t.args()) collect_vars(a, out);
}

// Parses a record's term against the skeleton alphabet: leaves that are not
// nullary symbols become variables of object_type, declared in canonical
// order, and the whole term must typecheck (with the given root type when
// one is required).
inline std::pair<Term, VariableContext> parse_record_term(
    const Alphabet& alphabet, const TypeName& object_type,
    const RawRecord& rec, const TypeName* root_type = nullptr) {
  Term term = Term::var("x");
  try {
    term = parse_term(rec.term, [&](const std::string& n) {
      return alphabet.lookup_one(n, {}) == nullptr;
    });
  } catch (const Error& e) {
    record_fail(e.code(), rec.line_no, e.what());
  }
  std::set<std::string> names;
  collect_vars(term, names);
  std::vector<std::string> ordered(names.begin(), names.end());
  std::sort(ordered.begin(), ordered.end(), var_order);
  VariableContext vars;
  for (const std::string& n : ordered) vars.declare(n, object_type);
  try {
    TypeName got = typecheck_term(term, alphabet, vars);
    if (root_type && !(got == *root_type))
      fail(ErrorCode::type_mismatch, "record has type " + got.name +
                                         ", expected " + root_type->name);
  } catch (const Error& e) {
    record_fail(e.code(), rec.line_no, e.what());
  }
  return {std::move(term), std::move(vars)};
}

inline std::string quoted_string(const std::string& s) {
  for (char c : s)
    if (c == '"' || c == '\\')
      fail(ErrorCode::domain_error,
           "string contains a quote or backslash, not representable");
  return "\"" + s + "\"";
}

inline std::string unquote_string(const std::string& payload,
                                  std::size_t line_no) {
  if (payload.size() < 2 || payload.front() != '"' || payload.back() != '"')
    record_fail(ErrorCode::syntax_error, line_no,
                "expected a quoted string, got '" + payload + "'");
  std::string inner = payload.substr(1, payload.size() - 2);
  for (char c : inner)
    if (c == '"' || c == '\\')
      record_fail(ErrorCode::syntax_error, line_no,
                  "quotes and backslashes are not representable");
  return inner;
}

inline std::string vector_payload(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += real_text(v[i]);
  }
  return out + "]";
}

inline std::vector<double> parse_vector_payload(const std::string& payload,
                                                std::size_t line_no) {
  if (payload.size() < 2 || payload.front() != '[' || payload.back() != ']')
    record_fail(ErrorCode::syntax_error, line_no,
                "expected a bracketed vector, got '" + payload + "'");
  std::vector<double> out;
  std::string inner = payload.substr(1, payload.size() - 2);
  if (inner.empty()) return out;
  std::size_t begin = 0;
  while (true) {
    std::size_t comma = inner.find(',', begin);
    std::string tok = inner.substr(begin, comma == std::string::npos
                                              ? std::string::npos
                                              : comma - begin);
    out.push_back(parse_real(tok, line_no));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return out;
}

// The regular record shapes: accept[x], equiv[x,y], and their negations.
inline dfa::RegularExampleKind regular_shape(const Term& t,
                                             std::size_t line_no) {
  auto is_accept = [](const Term& u) {
    return !u.is_variable() && u.head() == "accept" && u.args().size() == 1 &&
           u.args()[0].is_variable();
  };
  auto is_equiv = [](const Term& u) {
    return !u.is_variable() && u.head() == "equiv" && u.args().size() == 2 &&
           u.args()[0].is_variable() && u.args()[1].is_variable() &&
           u.args()[0].head() != u.args()[1].head();
  };
  if (is_accept(t)) return dfa::RegularExampleKind::accept;
  if (is_equiv(t)) return dfa::RegularExampleKind::equiv;
  if (!t.is_variable() && t.head() == "not" && t.args().size() == 1) {
    if (is_accept(t.args()[0])) return dfa::RegularExampleKind::not_accept;
    if (is_equiv(t.args()[0])) return dfa::RegularExampleKind::not_equiv;
  }
  record_fail(ErrorCode::type_mismatch, line_no,
              "term is not a regular example shape");
}

struct HeaderScan {
  std::string instance;
  std::vector<char> alphabet;
  std::size_t dimension = 0;
  std::size_t num_predicates = 0;
  bool saw_dimension = false, saw_predicates = false, saw_alphabet = false;
  std::vector<RawRecord> records;
};

inline HeaderScan scan_corpus(const std::string& text) {
  HeaderScan h;
  std::vector<std::string> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line_no = i + 1;
    std::vector<std::string> tok = split_ws(lines[i]);
    if (tok.empty()) continue;
    if (tok[0][0] == '#') {
      if (tok[0] == "#instance" && tok.size() == 2) {
        if (!h.instance.empty())
          record_fail(ErrorCode::syntax_error, line_no,
                      "duplicate '#instance'");
        h.instance = tok[1];
      } else if (tok[0] == "#alphabet") {
        h.saw_alphabet = true;
        for (std::size_t k = 1; k < tok.size(); ++k) {
          if (tok[k].size() != 1)
            record_fail(ErrorCode::syntax_error, line_no,
                        "alphabet symbols are single characters");
          h.alphabet.push_back(tok[k][0]);
        }
      } else if (tok[0] == "#dimension" && tok.size() == 2) {
        h.dimension = std::size_t(parse_int(tok[1], line_no));
        h.saw_dimension = true;
      } else if (tok[0] == "#predicates" && tok.size() == 2) {
        h.num_predicates = std::size_t(parse_int(tok[1], line_no));
        h.saw_predicates = true;
      }
      // Other #-lines are comments.
      continue;
    }
    h.records.push_back(parse_record_line(lines[i], line_no));
  }
  if (h.instance.empty())
    fail(ErrorCode::syntax_error, "missing '#instance' header");
  return h;
}

}  // namespace detail

inline ParsedCorpus read_corpus_text(const std::string& text,
                                     const std::string& base_dir = ".") {
  detail::HeaderScan h = detail::scan_corpus(text);

  if (h.instance == "regular") {
    if (!h.saw_alphabet)
      fail(ErrorCode::syntax_error, "regular corpus needs '#alphabet'");
    TemplateAlgebra skeleton = dfa::regular_template(h.alphabet);
    dfa::RegularExampleSet set;
    set.alphabet = h.alphabet;
    for (const detail::RawRecord& rec : h.records) {
      Term term = detail::parse_record_term(skeleton.alphabet(),
                                            dfa::kStringType, rec)
                      .first;
      dfa::RegularExample e{detail::regular_shape(term, rec.line_no), {}};
      for (const detail::RawObject& obj : rec.objects)
        e.strings.push_back(detail::unquote_string(obj.payload, rec.line_no));
      try {
        e.validate();
        for (const std::string& w : e.strings)
          for (char x : w)
            if (std::find(h.alphabet.begin(), h.alphabet.end(), x) ==
                h.alphabet.end())
              fail(ErrorCode::symbol_not_in_alphabet,
                   std::string("example symbol not in alphabet: ") + x);
      } catch (const Error& err) {
        detail::record_fail(err.code(), rec.line_no, err.what());
      }
      set.examples.push_back(std::move(e));
    }
    std::vector<Example> examples = dfa::to_core_examples(set);
    return ParsedCorpus{CorpusKind::regular, std::move(skeleton),
                        std::move(examples), std::move(set)};
  }

  if (h.instance == "scene") {
    if (!h.saw_dimension || !h.saw_predicates)
      fail(ErrorCode::syntax_error,
           "scene corpus needs '#dimension' and '#predicates'");
    TemplateAlgebra skeleton =
        scene::scene_template(h.num_predicates, h.dimension);
    ParsedCorpus out{CorpusKind::scene, std::move(skeleton)};
    out.dimension = h.dimension;
    out.num_predicates = h.num_predicates;
    for (const detail::RawRecord& rec : h.records) {
      auto [term, vars] = detail::parse_record_term(
          out.skeleton.alphabet(), scene::kObjectType, rec,
          &scene::kTruthType);
      scene::SceneExample ex{std::move(term), std::move(vars), {}};
      for (const detail::RawObject& obj : rec.objects) {
        std::vector<double> v =
            detail::parse_vector_payload(obj.payload, rec.line_no);
        if (v.size() != h.dimension)
          detail::record_fail(
              ErrorCode::type_mismatch, rec.line_no,
              "object '" + obj.id + "' has dimension " +
                  std::to_string(v.size()) + ", header says " +
                  std::to_string(h.dimension));
        ex.scene.objects.push_back({obj.id, std::move(v), std::nullopt});
      }
      out.examples.push_back(scene::as_example(ex));
      out.scenes.push_back(std::move(ex));
    }
    return out;
  }

  if (h.instance == "collage") {
    TemplateAlgebra skeleton = collage::collage_template();
    ParsedCorpus out{CorpusKind::collage, std::move(skeleton)};
    for (const detail::RawRecord& rec : h.records) {
      auto [term, vars] = detail::parse_record_term(
          out.skeleton.alphabet(), collage::kPictureType, rec,
          &collage::kRealType);
      Example ex{std::move(term), std::move(vars), {}};
      for (const detail::RawObject& obj : rec.objects) {
        geom::Picture pic =
            collage::parse_svg_subset(base_dir + "/" + obj.payload);
        ex.objects.push_back(
            {obj.id, Value(collage::kPictureType, std::move(pic))});
      }
      out.examples.push_back(std::move(ex));
    }
    return out;
  }

  fail(ErrorCode::syntax_error, "unknown instance kind '" + h.instance + "'");
}

inline ParsedCorpus read_corpus(const std::string& path) {
  return read_corpus_text(read_file(path), dirname_of(path));
}

inline std::string corpus_text(const dfa::RegularExampleSet& set) {
  set.validate();
  std::string out = "#instance regular\n#alphabet";
  for (char x : set.alphabet) out += std::string(" ") + x;
  out += "\n";
  for (const dfa::RegularExample& e : set.examples) {
    Example core = dfa::to_core_example(e);
    out += term_text(core.term) + " ;";
    for (std::size_t i = 0; i < core.objects.size(); ++i)
      out += " " + core.objects[i].id + ":" +
             detail::quoted_string(e.strings[i]);
    out += "\n";
  }
  return out;
}

namespace detail {

inline void require_canonical_vars(const VariableContext& vars) {
  for (std::size_t i = 1; i < vars.entries().size(); ++i)
    if (!var_order(vars.entries()[i - 1].first, vars.entries()[i].first))
      fail(ErrorCode::domain_error,
           "variable declaration order is not canonical "
           "(shortest-first, then lexicographic), so it would not survive a "
           "round trip");
}

}  // namespace detail

inline std::string corpus_text(const std::vector<scene::SceneExample>& corpus,
                               std::size_t num_predicates,
                               std::size_t dimension) {
  std::string out = "#instance scene\n#dimension " +
                    std::to_string(dimension) + "\n#predicates " +
                    std::to_string(num_predicates) + "\n";
  for (const scene::SceneExample& ex : corpus) {
    detail::require_canonical_vars(ex.vars);
    for (const auto& entry : ex.vars.entries())
      if (!(entry.second == scene::kObjectType))
        fail(ErrorCode::type_mismatch,
             "scene variables must be object-typed");
    out += term_text(ex.formula) + " ;";
    for (const scene::SceneObject& o : ex.scene.objects) {
      if (o.features.size() != dimension)
        fail(ErrorCode::domain_error,
             "object '" + o.id + "' has dimension " +
                 std::to_string(o.features.size()) + ", corpus declares " +
                 std::to_string(dimension));
      out += " " + o.id + ":" + detail::vector_payload(o.features);
    }
    out += "\n";
  }
  return out;
}

inline void write_corpus(const std::string& path,
                         const dfa::RegularExampleSet& set) {
  write_file_atomic(path, corpus_text(set));
}

inline void write_corpus(const std::string& path,
                         const std::vector<scene::SceneExample>& corpus,
                         std::size_t num_predicates, std::size_t dimension) {
  write_file_atomic(path, corpus_text(corpus, num_predicates, dimension));
}

// Ground-truth attribute labels of a generated scene corpus, kept out of the
// corpus file itself so that training inputs stay label-free. One `labels`
// line per example, objects as <id>:<shape>,<color>,<size>,<material>.
struct SceneLabels {
  std::vector<int> predicate_attributes;
  std::vector<std::vector<std::pair<std::string, scene::ObjectTruth>>>
      examples;
};

inline std::string labels_text(const scene::SceneCorpus& corpus) {
  std::string out = "#instance scene-labels\n#attributes";
  for (int a : corpus.predicate_attributes)
    out += " " + std::to_string(a);
  out += "\n";
  for (const scene::SceneExample& ex : corpus.examples) {
    out += "labels";
    for (const scene::SceneObject& o : ex.scene.objects) {
      if (!o.truth)
        fail(ErrorCode::missing_truth,
             "object '" + o.id + "' carries no truth labels");
      out += " " + o.id + ":" + std::to_string(o.truth->shape) + "," +
             std::to_string(o.truth->color) + "," +
             std::to_string(o.truth->size) + "," +
             std::to_string(o.truth->material);
    }
    out += "\n";
  }
  return out;
}

inline SceneLabels parse_labels_text(const std::string& text) {
  SceneLabels out;
  bool saw_instance = false, saw_attributes = false;
  std::vector<std::string> lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line_no = i + 1;
    std::vector<std::string> tok = detail::split_ws(lines[i]);
    if (tok.empty()) continue;
    if (tok[0] == "#instance") {
      if (tok.size() != 2 || tok[1] != "scene-labels")
        detail::record_fail(ErrorCode::syntax_error, line_no,
                            "expected '#instance scene-labels'");
      saw_instance = true;
    } else if (tok[0] == "#attributes") {
      saw_attributes = true;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        long a = detail::parse_int(tok[k], line_no);
        if (a < 0 || a >= scene::kAttributeCount)
          detail::record_fail(ErrorCode::syntax_error, line_no,
                              "attribute index out of range: " + tok[k]);
        out.predicate_attributes.push_back(int(a));
      }
    } else if (tok[0][0] == '#') {
      continue;
    } else if (tok[0] == "labels") {
      std::vector<std::pair<std::string, scene::ObjectTruth>> row;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        std::size_t colon = tok[k].find(':');
        if (colon == std::string::npos)
          detail::record_fail(ErrorCode::syntax_error, line_no,
                              "labels need '<id>:<s>,<c>,<z>,<m>'");
        std::string id = tok[k].substr(0, colon);
        if (!detail::valid_name(id))
          detail::record_fail(ErrorCode::syntax_error, line_no,
                              "bad object id '" + id + "'");
        std::vector<long> parts;
        std::string rest = tok[k].substr(colon + 1);
        std::size_t begin = 0;
        while (true) {
          std::size_t comma = rest.find(',', begin);
          parts.push_back(detail::parse_int(
              rest.substr(begin, comma == std::string::npos ? std::string::npos
                                                            : comma - begin),
              line_no));
          if (comma == std::string::npos) break;
          begin = comma + 1;
        }
        if (parts.size() != 4)
          detail::record_fail(ErrorCode::syntax_error, line_no,
                              "labels carry exactly four attribute indices");
        scene::ObjectTruth t{int(parts[0]), int(parts[1]), int(parts[2]),
                             int(parts[3])};
        if (t.shape < 0 || t.shape >= scene::kNumShapes || t.color < 0 ||
            t.color >= scene::kNumColors || t.size < 0 ||
            t.size >= scene::kNumSizes || t.material < 0 ||
            t.material >= scene::kNumMaterials)
          detail::record_fail(ErrorCode::syntax_error, line_no,
                              "attribute value out of range in '" + tok[k] +
                                  "'");
        row.emplace_back(std::move(id), t);
      }
      out.examples.push_back(std::move(row));
    } else {
      detail::record_fail(ErrorCode::syntax_error, line_no,
                          "unknown line '" + tok[0] + "'");
    }
  }
  if (!saw_instance)
    fail(ErrorCode::syntax_error, "missing '#instance scene-labels' header");
  if (!saw_attributes)
    fail(ErrorCode::syntax_error, "missing '#attributes' header");
  return out;
}

inline void write_scene_labels(const std::string& path,
                               const scene::SceneCorpus& corpus) {
  write_file_atomic(path, labels_text(corpus));
}

inline SceneLabels read_scene_labels(const std::string& path) {
  return parse_labels_text(read_file(path));
}

// Rehydrates truth labels onto a corpus read back from disk. Objects are
// matched by id within each example.
inline void apply_labels(std::vector<scene::SceneExample>& corpus,
                         const SceneLabels& labels) {
  if (corpus.size() != labels.examples.size())
    fail(ErrorCode::domain_error,
         "labels cover " + std::to_string(labels.examples.size()) +
             " examples, corpus has " + std::to_string(corpus.size()));
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& [id, truth] : labels.examples[i]) {
      bool found = false;
      for (scene::SceneObject& o : corpus[i].scene.objects)
        if (o.id == id) {
          o.truth = truth;
          found = true;
          break;
        }
      if (!found)
        fail(ErrorCode::domain_error,
             "example " + std::to_string(i) + " has no object '" + id + "'");
    }
    for (const scene::SceneObject& o : corpus[i].scene.objects)
      if (!o.truth)
        fail(ErrorCode::missing_truth,
             "example " + std::to_string(i) + " object '" + o.id +
                 "' is unlabeled");
  }
}

// Collage corpora reference their target pictures by file; the pictures are
// written as SVG next to the corpus, named  <corpus stem>-t<N>.svg.
inline void write_corpus(const std::string& path,
                         const std::vector<Example>& collage_examples) {
  std::string dir = dirname_of(path);
  std::size_t slash = path.find_last_of('/');
  std::string base =
      slash == std::string::npos ? path : path.substr(slash + 1);
  std::size_t dot = base.find_last_of('.');
  std::string stem = dot == std::string::npos ? base : base.substr(0, dot);

  std::string out = "#instance collage\n";
  for (std::size_t n = 0; n < collage_examples.size(); ++n) {
    const Example& ex = collage_examples[n];
    detail::require_canonical_vars(ex.vars);
    out += term_text(ex.term) + " ;";
    for (std::size_t i = 0; i < ex.objects.size(); ++i) {
      std::string ref = stem + "-t" + std::to_string(n + 1) +
                        (ex.objects.size() > 1
                             ? "o" + std::to_string(i + 1)
                             : "") +
                        ".svg";
      write_file_atomic(
          dir + "/" + ref,
          collage::svg_text(ex.objects[i].value.as_picture()));
      out += " " + ex.objects[i].id + ":" + ref;
    }
    out += "\n";
  }
  write_file_atomic(path, out);
}

}  // namespace talgebra::io
