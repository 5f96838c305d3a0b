#include "luka/cli.hpp"

#include "luka/json_io.hpp"
#include "luka/logic.hpp"

#include "CLI11.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

namespace luka {

namespace {

// Decision reached; the report is printed and the exit code is 1.
struct Negative {
  Json report;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out.flush()) throw Error("cannot write " + path);
}

Book read_book(const std::string& path) {
  try {
    return parse_book(read_file(path));
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json complex_stats(const RegularComplex& c) {
  return Json{{"dimension", c.dimension()}, {"vertices", c.vertex_count()}, {"simplexes", c.simplex_count()}};
}

Json optional_int(const std::optional<int>& n) { return n ? Json(*n) : Json(nullptr); }

// Exclusive advisory lock held for the lifetime of the object.
class FileLock {
 public:
  explicit FileLock(const std::string& path) : fd_(::open(path.c_str(), O_RDWR)) {
    if (fd_ < 0) throw Error("cannot open session " + path);
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw Error("cannot lock session " + path);
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_;
};

Json parse_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

// Commands -------------------------------------------------------------------

struct CoherenceArgs {
  std::string book;
  bool strict = false;
  std::string certificate;
  std::string complex;
};

Json cmd_coherence(const CoherenceArgs& a) {
  const Book book = read_book(a.book);
  const RegularComplex c = linearize(book.formulas(), book.arity());
  const Verdict v = a.strict ? decide_strict(book, c) : decide_coherent(book, c);
  Json report{{"command", "coherence"},
              {"book", a.book},
              {"strict", a.strict},
              {"result", verdict_to_json(v, c)},
              {"certificate_verified", verify_certificate(v, book, c)},
              {"complex", complex_stats(c)}};
  if (!a.certificate.empty()) write_file(a.certificate, dump(verdict_to_json(v, c)));
  if (!a.complex.empty()) write_file(a.complex, dump(complex_to_json(c)));
  const bool positive = a.strict ? is_strict(v) : is_coherent(v);
  if (!positive) throw Negative{std::move(report)};
  return report;
}

struct StateArgs {
  std::string book;
  std::string session;
  std::string formula;
  int dimension = 0;
};

Json cmd_state_open(const StateArgs& a) {
  const Book book = read_book(a.book);
  try {
    const auto s = ExtensionSession::open(book, a.dimension);
    write_file(a.session, dump(session_to_json(s)));
    return Json{{"command", "state open"},
                {"book", a.book},
                {"session", a.session},
                {"complex", complex_stats(s.complex())},
                {"lambda", session_to_json(s)["lambda"]}};
  } catch (const NotStrictlyCoherent& e) {
    const RegularComplex c = linearize(book.formulas(), a.dimension == 0 ? book.arity() : a.dimension);
    throw Negative{Json{{"command", "state open"},
                        {"book", a.book},
                        {"error", e.what()},
                        {"result", verdict_to_json(decide_strict(book, c), c)}}};
  }
}

Json cmd_state_extend(const StateArgs& a) {
  const Formula g = parse(a.formula);
  FileLock lock(a.session);
  ExtensionSession s = session_from_json(parse_json_file(a.session));
  const Rational value = s.extend(g);
  write_file(a.session, dump(session_to_json(s)));
  return Json{{"command", "state extend"},
              {"session", a.session},
              {"formula", render(g)},
              {"value", rational_to_json(value)},
              {"complex", complex_stats(s.complex())}};
}

Json cmd_state_eval(const StateArgs& a) {
  const Formula g = parse(a.formula);
  const ExtensionSession s = session_from_json(parse_json_file(a.session));
  return Json{{"command", "state eval"},
              {"session", a.session},
              {"formula", render(g)},
              {"value", rational_to_json(s.eval(g))}};
}

struct ProveArgs {
  std::string phi;
  std::string psi;
  int dimension = 0;
};

Json cmd_prove(const ProveArgs& a) {
  const Formula phi = parse(a.phi);
  const Formula psi = parse(a.psi);
  const auto n = deduction_exponent(phi, psi, a.dimension);
  const bool valid = n && is_valid(Formula::implies(power(phi, *n), psi), a.dimension);
  Json report{{"phi", render(phi)}, {"psi", render(psi)}, {"n", optional_int(n)}, {"valid_at_n", valid}};
  if (!n) throw Negative{std::move(report)};
  return report;
}

Json cmd_theory(const std::string& path) {
  const Book book = read_book(path);
  const CoherenceTheory theory(book.formulas());
  const LogicVerdict lv = logic_coherence_check(theory, book.values());
  const Polytope& d = theory.risk().polytope;
  const int k = theory.dimension();
  std::vector<Polytope> facets;
  for (const auto& f : d.facets()) {
    std::vector<VectorQ> pts;
    for (auto i : f.vertices) pts.push_back(d.extremals()[i]);
    facets.push_back(convex_hull(pts));
  }
  Json events = Json::array();
  for (const auto& f : theory.events()) events.push_back(render(f));
  return Json{
      {"command", "theory"},
      {"book", path},
      {"events", std::move(events)},
      {"risk_polytope", polytope_to_json(d)},
      {"pi_beta", render(lv.pi_beta)},
      {"pi_phi", render(theory.polytope_formula())},
      {"pi_rb", render(theory.boundary_formula())},
      {"verification",
       Json{{"pi_beta_oneset", oneset_equals(lv.pi_beta, {convex_hull({book.values()})}, k)},
            {"pi_phi_oneset", oneset_equals(theory.polytope_formula(), {d}, k)},
            {"pi_rb_oneset", oneset_equals(theory.boundary_formula(), facets, k)}}},
      {"exponent_polytope", optional_int(lv.exponent_polytope)},
      {"exponent_boundary", optional_int(lv.exponent_boundary)},
      {"coherent", lv.coherent},
      {"strict", lv.strict},
  };
}

struct FormulaArgs {
  std::vector<std::string> formulas;
  int dimension = 0;
  std::string output;
};

Json cmd_triangulate(const FormulaArgs& a) {
  std::vector<Formula> fs;
  for (const auto& t : a.formulas) fs.push_back(parse(t));
  const RegularComplex c = linearize(fs, a.dimension);
  const ComplexReport check = validate(c);
  Json formulas = Json::array();
  for (const auto& f : fs) formulas.push_back(render(f));
  Json report{{"command", "triangulate"},
              {"formulas", std::move(formulas)},
              {"regular", check.regular},
              {"covers", check.covers},
              {"manifold", check.manifold},
              {"stats", complex_stats(c)}};
  if (a.output.empty()) {
    report["complex"] = complex_to_json(c);
  } else {
    write_file(a.output, dump(complex_to_json(c)));
  }
  return report;
}

Json cmd_validity(const FormulaArgs& a) {
  const Formula f = parse(a.formulas.front());
  const bool valid = is_valid(f, a.dimension);
  Json oneset = Json::array();
  for (const auto& p : mod_of(f, a.dimension).pieces) {
    Json pts = Json::array();
    for (const auto& x : p.extremals()) pts.push_back(point_to_json(x));
    oneset.push_back(std::move(pts));
  }
  Json report{{"command", "validity"}, {"formula", render(f)}, {"valid", valid}, {"oneset", std::move(oneset)}};
  if (!valid) throw Negative{std::move(report)};
  return report;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact coherence, states and provability for Lukasiewicz events", "luka"};
  app.require_subcommand(1);

  CoherenceArgs coherence;
  auto* c_cmd = app.add_subcommand("coherence", "decide (strict) coherence of a book file");
  c_cmd->add_option("book", coherence.book, "book file: one '<formula> ; <rational>' per line")->required();
  c_cmd->add_flag("--strict", coherence.strict, "decide strict coherence");
  c_cmd->add_option("--certificate", coherence.certificate, "write the verdict JSON here");
  c_cmd->add_option("--complex", coherence.complex, "write the linearizing complex JSON here");

  StateArgs state;
  auto* s_cmd = app.add_subcommand("state", "faithful-state sessions");
  s_cmd->require_subcommand(1);
  auto* s_open = s_cmd->add_subcommand("open", "open a session on a strictly coherent book");
  s_open->add_option("book", state.book, "book file")->required();
  s_open->add_option("--session", state.session, "session file to write")->required();
  s_open->add_option("--dimension", state.dimension, "number of variables (default: book arity)");
  auto* s_extend = s_cmd->add_subcommand("extend", "extend a session by a formula");
  s_extend->add_option("formula", state.formula, "formula to add")->required();
  s_extend->add_option("--session", state.session, "session file")->required();
  auto* s_eval = s_cmd->add_subcommand("eval", "evaluate the session state on a formula");
  s_eval->add_option("formula", state.formula, "formula")->required();
  s_eval->add_option("--session", state.session, "session file")->required();

  ProveArgs prove;
  auto* p_cmd = app.add_subcommand("prove", "least n with phi^n -> psi valid");
  p_cmd->add_option("--phi", prove.phi, "premise")->required();
  p_cmd->add_option("--psi", prove.psi, "conclusion")->required();
  p_cmd->add_option("--dimension", prove.dimension, "number of variables");

  std::string theory_book;
  auto* t_cmd = app.add_subcommand("theory", "formulas of the book, its risk polytope and its boundary");
  t_cmd->add_option("--book", theory_book, "book file")->required();

  FormulaArgs tri;
  auto* tr_cmd = app.add_subcommand("triangulate", "regular complex linearizing formulas");
  tr_cmd->add_option("formulas", tri.formulas, "formulas")->required();
  tr_cmd->add_option("--dimension", tri.dimension, "number of variables");
  tr_cmd->add_option("--output", tri.output, "write the complex JSON here instead of the report");

  FormulaArgs val;
  auto* v_cmd = app.add_subcommand("validity", "is a formula identically 1");
  v_cmd->add_option("formula", val.formulas, "formula")->required()->expected(1);
  v_cmd->add_option("--dimension", val.dimension, "number of variables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    Json report;
    if (*c_cmd) {
      report = cmd_coherence(coherence);
    } else if (*s_open) {
      report = cmd_state_open(state);
    } else if (*s_extend) {
      report = cmd_state_extend(state);
    } else if (*s_eval) {
      report = cmd_state_eval(state);
    } else if (*p_cmd) {
      report = cmd_prove(prove);
    } else if (*t_cmd) {
      report = cmd_theory(theory_book);
    } else if (*tr_cmd) {
      report = cmd_triangulate(tri);
    } else {
      report = cmd_validity(val);
    }
    out << dump(report);
    return 0;
  } catch (const Negative& n) {
    out << dump(n.report);
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace luka
