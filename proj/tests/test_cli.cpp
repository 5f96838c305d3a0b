#include "doctest.h"

#include "luka/cli.hpp"
#include "luka/json_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace luka;

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "luka");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("luka_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string file(const std::string& name, const std::string& text) const {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string read(const std::string& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

 private:
  fs::path dir_;
};

std::string example(const char* a, const char* b, const char* c) {
  return std::string("x1 ; ") + a + "\nx2 ; " + b + "\nx1 + x2 ; " + c + "\n";
}

}  // namespace

TEST_CASE("coherence command exit codes and certificates") {
  Scratch tmp;
  const auto strict = tmp.file("strict.book", example("1/2", "1/2", "3/4"));
  const auto edge = tmp.file("edge.book", "# boundary\n" + example("1/2", "1/2", "1"));
  const auto bad = tmp.file("bad.book", example("1", "1", "1/2"));

  CHECK(run({"coherence", "--strict", strict}).code == 0);
  CHECK(run({"coherence", edge}).code == 0);

  const Run e = run({"coherence", "--strict", edge, "--certificate", tmp.path("cert.json")});
  CHECK(e.code == 1);
  CHECK(e.json()["result"]["arm"] == "CoherentNotStrict");
  CHECK(e.json()["result"]["sigma"] == Json::array({"0", "0", "-1"}));
  CHECK(e.json()["certificate_verified"] == true);
  CHECK(Json::parse(Scratch::read(tmp.path("cert.json"))) == e.json()["result"]);

  const Run b = run({"coherence", bad, "--complex", tmp.path("complex.json")});
  CHECK(b.code == 1);
  CHECK(b.json()["result"]["verdict"] == "incoherent");
  CHECK(b.json()["certificate_verified"] == true);
  CHECK(complex_from_json(Json::parse(Scratch::read(tmp.path("complex.json")))).vertex_count() == 5);

  CHECK(run({"coherence", tmp.path("missing.book")}).code == 2);
  CHECK(run({"coherence", tmp.file("syntax.book", "x1 + ; 1/2\n")}).code == 2);
  CHECK(run({"coherence", tmp.file("range.book", "x1 ; 3/2\n")}).code == 2);
  CHECK(run({"coherence"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
}

TEST_CASE("reports are deterministic") {
  Scratch tmp;
  const auto book = tmp.file("b.book", example("1/2", "1/3", "3/4"));
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"coherence", "--strict", book},
           {"theory", "--book", book},
           {"prove", "--phi", "x1 & x2", "--psi", "x1 * x2"},
           {"triangulate", "x1 + x2", "x1 -> x2"},
           {"validity", "x1 | ~x1"},
       }) {
    const Run a = run(args);
    const Run b = run(args);
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);
    CHECK_FALSE(a.out.empty());
  }
}

TEST_CASE("state sessions") {
  Scratch tmp;
  const auto book = tmp.file("half.book", "x1 ; 1/2\n");
  const auto session = tmp.path("s.json");
  CHECK(run({"state", "open", book, "--session", session}).code == 0);
  CHECK(run({"state", "eval", "x1", "--session", session}).json()["value"] == "1/2");
  CHECK(run({"state", "eval", "1", "--session", session}).json()["value"] == "1");

  const Run ext = run({"state", "extend", "x1 + x1", "--session", session});
  CHECK(ext.code == 0);
  CHECK(ext.json()["value"] == "2/3");
  CHECK(run({"state", "eval", "x1+x1", "--session", session}).json()["value"] == "2/3");
  CHECK(Json::parse(Scratch::read(session))["history"].size() == 1);

  const auto edge = tmp.file("edge.book", example("1/2", "1/2", "1"));
  const Run refused = run({"state", "open", edge, "--session", tmp.path("t.json")});
  CHECK(refused.code == 1);
  CHECK(refused.json()["result"]["arm"] == "CoherentNotStrict");
  CHECK_FALSE(fs::exists(tmp.path("t.json")));

  CHECK(run({"state", "eval", "x2", "--session", session}).code == 2);
  CHECK(run({"state", "eval", "x1", "--session", tmp.path("none.json")}).code == 2);
  auto doc = Json::parse(Scratch::read(session));
  doc["history"][0][1] = "1/2";
  std::ofstream(session) << doc.dump();
  CHECK(run({"state", "eval", "x1", "--session", session}).code == 2);
}

TEST_CASE("prove, theory, triangulate and validity") {
  const Run two = run({"prove", "--phi", "~x1", "--psi", "~(x1+x1)"});
  CHECK(two.code == 0);
  CHECK(two.json() == Json::parse(R"j({"phi": "~x1", "psi": "~(x1 + x1)", "n": 2, "valid_at_n": true})j"));
  CHECK(run({"prove", "--phi", "x1", "--psi", "x1"}).json()["n"] == 1);
  const Run none = run({"prove", "--phi", "x1+x1", "--psi", "x1"});
  CHECK(none.code == 1);
  CHECK(none.json()["n"].is_null());
  CHECK(run({"prove", "--phi", "x1 +", "--psi", "x1"}).code == 2);

  Scratch tmp;
  const Run th = run({"theory", "--book", tmp.file("b.book", example("1/2", "1/2", "3/4"))});
  CHECK(th.code == 0);
  const Json t = th.json();
  CHECK(t["strict"] == true);
  CHECK(t["coherent"] == true);
  CHECK(t["exponent_boundary"].is_null());
  CHECK(t["verification"] == Json::parse(R"({"pi_beta_oneset": true, "pi_phi_oneset": true, "pi_rb_oneset": true})"));
  CHECK(t["risk_polytope"]["extremals"].size() == 4);
  CHECK(parse(t["pi_phi"].get<std::string>()).arity() == 3);

  const Run tri = run({"triangulate", "x1 + x2"});
  CHECK(tri.json()["regular"] == true);
  CHECK(tri.json()["complex"]["simplexes"].size() == 4);
  CHECK(run({"validity", "x1 -> x1"}).code == 0);
  const Run v = run({"validity", "x1 + x1"});
  CHECK(v.code == 1);
  CHECK(v.json()["oneset"].size() == 1);
}
