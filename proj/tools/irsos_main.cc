// Copyright 2026 The irsos Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.
//
// Exit codes: 0 exact / equilibrium / certified, 1 solver or internal error,
// 2 bound only / inconclusive / not certified, 3 certified nonexistence,
// 64 bad arguments or unreadable input.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irsos/bridge.h"
#include "irsos/experiments.h"
#include "irsos/game.h"
#include "irsos/json_io.h"
#include "irsos/moment.h"
#include "irsos/nash.h"
#include "irsos/polynomial.h"
#include "irsos/structure.h"

namespace irsos {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBound = 2;
constexpr int kExitNonexistence = 3;
constexpr int kExitUsage = 64;

// Input errors map to kExitUsage.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Shared {
  std::uint64_t seed = 1;
  bool json = false;
  std::optional<double> tol;
  int max_degree = 0;
  int jobs = 1;
};

// A game tree, a single polynomial, or a list of utilities over one layout.
struct Input {
  std::string path;
  std::string kind;  // "game", "polynomial", "utilities"
  std::optional<GameTree> tree;
  std::vector<Polynomial> utilities;
};

Json ReadInput(const std::string& path) {
  try {
    return ReadJsonFile(path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

Input LoadInput(const std::string& path, bool want_game) {
  Json j = ReadInput(path);
  Input in;
  in.path = path;
  try {
    if (LooksLikeGame(j)) {
      in.kind = "game";
      in.tree = GameFromJson(j);
      Validate(*in.tree);
      in.utilities = GameToPolynomials(*in.tree);
    } else if (j.is_object() && j.contains("utilities")) {
      in.kind = "utilities";
      for (const Json& u : j.at("utilities")) {
        in.utilities.push_back(PolynomialFromJson(u));
      }
      if (in.utilities.empty()) throw ParseError("empty utilities list");
      StructurePtr s = in.utilities[0].structure();
      for (const Polynomial& u : in.utilities) {
        if (!(*u.structure() == *s)) {
          throw ParseError("utilities have different block layouts");
        }
      }
    } else {
      in.kind = "polynomial";
      in.utilities.push_back(PolynomialFromJson(j));
    }
  } catch (const InputError&) {
    throw;
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const GameValidationError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
  if (want_game && in.kind == "polynomial") {
    throw InputError(path + ": expected a game or a utilities list");
  }
  return in;
}

void Emit(const Json& j, bool json, const std::string& text) {
  if (json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

std::string FormatPoint(const BlockStructure& s, const std::vector<double>& x) {
  std::ostringstream os;
  os.precision(6);
  for (int b = 0; b < s.num_blocks(); ++b) {
    const auto& blk = s.block(b);
    if (b > 0) os << " ";
    os << "p" << blk.player + 1 << "/I" << blk.infoset + 1 << "=(";
    for (int a = 0; a < blk.size; ++a) {
      if (a > 0) os << ", ";
      os << x[blk.offset + a];
    }
    os << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string game;
  std::string poly;
  std::string mode = "auto";
  bool sos = false;
};

int RunSolve(const SolveArgs& a, const Shared& sh) {
  Input in = LoadInput(a.game.empty() ? a.poly : a.game, false);
  if (in.utilities.size() != 1) {
    throw InputError("solve needs a single-player input; use nash");
  }
  const Polynomial& u = in.utilities[0];
  const BlockStructure& s = *u.structure();
  if (s.num_players() != 1) {
    throw InputError("solve needs a single-player input; use nash");
  }
  HierarchyOptions opts;
  opts.seed = sh.seed;
  if (sh.tol) opts.tol = *sh.tol;
  opts.d_max = sh.max_degree;
  opts.compute_sos = a.sos;

  Json out;
  out["command"] = "solve";
  out["input"] = {{"path", in.path}, {"kind", in.kind}};
  out["mode"] = a.mode;
  out["seed"] = sh.seed;
  out["structure"] = StructureToJson(s);

  std::string route;
  HierarchyResult r;
  if (a.mode == "auto") {
    bool nam = in.tree ? ClassifyRecall(*in.tree).type !=
                             RecallType::kAbsentminded
                       : IsMultiAffine(u);
    out["recall"] = in.tree ? RecallTypeName(ClassifyRecall(*in.tree).type)
                            : (nam ? "multi_affine" : "polynomial");
    SosMatrixCertificate cert = CertifySosConcave({u})[0];
    out["certificate"] = cert.ToJson();
    if (cert.certified) {
      route = "sos_concave";
      r = SolveFirstLevel(u, opts);
    } else if (nam) {
      route = "vertex_restricted";
      r = RunHierarchy(u, Formulation::kVertexRestricted, opts);
    } else {
      route = "vanilla";
      r = RunHierarchy(u, Formulation::kVanilla, opts);
    }
  } else if (a.mode == "vanilla") {
    route = "vanilla";
    r = RunHierarchy(u, Formulation::kVanilla, opts);
  } else if (a.mode == "vr") {
    route = "vertex_restricted";
    r = RunHierarchy(u, Formulation::kVertexRestricted, opts);
  } else {
    route = "kkt_augmented";
    r = RunHierarchy(u, Formulation::kKktAugmented, opts);
  }
  out["route"] = route;
  out["result"] = r.ToJson(&s);
  out["value"] = r.bound ? Json(*r.bound) : Json(nullptr);
  out["exact"] = r.exact;
  const bool failed = !r.bound && !r.infeasible;
  out["status"] = r.exact ? "exact" : failed ? "error" : "bound";
  if (failed) out["error"] = "no degree produced a bound";

  std::ostringstream os;
  os.precision(10);
  os << "route: " << route << "\n";
  if (r.bound) {
    os << "value: " << *r.bound << (r.exact ? " (exact)" : " (upper bound)")
       << "\n";
  } else {
    os << "value: none\n";
  }
  if (r.exact_degree) {
    os << "order: " << *r.exact_degree << " (moment degree "
       << 2 * *r.exact_degree << ")\n";
  }
  for (const DegreeRecord& d : r.degrees) {
    os << "  d=" << d.d << " " << d.status << " moment " << d.moment_value
       << " rank " << d.rank
       << (d.flat_order ? " flat at " + std::to_string(*d.flat_order) : "")
       << "\n";
  }
  for (int k = 0; k < r.atoms.size(); ++k) {
    os << "atom " << k + 1 << " weight " << r.atoms[k].weight << ": "
       << FormatPoint(s, r.atoms[k].point) << "\n";
  }
  for (const std::string& d : r.diagnostics) os << "note: " << d << "\n";
  Emit(out, sh.json, os.str());
  if (r.exact) return kExitOk;
  return failed ? kExitError : kExitBound;
}

// ---------------------------------------------------------------------------
// nash

struct NashArgs {
  std::string game;
  std::string method = "svc";
  int max_rounds = 25;
  double eps = 1e-5;
  bool welfare = false;
};

int RunNash(const NashArgs& a, const Shared& sh) {
  Input in = LoadInput(a.game, true);
  NashOptions o;
  o.seed = sh.seed;
  o.eps = a.eps;
  o.max_rounds = a.max_rounds;
  o.welfare = a.welfare;
  if (sh.max_degree > 0) o.selector.d_max = sh.max_degree;
  if (sh.tol) {
    o.selector.tol = *sh.tol;
    o.verify.tol = *sh.tol;
  }
  o.selector.seed = sh.seed;
  o.verify.seed = sh.seed;
  NashOutcome r = a.method == "svc" ? SvcSolve(in.utilities, o)
                                    : NamOneShot(in.utilities, o);
  const BlockStructure& s = *in.utilities[0].structure();
  Json out;
  out["command"] = "nash";
  out["input"] = {{"path", in.path}, {"kind", in.kind}};
  out["seed"] = sh.seed;
  out["structure"] = StructureToJson(s);
  out["outcome"] = r.ToJson(&s);
  out["status"] = NashKindName(r.kind);

  std::ostringstream os;
  os.precision(8);
  os << "verdict: " << NashKindName(r.kind) << " (" << r.method << ")\n";
  os << "rounds: " << r.rounds.size() << ", cuts: " << r.cuts << "\n";
  if (r.kind == NashOutcome::Kind::kEquilibrium) {
    os << "equilibrium: " << FormatPoint(s, r.equilibrium) << "\n";
    for (int i = 0; i < r.gains.size(); ++i) {
      os << "omega_" << i + 1 << " = " << r.gains[i] << "\n";
    }
  }
  os << "evidence: " << r.evidence << "\n";
  Emit(out, sh.json, os.str());
  switch (r.kind) {
    case NashOutcome::Kind::kEquilibrium:
      return kExitOk;
    case NashOutcome::Kind::kNonexistence:
      return kExitNonexistence;
    default:
      return kExitBound;
  }
}

// ---------------------------------------------------------------------------
// convert

struct ConvertArgs {
  std::string direction;
  std::string in;
  std::string out;
  int player = 1;
};

int RunConvert(const ConvertArgs& a, const Shared& sh) {
  Json j = ReadInput(a.in);
  Json result;
  try {
    if (a.direction == "poly2game") {
      if (LooksLikeGame(j)) throw InputError(a.in + ": already a game");
      result = GameToJson(PolynomialToGame(PolynomialFromJson(j)));
    } else {
      if (!LooksLikeGame(j)) throw InputError(a.in + ": not a game");
      GameTree tree = GameFromJson(j);
      Validate(tree);
      if (a.player < 1 || a.player > tree.num_players) {
        throw InputError("--player out of range");
      }
      result = PolynomialToJson(GameToPolynomial(tree, a.player - 1));
    }
  } catch (const ParseError& e) {
    throw InputError(a.in + ": " + e.what());
  } catch (const GameValidationError& e) {
    throw InputError(a.in + ": " + e.what());
  }
  std::string text = result.dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(a.out);
    if (!f) throw InputError("cannot write " + a.out);
    f << text;
  }
  (void)sh;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// certify

struct CertifyArgs {
  std::string game;
  std::string poly;
  std::string kind = "auto";
  int samples = 100;
};

int RunCertify(const CertifyArgs& a, const Shared& sh) {
  Input in = LoadInput(a.game.empty() ? a.poly : a.game, false);
  CertifyOptions co;
  co.samples = a.samples;
  co.seed = sh.seed;
  Json out;
  out["command"] = "certify";
  out["input"] = {{"path", in.path}, {"kind", in.kind}};
  out["seed"] = sh.seed;
  Json certs = Json::array();
  std::ostringstream os;
  bool all = true;
  auto add = [&](const SosMatrixCertificate& c, const std::string& label) {
    Json cj = c.ToJson();
    cj["test"] = label;
    certs.push_back(cj);
    all = all && c.certified;
    os << label << ": ";
    if (c.certified) {
      os << "certified (margin " << c.margin << ")\n";
    } else if (c.falsified) {
      os << "refuted, eigenvalue " << c.witness_value << " at a sampled point\n";
    } else {
      os << "not certified (margin " << c.margin << ")\n";
    }
  };
  const bool many = in.utilities.size() > 1;
  std::string kind = a.kind;
  if (kind == "auto") kind = many ? "monotone" : "concave";
  if (kind == "concave" || (kind == "monotone" && many)) {
    auto cs = CertifySosConcave(in.utilities, co);
    for (int i = 0; i < cs.size(); ++i) {
      add(cs[i], "sos_concave player " + std::to_string(i + 1));
    }
  }
  if (kind == "monotone") {
    add(CertifySosMonotone(in.utilities, co), "sos_monotone");
  }
  if (kind == "convex") {
    if (many) throw InputError("--kind convex needs one utility");
    add(CertifySosConvex(in.utilities[0], co), "sos_convex");
  }
  out["certificates"] = certs;
  out["certified"] = all;
  out["status"] = all ? "certified" : "not_certified";
  Emit(out, sh.json, os.str());
  return all ? kExitOk : kExitBound;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string rows;
  int instances = 0;
  bool no_timing = false;
};

int RunBenchCommand(const BenchArgs& a, const Shared& sh) {
  Json j = ReadInput(a.rows);
  BenchConfig c;
  try {
    c = BenchConfigFromJson(j);
  } catch (const std::exception& e) {
    throw InputError(a.rows + ": " + e.what());
  }
  if (a.instances > 0) {
    for (auto& r : c.rows) r.instances = a.instances;
  }
  if (sh.max_degree > 0) c.hierarchy.d_max = sh.max_degree;
  if (sh.tol) c.hierarchy.tol = *sh.tol;
  c.jobs = std::max(c.jobs, sh.jobs);
  c.hierarchy.seed = sh.seed;
  BenchTable t = RunBench(c);
  Json out;
  out["command"] = "bench";
  out["input"] = {{"path", a.rows}, {"kind", "bench"}};
  out["seed"] = sh.seed;
  out["table"] = t.ToJson(!a.no_timing);
  out["text"] = t.ToText();
  out["status"] = "done";
  Emit(out, sh.json, t.ToText());
  return kExitOk;
}

void AddShared(CLI::App* app, Shared& sh) {
  app->add_option("--seed", sh.seed, "Seed for every random choice")
      ->capture_default_str();
  app->add_flag("--json", sh.json, "Emit JSON on stdout");
  app->add_option("--tol", sh.tol, "SDP tolerance");
  app->add_option("--max-degree", sh.max_degree,
                  "Largest relaxation order (0: default)")
      ->check(CLI::NonNegativeNumber);
}

void PrintError(const CLI::App& app, const Shared& sh,
                const std::string& what) {
  Json out;
  out["command"] = app.get_subcommands()[0]->get_name();
  out["seed"] = sh.seed;
  out["status"] = "error";
  out["error"] = what;
  std::cout << out.dump(2) << "\n";
}

int Main(int argc, char** argv) {
  CLI::App app{"Moment-SOS solver for imperfect-recall extensive-form games"};
  app.require_subcommand(1);
  Shared sh;

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "Ex-ante optimal strategy");
  auto* sg = solve->add_option("--game", sa.game, "Game tree JSON");
  auto* sp = solve->add_option("--poly", sa.poly, "Polynomial JSON");
  sg->excludes(sp);
  solve->add_option("--mode", sa.mode, "auto|vanilla|vr|kkt")
      ->check(CLI::IsMember({"auto", "vanilla", "vr", "kkt"}))
      ->capture_default_str();
  solve->add_flag("--sos", sa.sos, "Also solve the SOS side");
  AddShared(solve, sh);

  NashArgs na;
  CLI::App* nash = app.add_subcommand("nash", "Equilibrium search");
  nash->add_option("--game", na.game, "Game tree or utilities JSON")
      ->required();
  nash->add_option("--method", na.method, "svc|nam")
      ->check(CLI::IsMember({"svc", "nam"}))
      ->capture_default_str();
  nash->add_option("--max-rounds", na.max_rounds)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  nash->add_option("--eps", na.eps, "Gain threshold")->capture_default_str();
  nash->add_flag("--welfare", na.welfare, "Select by social welfare");
  AddShared(nash, sh);

  ConvertArgs ca;
  CLI::App* convert = app.add_subcommand("convert", "Game <-> polynomial");
  convert->add_option("direction", ca.direction, "poly2game|game2poly")
      ->required()
      ->check(CLI::IsMember({"poly2game", "game2poly"}));
  convert->add_option("--in", ca.in)->required();
  convert->add_option("--out", ca.out, "Output file (default stdout)");
  convert->add_option("--player", ca.player, "1-based, for game2poly")
      ->capture_default_str();
  AddShared(convert, sh);

  CertifyArgs cea;
  CLI::App* certify = app.add_subcommand("certify", "SOS-matrix certificates");
  auto* cg = certify->add_option("--game", cea.game, "Game or utilities JSON");
  auto* cp = certify->add_option("--poly", cea.poly, "Polynomial JSON");
  cg->excludes(cp);
  certify->add_option("--kind", cea.kind, "auto|concave|monotone|convex")
      ->check(CLI::IsMember({"auto", "concave", "monotone", "convex"}))
      ->capture_default_str();
  certify->add_option("--samples", cea.samples, "Falsification samples")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  AddShared(certify, sh);

  BenchArgs ba;
  CLI::App* bench = app.add_subcommand("bench", "Random-instance benchmark");
  bench->add_option("--rows", ba.rows, "Bench config JSON")->required();
  bench->add_option("--instances", ba.instances, "Override per-row count")
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--jobs", sh.jobs, "Parallel instances")
      ->check(CLI::PositiveNumber);
  bench->add_flag("--no-timing", ba.no_timing, "Omit timing columns in JSON");
  AddShared(bench, sh);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if ((solve->parsed() && sa.game.empty() && sa.poly.empty()) ||
      (certify->parsed() && cea.game.empty() && cea.poly.empty())) {
    std::cerr << "one of --game or --poly is required\n";
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return RunSolve(sa, sh);
    if (nash->parsed()) return RunNash(na, sh);
    if (convert->parsed()) return RunConvert(ca, sh);
    if (certify->parsed()) return RunCertify(cea, sh);
    if (bench->parsed()) return RunBenchCommand(ba, sh);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (sh.json) PrintError(app, sh, e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (sh.json) PrintError(app, sh, e.what());
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace irsos

int main(int argc, char** argv) { return irsos::Main(argc, argv); }
