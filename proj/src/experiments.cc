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

#include "irsos/experiments.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace irsos {
namespace {

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Flat copy of a polynomial for repeated evaluation.
class Evaluator {
 public:
  explicit Evaluator(const Polynomial& p) {
    for (const auto& [m, c] : p.terms()) {
      coef_.push_back(c);
      for (const auto& [v, e] : m.terms()) {
        for (int k = 0; k < e; ++k) vars_.push_back(v);
      }
      end_.push_back(vars_.size());
    }
  }

  double operator()(const std::vector<double>& x) const {
    double sum = 0;
    int pos = 0;
    for (int t = 0; t < coef_.size(); ++t) {
      double term = coef_[t];
      for (; pos < end_[t]; ++pos) term *= x[vars_[pos]];
      sum += term;
    }
    return sum;
  }

 private:
  std::vector<double> coef_;
  std::vector<int> vars_;
  std::vector<int> end_;
};

const BlockStructure& Structure(const Polynomial& u) {
  if (!u.structure()) {
    throw StructureMismatchError("needs a block structure");
  }
  return *u.structure();
}

Polynomial SampleSupport(StructurePtr s, const std::vector<MultiIndex>& pool,
                         std::mt19937_64& rng) {
  double keep = std::min(1.0, kExpectedSupport / pool.size());
  std::bernoulli_distribution pick(keep);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Polynomial p(s);
  for (const MultiIndex& m : pool) {
    if (pick(rng)) p.AddTerm(m, coef(rng));
  }
  return p;
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  int n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Polynomial RandomNamPolynomial(int l, int m, int d_u, std::uint64_t seed) {
  if (l < 1 || m < 1 || d_u < 1) {
    throw std::invalid_argument("l, m and d_u must be >= 1");
  }
  StructurePtr s = MakeStructure({std::vector<int>(l, m)});
  std::vector<MultiIndex> pool = MonomialsUpToDegree(l * m, d_u);
  std::mt19937_64 rng(seed);
  Polynomial p = SampleSupport(s, pool, rng);
  if (p.degree() < d_u) {
    std::vector<MultiIndex> top;
    for (const MultiIndex& mi : pool) {
      if (mi.degree() == d_u) top.push_back(mi);
    }
    std::uniform_int_distribution<int> which(0, top.size() - 1);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    MultiIndex mi = top[which(rng)];
    double c = 0.0;
    while (c == 0.0) c = coef(rng);
    p.AddTerm(mi, c);
  }
  return p;
}

Polynomial RandomMultiAffinePolynomial(StructurePtr structure,
                                       std::uint64_t seed) {
  const BlockStructure& s = *structure;
  std::vector<MultiIndex> pool;
  std::vector<int> choice(s.num_blocks(), -1);  // -1: block absent
  while (true) {
    std::vector<std::pair<int, int>> terms;
    for (int b = 0; b < s.num_blocks(); ++b) {
      if (choice[b] >= 0) terms.push_back({s.block(b).offset + choice[b], 1});
    }
    pool.push_back(MultiIndex(terms));
    int b = s.num_blocks() - 1;
    for (; b >= 0; --b) {
      if (++choice[b] < s.block(b).size) break;
      choice[b] = -1;
    }
    if (b < 0) break;
    if (pool.size() > 10000000) {
      throw OracleTooLargeError("too many multi-affine monomials");
    }
  }
  std::sort(pool.begin(), pool.end());
  std::mt19937_64 rng(seed);
  return SampleSupport(structure, pool, rng);
}

std::vector<double> SimplexProject(std::span<const double> v) {
  const int n = v.size();
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (int k = 0; k < n; ++k) {
    cum += u[k];
    double t = (cum - 1.0) / (k + 1);
    if (u[k] - t > 0) theta = t;
  }
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = std::max(v[k] - theta, 0.0);
  return out;
}

std::vector<double> ProjectStrategy(const BlockStructure& s,
                                    std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  for (const auto& b : s.blocks()) {
    std::vector<double> p = SimplexProject(x.subspan(b.offset, b.size));
    std::copy(p.begin(), p.end(), out.begin() + b.offset);
  }
  return out;
}

PgdResult PgdBaseline(const Polynomial& u, const PgdOptions& options,
                      std::optional<double> reference) {
  auto start = std::chrono::steady_clock::now();
  const BlockStructure& s = Structure(u);
  const int n = s.num_variables();
  Evaluator value(u);
  std::vector<Evaluator> grad;
  for (int v = 0; v < n; ++v) grad.emplace_back(u.Derivative(v));

  std::mt19937_64 rng(options.seed);
  std::exponential_distribution<double> e(1.0);
  PgdResult r;
  r.best_value = -1e300;
  std::vector<double> x(n), y(n);
  for (int k = 0; k < options.restarts; ++k) {
    for (const auto& b : s.blocks()) {
      double sum = 0;
      for (int a = 0; a < b.size; ++a) sum += x[b.offset + a] = e(rng);
      for (int a = 0; a < b.size; ++a) x[b.offset + a] /= sum;
    }
    int it = 0;
    for (; it < options.max_iter; ++it) {
      for (int v = 0; v < n; ++v) y[v] = x[v] + options.step * grad[v](x);
      y = ProjectStrategy(s, y);
      double move = 0;
      for (int v = 0; v < n; ++v) move += (y[v] - x[v]) * (y[v] - x[v]);
      std::swap(x, y);
      if (std::sqrt(move) < options.tol) {
        ++it;
        break;
      }
    }
    double val = value(x);
    r.values.push_back(val);
    r.iterations.push_back(it);
    if (val > r.best_value) {
      r.best_value = val;
      r.best_point = x;
    }
  }
  if (reference) {
    int hits = 0;
    for (double v : r.values) hits += v >= *reference - options.success_tol;
    r.success_fraction =
        r.values.empty() ? 0.0 : static_cast<double>(hits) / r.values.size();
  }
  r.seconds = Seconds(start);
  return r;
}

OracleResult VertexOracle(const Polynomial& u, long long cap) {
  const BlockStructure& s = Structure(u);
  long long total = 1;
  for (const auto& b : s.blocks()) {
    total *= b.size;
    if (total > cap) throw OracleTooLargeError("too many pure profiles");
  }
  Evaluator f(u);
  OracleResult r;
  r.value = -1e300;
  std::vector<int> choice(s.num_blocks(), 0);
  std::vector<double> x(s.num_variables());
  for (long long k = 0; k < total; ++k) {
    std::fill(x.begin(), x.end(), 0.0);
    for (int b = 0; b < s.num_blocks(); ++b) x[s.block(b).offset + choice[b]] = 1;
    double v = f(x);
    if (v > r.value) r.value = v, r.point = x;
    for (int b = s.num_blocks() - 1; b >= 0; --b) {
      if (++choice[b] < s.block(b).size) break;
      choice[b] = 0;
    }
  }
  r.evaluated = total;
  return r;
}

OracleResult GridOracle(const Polynomial& u, int resolution, long long cap) {
  const BlockStructure& s = Structure(u);
  if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  // Grid points of one block: compositions of `resolution` into size parts.
  std::vector<std::vector<std::vector<double>>> grids;
  long long total = 1;
  for (const auto& b : s.blocks()) {
    double count = 1;
    for (int k = 1; k < b.size; ++k) {
      count = count * (resolution + k) / k;
    }
    if (count * total > cap) throw OracleTooLargeError("grid too large");
    std::vector<std::vector<double>> pts;
    std::vector<int> c(b.size, 0);
    c[0] = resolution;
    while (true) {
      std::vector<double> p(b.size);
      for (int a = 0; a < b.size; ++a) p[a] = double(c[a]) / resolution;
      pts.push_back(p);
      // Next composition in reverse lexicographic order.
      int j = b.size - 2;
      while (j >= 0 && c[j] == 0) --j;
      if (j < 0) break;
      --c[j];
      int rest = 0;
      for (int a = j + 1; a < b.size; ++a) rest += c[a], c[a] = 0;
      c[j + 1] = rest + 1;
    }
    total *= pts.size();
    grids.push_back(std::move(pts));
  }
  Evaluator f(u);
  OracleResult r;
  r.value = -1e300;
  std::vector<int> idx(grids.size(), 0);
  std::vector<double> x(s.num_variables());
  for (long long k = 0; k < total; ++k) {
    for (int b = 0; b < grids.size(); ++b) {
      const auto& p = grids[b][idx[b]];
      std::copy(p.begin(), p.end(), x.begin() + s.block(b).offset);
    }
    double v = f(x);
    if (v > r.value) r.value = v, r.point = x;
    for (int b = grids.size() - 1; b >= 0; --b) {
      if (++idx[b] < grids[b].size()) break;
      idx[b] = 0;
    }
  }
  r.evaluated = total;
  return r;
}

BenchConfig BenchConfigFromJson(const Json& j) {
  BenchConfig c;
  for (const Json& r : j.at("rows")) {
    BenchRowConfig row;
    row.l = r.at("l").get<int>();
    row.m = r.at("m").get<int>();
    row.d_u = r.at("d_u").get<int>();
    row.instances = r.value("instances", 50);
    row.seed = r.value("seed", std::uint64_t{1});
    if (row.l < 1 || row.m < 1 || row.d_u < 1 || row.instances < 1) {
      throw std::invalid_argument("bench rows need positive l, m, d_u");
    }
    c.rows.push_back(row);
  }
  if (j.contains("pgd")) {
    const Json& p = j["pgd"];
    c.pgd.restarts = p.value("restarts", c.pgd.restarts);
    c.pgd.step = p.value("step", c.pgd.step);
    c.pgd.tol = p.value("tol", c.pgd.tol);
    c.pgd.max_iter = p.value("max_iter", c.pgd.max_iter);
    c.pgd.seed = p.value("seed", c.pgd.seed);
  }
  if (j.contains("max_order")) c.hierarchy.d_max = j["max_order"].get<int>();
  c.extra_orders = j.value("extra_orders", c.extra_orders);
  c.jobs = j.value("jobs", 1);
  return c;
}

namespace {

BenchInstance RunInstance(const BenchRowConfig& row, int k,
                          const BenchConfig& config) {
  BenchInstance inst;
  inst.seed = row.seed * 1000003ULL + k;
  try {
    Polynomial u = RandomNamPolynomial(row.l, row.m, row.d_u, inst.seed);
    SemiAlgebraicSet set = SimplexSet(u.structure());
    HierarchyOptions opts = config.hierarchy;
    if (opts.d_max == 0) opts.d_max = set.MinimalOrder(u) + config.extra_orders;
    HierarchyResult h = SolvePop(u, set, opts);
    inst.sos_seconds = h.seconds;
    inst.exact = h.exact;
    inst.exact_order = h.exact_degree;
    if (h.bound) inst.value = *h.bound;
    PgdOptions pgd = config.pgd;
    pgd.seed = config.pgd.seed + inst.seed;
    PgdResult p = PgdBaseline(
        u, pgd, h.exact ? std::optional<double>(inst.value) : std::nullopt);
    inst.pgd_best = p.best_value;
    inst.pgd_success = p.success_fraction.value_or(0.0);
    inst.pgd_seconds = p.seconds;
    if (!h.exact) {
      inst.error = h.diagnostics.empty() ? "not exact" : h.diagnostics.back();
    }
  } catch (const std::exception& e) {
    inst.error = e.what();
  }
  return inst;
}

}  // namespace

BenchTable RunBench(const BenchConfig& config) {
  BenchTable table;
  for (const BenchRowConfig& row : config.rows) {
    BenchRow out;
    out.config = row;
    out.instances.resize(row.instances);
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int k = next++; k < row.instances; k = next++) {
        out.instances[k] = RunInstance(row, k, config);
      }
    };
    int jobs = std::max(1, std::min(config.jobs, row.instances));
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<double> sos_t, pgd_t;
    double d_sum = 0, opt_sum = 0;
    for (const BenchInstance& inst : out.instances) {
      sos_t.push_back(inst.sos_seconds);
      pgd_t.push_back(inst.pgd_seconds);
      if (!inst.exact) continue;
      ++out.successes;
      int degree = 2 * *inst.exact_order;
      d_sum += degree;
      if (degree <= row.d_u) ++out.exact_at_du;
      opt_sum += inst.pgd_success;
    }
    if (out.successes > 0) {
      out.d_sos = d_sum / out.successes;
      out.opt_percent = 100.0 * opt_sum / out.successes;
    }
    out.sos_seconds = Median(sos_t);
    out.pgd_seconds = Median(pgd_t);
    table.rows.push_back(std::move(out));
  }
  return table;
}

Json BenchTable::ToJson(bool with_timing) const {
  Json j;
  j["support"] = {{"rule", "each monomial kept with probability "
                           "min(1, 30 / #monomials)"},
                  {"expected_terms", kExpectedSupport}};
  Json rs = Json::array();
  for (const BenchRow& r : rows) {
    Json rj;
    rj["l"] = r.config.l;
    rj["m"] = r.config.m;
    rj["variables"] = r.config.l * r.config.m;
    rj["d_u"] = r.config.d_u;
    rj["instances"] = r.config.instances;
    rj["seed"] = r.config.seed;
    rj["exact"] = r.successes;
    rj["exact_at_d_u"] = r.exact_at_du;
    rj["d_sos"] = r.d_sos;
    rj["opt_percent"] = r.opt_percent;
    if (with_timing) {
      rj["sos_seconds"] = r.sos_seconds;
      rj["pgd_seconds"] = r.pgd_seconds;
    }
    Json is = Json::array();
    for (const BenchInstance& inst : r.instances) {
      Json ij;
      ij["seed"] = inst.seed;
      ij["exact"] = inst.exact;
      ij["order"] = inst.exact_order ? Json(*inst.exact_order) : Json(nullptr);
      ij["value"] = inst.value;
      ij["pgd_best"] = inst.pgd_best;
      ij["pgd_success"] = inst.pgd_success;
      if (with_timing) {
        ij["sos_seconds"] = inst.sos_seconds;
        ij["pgd_seconds"] = inst.pgd_seconds;
      }
      if (!inst.error.empty()) ij["error"] = inst.error;
      is.push_back(ij);
    }
    rj["per_instance"] = is;
    rs.push_back(rj);
  }
  j["rows"] = rs;
  return j;
}

std::string BenchTable::ToText() const {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%3s %3s %4s | %6s %12s | %12s %8s | %s\n",
                "l", "m", "d_u", "d_SOS", "SOS time (s)", "PGD time (s)",
                "OPT (%)", "exact");
  os << line;
  for (const BenchRow& r : rows) {
    std::snprintf(line, sizeof line,
                  "%3d %3d %4d | %6.2f %12.3f | %12.3f %8.2f | %d/%d\n",
                  r.config.l, r.config.l * r.config.m, r.config.d_u, r.d_sos,
                  r.sos_seconds, r.pgd_seconds, r.opt_percent, r.successes,
                  r.config.instances);
    os << line;
  }
  return os.str();
}

}  // namespace irsos
