// mirec command line driver: exact construction and verification of
// multi-indexed Racah / q-Racah polynomial families.
//
// Subcommands:
//   gen     emit P_{D,0..nmax} as exact rational coefficient lists
//   verify  run a named verification suite; exit 0 iff every check passes
//   sweep   run a suite over a parameter grid, one record per instance
//   bench   compare determinant vs. recurrence generation costs
//
// All numeric input and output is exact (strings like "-3/7"); nothing is
// ever rounded. JSON reports carry "schema": "mirec/1".

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mirec/aw_bridge.hpp"
#include "mirec/closed_forms.hpp"
#include "mirec/closure.hpp"
#include "mirec/errors.hpp"
#include "mirec/multi_index.hpp"
#include "mirec/parallel.hpp"
#include "mirec/params.hpp"
#include "mirec/poly.hpp"
#include "mirec/qracah.hpp"
#include "mirec/rational.hpp"
#include "mirec/recurrence_const.hpp"
#include "mirec/recurrence_var.hpp"

using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Resolved job configuration (defaults < --config file < command line flags)
// ---------------------------------------------------------------------------

struct Job {
  std::string family = "R";  // "R" | "qR"
  std::map<std::string, mirec::Rational> params;  // keys among a,b,c,d
  mirec::Rational q{0};
  bool has_q = false;
  std::optional<long> N;
  bool indeterminate = false;
  std::vector<long> D;
  std::vector<mirec::Rational> Y{mirec::Rational(1)};  // coeffs in eta, low->high
  long nmax = 6;
  std::string suite = "all";
  std::string out;  // empty = stdout
  std::string format = "json";
  std::uint64_t seed = 0;
  // sweep only: parameter name -> list of values (cartesian product)
  std::vector<std::pair<std::string, std::vector<mirec::Rational>>> grid;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

std::string canonical_family(const std::string& f) {
  if (f == "R" || f == "racah" || f == "Racah") return "R";
  if (f == "qR" || f == "q_racah" || f == "q-racah" || f == "qracah")
    return "qR";
  throw mirec::ConfigError("unknown family '" + f + "' (use R or qR)");
}

// Accepts "a=1/2,b=3,..." or a bare list "1/2,3,..." (4 values: a,b,c,d;
// 3 values: b,c,d for the finite mode).
void apply_params(Job& job, const std::string& text) {
  const std::vector<std::string> items = split_csv(text);
  if (items.empty()) throw mirec::ConfigError("empty --params");
  const bool named = items.front().find('=') != std::string::npos;
  if (named) {
    for (const auto& item : items) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw mirec::ConfigError("bad --params entry '" + item + "'");
      const std::string key = item.substr(0, eq);
      if (key != "a" && key != "b" && key != "c" && key != "d")
        throw mirec::ConfigError("unknown parameter name '" + key + "'");
      job.params[key] = mirec::Rational::parse(item.substr(eq + 1));
    }
    return;
  }
  if (items.size() == 4) {
    const char* names[] = {"a", "b", "c", "d"};
    for (std::size_t i = 0; i < 4; ++i)
      job.params[names[i]] = mirec::Rational::parse(items[i]);
  } else if (items.size() == 3) {
    const char* names[] = {"b", "c", "d"};
    for (std::size_t i = 0; i < 3; ++i)
      job.params[names[i]] = mirec::Rational::parse(items[i]);
  } else {
    throw mirec::ConfigError(
        "--params needs 3 (b,c,d) or 4 (a,b,c,d) values, or name=value pairs");
  }
}

void apply_config_file(Job& job, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mirec::ConfigError("cannot open config file '" + path + "'");
  ordered_json cfg;
  try {
    in >> cfg;
  } catch (const std::exception& e) {
    throw mirec::ConfigError("config parse error: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw mirec::ConfigError("config must be an object");
  for (const auto& [key, value] : cfg.items()) {
    if (key == "family") {
      job.family = canonical_family(value.get<std::string>());
    } else if (key == "params") {
      if (!value.is_object())
        throw mirec::ConfigError("config 'params' must be an object");
      for (const auto& [pk, pv] : value.items()) {
        if (pk != "a" && pk != "b" && pk != "c" && pk != "d")
          throw mirec::ConfigError("unknown parameter name '" + pk + "'");
        job.params[pk] = mirec::Rational::parse(pv.get<std::string>());
      }
    } else if (key == "q") {
      job.q = mirec::Rational::parse(value.get<std::string>());
      job.has_q = true;
    } else if (key == "N") {
      job.N = value.get<long>();
    } else if (key == "indeterminate") {
      job.indeterminate = value.get<bool>();
    } else if (key == "D") {
      job.D = value.get<std::vector<long>>();
    } else if (key == "Y") {
      job.Y.clear();
      for (const auto& c : value)
        job.Y.push_back(mirec::Rational::parse(c.get<std::string>()));
    } else if (key == "nmax") {
      job.nmax = value.get<long>();
    } else if (key == "suite") {
      job.suite = value.get<std::string>();
    } else if (key == "out") {
      job.out = value.get<std::string>();
    } else if (key == "format") {
      job.format = value.get<std::string>();
    } else if (key == "seed") {
      job.seed = value.get<std::uint64_t>();
    } else if (key == "grid") {
      if (!value.is_object())
        throw mirec::ConfigError("config 'grid' must be an object");
      job.grid.clear();
      for (const auto& [gk, gv] : value.items()) {
        if (gk != "a" && gk != "b" && gk != "c" && gk != "d" && gk != "q")
          throw mirec::ConfigError("grid over unknown parameter '" + gk + "'");
        std::vector<mirec::Rational> vals;
        for (const auto& c : gv)
          vals.push_back(mirec::Rational::parse(c.get<std::string>()));
        if (vals.empty())
          throw mirec::ConfigError("grid axis '" + gk + "' is empty");
        job.grid.emplace_back(gk, std::move(vals));
      }
    } else {
      throw mirec::ConfigError("unknown config key '" + key + "'");
    }
  }
}

mirec::ParameterSet make_params(const Job& job) {
  const bool is_q = job.family == "qR";
  if (is_q && !job.has_q)
    throw mirec::ConfigError("family qR needs --q (base, 0 < q < 1)");
  auto need = [&](const char* k) -> const mirec::Rational& {
    const auto it = job.params.find(k);
    if (it == job.params.end())
      throw mirec::ConfigError(std::string("missing parameter '") + k + "'");
    return it->second;
  };
  if (job.N && job.params.count("a"))
    throw mirec::ConfigError("give either --N or parameter a, not both");
  if (job.N) {
    if (*job.N < 1) throw mirec::ConfigError("--N must be >= 1");
    if (is_q)
      return mirec::ParameterSet::finite_q_racah(*job.N, need("b"), need("c"),
                                                 need("d"), job.q);
    return mirec::ParameterSet::finite_racah(*job.N, need("b"), need("c"),
                                             need("d"));
  }
  if (!job.indeterminate && !job.params.count("a"))
    throw mirec::ConfigError(
        "choose a mode: --N <int> (finite) or --indeterminate with "
        "parameter a");
  if (is_q)
    return mirec::ParameterSet::q_racah(need("a"), need("b"), need("c"),
                                        need("d"), job.q);
  return mirec::ParameterSet::racah(need("a"), need("b"), need("c"),
                                    need("d"));
}

mirec::Poly make_Y(const Job& job) {
  mirec::Poly y(job.Y, 0);
  if (y.is_zero()) throw mirec::ConfigError("Y must be a nonzero polynomial");
  return y;
}

ordered_json params_json(const mirec::ParameterSet& p) {
  ordered_json j;
  j["a"] = p.a.str();
  j["b"] = p.b.str();
  j["c"] = p.c.str();
  j["d"] = p.d.str();
  if (p.family == mirec::Family::q_racah) j["q"] = p.q.str();
  return j;
}

ordered_json job_json(const Job& job, const mirec::ParameterSet& p) {
  ordered_json j;
  j["family"] = job.family;
  j["params"] = params_json(p);
  j["mode"] = job.N ? "finite" : "indeterminate";
  if (job.N) j["N"] = *job.N;
  j["D"] = job.D;
  ordered_json y = ordered_json::array();
  for (const auto& c : job.Y) y.push_back(c.str());
  j["Y"] = y;
  j["nmax"] = job.nmax;
  return j;
}

void emit(const Job& job, const std::string& text) {
  if (job.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(job.out, std::ios::binary);
  if (!f) throw mirec::ConfigError("cannot write to '" + job.out + "'");
  f << text;
}

// ---------------------------------------------------------------------------
// Check plumbing
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string id;
  std::string status;  // "pass" | "fail" | "skip"
  std::string witness;
};

template <class Fn>
CheckResult run_check(const std::string& id, Fn&& fn,
                      bool irrational_skips = false) {
  try {
    fn();
    return {id, "pass", ""};
  } catch (const mirec::IrrationalShift& e) {
    return {id, irrational_skips ? "skip" : "fail", e.what()};
  } catch (const std::exception& e) {
    return {id, "fail", e.what()};
  }
}

void fail_unless(bool ok, const std::string& what,
                 const std::string& witness) {
  if (!ok) throw mirec::VerificationFailure(what, witness);
}

// ---------------------------------------------------------------------------
// Shared builders
// ---------------------------------------------------------------------------

long xi_degree(const Job& job) {
  mirec::IndexSet D(job.D);
  return D.ell();
}

// Expansion rows r_{n,k}: inner products in the finite mode (every n on the
// grid), leading-term elimination otherwise.
std::vector<mirec::CoeffRow> make_rows(const mirec::DeformedFamily& fam,
                                       const mirec::DeformedOperator* op,
                                       const mirec::Poly& X, long want) {
  std::vector<mirec::CoeffRow> rows;
  if (op) {
    const long top = std::min(want, op->N());
    for (long n = 0; n <= top; ++n)
      rows.push_back(mirec::extract_rnk_inner(fam, *op, X, n));
  } else {
    for (long n = 0; n <= want; ++n)
      rows.push_back(mirec::extract_rnk_elimination(fam, X, n));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

std::vector<CheckResult> suite_family(const Job& job) {
  std::vector<CheckResult> out;
  const mirec::ParameterSet p = make_params(job);
  const mirec::IndexSet D(job.D);
  const mirec::DeformedFamily fam(p, D);
  const long nmax =
      p.finite_N() ? std::min(job.nmax, *p.finite_N()) : job.nmax;

  out.push_back(run_check("family.normalization", [&] {
    for (long n = 0; n <= nmax; ++n)
      fail_unless(fam.p_eta_poly(n).coeff(0) == mirec::Rational(1),
                  "P_{D,n}(0) != 1", "n = " + std::to_string(n));
    if (!D.empty())
      fail_unless(fam.xi_eta_poly().coeff(0) == mirec::Rational(1),
                  "Xi_D(0) != 1", "");
  }));

  out.push_back(run_check("family.degree_and_leading", [&] {
    const long ell = fam.ell();
    if (!D.empty()) {
      const mirec::Poly xi = fam.xi_eta_poly();
      fail_unless(xi.degree() == ell, "deg Xi_D != ell_D",
                  "deg = " + std::to_string(xi.degree()));
      fail_unless(xi.lead() == fam.c_xi(), "lead Xi_D mismatch", xi.lead().str());
    }
    for (long n = 0; n <= nmax; ++n) {
      const mirec::Poly pn = fam.p_eta_poly(n);
      fail_unless(pn.degree() == ell + n, "deg P_{D,n} != ell_D + n",
                  "n = " + std::to_string(n));
      fail_unless(pn.lead() == fam.c_p(n), "lead P_{D,n} mismatch",
                  "n = " + std::to_string(n));
    }
  }));

  out.push_back(run_check("family.shape_invariance", [&] {
    const mirec::DeformedFamily up(p.shifted(1), D);
    fail_unless(fam.p_eta_poly(0) == up.xi_eta_poly(),
                "P_{D,0}(.;params) != Xi_D(.;params+delta)", "");
  }));

  if (p.finite_N()) {
    const mirec::DeformedOperator op(fam);
    const long N = op.N();
    out.push_back(run_check("family.eigen_equation", [&] {
      for (long n = 0; n <= N; ++n) {
        const std::vector<mirec::Rational> v = op.eigenvector(n);
        const std::vector<mirec::Rational> hv = op.matrix().apply(v);
        const mirec::Rational e = mirec::energy(n, p);
        for (long x = 0; x <= N; ++x)
          fail_unless(hv[static_cast<std::size_t>(x)] ==
                          e * v[static_cast<std::size_t>(x)],
                      "H P_{D,n} != E_n P_{D,n}",
                      "n = " + std::to_string(n) + ", x = " + std::to_string(x));
      }
    }));
    out.push_back(run_check("family.orthogonality", [&] {
      std::vector<std::vector<mirec::Rational>> vals;
      for (long n = 0; n <= N; ++n) vals.push_back(op.eigenvector(n));
      std::vector<mirec::Rational> w;
      for (long x = 0; x <= N; ++x) w.push_back(op.weight(x));
      for (long n = 0; n <= N; ++n)
        for (long m = n; m <= N; ++m) {
          mirec::Rational acc(0);
          for (long x = 0; x <= N; ++x)
            acc += w[static_cast<std::size_t>(x)] *
                   vals[static_cast<std::size_t>(n)]
                       [static_cast<std::size_t>(x)] *
                   vals[static_cast<std::size_t>(m)][static_cast<std::size_t>(x)];
          const mirec::Rational expect =
              n == m ? fam.d_Dn_sq(n).inv() : mirec::Rational(0);
          fail_unless(acc == expect, "orthogonality sum mismatch",
                      "(n, m) = (" + std::to_string(n) + ", " +
                          std::to_string(m) + ")");
        }
    }));
    const long max_index = job.D.empty() ? 0 : job.D.back();
    const auto violations = mirec::range_violations(p, max_index);
    if (violations.empty()) {
      out.push_back(run_check("family.weight_positivity", [&] {
        for (long x = 0; x <= N; ++x)
          fail_unless(op.weight(x).sign() > 0, "nonpositive weight",
                      "x = " + std::to_string(x));
      }));
    } else {
      out.push_back({"family.weight_positivity", "skip",
                     "parameters out of range: " + violations.front()});
    }
  }
  return out;
}

std::vector<CheckResult> suite_var(const Job& job) {
  std::vector<CheckResult> out;
  const mirec::ParameterSet p = make_params(job);
  if (p.finite_N())
    throw mirec::ConfigError(
        "suite 'var' needs the indeterminate mode (generic parameter a)");
  const mirec::IndexSet D(job.D);
  const mirec::DeformedFamily fam(p, D);

  out.push_back(run_check("var.genericity", [&] {
    mirec::GenericityNeeds need;
    need.nmax = job.nmax + fam.M() + 1;
    need.xmax = 8;
    need.max_shift = fam.M() + 1;
    need.D = job.D;
    const auto obstruction = mirec::genericity_obstruction(p, need);
    fail_unless(!obstruction, "degenerate parameter point",
                obstruction ? *obstruction : "");
  }));

  out.push_back(run_check("var.recurrence", [&] {
    mirec::RTable rt(p);
    for (long n = 0; n <= job.nmax; ++n) {
      const auto rep = mirec::verify_var_recurrence(fam, rt, n);
      fail_unless(rep.poly_identity, "eta-polynomial route failed",
                  "n = " + std::to_string(n));
      fail_unless(rep.normalized_identity, "normalized route failed",
                  "n = " + std::to_string(n));
      fail_unless(rep.grid_identity, "grid route failed",
                  "n = " + std::to_string(n));
    }
  }));

  out.push_back(run_check("var.shift_identity", [&] {
    mirec::RTable rt(p);
    for (long s = 0; s <= 3; ++s)
      for (long n = 0; n <= std::min<long>(job.nmax, 4); ++n)
        for (long k = -s - 1; k <= s + 1; ++k) {
          if (n + k < 0) continue;
          fail_unless(mirec::verify_shift_identity(rt, s, n, k),
                      "shift identity failed",
                      "(s, n, k) = (" + std::to_string(s) + ", " +
                          std::to_string(n) + ", " + std::to_string(k) + ")");
        }
  }));
  return out;
}

std::vector<CheckResult> suite_const(const Job& job) {
  std::vector<CheckResult> out;
  const mirec::ParameterSet p = make_params(job);
  const mirec::IndexSet D(job.D);
  const mirec::DeformedFamily fam(p, D);
  const mirec::Poly Y = make_Y(job);
  const mirec::Poly X = mirec::xpoly(fam, Y);
  const long L = X.degree();
  const std::optional<long> N = p.finite_N();

  out.push_back(run_check("const.xpoly_degree", [&] {
    fail_unless(L == fam.ell() + Y.degree() + 1, "deg X != ell_D + deg Y + 1",
                "deg X = " + std::to_string(L));
    fail_unless(X.coeff(0).is_zero(), "X(0) != 0", X.coeff(0).str());
  }));

  out.push_back(run_check("const.xpoly_sum_form", [&] {
    const mirec::ParameterSet pM = p.shifted(fam.M());
    const long top = N ? std::min<long>(L + 3, *N) : L + 3;
    for (long x = 0; x <= top; ++x)
      fail_unless(X.eval(mirec::eta(x, pM)) ==
                      mirec::xpoly_sum_form(fam, Y, x),
                  "X disagrees with its summation form",
                  "x = " + std::to_string(x));
  }));

  std::vector<mirec::CoeffRow> rows;
  std::optional<mirec::DeformedOperator> op;
  if (N) op.emplace(fam);
  const long want = N ? *N : std::max(job.nmax, 2 * L + 2);
  out.push_back(run_check("const.extraction", [&] {
    rows = make_rows(fam, op ? &*op : nullptr, X, want);
  }));
  if (rows.empty()) return out;  // extraction failed; nothing more to check

  if (N) {
    out.push_back(run_check("const.dual_routes", [&] {
      for (long n = 0; n + L <= *N && n <= *N; ++n) {
        const mirec::CoeffRow byelim = mirec::extract_rnk_elimination(fam, X, n);
        for (long k = -L; k <= L; ++k)
          fail_unless(byelim.at(k) == rows[static_cast<std::size_t>(n)].at(k),
                      "elimination and inner-product coefficients differ",
                      "(n, k) = (" + std::to_string(n) + ", " +
                          std::to_string(k) + ")");
      }
    }));
    out.push_back(run_check("const.grid_identity", [&] {
      for (const auto& row : rows)
        fail_unless(mirec::verify_grid_identity(fam, X, row, *N),
                    "recurrence fails on the grid",
                    "n = " + std::to_string(row.n));
    }));
  }

  out.push_back(run_check("const.relations", [&] {
    const auto rep = mirec::verify_coeff_relations(fam, X, rows);
    fail_unless(rep.sum_rule, "sum rule failed", rep.witness);
    fail_unless(rep.norm_relation, "norm relation failed", rep.witness);
    fail_unless(rep.top_coefficient, "top coefficient failed", rep.witness);
    fail_unless(rep.factor_vanishing, "vanishing-factor relation failed",
                rep.witness);
  }));

  if (!D.empty()) {
    out.push_back(run_check("const.negative_control", [&] {
      bool rejected = false;
      try {
        (void)mirec::extract_rnk_elimination(fam, mirec::Poly({0, 1}, 0), 1);
      } catch (const mirec::TheoremViolation&) {
        rejected = true;
      }
      fail_unless(rejected,
                  "eta-multiplication unexpectedly closes at finite width",
                  "D = " + D.str());
    }));
  }

  if (!N || *N >= 2 * L + 2) {
    out.push_back(run_check("const.spectral_degree", [&] {
      const auto fit = mirec::spectral_fit(fam, rows);
      fail_unless(fit.holdouts_ok, "spectral fit holdout failed", "");
      fail_unless(fit.degree == 2 * L, "I(z) degree != 2L",
                  "degree = " + std::to_string(fit.degree));
    }));
  } else {
    out.push_back({"const.spectral_degree", "skip",
                   "need N >= 2L+2 rows for the fit (N = " +
                       std::to_string(*N) + ", L = " + std::to_string(L) +
                       ")"});
  }
  return out;
}

std::vector<CheckResult> suite_closure(const Job& job) {
  std::vector<CheckResult> out;
  const mirec::ParameterSet p = make_params(job);
  if (!p.finite_N())
    throw mirec::ConfigError("suite 'closure' needs the finite mode (--N)");
  const long N = *p.finite_N();
  const mirec::IndexSet D(job.D);
  const mirec::DeformedFamily fam(p, D);
  const mirec::Poly Y = make_Y(job);
  const mirec::Poly X = mirec::xpoly(fam, Y);
  const long L = X.degree();
  if (N < 2 * L + 2)
    throw mirec::ConfigError("closure suite needs N >= 2L+2 (L = " +
                             std::to_string(L) + ")");
  const mirec::DeformedOperator op(fam);
  const std::vector<mirec::CoeffRow> rows = make_rows(fam, &op, X, N);

  out.push_back(run_check("closure.alpha_pairs", [&] {
    (void)mirec::alpha_pairs(L, p, std::min<long>(N, 2 * L + 2));
  }));

  {
    bool precondition;
    const mirec::Rational dt = p.dtilde();
    if (p.family == mirec::Family::racah)
      precondition = dt > mirec::Rational(2 * L - 1);
    else
      precondition = dt < p.q.pow(2 * L - 1) && dt.sign() > 0;
    if (precondition)
      out.push_back(run_check("closure.alpha_ordering", [&] {
        fail_unless(mirec::alpha_ordering_ok(L, p, std::min<long>(N, 4)),
                    "alpha values out of order", "");
      }));
    else
      out.push_back({"closure.alpha_ordering", "skip",
                     "ordering applies when dtilde is in the ladder range"});
  }

  mirec::ClosureData cd;
  out.push_back(run_check("closure.build", [&] {
    cd = mirec::build_closure(fam, X, rows);
    fail_unless(cd.K == 2 * L, "closure order != 2L",
                "K = " + std::to_string(cd.K));
  }));
  if (cd.K == 0) return out;

  out.push_back(run_check("closure.rminus1_product", [&] {
    fail_unless(mirec::rminus1_matches_product(fam, rows, cd),
                "R_{-1} disagrees with the product form", "");
  }));

  out.push_back(run_check("closure.matrix_identity", [&] {
    const auto rep = mirec::verify_closure(fam, op, X, cd, rows);
    fail_unless(rep.matrix_identity, "matrix closure identity failed", "");
  }));

  out.push_back(run_check("closure.ladder", [&] {
    const auto rep = mirec::verify_ladder(fam, op, X, cd, rows);
    fail_unless(rep.action_ok, "ladder action mismatch", rep.witness);
    fail_unless(rep.resummation_ok, "ladder resummation failed", rep.witness);
  }));
  return out;
}

std::vector<CheckResult> suite_bridge(const Job& job) {
  std::vector<CheckResult> out;
  const mirec::ParameterSet p = make_params(job);
  const mirec::IndexSet D(job.D);
  const mirec::DeformedFamily fam(p, D);
  const std::optional<long> N = p.finite_N();
  const long nmax = N ? std::min(job.nmax, *N) : job.nmax;

  out.push_back(run_check("bridge.parameter_roundtrip", [&] {
    const mirec::AWParameters w = mirec::map_params(p, fam.M());
    fail_unless(mirec::unmap_params(w) == p, "parameter map does not invert",
                "");
  }, /*irrational_skips=*/true));

  out.push_back(run_check("bridge.distinguished_point", [&] {
    for (long n = 0; n <= nmax; ++n) {
      const auto rep = mirec::eta0_spot_check(fam, nullptr, n);
      fail_unless(rep.product_identity, "product formula mismatch",
                  "n = " + std::to_string(n) + " " + rep.witness);
    }
  }));

  out.push_back(run_check("bridge.transported_value", [&] {
    const mirec::Transport t = mirec::to_aw(fam, nmax);
    for (long n = 0; n <= nmax; ++n) {
      const auto rep = mirec::eta0_spot_check(fam, &t, n);
      fail_unless(rep.transported_value, "transported value mismatch",
                  "n = " + std::to_string(n) + " " + rep.witness);
    }
  }, /*irrational_skips=*/true));

  const mirec::Poly Y = make_Y(job);
  const mirec::Poly X = mirec::xpoly(fam, Y);
  const long L = X.degree();
  std::vector<mirec::CoeffRow> rows;
  out.push_back(run_check("bridge.rows", [&] {
    if (N) {
      const mirec::DeformedOperator op(fam);
      rows = make_rows(fam, &op, X, nmax);
    } else {
      rows = make_rows(fam, nullptr, X, nmax);
    }
  }));
  if (rows.empty()) return out;

  out.push_back(run_check("bridge.rn0_identity", [&] {
    for (const auto& row : rows)
      fail_unless(mirec::rn0_identity_check(fam, X, row),
                  "r_{n,0} bridge identity failed",
                  "n = " + std::to_string(row.n));
  }));

  out.push_back(run_check("bridge.rtable_transport", [&] {
    const long top = N ? std::max<long>(0, std::min(nmax, *N - L)) : nmax;
    const mirec::Transport t = mirec::to_aw(fam, top + L);
    for (const auto& row : rows) {
      if (row.n > top) break;
      fail_unless(mirec::transport_rtable_check(fam, t, X, row),
                  "transported coefficients mismatch",
                  "n = " + std::to_string(row.n));
    }
  }, /*irrational_skips=*/true));
  return out;
}

std::vector<CheckResult> run_suite(const Job& job, const std::string& suite) {
  if (suite == "family") return suite_family(job);
  if (suite == "var") return suite_var(job);
  if (suite == "const") return suite_const(job);
  if (suite == "closure") return suite_closure(job);
  if (suite == "bridge") return suite_bridge(job);
  if (suite == "all") {
    const mirec::ParameterSet p = make_params(job);
    std::vector<CheckResult> out = suite_family(job);
    auto append = [&out](std::vector<CheckResult> more) {
      for (auto& r : more) out.push_back(std::move(r));
    };
    if (!p.finite_N()) append(suite_var(job));
    append(suite_const(job));
    if (p.finite_N()) append(suite_closure(job));
    append(suite_bridge(job));
    return out;
  }
  throw mirec::ConfigError(
      "unknown suite '" + suite +
      "' (choose family, var, const, closure, bridge, or all)");
}

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

int cmd_gen(const Job& job) {
  const mirec::ParameterSet p = make_params(job);
  const mirec::IndexSet D(job.D);
  const mirec::DeformedFamily fam(p, D);
  std::vector<mirec::Poly> polys;
  for (long n = 0; n <= job.nmax; ++n) polys.push_back(fam.p_eta_poly(n));

  if (job.format == "csv") {
    std::ostringstream os;
    os << "n,k,coeff\n";
    for (long n = 0; n <= job.nmax; ++n) {
      const mirec::Poly& pn = polys[static_cast<std::size_t>(n)];
      for (long k = 0; k <= pn.degree(); ++k)
        os << n << "," << k << "," << pn.coeff(k).str() << "\n";
    }
    emit(job, os.str());
    return 0;
  }

  ordered_json j;
  j["schema"] = "mirec/1";
  j["command"] = "gen";
  j["family"] = job.family;
  j["params"] = params_json(p);
  if (job.N) j["N"] = *job.N;
  j["D"] = job.D;
  ordered_json list = ordered_json::array();
  for (long n = 0; n <= job.nmax; ++n) {
    const mirec::Poly& pn = polys[static_cast<std::size_t>(n)];
    ordered_json entry;
    entry["n"] = n;
    ordered_json coeffs = ordered_json::array();
    for (long k = 0; k <= pn.degree(); ++k) coeffs.push_back(pn.coeff(k).str());
    entry["coeffs"] = coeffs;
    list.push_back(entry);
  }
  j["polynomials"] = list;
  emit(job, j.dump(2) + "\n");
  return 0;
}

int cmd_verify(const Job& job) {
  const mirec::ParameterSet p = make_params(job);
  const std::vector<CheckResult> results = run_suite(job, job.suite);
  long failures = 0;
  for (const auto& r : results)
    if (r.status == "fail") ++failures;

  if (job.format == "csv") {
    std::ostringstream os;
    os << "id,status,witness\n";
    for (const auto& r : results) {
      std::string w = r.witness;
      for (char& ch : w)
        if (ch == ',' || ch == '\n') ch = ';';
      os << r.id << "," << r.status << "," << w << "\n";
    }
    emit(job, os.str());
  } else {
    ordered_json j;
    j["schema"] = "mirec/1";
    j["command"] = "verify";
    j["suite"] = job.suite;
    j["config"] = job_json(job, p);
    ordered_json list = ordered_json::array();
    for (const auto& r : results) {
      ordered_json e;
      e["id"] = r.id;
      e["status"] = r.status;
      if (!r.witness.empty()) e["witness"] = r.witness;
      list.push_back(e);
    }
    j["results"] = list;
    j["failures"] = failures;
    emit(job, j.dump(2) + "\n");
  }
  return failures == 0 ? 0 : 1;
}

int cmd_sweep(const Job& job) {
  if (job.grid.empty())
    throw mirec::ConfigError("sweep needs a 'grid' object in the config file");
  const std::string suite = job.suite == "all" ? "const" : job.suite;

  // Cartesian product, lexicographic in the grid axis order.
  std::vector<std::map<std::string, mirec::Rational>> points;
  points.emplace_back();
  for (const auto& [name, values] : job.grid) {
    std::vector<std::map<std::string, mirec::Rational>> next;
    for (const auto& base : points)
      for (const auto& v : values) {
        auto m = base;
        m[name] = v;
        next.push_back(std::move(m));
      }
    points = std::move(next);
  }

  struct Record {
    std::string key;
    Job instance;
    std::string status;
    double millis = 0.0;
    std::vector<CheckResult> failures;
  };
  std::vector<Record> records(points.size());

  mirec::parallel_for(points.size(), [&](std::size_t i) {
    Record& rec = records[i];
    rec.instance = job;
    std::string key;
    for (const auto& [name, value] : points[i]) {
      if (name == "q") {
        rec.instance.q = value;
        rec.instance.has_q = true;
      } else {
        rec.instance.params[name] = value;
      }
      if (!key.empty()) key += ",";
      key += name + "=" + value.str();
    }
    rec.key = key;
    const auto t0 = std::chrono::steady_clock::now();
    bool out_of_range = false;
    try {
      const mirec::ParameterSet p = make_params(rec.instance);
      const long max_index = job.D.empty() ? 0 : job.D.back();
      out_of_range = !mirec::range_violations(p, max_index).empty();
      const auto results = run_suite(rec.instance, suite);
      for (const auto& r : results)
        if (r.status == "fail") rec.failures.push_back(r);
      rec.status = rec.failures.empty()
                       ? "pass"
                       : (out_of_range ? "range-advisory" : "fail");
    } catch (const std::exception& e) {
      rec.failures.push_back({"sweep.instance", "fail", e.what()});
      rec.status = out_of_range ? "range-advisory" : "error";
    }
    const auto t1 = std::chrono::steady_clock::now();
    rec.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
  });

  std::sort(records.begin(), records.end(),
            [](const Record& a, const Record& b) { return a.key < b.key; });

  if (job.format == "csv") {
    std::ostringstream os;
    os << "key,status,millis,failures\n";
    for (const auto& rec : records) {
      std::string fails;
      for (const auto& f : rec.failures) {
        if (!fails.empty()) fails += ";";
        fails += f.id;
      }
      os << rec.key << "," << rec.status << "," << rec.millis << "," << fails
         << "\n";
    }
    emit(job, os.str());
  } else {
    ordered_json j;
    j["schema"] = "mirec/1";
    j["command"] = "sweep";
    j["suite"] = suite;
    ordered_json list = ordered_json::array();
    for (const auto& rec : records) {
      ordered_json e;
      e["key"] = rec.key;
      e["params"] = params_json(make_params(rec.instance));
      e["status"] = rec.status;
      e["millis"] = rec.millis;
      if (!rec.failures.empty()) {
        ordered_json fl = ordered_json::array();
        for (const auto& f : rec.failures) {
          ordered_json fe;
          fe["id"] = f.id;
          fe["witness"] = f.witness;
          fl.push_back(fe);
        }
        e["failures"] = fl;
      }
      list.push_back(e);
    }
    j["records"] = list;
    emit(job, j.dump(2) + "\n");
  }

  for (const auto& rec : records)
    if (rec.status == "fail" || rec.status == "error") return 1;
  return 0;
}

int cmd_bench(const Job& job) {
  const mirec::ParameterSet p = make_params(job);
  const mirec::IndexSet D(job.D);

  // Both routes must produce identical polynomials before costs mean
  // anything.
  {
    mirec::DeformedFamily fam(p, D);
    mirec::RTable rt(p);
    const std::vector<mirec::Poly> byrec =
        mirec::generate_by_recurrence(fam, rt, job.nmax);
    mirec::DeformedFamily fresh(p, D);
    for (long n = 0; n <= job.nmax; ++n)
      if (byrec[static_cast<std::size_t>(n)] != fresh.p_eta_poly(n))
        throw mirec::VerificationFailure("generation routes disagree",
                                         "n = " + std::to_string(n));
  }

  std::vector<mirec::BenchRow> rows;
  for (long n = 0; n <= job.nmax; ++n)
    rows.push_back(mirec::bench_determinant_step(p, D, n));
  for (auto& row : mirec::bench_recurrence_steps(p, D, job.nmax))
    rows.push_back(std::move(row));

  if (job.format == "json") {
    ordered_json j;
    j["schema"] = "mirec/1";
    j["command"] = "bench";
    j["family"] = job.family;
    j["D"] = job.D;
    ordered_json list = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json e;
      e["method"] = row.method;
      e["n"] = row.n;
      e["mults"] = row.mults;
      e["millis"] = row.millis;
      list.push_back(e);
    }
    j["rows"] = list;
    emit(job, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "method,n,mults,millis\n";
    for (const auto& row : rows)
      os << row.method << "," << row.n << "," << row.mults << ","
         << row.millis << "\n";
    emit(job, os.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mirec: exact multi-indexed Racah / q-Racah recurrence toolkit"};
  app.require_subcommand(1);

  Job job;
  std::string config_path, family_flag, params_flag, q_flag, D_flag, Y_flag;
  long N_flag = -1, nmax_flag = -1;
  bool indeterminate_flag = false;
  std::string suite_flag, out_flag, format_flag;
  std::uint64_t seed_flag = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "JSON config file; flags override its values");
    cmd->add_option("--family", family_flag, "family: R or qR");
    cmd->add_option("--params", params_flag,
                    "a=..,b=..,c=..,d=.. or bare list b,c,d / a,b,c,d");
    cmd->add_option("--q", q_flag, "base q (family qR)");
    cmd->add_option("--N", N_flag, "finite mode: a = -N resp. q^(-N)");
    cmd->add_flag("--indeterminate", indeterminate_flag,
                  "indeterminate mode (generic parameter a)");
    cmd->add_option("--D", D_flag, "index set, e.g. 1,2");
    cmd->add_option("--Y", Y_flag,
                    "seed polynomial coefficients in eta, low to high");
    cmd->add_option("--nmax", nmax_flag, "largest degree index");
    cmd->add_option("--suite", suite_flag,
                    "family | var | const | closure | bridge | all");
    cmd->add_option("--out", out_flag, "output path (default stdout)");
    cmd->add_option("--format", format_flag, "json or csv");
    cmd->add_option("--seed", seed_flag, "seed for randomized sweeps");
  };

  CLI::App* gen = app.add_subcommand("gen", "emit exact polynomials");
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  CLI::App* sweep = app.add_subcommand("sweep", "verify over a parameter grid");
  CLI::App* bench =
      app.add_subcommand("bench", "compare generation method costs");
  for (CLI::App* cmd : {gen, verify, sweep, bench}) add_common(cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (cmd->count("--config")) apply_config_file(job, config_path);
    if (cmd->count("--family")) job.family = canonical_family(family_flag);
    if (cmd->count("--params")) apply_params(job, params_flag);
    if (cmd->count("--q")) {
      job.q = mirec::Rational::parse(q_flag);
      job.has_q = true;
    }
    if (cmd->count("--N")) job.N = N_flag;
    if (cmd->count("--indeterminate")) job.indeterminate = true;
    if (cmd->count("--D")) {
      job.D.clear();
      for (const auto& s : split_csv(D_flag)) job.D.push_back(std::stol(s));
    }
    if (cmd->count("--Y")) {
      job.Y.clear();
      for (const auto& s : split_csv(Y_flag))
        job.Y.push_back(mirec::Rational::parse(s));
    }
    if (cmd->count("--nmax")) job.nmax = nmax_flag;
    if (cmd->count("--suite")) job.suite = suite_flag;
    if (cmd->count("--out")) job.out = out_flag;
    if (cmd->count("--format")) job.format = format_flag;
    if (cmd->count("--seed")) job.seed = seed_flag;

    if (job.format != "json" && job.format != "csv")
      throw mirec::ConfigError("--format must be json or csv");

    if (cmd == gen) return cmd_gen(job);
    if (cmd == verify) return cmd_verify(job);
    if (cmd == sweep) return cmd_sweep(job);
    return cmd_bench(job);
  } catch (const mirec::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
