#include "verify_suites.hpp"

#include <sstream>

#include "mcg/classify.hpp"
#include "mcg/serialize.hpp"

namespace mcgcli {

using namespace mcg;

namespace {

void record(SuiteResult& res, bool ok, const std::string& what) {
  std::ostringstream os;
  os << (ok ? "  ok   " : "  FAIL ") << what;
  res.lines.push_back(os.str());
  if (ok)
    ++res.passed;
  else
    ++res.failed;
}

SuiteResult suite_table51(const Ceilings& ceilings) {
  SuiteResult res;
  struct Cell {
    int r, v;
    std::vector<i64> primes;
  };
  const std::vector<Cell> cells = {
      {3, 1, {2, 3, 5, 7, 11, 13}}, {3, 2, {2, 3, 5, 7, 11, 13}}, {4, 1, {2, 3, 5, 7, 11, 13}},
      {4, 2, {3, 5, 7, 11, 13}},    {4, 3, {2, 3, 5}},
  };
  for (const auto& cell : cells)
    for (i64 p : cell.primes) {
      i64 closed = table51(cell.r, cell.v, p);
      i64 oracle = orbit_count_oracle(cell.v, cell.r, p, ceilings);
      std::ostringstream what;
      what << "table51(r=" << cell.r << ", v=" << cell.v << ", p=" << p << ") = " << closed
           << " vs oracle " << oracle;
      record(res, closed == oracle, what.str());
    }
  return res;
}

SuiteResult suite_genus33(const Ceilings& ceilings) {
  SuiteResult res;
  AbelianGroup g({4, 4, 2});
  auto candidates = normal_form_candidates(g, 2);
  record(res, candidates.size() <= 6,
         "reducer emits " + std::to_string(candidates.size()) + " candidates (at most 6)");
  // The three inequivalent representatives.
  Signature sig{2, {}};
  auto w1 = g.generator(0), w2 = g.generator(1), w3 = g.generator(2), z = g.zero();
  auto eta1 = make_generating_vector(g, sig, {w1, w3}, {w2, z}, {});
  auto eta2 = make_generating_vector(g, sig, {w1, w2}, {w3, z}, {});
  auto eta3 = make_generating_vector(g, sig, {w1, g.scale(2, w2)}, {w2, w3}, {});
  record(res, !cup_equivalent_mod_aut(eta1, eta2, ceilings), "cup separates classes 1 and 2");
  record(res, !cup_equivalent_mod_aut(eta1, eta3, ceilings), "cup separates classes 1 and 3");
  record(res, !cup_equivalent_mod_aut(eta2, eta3, ceilings), "cup separates classes 2 and 3");
  auto cls = classify_unramified(g, 2, ceilings);
  record(res, cls.class_count == 3 && cls.exact,
         "classification of (4,4,2) at orbit genus 2 gives 3 classes [" + cls.method + "]");
  return res;
}

SuiteResult suite_genus65(const Ceilings& ceilings) {
  SuiteResult res;
  for (const auto& factors : std::vector<std::vector<i64>>{{4, 4}, {8, 4}, {12, 4}}) {
    AbelianGroup g(factors);
    auto cls = classify_unramified(g, 2, ceilings);
    std::ostringstream what;
    what << "(" << group_to_string(g) << ") at orbit genus 2: " << cls.class_count
         << " classes [" << cls.method << "]";
    record(res, cls.class_count == 3 && cls.exact, what.str());
    try {
      OracleOptions opts;
      opts.ceilings = ceilings;
      auto oracle = orbit_classes_oracle(g, Signature{2, {}}, opts);
      record(res, oracle.count == 3, "(" + group_to_string(g) + ") oracle count " +
                                         std::to_string(oracle.count));
    } catch (const CeilingExceeded&) {
      res.lines.push_back("  skip (" + group_to_string(g) + ") oracle: above ceiling");
    }
  }
  return res;
}

SuiteResult suite_unramified_elementary(const Ceilings& ceilings) {
  SuiteResult res;
  struct GridCell {
    i64 p;
    i64 rho_max;
    int w_max;
  };
  for (const auto& cell : std::vector<GridCell>{{2, 2, 4}, {3, 2, 4}, {5, 2, 2}})
    for (i64 rho = 1; rho <= cell.rho_max; ++rho)
      for (int w = 1; w <= cell.w_max && w <= 2 * rho; ++w) {
        i64 formula = count_elementary(rho, w);
        auto reps = canonical_reps_elementary(cell.p, w, rho);
        OracleOptions opts;
        opts.ceilings = ceilings;
        auto oracle = orbit_classes_oracle(AbelianGroup(std::vector<i64>(w, cell.p)),
                                           Signature{rho, {}}, opts);
        std::ostringstream what;
        what << "p=" << cell.p << " w=" << w << " rho=" << rho << ": formula " << formula
             << ", canonical " << reps.size() << ", oracle " << oracle.count;
        record(res, formula == static_cast<i64>(reps.size()) && formula == oracle.count,
               what.str());
      }
  return res;
}

SuiteResult suite_pipeline_vs_oracle(const Ceilings& ceilings) {
  SuiteResult res;
  struct Case {
    int v, r;
    i64 p;
  };
  const std::vector<Case> cases = {{1, 2, 5}, {1, 3, 5}, {1, 3, 7}, {2, 3, 5}, {2, 3, 7},
                                   {1, 4, 5}, {1, 4, 7}, {2, 4, 5}, {2, 4, 7}, {3, 4, 5}};
  for (const auto& c : cases) {
    i64 pipeline = build_strata_report(c.v, c.r, c.p, ceilings).total;
    i64 oracle = orbit_count_oracle(c.v, c.r, c.p, ceilings);
    std::ostringstream what;
    what << "v=" << c.v << " r=" << c.r << " p=" << c.p << ": pipeline " << pipeline
         << " vs oracle " << oracle;
    record(res, pipeline == oracle, what.str());
  }
  return res;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"table51", "genus33", "genus65", "unramified-elementary", "pipeline-vs-oracle"};
}

SuiteResult run_suite(const std::string& name, const Ceilings& ceilings) {
  if (name == "table51") return suite_table51(ceilings);
  if (name == "genus33") return suite_genus33(ceilings);
  if (name == "genus65") return suite_genus65(ceilings);
  if (name == "unramified-elementary") return suite_unramified_elementary(ceilings);
  if (name == "pipeline-vs-oracle") return suite_pipeline_vs_oracle(ceilings);
  throw OutOfScope("unknown verification suite: " + name);
}

}  // namespace mcgcli
