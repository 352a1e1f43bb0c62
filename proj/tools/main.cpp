#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mcg/classify.hpp"
#include "mcg/serialize.hpp"
#include "verify_suites.hpp"

namespace {

using namespace mcg;

// Stable exit codes, also listed in --help and the README.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;       // verification failure or internal error
constexpr int kExitInfeasible = 2;    // infeasible signature
constexpr int kExitCeiling = 3;       // a configured ceiling was exceeded
constexpr int kExitUsage = 4;         // bad arguments / unknown suite

struct CommonOptions {
  std::string format = "text";
  std::string out_path;
  long long oracle_ceiling = static_cast<long long>(Ceilings{}.oracle);
  long long enumeration_ceiling = Ceilings{}.enumeration;
  long long aut_ceiling = Ceilings{}.automorphisms;
  int workers = 1;

  Ceilings ceilings() const {
    Ceilings c;
    c.oracle = static_cast<unsigned long long>(oracle_ceiling);
    c.enumeration = enumeration_ceiling;
    c.automorphisms = aut_ceiling;
    return c;
  }
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format: text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  cmd->add_option("--out", opts.out_path, "Write output to this file instead of stdout");
  cmd->add_option("--oracle-ceiling", opts.oracle_ceiling,
                  "Maximum brute-force orbit space size");
  cmd->add_option("--enumeration-ceiling", opts.enumeration_ceiling,
                  "Maximum dense enumeration size");
  cmd->add_option("--aut-ceiling", opts.aut_ceiling, "Maximum |G| for Aut(G) enumeration");
  cmd->add_option("--workers", opts.workers, "Worker bound for per-signature counts")
      ->check(CLI::PositiveNumber);
}

void emit(const CommonOptions& opts, const std::string& payload) {
  if (opts.out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + opts.out_path);
  out << payload;
}

std::vector<std::pair<int, int>> parse_pairs(const std::vector<std::string>& items) {
  std::vector<std::pair<int, int>> out;
  for (const auto& item : items) {
    auto sep = item.find(':');
    if (sep == std::string::npos)
      throw CLI::ValidationError("--pairs entries must look like r:v, e.g. 4:2");
    out.push_back({std::stoi(item.substr(0, sep)), std::stoi(item.substr(sep + 1))});
  }
  return out;
}

int run_table51(const CommonOptions& opts, const std::vector<long long>& primes,
                const std::vector<std::string>& pair_items, bool with_oracle,
                bool with_pipeline) {
  auto pairs = parse_pairs(pair_items);
  Ceilings ceilings = opts.ceilings();
  std::vector<Table51Row> rows;
  bool all_match = true;
  for (auto [r, v] : pairs)
    for (long long p : primes) {
      Table51Row row;
      row.r = r;
      row.v = v;
      row.p = p;
      try {
        row.closed_form = table51(r, v, p);
      } catch (const OutOfScope&) {
      }
      if (with_oracle) {
        try {
          row.oracle = orbit_count_oracle(v, r, p, ceilings);
        } catch (const CeilingExceeded&) {
        }
      }
      if (with_pipeline) {
        try {
          row.pipeline = build_strata_report(v, r, p, ceilings).total;
        } catch (const OutOfScope&) {
          // singular prime or unsupported shape: leave the cell empty
        } catch (const CeilingExceeded&) {
        }
      }
      all_match = all_match && row.match();
      rows.push_back(row);
    }
  if (opts.format == "json")
    emit(opts, table51_rows_to_json(rows));
  else if (opts.format == "csv")
    emit(opts, table51_rows_to_csv(rows));
  else
    emit(opts, table51_rows_to_text(rows));
  return all_match ? kExitOk : kExitFailure;
}

int run_classify_signature(const CommonOptions& opts, long long p, int w, const Signature& sig) {
  ActionCount count = count_actions(p, w, sig, opts.ceilings());
  CensusReport rep;
  rep.p = p;
  rep.w = w;
  rep.genus = count.genus.value_or(-1);
  rep.total = count.total;
  rep.entries.push_back({sig, count});
  if (opts.format == "json")
    emit(opts, census_to_json(rep));
  else if (opts.format == "csv")
    emit(opts, census_to_csv(rep));
  else
    emit(opts, census_to_text(rep));
  return count.feasible ? kExitOk : kExitInfeasible;
}

int run_classify_genus(const CommonOptions& opts, long long p, int w, long long genus) {
  CensusReport rep = genus_census(p, w, genus, opts.ceilings(), opts.workers);
  if (opts.format == "json")
    emit(opts, census_to_json(rep));
  else if (opts.format == "csv")
    emit(opts, census_to_csv(rep));
  else
    emit(opts, census_to_text(rep));
  return kExitOk;
}

int run_classify_group(const CommonOptions& opts, const std::string& group_text, long long rho,
                       bool genus_check) {
  AbelianGroup g = parse_group(group_text);
  auto cls = classify_unramified(g, rho, opts.ceilings());
  std::optional<i64> genus = genus_from_signature(g.order(), Signature{rho, {}});
  if (opts.format == "json") {
    std::ostringstream os;
    os << "{\n  \"group\": \"" << group_to_string(g) << "\",\n  \"orbit_genus\": " << rho
       << ",\n  \"classes\": " << cls.class_count << ",\n  \"exact\": "
       << (cls.exact ? "true" : "false") << ",\n  \"method\": \"" << cls.method << "\"";
    if (genus_check && genus) os << ",\n  \"genus\": " << *genus;
    os << "\n}\n";
    emit(opts, os.str());
  } else if (opts.format == "csv") {
    std::ostringstream os;
    os << "group,orbit_genus,genus,classes,exact,method\n";
    os << group_to_string(g) << "," << rho << ",";
    if (genus) os << *genus;
    os << "," << cls.class_count << "," << (cls.exact ? 1 : 0) << "," << cls.method << "\n";
    emit(opts, os.str());
  } else {
    std::ostringstream os;
    os << "group (" << group_to_string(g) << "), unramified at orbit genus " << rho;
    if (genus_check && genus) os << ", surface genus " << *genus;
    os << ": " << cls.class_count << (cls.exact ? "" : " (upper bound)")
       << " classes via " << cls.method << "\n";
    for (const auto& rep : cls.representatives) {
      os << "  representative:";
      for (const auto& e : rep.a) {
        os << " a=(";
        for (size_t i = 0; i < e.c.size(); ++i) os << (i ? "," : "") << e.c[i];
        os << ")";
      }
      for (const auto& e : rep.b) {
        os << " b=(";
        for (size_t i = 0; i < e.c.size(); ++i) os << (i ? "," : "") << e.c[i];
        os << ")";
      }
      os << "\n";
    }
    emit(opts, os.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mcgclassify: counts conjugacy classes of finite abelian subgroups of mapping class "
      "groups via generating-vector orbit enumeration.\n"
      "Exit codes: 0 ok, 1 failure, 2 infeasible signature, 3 ceiling exceeded, 4 usage."};
  app.require_subcommand(1);

  // table51
  CommonOptions t_opts;
  std::vector<long long> t_primes = {2, 3, 5, 7, 11, 13};
  std::vector<std::string> t_pairs = {"3:1", "3:2", "4:1", "4:2", "4:3"};
  bool t_oracle = true, t_pipeline = false;
  auto* t_cmd = app.add_subcommand(
      "table51", "Evaluate the closed-form class counts for 3 and 4 branch points");
  t_cmd->add_option("--primes", t_primes, "Primes to evaluate")->delimiter(',');
  t_cmd->add_option("--pairs", t_pairs, "Pairs r:v to evaluate")->delimiter(',');
  t_cmd->add_flag("--oracle,!--no-oracle", t_oracle, "Also run the brute-force oracle");
  t_cmd->add_flag("--pipeline,!--no-pipeline", t_pipeline, "Also run the strata pipeline");
  add_common(t_cmd, t_opts);

  // classify
  CommonOptions c_opts;
  long long c_prime = 0, c_genus = -1, c_rho = 2;
  int c_rank = 0;
  std::string c_signature, c_group;
  bool c_genus_check = false;
  auto* c_cmd = app.add_subcommand("classify", "Count classes for a signature, genus or group");
  c_cmd->add_option("--prime", c_prime, "Prime p for elementary abelian F_p^w");
  c_cmd->add_option("--rank", c_rank, "Rank w of F_p^w");
  c_cmd->add_option("--signature", c_signature, "Signature \"rho;m1,m2,...\" (\"-\" = none)");
  c_cmd->add_option("--genus", c_genus, "Census over all signatures of this surface genus");
  c_cmd->add_option("--group", c_group, "Invariant factors, e.g. \"4,4\" (unramified count)");
  c_cmd->add_option("--orbit-genus", c_rho, "Orbit genus for --group (default 2)");
  c_cmd->add_flag("--genus-check", c_genus_check, "Report the Riemann-Hurwitz surface genus");
  add_common(c_cmd, c_opts);

  // verify
  CommonOptions v_opts;
  std::string v_suite;
  auto* v_cmd = app.add_subcommand("verify", "Run a named golden verification suite");
  v_cmd->add_option("suite", v_suite, "One of: table51, genus33, genus65, "
                                      "unramified-elementary, pipeline-vs-oracle")
      ->required();
  add_common(v_cmd, v_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (t_cmd->parsed()) return run_table51(t_opts, t_primes, t_pairs, t_oracle, t_pipeline);
    if (c_cmd->parsed()) {
      if (!c_group.empty()) return run_classify_group(c_opts, c_group, c_rho, c_genus_check);
      if (c_prime <= 0 || c_rank <= 0) {
        std::cerr << "classify: --prime and --rank are required without --group\n";
        return kExitUsage;
      }
      if (!c_signature.empty())
        return run_classify_signature(c_opts, c_prime, c_rank, parse_signature(c_signature));
      if (c_genus >= 2) return run_classify_genus(c_opts, c_prime, c_rank, c_genus);
      std::cerr << "classify: provide --signature or --genus\n";
      return kExitUsage;
    }
    if (v_cmd->parsed()) {
      mcgcli::SuiteResult res;
      try {
        res = mcgcli::run_suite(v_suite, v_opts.ceilings());
      } catch (const OutOfScope& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
      }
      std::ostringstream os;
      os << "suite " << v_suite << "\n";
      for (const auto& line : res.lines) os << line << "\n";
      os << (res.ok() ? "PASS" : "FAIL") << " (" << res.passed << " passed, " << res.failed
         << " failed)\n";
      emit(v_opts, os.str());
      return res.ok() ? kExitOk : kExitFailure;
    }
  } catch (const CeilingExceeded& e) {
    std::cerr << "ceiling exceeded: " << e.what() << "\n";
    return kExitCeiling;
  } catch (const OutOfScope& e) {
    std::cerr << "out of scope: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
