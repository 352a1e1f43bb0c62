#include "mcg/serialize.hpp"

#include <sstream>

#include "json.hpp"

namespace mcg {

using nlohmann::json;

std::string signature_to_string(const Signature& sig) {
  std::ostringstream os;
  os << sig.orbit_genus << ";";
  if (sig.periods.empty()) {
    os << "-";
  } else {
    for (size_t i = 0; i < sig.periods.size(); ++i) {
      if (i) os << ",";
      os << sig.periods[i];
    }
  }
  return os.str();
}

namespace {

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')') out.push_back(c);
  return out;
}

std::vector<i64> parse_int_list(const std::string& s) {
  std::vector<i64> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty entry in integer list");
    out.push_back(std::stoll(item));
  }
  return out;
}

}  // namespace

Signature parse_signature(const std::string& text) {
  std::string s = strip_spaces(text);
  auto sep = s.find(';');
  if (sep == std::string::npos)
    throw std::invalid_argument("signature must look like \"rho;m1,m2,...\" or \"rho;-\"");
  Signature sig;
  sig.orbit_genus = std::stoll(s.substr(0, sep));
  std::string tail = s.substr(sep + 1);
  if (tail != "-" && !tail.empty()) sig.periods = parse_int_list(tail);
  if (sig.orbit_genus < 0) throw std::invalid_argument("signature: orbit genus must be >= 0");
  for (i64 m : sig.periods)
    if (m < 2) throw std::invalid_argument("signature: periods must be >= 2");
  return sig;
}

std::string group_to_string(const AbelianGroup& g) {
  std::ostringstream os;
  for (int i = 0; i < g.rank(); ++i) {
    if (i) os << ",";
    os << g.factor(i);
  }
  return os.str();
}

AbelianGroup parse_group(const std::string& text) {
  return AbelianGroup(parse_int_list(strip_spaces(text)));
}

namespace {

json summand_json(const ActionCountSummand& s) {
  return json{{"u", s.u}, {"v", s.v}, {"h", s.h}, {"e", s.e}, {"e_provenance", s.e_provenance}};
}

json census_entry_json(const CensusEntry& e) {
  json j;
  j["signature"] = signature_to_string(e.sig);
  j["feasible"] = e.count.feasible;
  j["count"] = e.count.total;
  if (e.count.genus) j["genus_check"] = *e.count.genus;
  j["summands"] = json::array();
  for (const auto& s : e.count.summands) j["summands"].push_back(summand_json(s));
  if (!e.count.note.empty()) j["note"] = e.count.note;
  return j;
}

}  // namespace

std::string census_to_json(const CensusReport& rep) {
  json j;
  j["prime"] = rep.p;
  j["rank"] = rep.w;
  j["genus"] = rep.genus;
  j["total"] = rep.total;
  j["entries"] = json::array();
  for (const auto& e : rep.entries) j["entries"].push_back(census_entry_json(e));
  return j.dump(2) + "\n";
}

std::string census_to_csv(const CensusReport& rep) {
  std::ostringstream os;
  os << "prime,rank,genus,signature,count,feasible,summands\n";
  for (const auto& e : rep.entries) {
    os << rep.p << "," << rep.w << "," << rep.genus << "," << signature_to_string(e.sig) << ","
       << e.count.total << "," << (e.count.feasible ? 1 : 0) << ",";
    for (size_t i = 0; i < e.count.summands.size(); ++i) {
      const auto& s = e.count.summands[i];
      if (i) os << ";";
      os << "h" << s.u << "*e" << s.v << "=" << s.h << "*" << s.e;
    }
    os << "\n";
  }
  os << rep.p << "," << rep.w << "," << rep.genus << ",total," << rep.total << ",,\n";
  return os.str();
}

std::string census_to_text(const CensusReport& rep) {
  std::ostringstream os;
  os << "genus census: p=" << rep.p << " rank=" << rep.w << " genus=" << rep.genus << "\n";
  for (const auto& e : rep.entries) {
    os << "  (" << signature_to_string(e.sig) << ")  count=" << e.count.total;
    if (!e.count.feasible) os << "  [infeasible]";
    if (!e.count.summands.empty()) {
      os << "  [";
      for (size_t i = 0; i < e.count.summands.size(); ++i) {
        const auto& s = e.count.summands[i];
        if (i) os << " + ";
        os << "h" << s.u << "*e" << s.v << "=" << s.h * s.e << "(" << s.e_provenance << ")";
      }
      os << "]";
    }
    if (!e.count.note.empty()) os << "  note: " << e.count.note;
    os << "\n";
  }
  os << "total: " << rep.total << "\n";
  return os.str();
}

namespace {

json record_json(const SubgroupRecord& rec) {
  json j;
  j["label"] = rec.label;
  j["order"] = rec.order;
  j["normalizer"] = rec.normalizer_size;
  j["fixed_set"] = rec.fixed_set_size;
  j["perm_generators"] = json::array();
  j["q_generators"] = json::array();
  for (const auto& gen : rec.hprime.generators) {
    j["perm_generators"].push_back(gen.cycles1());
    json mat = json::array();
    const auto& q = rec.q[std::lower_bound(rec.hprime.elements.begin(), rec.hprime.elements.end(),
                                           gen) -
                          rec.hprime.elements.begin()];
    for (int i = 0; i < q.rows(); ++i) {
      json row = json::array();
      for (int k = 0; k < q.cols(); ++k) row.push_back(q.at(i, k));
      mat.push_back(row);
    }
    j["q_generators"].push_back(mat);
  }
  return j;
}

}  // namespace

std::string strata_to_json(const StrataReport& rep) {
  json j;
  j["v"] = rep.v;
  j["r"] = rep.r;
  j["p"] = rep.p;
  j["group_order"] = rep.group_order;
  j["omega_size"] = rep.omega_size;
  j["total"] = rep.total;
  j["classes"] = json::array();
  for (const auto& rec : rep.classes) j["classes"].push_back(record_json(rec));
  j["D"] = rep.d_matrix;
  j["U"] = rep.u_matrix;
  j["S"] = rep.s_sizes;
  j["N"] = rep.n_sizes;
  j["T"] = rep.t_sizes;
  j["L"] = rep.l;
  j["L_iso"] = rep.l_iso;
  j["E_strata"] = rep.e_strata;
  j["orbit_counts"] = rep.orbit_counts;
  return j.dump(2) + "\n";
}

std::string strata_to_text(const StrataReport& rep) {
  std::ostringstream os;
  os << "strata: v=" << rep.v << " r=" << rep.r << " p=" << rep.p << "  |Omega|=" << rep.omega_size
     << "  |G|=" << rep.group_order << "\n";
  os << "  #  label              |H|   |N(H)|        |Omega^H|     L_iso      orbits\n";
  for (size_t i = 0; i < rep.classes.size(); ++i) {
    const auto& rec = rep.classes[i];
    os << "  " << i + 1 << "  " << rec.label;
    for (size_t k = rec.label.size(); k < 17; ++k) os << ' ';
    os << "  " << rec.order << "  " << rec.normalizer_size << "  " << rep.l[i] << "  "
       << rep.l_iso[i] << "  " << rep.orbit_counts[i] << "\n";
  }
  os << "total orbits: " << rep.total << "\n";
  return os.str();
}

std::string orbit_classes_to_json(const AbelianGroup& g, const Signature& sig,
                                  const OrbitClasses& oc) {
  json j;
  j["group"] = g.factors();
  j["signature"] = signature_to_string(sig);
  j["class_count"] = oc.count;
  j["valid_tuples"] = oc.valid_tuples;
  j["representatives"] = json::array();
  for (const auto& rep : oc.representatives) {
    json r;
    r["a"] = json::array();
    r["b"] = json::array();
    r["c"] = json::array();
    for (const auto& e : rep.a) r["a"].push_back(e.c);
    for (const auto& e : rep.b) r["b"].push_back(e.c);
    for (const auto& e : rep.c) r["c"].push_back(e.c);
    j["representatives"].push_back(r);
  }
  return j.dump(2) + "\n";
}

bool Table51Row::match() const {
  if (closed_form && oracle && *closed_form != *oracle) return false;
  if (closed_form && pipeline && *closed_form != *pipeline) return false;
  if (oracle && pipeline && *oracle != *pipeline) return false;
  return true;
}

std::string table51_rows_to_json(const std::vector<Table51Row>& rows) {
  json j;
  j["rows"] = json::array();
  for (const auto& row : rows) {
    json r{{"r", row.r}, {"v", row.v}, {"p", row.p}, {"match", row.match()}};
    if (row.closed_form) r["closed_form"] = *row.closed_form;
    if (row.oracle) r["oracle"] = *row.oracle;
    if (row.pipeline) r["pipeline"] = *row.pipeline;
    j["rows"].push_back(r);
  }
  return j.dump(2) + "\n";
}

std::string table51_rows_to_csv(const std::vector<Table51Row>& rows) {
  std::ostringstream os;
  os << "r,v,p,closed_form,oracle,pipeline,match\n";
  for (const auto& row : rows) {
    os << row.r << "," << row.v << "," << row.p << ",";
    if (row.closed_form) os << *row.closed_form;
    os << ",";
    if (row.oracle) os << *row.oracle;
    os << ",";
    if (row.pipeline) os << *row.pipeline;
    os << "," << (row.match() ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string table51_rows_to_text(const std::vector<Table51Row>& rows) {
  std::ostringstream os;
  os << "  r  v      p   closed     oracle   pipeline  match\n";
  auto cell = [](const std::optional<i64>& x) {
    return x ? std::to_string(*x) : std::string("-");
  };
  for (const auto& row : rows) {
    os << "  " << row.r << "  " << row.v << "  " << row.p << "  " << cell(row.closed_form) << "  "
       << cell(row.oracle) << "  " << cell(row.pipeline) << "  "
       << (row.match() ? "ok" : "MISMATCH") << "\n";
  }
  return os.str();
}

}  // namespace mcg
