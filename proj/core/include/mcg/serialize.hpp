#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcg/classify.hpp"

namespace mcg {

// Compact text form "rho;m1,m2,..." with "-" for an empty period list,
// mirroring the usual signature notation.
std::string signature_to_string(const Signature& sig);
Signature parse_signature(const std::string& text);

// Invariant factors as "n1,n2,...".
std::string group_to_string(const AbelianGroup& g);
AbelianGroup parse_group(const std::string& text);

std::string census_to_json(const CensusReport& rep);
std::string census_to_csv(const CensusReport& rep);
std::string census_to_text(const CensusReport& rep);

std::string strata_to_json(const StrataReport& rep);
std::string strata_to_text(const StrataReport& rep);

std::string orbit_classes_to_json(const AbelianGroup& g, const Signature& sig,
                                  const OrbitClasses& oc);

// One verification row of the closed-form table: published value next to
// oracle and pipeline recomputations, with agreement flags.
struct Table51Row {
  int r = 0, v = 0;
  i64 p = 0;
  std::optional<i64> closed_form;
  std::optional<i64> oracle;
  std::optional<i64> pipeline;

  bool match() const;
};

std::string table51_rows_to_json(const std::vector<Table51Row>& rows);
std::string table51_rows_to_csv(const std::vector<Table51Row>& rows);
std::string table51_rows_to_text(const std::vector<Table51Row>& rows);

}  // namespace mcg
