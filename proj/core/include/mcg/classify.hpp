#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcg/genvec.hpp"
#include "mcg/ramified.hpp"
#include "mcg/unramified.hpp"

namespace mcg {

// Block form of an elementary abelian generating vector: the hyperbolic
// images span the first u coordinates, the elliptic images the last v.
struct SplitForm {
  int u = 0, v = 0;
  FpMatrix y_ab;  // u x 2*rho, rank u
  FpMatrix y_c;   // v x r, rank v
  std::vector<ReductionStep> word;  // certifies the transformation
};

// Strips elliptic components from the handle images with mixed moves, then
// changes basis so the vector attains block form.  Requires an elementary
// abelian group, signature (rho; p^r), and r != 1.
SplitForm split(const GeneratingVector& gv);

struct ActionCountSummand {
  int u = 0, v = 0;
  i64 h = 0, e = 0;
  std::string e_provenance;  // "trivial" | "table51" | "oracle"
};

struct ActionCount {
  bool feasible = true;
  i64 total = 0;
  std::optional<i64> genus;
  std::vector<ActionCountSummand> summands;
  std::string note;
};

// Number of inequivalent F_p^w actions with the given elementary abelian
// signature: sum over u of h_u * e_{w-u}.
ActionCount count_actions(i64 p, int w, const Signature& sig, const Ceilings& ceilings = Ceilings{});

struct CensusEntry {
  Signature sig;
  ActionCount count;
};

struct CensusReport {
  i64 p = 0;
  int w = 0;
  i64 genus = 0;
  std::vector<CensusEntry> entries;
  i64 total = 0;
};

// Enumerates every signature (rho; p^r) passing Riemann-Hurwitz for
// (p^w, genus) and counts the actions each contributes.
CensusReport genus_census(i64 p, int w, i64 genus, const Ceilings& ceilings = Ceilings{},
                          int workers = 1);

}  // namespace mcg
