#pragma once

#include <stdexcept>
#include <string>

namespace mcg {

// A requested enumeration or search would exceed its configured ceiling.
// Always a structured refusal, never a silent truncation.
class CeilingExceeded : public std::runtime_error {
public:
  explicit CeilingExceeded(const std::string& what) : std::runtime_error(what) {}
};

// The input is outside the range the structured algorithms support
// (unsupported table cell, singular prime, degree too large, ...).
class OutOfScope : public std::runtime_error {
public:
  explicit OutOfScope(const std::string& what) : std::runtime_error(what) {}
};

// A transformation was requested whose side conditions do not hold
// (e.g. an elliptic swap between branch points of different period).
class InvalidMove : public std::invalid_argument {
public:
  explicit InvalidMove(const std::string& what) : std::invalid_argument(what) {}
};

// The orbit-count pipeline produced a non-integral or negative stratum
// count.  This is a diagnostic: the inputs are inconsistent.
class PipelineInconsistency : public std::runtime_error {
public:
  explicit PipelineInconsistency(const std::string& what) : std::runtime_error(what) {}
};

// Ceilings shared by the enumeration and orbit machinery.  All checks are
// hard refusals via CeilingExceeded.
struct Ceilings {
  long long enumeration = 1LL << 24;     // dense matrix / tuple enumerations
  unsigned long long oracle = 1ULL << 26;// brute-force orbit spaces
  long long automorphisms = 10000;       // |G| bound for Aut(G) enumeration
};

}  // namespace mcg
