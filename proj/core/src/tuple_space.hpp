#pragma once

// Internal packed-index machinery for the generating-vector orbit oracle
// and the normal-form search.  Not installed.

#include <cstdint>
#include <vector>

#include "mcg/abelian.hpp"
#include "mcg/genvec.hpp"

namespace mcg::detail {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// One BFS generator: a mapping-class move, a transposition of equal-period
// branch points, or an automorphism of G acting coordinate-wise.
struct TupleGen {
  enum class Kind { Move, CSwap, Aut } kind = Kind::Move;
  Move move{};           // Kind::Move
  int j1 = 0, j2 = 0;    // Kind::CSwap
  int aut_index = -1;    // Kind::Aut
};

// Tuples (A_1..A_rho, B_1..B_rho, C_1..C_r) packed as base-|G| indices,
// position 0 most significant so index order is lexicographic order.
struct TupleSpace {
  AbelianGroup group;
  Signature sig;
  int rho = 0;
  int r = 0;
  int npos = 0;
  u64 gsize = 0;
  u64 space = 0;

  std::vector<u32> add;       // gsize * gsize
  std::vector<u32> neg;       // gsize
  std::vector<i64> order_of;  // gsize

  std::vector<TupleGen> gens;
  std::vector<AbAutomorphism> aut_gens;
  std::vector<std::vector<u32>> aut_perm;  // aligned with aut_gens

  // Per-prime data for the surjectivity test on G/qG.
  struct PrimeView {
    i64 q = 0;
    int dim = 0;                 // number of coordinates with q | n_i
    std::vector<i64> flat;       // gsize * dim residues
    std::vector<i64> inv;        // inverses mod q (inv[0] unused)
  };
  std::vector<PrimeView> primes;

  TupleSpace(const AbelianGroup& g, const Signature& s, const Ceilings& ceilings,
             unsigned shuffle_seed);

  void decode(u64 idx, u32* digits) const;
  u64 encode(const u32* digits) const;
  GeneratingVector unpack(u64 idx) const;
  u64 pack(const GeneratingVector& gv) const;

  void apply_gen(const TupleGen& g, u32* digits) const;
  bool tuple_valid(const u32* digits) const;
};

struct OrbitScanResult {
  i64 orbit_count = 0;
  std::vector<u64> seeds;  // lexicographically least member per orbit
  u64 valid_tuples = 0;
};

// Scans the whole space in index order, BFS-closing each unvisited valid
// tuple.  Deterministic: seeds are the minima of their orbits.
OrbitScanResult scan_orbits(const TupleSpace& ts);

// BFS of the single orbit of `start`; parent[i] = (index into members of
// the BFS parent, generator id), with parent[0] = (0, -1).
struct OrbitWalk {
  std::vector<u64> members;
  std::vector<std::pair<int, int>> parent;
};
OrbitWalk walk_orbit(const TupleSpace& ts, u64 start);

}  // namespace mcg::detail
