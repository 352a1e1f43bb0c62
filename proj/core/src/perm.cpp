#include "mcg/perm.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mcg {

namespace {
constexpr int kMaxDegree = 6;

void check_degree(int degree) {
  if (degree < 1 || degree > kMaxDegree)
    throw OutOfScope("permutation degree must be 1..6");
}
}  // namespace

Perm::Perm(int degree) : img_(degree) {
  check_degree(degree);
  std::iota(img_.begin(), img_.end(), 0);
}

Perm Perm::from_images0(std::vector<int> images) {
  check_degree(static_cast<int>(images.size()));
  std::vector<bool> seen(images.size(), false);
  for (int v : images) {
    if (v < 0 || v >= static_cast<int>(images.size()) || seen[v])
      throw std::invalid_argument("Perm: images are not a bijection");
    seen[v] = true;
  }
  Perm p;
  p.img_ = std::move(images);
  return p;
}

Perm Perm::from_images1(const std::vector<int>& images) {
  std::vector<int> img0(images.size());
  for (size_t i = 0; i < images.size(); ++i) img0[i] = images[i] - 1;
  return from_images0(std::move(img0));
}

Perm Perm::from_cycles1(int degree, const std::vector<std::vector<int>>& cycles) {
  check_degree(degree);
  std::vector<int> img(degree);
  std::iota(img.begin(), img.end(), 0);
  for (const auto& cyc : cycles) {
    for (size_t i = 0; i < cyc.size(); ++i) {
      int from = cyc[i] - 1;
      int to = cyc[(i + 1) % cyc.size()] - 1;
      if (from < 0 || from >= degree || to < 0 || to >= degree)
        throw std::invalid_argument("Perm: cycle entry out of range");
      img[from] = to;
    }
  }
  return from_images0(std::move(img));
}

Perm Perm::then(const Perm& o) const {
  if (degree() != o.degree()) throw std::invalid_argument("Perm: mixed degrees");
  Perm r;
  r.img_.resize(img_.size());
  for (size_t i = 0; i < img_.size(); ++i) r.img_[i] = o.img_[img_[i]];
  return r;
}

Perm Perm::inverse() const {
  Perm r;
  r.img_.resize(img_.size());
  for (size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<int>(i);
  return r;
}

bool Perm::is_identity() const {
  for (size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != static_cast<int>(i)) return false;
  return true;
}

int Perm::order() const {
  Perm acc = *this;
  int n = 1;
  while (!acc.is_identity()) {
    acc = acc.then(*this);
    ++n;
  }
  return n;
}

std::vector<int> Perm::cycle_type() const {
  std::vector<bool> seen(img_.size(), false);
  std::vector<int> type;
  for (size_t i = 0; i < img_.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    size_t j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = img_[j];
      ++len;
    }
    type.push_back(len);
  }
  std::sort(type.rbegin(), type.rend());
  return type;
}

std::vector<std::vector<int>> Perm::cycles1() const {
  std::vector<bool> seen(img_.size(), false);
  std::vector<std::vector<int>> out;
  for (size_t i = 0; i < img_.size(); ++i) {
    if (seen[i] || img_[i] == static_cast<int>(i)) continue;
    std::vector<int> cyc;
    size_t j = i;
    while (!seen[j]) {
      seen[j] = true;
      cyc.push_back(static_cast<int>(j) + 1);
      j = img_[j];
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

std::string Perm::to_string() const {
  auto cyc = cycles1();
  if (cyc.empty()) return "()";
  std::ostringstream os;
  for (const auto& c : cyc) {
    os << '(';
    for (size_t i = 0; i < c.size(); ++i) {
      if (i) os << ' ';
      os << c[i];
    }
    os << ')';
  }
  return os.str();
}

std::uint64_t Perm::pack() const {
  std::uint64_t key = img_.size();
  for (int v : img_) key = key * 8 + static_cast<std::uint64_t>(v);
  return key;
}

FpMatrix perm_matrix(const Perm& alpha, i64 p) {
  const int r = alpha.degree();
  FpMatrix m(r, r, p);
  for (int i = 0; i < r; ++i) m.set(i, alpha(i), 1);
  return m;
}

std::vector<Perm> all_perms(int degree) {
  check_degree(degree);
  std::vector<int> img(degree);
  std::iota(img.begin(), img.end(), 0);
  std::vector<Perm> out;
  do {
    out.push_back(Perm::from_images0(img));
  } while (std::next_permutation(img.begin(), img.end()));
  std::sort(out.begin(), out.end());
  return out;
}

bool PermSubgroup::contains(const Perm& g) const {
  return std::binary_search(elements.begin(), elements.end(), g);
}

std::vector<std::vector<int>> PermSubgroup::orbit_partition() const {
  std::vector<int> root(degree);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const auto& g : elements)
    for (int i = 0; i < degree; ++i) {
      int a = find(i), b = find(g(i));
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  std::map<int, std::vector<int>> blocks;
  for (int i = 0; i < degree; ++i) blocks[find(i)].push_back(i + 1);
  std::vector<std::vector<int>> out;
  for (auto& [_, blk] : blocks) out.push_back(std::move(blk));
  return out;
}

PermSubgroup closure(int degree, const std::vector<Perm>& gens) {
  check_degree(degree);
  for (const auto& g : gens)
    if (g.degree() != degree) throw std::invalid_argument("closure: mixed degrees");
  std::set<Perm> elems{Perm(degree)};
  std::vector<Perm> frontier{Perm(degree)};
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& e : frontier)
      for (const auto& g : gens) {
        Perm h = e.then(g);
        if (elems.insert(h).second) next.push_back(h);
      }
    frontier = std::move(next);
  }
  PermSubgroup sub;
  sub.degree = degree;
  sub.elements.assign(elems.begin(), elems.end());
  sub.generators = gens;
  return sub;
}

PermSubgroup conjugate(const PermSubgroup& h, const Perm& g) {
  PermSubgroup out;
  out.degree = h.degree;
  Perm ginv = g.inverse();
  for (const auto& e : h.elements) out.elements.push_back(ginv.then(e).then(g));
  std::sort(out.elements.begin(), out.elements.end());
  for (const auto& e : h.generators) out.generators.push_back(ginv.then(e).then(g));
  return out;
}

PermSubgroup normalizer_in_sym(const PermSubgroup& h) {
  std::vector<Perm> gens;
  std::vector<Perm> members;
  for (const auto& g : all_perms(h.degree)) {
    if (conjugate(h, g) == h) members.push_back(g);
  }
  PermSubgroup out;
  out.degree = h.degree;
  out.elements = std::move(members);
  std::sort(out.elements.begin(), out.elements.end());
  out.generators = out.elements;
  return out;
}

namespace {

std::vector<std::uint64_t> subgroup_key(const PermSubgroup& h) {
  std::vector<std::uint64_t> key;
  key.reserve(h.elements.size());
  for (const auto& e : h.elements) key.push_back(e.pack());
  return key;
}

// Names for the small-degree subgroups that show up in reports; purely
// cosmetic, falls back to a generic label.
std::string class_name(const PermSubgroup& h) {
  const i64 n = h.order();
  if (n == 1) return "1";
  bool abelian = true;
  for (const auto& a : h.elements)
    for (const auto& b : h.elements)
      if (!(a.then(b) == b.then(a))) {
        abelian = false;
        break;
      }
  bool cyclic = false;
  std::vector<int> gen_type;
  for (const auto& e : h.elements)
    if (e.order() == n) {
      cyclic = true;
      gen_type = e.cycle_type();
      break;
    }
  auto orbits = h.orbit_partition();
  int moved = 0;
  for (const auto& blk : orbits)
    if (blk.size() > 1) moved += static_cast<int>(blk.size());
  if (cyclic) {
    std::ostringstream os;
    os << "C" << n;
    std::vector<int> nontrivial;
    for (int c : gen_type)
      if (c > 1) nontrivial.push_back(c);
    if (nontrivial.size() > 1) {
      os << "[";
      for (size_t i = 0; i < nontrivial.size(); ++i) {
        if (i) os << ",";
        os << nontrivial[i];
      }
      os << "]";
    }
    return os.str();
  }
  if (n == 4 && abelian) {
    // Klein four-group; the transitive copy on four points is often
    // written V4 (also seen as K4), the intransitive one is S2 x S2.
    if (orbits.size() == 1 || moved == 4) {
      bool transitive = false;
      for (const auto& blk : orbits)
        if (blk.size() == 4) transitive = true;
      return transitive ? "V4" : "S2xS2";
    }
    return "S2xS2";
  }
  if (n == 6 && !abelian) return "S3";
  if (n == 8 && !abelian) return "D4";
  if (n == 12) return "A4";
  if (n == 24) return "S4";
  if (n == 60) return "A5";
  if (n == 120) return "S5";
  if (n == 10) return "D5";
  if (n == 20) return "F20";
  std::ostringstream os;
  os << "G" << n;
  return os.str();
}

}  // namespace

int SubgroupClassTable::class_index(const PermSubgroup& h) const {
  for (size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].order != h.order()) continue;
    for (const auto& g : all_perms(degree))
      if (conjugate(h, g) == classes[i].representative) return static_cast<int>(i);
  }
  return -1;
}

SubgroupClassTable subgroup_classes(int r) {
  if (r > 5) throw OutOfScope("subgroup_classes: degree must be at most 5");
  check_degree(r);

  // Enumerate every subgroup by closing subsets one generator at a time.
  std::map<std::vector<std::uint64_t>, PermSubgroup> all;
  const auto sym = all_perms(r);
  PermSubgroup trivial = closure(r, {});
  all[subgroup_key(trivial)] = trivial;
  std::vector<PermSubgroup> frontier{trivial};
  while (!frontier.empty()) {
    std::vector<PermSubgroup> next;
    for (const auto& sub : frontier)
      for (const auto& g : sym) {
        if (sub.contains(g)) continue;
        std::vector<Perm> gens = sub.generators;
        gens.push_back(g);
        PermSubgroup bigger = closure(r, gens);
        auto key = subgroup_key(bigger);
        if (all.emplace(key, bigger).second) next.push_back(bigger);
      }
    frontier = std::move(next);
  }

  // Partition into conjugacy classes.
  std::map<std::vector<std::uint64_t>, int> seen;
  std::vector<SubgroupClass> classes;
  for (const auto& [key, sub] : all) {
    if (seen.count(key)) continue;
    std::set<std::vector<std::uint64_t>> members;
    PermSubgroup rep = sub;
    auto rep_key = key;
    for (const auto& g : sym) {
      PermSubgroup conj = conjugate(sub, g);
      auto ck = subgroup_key(conj);
      if (members.insert(ck).second && ck < rep_key) {
        rep_key = ck;
        rep = conj;
      }
    }
    for (const auto& mk : members) seen[mk] = static_cast<int>(classes.size());
    SubgroupClass cls;
    cls.representative = rep;
    cls.class_size = static_cast<i64>(members.size());
    cls.order = rep.order();
    cls.orbit_partition = rep.orbit_partition();
    cls.name = class_name(rep);
    classes.push_back(std::move(cls));
  }

  // Containment up to conjugacy only ever points from smaller to larger
  // order, so sorting by (order, lex least element list) is a valid
  // topological order with a deterministic tie-break.
  std::sort(classes.begin(), classes.end(), [](const SubgroupClass& a, const SubgroupClass& b) {
    if (a.order != b.order) return a.order < b.order;
    return subgroup_key(a.representative) < subgroup_key(b.representative);
  });

  SubgroupClassTable table;
  table.degree = r;
  table.classes = std::move(classes);
  table.total_subgroups = static_cast<i64>(all.size());
  return table;
}

}  // namespace mcg
