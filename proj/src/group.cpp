#include "qhf/group.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qhf {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::shared_ptr<FiniteGroup> make_group(int order) {
  auto g = std::make_shared<FiniteGroup>();
  g->order = order;
  g->mul.resize(order, order);
  g->inv.resize(order);
  return g;
}

void finish_group(FiniteGroup& g) {
  for (int i = 0; i < g.order; ++i) {
    int found = -1;
    for (int j = 0; j < g.order; ++j) {
      if (g.mul(i, j) == 0) {
        found = j;
        break;
      }
    }
    if (found < 0) throw std::invalid_argument("group table has no inverse for an element");
    g.inv(i) = found;
  }
  g.validate();
}

int mod(int a, int m) { return ((a % m) + m) % m; }

}  // namespace

int FiniteGroup::element_order(int i) const {
  int x = i, k = 1;
  while (x != 0) {
    x = mul(x, i);
    ++k;
    if (k > order) throw std::logic_error("element order exceeds group order");
  }
  return k;
}

void FiniteGroup::validate() const {
  if (order <= 0) throw std::invalid_argument("group order must be positive");
  if (mul.rows() != order || mul.cols() != order)
    throw std::invalid_argument("multiplication table shape mismatch");
  for (int i = 0; i < order; ++i) {
    if (mul(0, i) != i || mul(i, 0) != i)
      throw std::invalid_argument("element 0 is not the identity");
    if (mul(i, inv(i)) != 0 || mul(inv(i), i) != 0)
      throw std::invalid_argument("inverse table inconsistent with multiplication");
  }
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) {
      int ij = mul(i, j);
      if (ij < 0 || ij >= order) throw std::invalid_argument("table entry out of range");
      for (int k = 0; k < order; ++k)
        if (mul(ij, k) != mul(i, mul(j, k)))
          throw std::invalid_argument("associativity fails");
    }
}

std::vector<int> FiniteGroup::generators() const {
  std::vector<int> gens;
  std::vector<char> reached(order, 0);
  reached[0] = 1;
  int count = 1;
  while (count < order) {
    int next = -1;
    for (int i = 0; i < order; ++i)
      if (!reached[i]) {
        next = i;
        break;
      }
    gens.push_back(next);
    // closure of current generators
    std::vector<int> frontier{0};
    std::fill(reached.begin(), reached.end(), 0);
    reached[0] = 1;
    count = 1;
    while (!frontier.empty()) {
      std::vector<int> fresh;
      for (int x : frontier)
        for (int gidx : gens) {
          for (int y : {mul(x, gidx), mul(gidx, x)})
            if (!reached[y]) {
              reached[y] = 1;
              ++count;
              fresh.push_back(y);
            }
        }
      frontier = std::move(fresh);
    }
  }
  return gens;
}

std::vector<int> FiniteGroup::subgroup_closure(const std::vector<int>& gens) const {
  std::set<int> h{0};
  for (int g : gens) h.insert(g);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur(h.begin(), h.end());
    for (int a : cur)
      for (int b : cur) {
        if (h.insert(mul(a, b)).second) grew = true;
        if (h.insert(inv(a)).second) grew = true;
      }
  }
  return {h.begin(), h.end()};
}

bool FiniteGroup::is_abelian_subset(const std::vector<int>& elems) const {
  for (int a : elems)
    for (int b : elems)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

GroupPtr cyclic_group(int n) {
  if (n < 1) throw std::invalid_argument("cyclic: n must be >= 1");
  auto g = make_group(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g->mul(i, j) = mod(i + j, n);
  for (int i = 0; i < n; ++i) g->labels.push_back("g^" + std::to_string(i));
  finish_group(*g);
  return g;
}

// Q_n = <a, b | a^{2n} = e, b^2 = a^n, b a b^{-1} = a^{-1}>, order 4n.
// Normal forms a^k (index k) and b a^k (index 2n + k), k = 0..2n-1.
GroupPtr quasiquaternion_group(int n) {
  if (n < 2) throw std::invalid_argument("quasiquaternion: n must be >= 2");
  int N = 2 * n;
  auto g = make_group(4 * n);
  auto idx = [N](int bpow, int apow) { return bpow * N + mod(apow, N); };
  for (int s = 0; s < 2; ++s)
    for (int k = 0; k < N; ++k)
      for (int t = 0; t < 2; ++t)
        for (int l = 0; l < N; ++l) {
          // (b^s a^k)(b^t a^l); a b = b a^{-1} so a^k b = b a^{-k}
          int i = idx(s, k), j = idx(t, l);
          if (t == 0)
            g->mul(i, j) = idx(s, k + l);
          else if (s == 0 && t == 1)
            g->mul(i, j) = idx(1, l - k);
          else  // s == 1, t == 1: b a^k b a^l = b^2 a^{l-k} = a^{n+l-k}
            g->mul(i, j) = idx(0, n + l - k);
        }
  for (int k = 0; k < N; ++k) g->labels.push_back("a^" + std::to_string(k));
  for (int k = 0; k < N; ++k) g->labels.push_back("b*a^" + std::to_string(k));
  finish_group(*g);
  return g;
}

// D_2n = Z_2n x| Z_2 with b a b = a^{-1}, b^2 = e; order 4n.
GroupPtr dihedral_group(int n) {
  if (n < 2) throw std::invalid_argument("dihedral: n must be >= 2");
  int N = 2 * n;
  auto g = make_group(4 * n);
  auto idx = [N](int bpow, int apow) { return bpow * N + mod(apow, N); };
  for (int s = 0; s < 2; ++s)
    for (int k = 0; k < N; ++k)
      for (int t = 0; t < 2; ++t)
        for (int l = 0; l < N; ++l) {
          int i = idx(s, k), j = idx(t, l);
          if (t == 0)
            g->mul(i, j) = idx(s, k + l);
          else if (s == 0)
            g->mul(i, j) = idx(1, l - k);
          else  // (b a^k)(b a^l) = a^{l-k}
            g->mul(i, j) = idx(0, l - k);
        }
  for (int k = 0; k < N; ++k) g->labels.push_back("a^" + std::to_string(k));
  for (int k = 0; k < N; ++k) g->labels.push_back("b*a^" + std::to_string(k));
  finish_group(*g);
  return g;
}

namespace {

std::string perm_label(const std::vector<int>& p) {
  std::string s = "(";
  for (size_t i = 0; i < p.size(); ++i) {
    s += std::to_string(p[i] + 1);
    if (i + 1 < p.size()) s += " ";
  }
  return s + ")";
}

GroupPtr permutation_group(int n, bool even_only) {
  if (n < 4 || n > 7)
    throw std::invalid_argument("symmetric/alternating: n must be in [4, 7]");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    if (even_only) {
      int inversions = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (p[i] > p[j]) ++inversions;
      if (inversions % 2 != 0) continue;
    }
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);

  auto g = make_group(static_cast<int>(perms.size()));
  std::vector<int> comp(n);
  for (size_t i = 0; i < perms.size(); ++i)
    for (size_t j = 0; j < perms.size(); ++j) {
      for (int x = 0; x < n; ++x) comp[x] = perms[i][perms[j][x]];
      g->mul(static_cast<int>(i), static_cast<int>(j)) = index.at(comp);
    }
  for (auto& q : perms) g->labels.push_back(perm_label(q));
  finish_group(*g);
  return g;
}

}  // namespace

GroupPtr symmetric_group(int n) { return permutation_group(n, false); }
GroupPtr alternating_group(int n) { return permutation_group(n, true); }

int permutation_index(const FiniteGroup& g, const std::vector<int>& one_line) {
  std::string want = perm_label(one_line);
  for (int i = 0; i < g.order; ++i)
    if (g.labels[i] == want) return i;
  throw std::invalid_argument("permutation not found in group");
}

GroupPtr zm2_semidirect_group(int m) {
  if (m < 3) throw std::invalid_argument("zm2_semidirect: m must be >= 3");
  int order = 2 * m * m;
  auto g = make_group(order);
  auto idx = [m](int s, int a, int b) { return s * m * m + mod(a, m) * m + mod(b, m); };
  for (int s1 = 0; s1 < 2; ++s1)
    for (int a1 = 0; a1 < m; ++a1)
      for (int b1 = 0; b1 < m; ++b1)
        for (int s2 = 0; s2 < 2; ++s2)
          for (int a2 = 0; a2 < m; ++a2)
            for (int b2 = 0; b2 < m; ++b2) {
              // (s1,(a1,b1)) (s2,(a2,b2)) = (s1+s2, (a1,b1) + alpha_{s1}(a2,b2))
              int x = s1 ? b2 : a2, y = s1 ? a2 : b2;
              g->mul(idx(s1, a1, b1), idx(s2, a2, b2)) =
                  idx((s1 + s2) % 2, a1 + x, b1 + y);
            }
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        g->labels.push_back((s ? "s*" : "") + std::string("(") + std::to_string(a) + "," +
                            std::to_string(b) + ")");
  finish_group(*g);
  return g;
}

GroupPtr build_family(const std::string& family, int param) {
  if (family == "cyclic") return cyclic_group(param);
  if (family == "quasiquaternion") return quasiquaternion_group(param);
  if (family == "dihedral") return dihedral_group(param);
  if (family == "symmetric") return symmetric_group(param);
  if (family == "alternating") return alternating_group(param);
  if (family == "zm2_semidirect") return zm2_semidirect_group(param);
  throw std::invalid_argument("unknown group family: " + family);
}

GroupPtr group_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  int order = j.at("order").get<int>();
  auto g = make_group(order);
  auto table = j.at("mul");
  if (static_cast<int>(table.size()) != order)
    throw std::invalid_argument("mul table row count mismatch");
  for (int i = 0; i < order; ++i) {
    if (static_cast<int>(table[i].size()) != order)
      throw std::invalid_argument("mul table column count mismatch");
    for (int k = 0; k < order; ++k) g->mul(i, k) = table[i][k].get<int>();
  }
  if (j.contains("labels"))
    for (auto& l : j["labels"]) g->labels.push_back(l.get<std::string>());
  finish_group(*g);
  return g;
}

std::string group_to_json(const FiniteGroup& g) {
  nlohmann::json j;
  j["order"] = g.order;
  std::vector<std::vector<int>> table(g.order, std::vector<int>(g.order));
  for (int i = 0; i < g.order; ++i)
    for (int k = 0; k < g.order; ++k) table[i][k] = g.mul(i, k);
  j["mul"] = table;
  j["labels"] = g.labels;
  return j.dump(2);
}

int AbelianSubgroup::position_of(int group_index) const {
  for (size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == group_index) return static_cast<int>(i);
  return -1;
}

int AbelianSubgroup::dual_index_of_values(const Vec& values, double tol) const {
  for (int k = 0; k < size(); ++k)
    if ((characters.row(k).transpose() - values).cwiseAbs().maxCoeff() < tol) return k;
  return -1;
}

AbelianSubgroup abelian_dual(GroupPtr g, const std::vector<int>& subset) {
  std::vector<int> elems = subset;
  std::sort(elems.begin(), elems.end());
  if (elems.empty() || elems[0] != 0) {
    if (std::find(elems.begin(), elems.end(), 0) == elems.end())
      throw std::invalid_argument("subgroup must contain the identity");
  }
  // closure + abelian checks
  std::set<int> hset(elems.begin(), elems.end());
  for (int a : elems) {
    if (!hset.count(g->inv(a)))
      throw std::invalid_argument("subset not closed under inverses");
    for (int b : elems)
      if (!hset.count(g->mul(a, b)))
        throw std::invalid_argument("subset not closed under multiplication");
  }
  if (!g->is_abelian_subset(elems)) throw std::invalid_argument("subgroup is not abelian");

  // put identity first, keep the rest sorted by parent index
  elems.erase(std::remove(elems.begin(), elems.end(), 0), elems.end());
  elems.insert(elems.begin(), 0);
  int h = static_cast<int>(elems.size());
  std::map<int, int> pos;
  for (int i = 0; i < h; ++i) pos[elems[i]] = i;

  // Characters built by extending along a cyclic tower K <= <K, g> <= ...
  // Each character is stored as its value vector over `elems` positions.
  std::vector<Vec> chars;
  std::vector<int> known{0};  // positions forming the current subgroup K
  chars.emplace_back(Vec::Ones(h));
  std::set<int> known_set{0};

  while (static_cast<int>(known.size()) < h) {
    int gen = -1;
    for (int i = 0; i < h; ++i)
      if (!known_set.count(i)) {
        gen = i;
        break;
      }
    // d = minimal j >= 1 with gen^j in K
    int gidx = elems[gen];
    int d = 1, power = gidx;
    while (!known_set.count(pos.at(power))) {
      power = g->mul(power, gidx);
      ++d;
    }
    // extend every character of K in d ways
    std::vector<Vec> extended;
    std::vector<int> new_known;
    for (int kp : known)
      for (int j = 0; j < d; ++j) {
        int x = elems[kp];
        int gj = 0;
        for (int t = 0; t < j; ++t) gj = g->mul(gj, gidx);
        int prod = g->mul(x, gj);
        new_known.push_back(pos.at(prod));
      }
    for (const auto& chi : chars) {
      cplx base = chi(pos.at(power));  // chi(gen^d)
      double arg = std::arg(base);
      for (int t = 0; t < d; ++t) {
        cplx zeta = std::polar(1.0, (arg + 2.0 * kPi * t) / d);
        Vec ext = Vec::Zero(h);
        for (int kp : known)
          for (int j = 0; j < d; ++j) {
            int x = elems[kp];
            int gj = 0;
            for (int q = 0; q < j; ++q) gj = g->mul(gj, gidx);
            ext(pos.at(g->mul(x, gj))) = chi(kp) * std::pow(zeta, j);
          }
        extended.push_back(std::move(ext));
      }
    }
    chars = std::move(extended);
    known = new_known;
    known_set = std::set<int>(known.begin(), known.end());
  }

  // Deterministic order: trivial character first, then lexicographic on
  // rounded values.
  auto key = [h](const Vec& v) {
    std::vector<std::pair<long long, long long>> k(h);
    for (int i = 0; i < h; ++i)
      k[i] = {llround(v(i).real() * 1e6), llround(v(i).imag() * 1e6)};
    return k;
  };
  std::sort(chars.begin(), chars.end(),
            [&](const Vec& a, const Vec& b) { return key(a) < key(b); });
  for (size_t i = 0; i < chars.size(); ++i)
    if ((chars[i] - Vec::Ones(h)).cwiseAbs().maxCoeff() < 1e-9) {
      std::swap(chars[0], chars[i]);
      break;
    }

  AbelianSubgroup out;
  out.parent = g;
  out.elements = elems;
  out.characters.resize(h, h);
  for (int k = 0; k < h; ++k) out.characters.row(k) = chars[k].transpose();

  out.dual_mul.resize(h, h);
  out.dual_inv.resize(h);
  for (int a = 0; a < h; ++a) {
    for (int b = 0; b < h; ++b) {
      Vec prod = out.characters.row(a).cwiseProduct(out.characters.row(b)).transpose();
      int idx = out.dual_index_of_values(prod);
      if (idx < 0) throw std::logic_error("dual group not closed (character table bug)");
      out.dual_mul(a, b) = idx;
    }
    Vec inv_values = out.characters.row(a).conjugate().transpose();
    out.dual_inv(a) = out.dual_index_of_values(inv_values);
    if (out.dual_inv(a) < 0) throw std::logic_error("dual inverse missing");
  }
  return out;
}

int GroupAutomorphism::order() const {
  Eigen::VectorXi cur = map;
  int k = 1;
  auto is_id = [&](const Eigen::VectorXi& v) {
    for (int i = 0; i < v.size(); ++i)
      if (v(i) != i) return false;
    return true;
  };
  while (!is_id(cur)) {
    Eigen::VectorXi next(cur.size());
    for (int i = 0; i < cur.size(); ++i) next(i) = map(cur(i));
    cur = next;
    ++k;
    if (k > group->order) throw std::logic_error("automorphism order exceeds group order");
  }
  return k;
}

GroupAutomorphism GroupAutomorphism::inverse_map() const {
  GroupAutomorphism out;
  out.group = group;
  out.map.resize(map.size());
  for (int i = 0; i < map.size(); ++i) out.map(map(i)) = i;
  return out;
}

GroupAutomorphism GroupAutomorphism::compose(const GroupAutomorphism& other) const {
  GroupAutomorphism out;
  out.group = group;
  out.map.resize(map.size());
  for (int i = 0; i < map.size(); ++i) out.map(i) = map(other.map(i));
  return out;
}

namespace {

void check_automorphism(const FiniteGroup& g, const Eigen::VectorXi& map) {
  std::vector<char> hit(g.order, 0);
  for (int i = 0; i < g.order; ++i) {
    if (map(i) < 0 || map(i) >= g.order || hit[map(i)])
      throw std::invalid_argument("automorphism images are not a bijection");
    hit[map(i)] = 1;
  }
  if (map(0) != 0) throw std::invalid_argument("automorphism must fix the identity");
  for (int i = 0; i < g.order; ++i)
    for (int j = 0; j < g.order; ++j)
      if (map(g.mul(i, j)) != g.mul(map(i), map(j)))
        throw std::invalid_argument("images do not extend to a homomorphism");
}

}  // namespace

GroupAutomorphism automorphism(GroupPtr g,
                               const std::vector<std::pair<int, int>>& generator_images) {
  Eigen::VectorXi map = Eigen::VectorXi::Constant(g->order, -1);
  map(0) = 0;
  for (auto& [from, to] : generator_images) {
    if (map(from) >= 0 && map(from) != to)
      throw std::invalid_argument("conflicting generator images");
    map(from) = to;
  }
  // BFS: every element reachable as product of known elements gets its image.
  bool grew = true;
  while (grew) {
    grew = false;
    for (int i = 0; i < g->order; ++i) {
      if (map(i) < 0) continue;
      for (int j = 0; j < g->order; ++j) {
        if (map(j) < 0) continue;
        int ij = g->mul(i, j);
        int img = g->mul(map(i), map(j));
        if (map(ij) < 0) {
          map(ij) = img;
          grew = true;
        } else if (map(ij) != img) {
          throw std::invalid_argument("images do not extend to a homomorphism");
        }
      }
    }
  }
  for (int i = 0; i < g->order; ++i)
    if (map(i) < 0)
      throw std::invalid_argument("generator images do not generate the group");
  check_automorphism(*g, map);
  GroupAutomorphism out;
  out.group = g;
  out.map = map;
  return out;
}

GroupAutomorphism identity_automorphism(GroupPtr g) {
  GroupAutomorphism out;
  out.group = g;
  out.map.resize(g->order);
  for (int i = 0; i < g->order; ++i) out.map(i) = i;
  return out;
}

GroupAutomorphism conjugation_automorphism(GroupPtr g, int by) {
  GroupAutomorphism out;
  out.group = g;
  out.map.resize(g->order);
  int byinv = g->inv(by);
  for (int i = 0; i < g->order; ++i) out.map(i) = g->mul(g->mul(by, i), byinv);
  check_automorphism(*g, out.map);
  return out;
}

int Partition::block_of(int i) const {
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int x : blocks[b])
      if (x == i) return static_cast<int>(b);
  return -1;
}

void Partition::validate(int n) const {
  std::vector<char> hit(n, 0);
  for (const auto& b : blocks)
    for (int x : b) {
      if (x < 0 || x >= n || hit[x])
        throw std::invalid_argument("partition blocks are not disjoint subsets of the set");
      hit[x] = 1;
    }
  for (char c : hit)
    if (!c) throw std::invalid_argument("partition does not cover the set");
}

Partition orbit_partition(GroupPtr g, const std::vector<GroupAutomorphism>& gens) {
  // closure of the generated automorphism group
  std::vector<Eigen::VectorXi> maps;
  auto contains = [&](const Eigen::VectorXi& m) {
    for (auto& x : maps)
      if (x == m) return true;
    return false;
  };
  maps.push_back(identity_automorphism(g).map);
  for (auto& a : gens)
    if (!contains(a.map)) maps.push_back(a.map);
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t i = 0; i < maps.size(); ++i)
      for (size_t j = 0; j < maps.size(); ++j) {
        Eigen::VectorXi c(g->order);
        for (int x = 0; x < g->order; ++x) c(x) = maps[i](maps[j](x));
        if (!contains(c)) {
          maps.push_back(c);
          grew = true;
        }
      }
  }
  Partition part;
  std::vector<char> seen(g->order, 0);
  for (int x = 0; x < g->order; ++x) {
    if (seen[x]) continue;
    std::set<int> orbit;
    for (auto& m : maps) orbit.insert(m(x));
    std::vector<int> block(orbit.begin(), orbit.end());
    for (int y : block) seen[y] = 1;
    part.blocks.push_back(block);
  }
  return part;
}

QuotientGroup quotient_group(GroupPtr g, const std::vector<int>& normal_subgroup) {
  std::set<int> n(normal_subgroup.begin(), normal_subgroup.end());
  n.insert(0);
  for (int x : n)
    for (int y : n)
      if (!n.count(g->mul(x, y)) || !n.count(g->inv(x)))
        throw std::invalid_argument("subset is not a subgroup");
  for (int x : n)
    for (int t = 0; t < g->order; ++t)
      if (!n.count(g->mul(g->mul(t, x), g->inv(t))))
        throw std::invalid_argument("subgroup is not normal");

  Eigen::VectorXi coset = Eigen::VectorXi::Constant(g->order, -1);
  std::vector<int> reps;
  for (int x = 0; x < g->order; ++x) {
    if (coset(x) >= 0) continue;
    int c = static_cast<int>(reps.size());
    reps.push_back(x);
    for (int h : n) coset(g->mul(x, h)) = c;
  }
  // identity coset must be index 0: reps[0] = 0 since coset(0) assigned first
  auto q = make_group(static_cast<int>(reps.size()));
  for (size_t i = 0; i < reps.size(); ++i)
    for (size_t j = 0; j < reps.size(); ++j)
      q->mul(static_cast<int>(i), static_cast<int>(j)) = coset(g->mul(reps[i], reps[j]));
  for (int r : reps)
    q->labels.push_back((g->labels.empty() ? "c" + std::to_string(r) : g->labels[r]) + "N");
  finish_group(*q);
  return {q, coset};
}

}  // namespace qhf
