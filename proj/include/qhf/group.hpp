#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qhf {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RowVec = Eigen::RowVectorXcd;

/// A finite group as a dense multiplication table over indices 0..order-1.
/// Index 0 is always the identity.
struct FiniteGroup {
  int order = 0;
  Eigen::MatrixXi mul;   // mul(i, j) = index of g_i * g_j
  Eigen::VectorXi inv;   // inv(i) = index of g_i^{-1}
  std::vector<std::string> labels;

  int identity() const { return 0; }
  int multiply(int i, int j) const { return mul(i, j); }
  int inverse(int i) const { return inv(i); }
  int element_order(int i) const;

  /// Exhaustive check of the group axioms. Throws std::invalid_argument
  /// on the first violated triple.
  void validate() const;

  /// A small generating set, found greedily.
  std::vector<int> generators() const;

  /// Closure of a subset under multiplication and inverses.
  std::vector<int> subgroup_closure(const std::vector<int>& gens) const;

  bool is_abelian_subset(const std::vector<int>& elems) const;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Concrete families. Each validates parameters and the resulting table.
GroupPtr cyclic_group(int n);                 // Z_n, order n (n >= 1)
GroupPtr quasiquaternion_group(int n);        // Q_n, order 4n (n >= 2)
GroupPtr dihedral_group(int n);               // D_2n = Z_2n x| Z_2, order 4n (n >= 2)
GroupPtr symmetric_group(int n);              // S_n, order n! (4 <= n <= 7)
GroupPtr alternating_group(int n);            // A_n, order n!/2 (4 <= n <= 7)
GroupPtr zm2_semidirect_group(int m);         // Z_m^2 x| Z_2, order 2m^2 (m >= 3)

/// Dispatch by family name ("cyclic", "quasiquaternion", "dihedral",
/// "symmetric", "alternating", "zm2_semidirect").
GroupPtr build_family(const std::string& family, int param);

/// Load / save a group definition {"order": N, "mul": [[...]], "labels": [...]}.
GroupPtr group_from_json(const std::string& text);
std::string group_to_json(const FiniteGroup& g);

// Permutation-group helpers (S_n / A_n are enumerated in lexicographic
// one-line order; these map between one-line notation and indices).
int permutation_index(const FiniteGroup& g, const std::vector<int>& one_line);

/// An abelian subgroup H of G together with its full character table.
/// characters(k, j) = <chi_k, elements[j]>; chi_0 is the trivial character.
struct AbelianSubgroup {
  GroupPtr parent;
  std::vector<int> elements;   // indices into parent; elements[0] = identity
  Mat characters;              // |H| x |H|
  Eigen::MatrixXi dual_mul;    // product in the dual group
  Eigen::VectorXi dual_inv;

  int size() const { return static_cast<int>(elements.size()); }
  /// Position of a parent-group index inside `elements`, or -1.
  int position_of(int group_index) const;
  /// Dual element determined by its values on the whole of H (within tol).
  int dual_index_of_values(const Vec& values, double tol = 1e-8) const;
};

/// Build the dual character table of an abelian subgroup.
/// Throws if the subset is not a closed abelian subgroup.
AbelianSubgroup abelian_dual(GroupPtr g, const std::vector<int>& subset);

/// A verified automorphism of a finite group, stored as an index permutation.
struct GroupAutomorphism {
  GroupPtr group;
  Eigen::VectorXi map;

  int apply(int i) const { return map(i); }
  int order() const;
  GroupAutomorphism inverse_map() const;
  GroupAutomorphism compose(const GroupAutomorphism& other) const;  // this after other
};

/// Automorphism from images of a generating set. Images must extend to a
/// bijective homomorphism (checked exhaustively); throws otherwise.
GroupAutomorphism automorphism(GroupPtr g,
                               const std::vector<std::pair<int, int>>& generator_images);

GroupAutomorphism identity_automorphism(GroupPtr g);
GroupAutomorphism conjugation_automorphism(GroupPtr g, int by);
/// Conjugation of a subgroup (given as sorted element list, e.g. A_n inside
/// S_n) is handled by building the map directly; see automorphism().

/// A partition of {0..n-1} into disjoint blocks.
struct Partition {
  std::vector<std::vector<int>> blocks;
  int block_of(int i) const;
  void validate(int n) const;
};

/// Orbits of the automorphism group generated by `gens` acting on G.
Partition orbit_partition(GroupPtr g, const std::vector<GroupAutomorphism>& gens);

/// Quotient G/N for a normal subgroup N, plus the index map g -> gN.
struct QuotientGroup {
  GroupPtr quotient;
  Eigen::VectorXi projection;  // element of G -> element of G/N
};
QuotientGroup quotient_group(GroupPtr g, const std::vector<int>& normal_subgroup);

}  // namespace qhf
