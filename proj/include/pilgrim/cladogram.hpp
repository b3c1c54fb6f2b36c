#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pilgrim/rng.hpp"

namespace pilgrim {

// Split-size law q_m(i), i = 1..m-1, for a clade of m leaves.
class SplitModel {
 public:
  // q_m(i) proportional to Gamma(beta + i) Gamma(beta + m - i) / (i! (m - i)!), beta > -1.
  // Yule is beta = 1, the uniform model beta = -1/2.
  static SplitModel beta_splitting(double beta);
  // Only singletons split off; the limit of beta_splitting as beta -> -1.
  static SplitModel comb();

  bool is_comb() const noexcept { return comb_; }
  double beta() const noexcept { return beta_; }
  double prob(int m, int i) const;
  // q_m(1) + q_m(m - 1), counted once when m = 2
  double singleton_mass(int m) const;

 private:
  SplitModel(bool comb, double beta) : comb_(comb), beta_(beta) {}
  bool comb_;
  double beta_;
};

double beta_split_prob(int n, int i, double beta);

enum class HoldingIndexing {
  // lambda_{m+1} (1 - p_{m+1}) = lambda_m, p_{m+1} the chance a given leaf splits off alone
  kLeafSingleton,
  // lambda_{m+1} (1 - Q_m) = lambda_m, Q_m the singleton mass at m; degenerates at m = 2
  kPrinted,
};

// lambda_2..lambda_{n_max}; element 0 is lambda_2.
std::vector<double> holding_rates(const SplitModel& model, double lambda2, int n_max,
                                  HoldingIndexing indexing = HoldingIndexing::kLeafSingleton);

// Chance the new particle goes right at a split of n into (i, n - i).
double branch_prob_right(int n, int i, double beta);
// Chance of going right at each of i consecutive left-singleton splits.
double branch_prob_consecutive(int n, int i, double beta);
// max |right - consecutive| over 2 <= n <= n_max, 1 <= i <= n - 1 with positive denominators
double continuity_equality_check(double beta, int n_max);

struct CladeNode {
  std::string label;  // leaves only
  std::optional<double> length;
  std::vector<int> children;
};

// Rooted leaf-labelled binary tree stored as an arena.
class Cladogram {
 public:
  Cladogram() = default;
  Cladogram(std::vector<CladeNode> nodes, int root);

  const std::vector<CladeNode>& nodes() const noexcept { return nodes_; }
  int root() const noexcept { return root_; }
  int leaf_count() const;
  std::vector<std::string> leaves(int node) const;
  bool is_leaf(int node) const { return nodes_.at(static_cast<std::size_t>(node)).children.empty(); }

  // sizes (smaller, larger) of the root split
  std::pair<int, int> root_split() const;
  // length of the root edge, if any
  std::optional<double> root_length() const { return nodes_.at(static_cast<std::size_t>(root_)).length; }

  // order-insensitive form, e.g. "((1,2),(3,(4,5)))"
  std::string canonical_topology() const;

  friend bool operator==(const Cladogram& a, const Cladogram& b);

 private:
  std::vector<CladeNode> nodes_;
  int root_ = -1;
};

// Leaves labelled 1..n; internal nodes carry Exp(lambda_m) holding times.
Cladogram sample_cladogram(int n, const SplitModel& model, double lambda2, Rng& rng);
Cladogram sample_cladogram(int n, const SplitModel& model, double lambda2, std::uint64_t seed);

std::string to_newick(const Cladogram& tree);
Cladogram parse_newick(const std::string& text);

// sum over internal nodes of |left leaves - right leaves|
long colless_index(const Cladogram& tree);

// Subtree spanned by the kept labels; unary nodes are suppressed and their lengths added.
Cladogram restrict_to(const Cladogram& tree, const std::set<std::string>& keep);

}  // namespace pilgrim
