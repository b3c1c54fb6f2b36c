#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pilgrim/events.hpp"
#include "pilgrim/exponent.hpp"
#include "pilgrim/params.hpp"
#include "pilgrim/rng.hpp"

namespace pilgrim {

// Sorted 1-based labels.
using Block = std::vector<int>;

// Blocks ranked first to last; labels within a block are unordered.
class OrderedPartition {
 public:
  OrderedPartition() = default;
  explicit OrderedPartition(std::vector<Block> blocks);

  int n() const noexcept { return n_; }
  int k() const noexcept { return static_cast<int>(blocks_.size()); }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  std::vector<long> sizes() const;

  friend bool operator==(const OrderedPartition&, const OrderedPartition&) = default;

 private:
  std::vector<Block> blocks_;
  int n_ = 0;
};

// Canonical form: blocks sorted by their smallest label.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<Block> blocks);
  // parses "1 2|3" style text
  static Partition parse(const std::string& text);

  int n() const noexcept { return n_; }
  int k() const noexcept { return static_cast<int>(blocks_.size()); }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  std::vector<long> sizes() const;
  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition&, const Partition&) = default;

 private:
  std::vector<Block> blocks_;
  int n_ = 0;
};

Partition forget_order(const OrderedPartition& a);

// Tie classes ordered by increasing time; ties are exact equality.
OrderedPartition extract_ordered_partition(const EventSequence& t);

double ordered_partition_logprob(const OrderedPartition& a, const ModelParams& params);
// same, from the ranked block sizes alone
double ordered_sizes_logprob(const std::vector<long>& sizes, const SplittingRule& rule);

// Sum over block orderings of the ordered law; at most 9 blocks.
double induced_partition_prob(const Partition& b, const ModelParams& params);
constexpr int kMaxInducedBlocks = 9;

double esf_logprob(const Partition& b, double theta);

Partition crp_sample(int n, double theta, Rng& rng);
Partition crp_sample(int n, double theta, std::uint64_t seed);
Partition two_param_crp_sample(int n, double alpha, double theta, Rng& rng);
Partition two_param_crp_sample(int n, double alpha, double theta, std::uint64_t seed);

// Blocks drawn without replacement with probability proportional to size.
OrderedPartition size_biased_order(const Partition& b, Rng& rng);
OrderedPartition size_biased_order(const Partition& b, std::uint64_t seed);

// P_i = W_i prod_{j<i} (1 - W_j), W ~ Beta(beta, rho).
std::vector<double> stick_breaking_sample(double beta, double rho, int depth, Rng& rng);
std::vector<double> stick_breaking_sample(double beta, double rho, int depth, std::uint64_t seed);

std::vector<Partition> all_set_partitions(int n);
// all compositions of n into positive parts
std::vector<std::vector<long>> compositions(int n);
// total mass of the ordered law over every ordered set partition of [n]
double ordered_partition_mass(int n, const ModelParams& params);

// Total variation between the beta = 1 induced law and ESF(theta = rho) on partitions of [n].
double crp_equivalence_distance(int n, double rho);

}  // namespace pilgrim
