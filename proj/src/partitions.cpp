#include "pilgrim/partitions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pilgrim {

namespace {

int validate_blocks(std::vector<Block>& blocks) {
  int n = 0;
  for (auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("partition blocks must be non-empty");
    std::sort(b.begin(), b.end());
    n += static_cast<int>(b.size());
  }
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& b : blocks) {
    for (int x : b) {
      if (x < 1 || x > n || seen[x]) throw std::invalid_argument("blocks must partition {1, ..., n}");
      seen[x] = 1;
    }
  }
  return n;
}

std::vector<long> block_sizes(const std::vector<Block>& blocks) {
  std::vector<long> s;
  s.reserve(blocks.size());
  for (const auto& b : blocks) s.push_back(static_cast<long>(b.size()));
  return s;
}

Partition from_tables(const std::vector<int>& table_of) {
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < table_of.size(); ++i) {
    const auto t = static_cast<std::size_t>(table_of[i]);
    if (t >= blocks.size()) blocks.resize(t + 1);
    blocks[t].push_back(static_cast<int>(i + 1));
  }
  return Partition(std::move(blocks));
}

}  // namespace

OrderedPartition::OrderedPartition(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  n_ = validate_blocks(blocks_);
}

std::vector<long> OrderedPartition::sizes() const { return block_sizes(blocks_); }

Partition::Partition(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  n_ = validate_blocks(blocks_);
  std::sort(blocks_.begin(), blocks_.end(), [](const Block& a, const Block& b) { return a.front() < b.front(); });
}

Partition Partition::parse(const std::string& text) {
  std::vector<Block> blocks;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '|')) {
    std::stringstream ps(part);
    Block b;
    int x;
    while (ps >> x) b.push_back(x);
    if (!ps.eof()) throw std::invalid_argument("cannot parse partition '" + text + "'");
    blocks.push_back(std::move(b));
  }
  return Partition(std::move(blocks));
}

std::vector<long> Partition::sizes() const { return block_sizes(blocks_); }

std::string Partition::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) s += '|';
    for (std::size_t j = 0; j < blocks_[i].size(); ++j) {
      if (j) s += ' ';
      s += std::to_string(blocks_[i][j]);
    }
  }
  return s;
}

Partition forget_order(const OrderedPartition& a) { return Partition(a.blocks()); }

OrderedPartition extract_ordered_partition(const EventSequence& t) {
  if (t.empty()) throw std::invalid_argument("event sequence is empty");
  std::vector<int> order(static_cast<std::size_t>(t.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&t](int a, int b) { return t[a] < t[b]; });
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || t[order[i]] != t[order[i - 1]]) blocks.emplace_back();
    blocks.back().push_back(order[i] + 1);
  }
  return OrderedPartition(std::move(blocks));
}

double ordered_sizes_logprob(const std::vector<long>& sizes, const SplittingRule& rule) {
  long beyond = std::accumulate(sizes.begin(), sizes.end(), 0L);
  double lp = 0.0;
  for (long d : sizes) {
    beyond -= d;
    lp += rule.log_prob(beyond, d);
  }
  return lp;
}

double ordered_partition_logprob(const OrderedPartition& a, const ModelParams& params) {
  if (a.n() == 0) return 0.0;
  return ordered_sizes_logprob(a.sizes(), SplittingRule(params, a.n()));
}

double induced_partition_prob(const Partition& b, const ModelParams& params) {
  const int k = b.k();
  if (k > kMaxInducedBlocks)
    throw std::invalid_argument("induced_partition_prob enumerates block orders only for k <= 9");
  if (k == 0) return 1.0;
  const SplittingRule rule(params, b.n());
  const auto sizes = b.sizes();
  // f[S]: mass of all orderings of the blocks in S, placed last
  const std::size_t full = (std::size_t{1} << k);
  std::vector<double> f(full, 0.0);
  std::vector<long> mass(full, 0);
  f[0] = 1.0;
  for (std::size_t s = 1; s < full; ++s) {
    const int low = std::countr_zero(s);
    mass[s] = mass[s & (s - 1)] + sizes[static_cast<std::size_t>(low)];
    double acc = 0.0;
    for (int i = 0; i < k; ++i) {
      const std::size_t bit = std::size_t{1} << i;
      if (!(s & bit)) continue;
      const long d = sizes[static_cast<std::size_t>(i)];
      acc += rule.prob(mass[s] - d, d) * f[s ^ bit];
    }
    f[s] = acc;
  }
  return f[full - 1];
}

double esf_logprob(const Partition& b, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  double lp = b.k() * std::log(theta) - log_rising(theta, b.n());
  for (long d : b.sizes()) lp += std::lgamma(static_cast<double>(d));
  return lp;
}

Partition crp_sample(int n, double theta, Rng& rng) { return two_param_crp_sample(n, 0.0, theta, rng); }

Partition crp_sample(int n, double theta, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return crp_sample(n, theta, rng);
}

Partition two_param_crp_sample(int n, double alpha, double theta, Rng& rng) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0, 1)");
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  std::vector<int> table_of;
  std::vector<double> size;
  table_of.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // the remainder after all tables, theta + k alpha, opens a new one
    double u = draw_uniform(rng) * (i + theta);
    int chosen = -1;
    for (std::size_t t = 0; t < size.size(); ++t) {
      u -= size[t] - alpha;
      if (u < 0.0) {
        chosen = static_cast<int>(t);
        break;
      }
    }
    if (chosen < 0) {
      chosen = static_cast<int>(size.size());
      size.push_back(0.0);
    }
    size[static_cast<std::size_t>(chosen)] += 1.0;
    table_of.push_back(chosen);
  }
  return from_tables(table_of);
}

Partition two_param_crp_sample(int n, double alpha, double theta, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return two_param_crp_sample(n, alpha, theta, rng);
}

OrderedPartition size_biased_order(const Partition& b, Rng& rng) {
  std::vector<Block> pool = b.blocks();
  std::vector<Block> out;
  long remaining = b.n();
  while (!pool.empty()) {
    double u = draw_uniform(rng) * static_cast<double>(remaining);
    std::size_t pick = pool.size() - 1;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      u -= static_cast<double>(pool[i].size());
      if (u < 0.0) {
        pick = i;
        break;
      }
    }
    remaining -= static_cast<long>(pool[pick].size());
    out.push_back(std::move(pool[pick]));
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return OrderedPartition(std::move(out));
}

OrderedPartition size_biased_order(const Partition& b, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return size_biased_order(b, rng);
}

std::vector<double> stick_breaking_sample(double beta, double rho, int depth, Rng& rng) {
  if (!(beta > 0.0) || !(rho > 0.0)) throw std::invalid_argument("stick breaking needs beta > 0 and rho > 0");
  if (depth < 1) throw std::invalid_argument("depth must be positive");
  std::gamma_distribution<double> ga(beta, 1.0);
  std::gamma_distribution<double> gb(rho, 1.0);
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(depth));
  double stick = 1.0;
  for (int i = 0; i < depth; ++i) {
    const double x = ga(rng);
    const double y = gb(rng);
    const double w = x / (x + y);
    p.push_back(stick * w);
    stick *= 1.0 - w;
  }
  return p;
}

std::vector<double> stick_breaking_sample(double beta, double rho, int depth, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return stick_breaking_sample(beta, rho, depth, rng);
}

std::vector<Partition> all_set_partitions(int n) {
  if (n < 1 || n > 12) throw std::invalid_argument("set partition enumeration supports 1 <= n <= 12");
  // restricted growth strings
  std::vector<Partition> out;
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::vector<int> mx(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back(from_tables(a));
    int i = n - 1;
    while (i > 0 && a[i] == mx[i - 1] + 1) --i;
    if (i == 0) break;
    ++a[i];
    mx[i] = std::max(mx[i - 1], a[i]);
    for (int j = i + 1; j < n; ++j) {
      a[j] = 0;
      mx[j] = mx[i];
    }
  }
  return out;
}

std::vector<std::vector<long>> compositions(int n) {
  if (n < 1 || n > 20) throw std::invalid_argument("composition enumeration supports 1 <= n <= 20");
  std::vector<std::vector<long>> out;
  // each subset of the n - 1 gaps is a cut set
  for (unsigned long cuts = 0; cuts < (1UL << (n - 1)); ++cuts) {
    std::vector<long> parts;
    long run = 1;
    for (int g = 0; g < n - 1; ++g) {
      if (cuts & (1UL << g)) {
        parts.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    parts.push_back(run);
    out.push_back(std::move(parts));
  }
  return out;
}

double ordered_partition_mass(int n, const ModelParams& params) {
  const SplittingRule rule(params, n);
  double total = 0.0;
  for (const auto& c : compositions(n)) {
    double log_multinomial = std::lgamma(n + 1.0);
    for (long d : c) log_multinomial -= std::lgamma(static_cast<double>(d) + 1.0);
    total += std::exp(log_multinomial + ordered_sizes_logprob(c, rule));
  }
  return total;
}

double crp_equivalence_distance(int n, double rho) {
  const ModelParams params(rho, 1.0);
  double tv = 0.0;
  for (const auto& b : all_set_partitions(n)) {
    tv += std::abs(induced_partition_prob(b, params) - std::exp(esf_logprob(b, rho)));
  }
  return 0.5 * tv;
}

}  // namespace pilgrim
