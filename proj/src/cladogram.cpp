#include "pilgrim/cladogram.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string_view>

#include "pilgrim/numeric.hpp"

namespace pilgrim {

namespace {

void check_split_range(int n, int i) {
  if (n < 2) throw std::invalid_argument("splits need at least two leaves");
  if (i < 1 || i > n - 1) throw std::out_of_range("split size must lie in 1..n-1");
}

std::string format_length(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

SplitModel SplitModel::beta_splitting(double beta) {
  if (!(beta > -1.0) || !std::isfinite(beta)) throw std::invalid_argument("beta-splitting needs beta > -1");
  return {false, beta};
}

SplitModel SplitModel::comb() { return {true, -1.0}; }

double SplitModel::prob(int m, int i) const {
  check_split_range(m, i);
  if (comb_) {
    if (m == 2) return 1.0;
    return (i == 1 || i == m - 1) ? 0.5 : 0.0;
  }
  return beta_split_prob(m, i, beta_);
}

double SplitModel::singleton_mass(int m) const {
  if (m == 2) return prob(2, 1);
  return prob(m, 1) + prob(m, m - 1);
}

double beta_split_prob(int n, int i, double beta) {
  check_split_range(n, i);
  if (!(beta > -1.0)) throw std::invalid_argument("beta-splitting needs beta > -1");
  // evaluate (i, n - i) and (n - i, i) in the same order so the law is exactly symmetric
  auto logw = [&](int j) {
    const int a = std::min(j, n - j), b = n - a;
    return std::lgamma(beta + a) + std::lgamma(beta + b) - std::lgamma(a + 1.0) - std::lgamma(b + 1.0);
  };
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(n - 1));
  for (int j = 1; j <= n - 1; ++j) w.push_back(logw(j));
  return std::exp(logw(i) - log_sum_exp(w));
}

std::vector<double> holding_rates(const SplitModel& model, double lambda2, int n_max, HoldingIndexing indexing) {
  if (!(lambda2 > 0.0)) throw std::invalid_argument("lambda2 must be positive");
  if (n_max < 2) throw std::invalid_argument("n_max must be at least 2");
  std::vector<double> lam{lambda2};
  for (int m = 2; m < n_max; ++m) {
    double p;
    if (indexing == HoldingIndexing::kLeafSingleton) {
      p = model.singleton_mass(m + 1) / (m + 1);
    } else {
      p = model.singleton_mass(m);
    }
    if (!(p < 1.0)) {
      throw std::domain_error("holding-rate recursion is degenerate at m = " + std::to_string(m));
    }
    lam.push_back(lam.back() / (1.0 - p));
  }
  return lam;
}

double branch_prob_right(int n, int i, double beta) {
  if (!(beta > -2.0)) throw std::invalid_argument("beta must exceed -2");
  if (n < 1 || i < 0 || i > n) throw std::out_of_range("branch probability range");
  if (i == 0) return 1.0;
  const double den = n + 2.0 * beta;
  if (!(den > 0.0)) throw std::domain_error("non-positive denominator");
  return (n - i + beta) / den;
}

double branch_prob_consecutive(int n, int i, double beta) {
  if (!(beta > -2.0)) throw std::invalid_argument("beta must exceed -2");
  if (n < 1 || i < 0 || i > n) throw std::out_of_range("branch probability range");
  double p = 1.0;
  for (int j = 1; j <= i; ++j) {
    const double den = n - j + 1 + 2.0 * beta;
    if (!(den > 0.0)) throw std::domain_error("non-positive denominator");
    p *= (n - j + beta) / den;
  }
  return p;
}

double continuity_equality_check(double beta, int n_max) {
  if (!(beta > -2.0)) throw std::invalid_argument("beta must exceed -2");
  double worst = 0.0;
  for (int n = 2; n <= n_max; ++n) {
    if (!(n + 2.0 * beta > 0.0)) continue;
    for (int i = 1; i <= n - 1; ++i) {
      if (!(n - i + 1 + 2.0 * beta > 0.0)) break;
      worst = std::max(worst, std::abs(branch_prob_right(n, i, beta) - branch_prob_consecutive(n, i, beta)));
    }
  }
  return worst;
}

Cladogram::Cladogram(std::vector<CladeNode> nodes, int root) : nodes_(std::move(nodes)), root_(root) {
  if (root_ < 0 || root_ >= static_cast<int>(nodes_.size())) throw std::invalid_argument("root out of range");
  std::vector<int> parents(nodes_.size(), 0);
  for (const auto& nd : nodes_) {
    if (!nd.children.empty() && nd.children.size() != 2) throw std::invalid_argument("cladogram nodes must be binary");
    if (nd.children.empty() && nd.label.empty()) throw std::invalid_argument("leaves must be labelled");
    for (int c : nd.children) {
      if (c < 0 || c >= static_cast<int>(nodes_.size()) || c == root_) throw std::invalid_argument("bad child index");
      if (++parents[static_cast<std::size_t>(c)] > 1) throw std::invalid_argument("node has two parents");
    }
  }
  auto all = leaves(root_);
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) throw std::invalid_argument("duplicate leaf label");
}

int Cladogram::leaf_count() const { return root_ < 0 ? 0 : static_cast<int>(leaves(root_).size()); }

std::vector<std::string> Cladogram::leaves(int node) const {
  std::vector<std::string> out;
  std::function<void(int)> walk = [&](int v) {
    const auto& nd = nodes_.at(static_cast<std::size_t>(v));
    if (nd.children.empty()) {
      out.push_back(nd.label);
      return;
    }
    for (int c : nd.children) walk(c);
  };
  walk(node);
  return out;
}

std::pair<int, int> Cladogram::root_split() const {
  const auto& r = nodes_.at(static_cast<std::size_t>(root_));
  if (r.children.empty()) return {1, 0};
  const int a = static_cast<int>(leaves(r.children[0]).size());
  const int b = static_cast<int>(leaves(r.children[1]).size());
  return {std::min(a, b), std::max(a, b)};
}

std::string Cladogram::canonical_topology() const {
  std::function<std::string(int)> form = [&](int v) -> std::string {
    const auto& nd = nodes_[static_cast<std::size_t>(v)];
    if (nd.children.empty()) return nd.label;
    std::vector<std::string> parts;
    for (int c : nd.children) parts.push_back(form(c));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
    return s + ")";
  };
  return form(root_);
}

bool operator==(const Cladogram& a, const Cladogram& b) {
  std::function<bool(int, int)> same = [&](int u, int v) {
    const auto& x = a.nodes_[static_cast<std::size_t>(u)];
    const auto& y = b.nodes_[static_cast<std::size_t>(v)];
    if (x.label != y.label || x.length != y.length || x.children.size() != y.children.size()) return false;
    for (std::size_t i = 0; i < x.children.size(); ++i) {
      if (!same(x.children[i], y.children[i])) return false;
    }
    return true;
  };
  if (a.root_ < 0 || b.root_ < 0) return a.root_ == b.root_;
  return same(a.root_, b.root_);
}

Cladogram sample_cladogram(int n, const SplitModel& model, double lambda2, Rng& rng) {
  if (n < 2) throw std::invalid_argument("cladograms need at least two leaves");
  const auto rates = holding_rates(model, lambda2, n);
  std::vector<CladeNode> nodes;
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::iota(labels.begin(), labels.end(), 1);
  std::function<int(std::vector<int>)> grow = [&](std::vector<int> set) -> int {
    const int m = static_cast<int>(set.size());
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (m == 1) {
      nodes[static_cast<std::size_t>(id)].label = std::to_string(set.front());
      return id;
    }
    nodes[static_cast<std::size_t>(id)].length =
        std::exponential_distribution<double>(rates[static_cast<std::size_t>(m - 2)])(rng);
    double u = draw_uniform(rng);
    int i = m - 1;
    for (int j = 1; j < m; ++j) {
      u -= model.prob(m, j);
      if (u < 0.0) {
        i = j;
        break;
      }
    }
    std::shuffle(set.begin(), set.end(), rng);
    std::vector<int> left(set.begin(), set.begin() + i);
    std::vector<int> right(set.begin() + i, set.end());
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    const int l = grow(std::move(left));
    const int r = grow(std::move(right));
    nodes[static_cast<std::size_t>(id)].children = {l, r};
    return id;
  };
  const int root = grow(labels);
  return Cladogram(std::move(nodes), root);
}

Cladogram sample_cladogram(int n, const SplitModel& model, double lambda2, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return sample_cladogram(n, model, lambda2, rng);
}

std::string to_newick(const Cladogram& tree) {
  if (tree.root() < 0) throw std::invalid_argument("empty cladogram");
  std::function<std::string(int)> emit = [&](int v) -> std::string {
    const auto& nd = tree.nodes()[static_cast<std::size_t>(v)];
    std::string s;
    if (!nd.children.empty()) {
      s = "(";
      for (std::size_t i = 0; i < nd.children.size(); ++i) s += (i ? "," : "") + emit(nd.children[i]);
      s += ")";
    }
    s += nd.label;
    if (nd.length) s += ":" + format_length(*nd.length);
    return s;
  };
  return emit(tree.root()) + ";";
}

Cladogram parse_newick(const std::string& text) {
  std::vector<CladeNode> nodes;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("newick parse error at " + std::to_string(pos) + ": " + why);
  };
  std::function<int()> subtree = [&]() -> int {
    skip();
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    std::vector<int> kids;
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      while (true) {
        kids.push_back(subtree());
        skip();
        if (pos >= text.size()) fail("unterminated clade");
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        if (text[pos] == ')') {
          ++pos;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    skip();
    std::string label;
    while (pos < text.size() && std::string_view("(),:;").find(text[pos]) == std::string_view::npos &&
           !std::isspace(static_cast<unsigned char>(text[pos]))) {
      label += text[pos++];
    }
    skip();
    std::optional<double> length;
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      skip();
      double v = 0.0;
      auto res = std::from_chars(text.data() + pos, text.data() + text.size(), v);
      if (res.ec != std::errc()) fail("bad branch length");
      pos = static_cast<std::size_t>(res.ptr - text.data());
      length = v;
    }
    auto& nd = nodes[static_cast<std::size_t>(id)];
    nd.children = std::move(kids);
    nd.label = std::move(label);
    nd.length = length;
    return id;
  };
  const int root = subtree();
  skip();
  if (pos >= text.size() || text[pos] != ';') fail("expected ';'");
  ++pos;
  skip();
  if (pos != text.size()) fail("trailing characters");
  return Cladogram(std::move(nodes), root);
}

long colless_index(const Cladogram& tree) {
  long total = 0;
  for (std::size_t v = 0; v < tree.nodes().size(); ++v) {
    const auto& nd = tree.nodes()[v];
    if (nd.children.size() != 2) continue;
    total += std::labs(static_cast<long>(tree.leaves(nd.children[0]).size()) -
                       static_cast<long>(tree.leaves(nd.children[1]).size()));
  }
  return total;
}

Cladogram restrict_to(const Cladogram& tree, const std::set<std::string>& keep) {
  std::vector<CladeNode> out;
  // returns new index or -1 when no kept leaf lies below
  std::function<int(int)> copy = [&](int v) -> int {
    const auto& nd = tree.nodes()[static_cast<std::size_t>(v)];
    if (nd.children.empty()) {
      if (!keep.count(nd.label)) return -1;
      out.push_back({nd.label, nd.length, {}});
      return static_cast<int>(out.size()) - 1;
    }
    std::vector<int> kids;
    for (int c : nd.children) {
      const int k = copy(c);
      if (k >= 0) kids.push_back(k);
    }
    if (kids.empty()) return -1;
    if (kids.size() == 1) {
      auto& child = out[static_cast<std::size_t>(kids.front())];
      if (nd.length && child.length) {
        child.length = *nd.length + *child.length;
      } else if (nd.length && !child.children.empty()) {
        child.length = nd.length;
      }
      return kids.front();
    }
    out.push_back({"", nd.length, kids});
    return static_cast<int>(out.size()) - 1;
  };
  const int root = copy(tree.root());
  if (root < 0) throw std::invalid_argument("no kept leaves in the tree");
  return Cladogram(std::move(out), root);
}

}  // namespace pilgrim
