#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "pilgrim/cladogram.hpp"
#include "pilgrim/density.hpp"
#include "pilgrim/exponent.hpp"
#include "pilgrim/io.hpp"
#include "pilgrim/monopoly.hpp"
#include "pilgrim/partitions.hpp"
#include "pilgrim/stats.hpp"
#include "pilgrim/voyage.hpp"

namespace pilgrim::cli {
namespace {

using nlohmann::json;

struct Global {
  double rho = 1.0;
  double beta = 0.0;
  double nu = 1.0;
  long n = 250;
  std::uint64_t seed = 20261015;
  int reps = 100;
  unsigned threads = 0;
  std::string out;
  std::string format = "csv";

  ModelParams params() const { return ModelParams(rho, beta, nu); }
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void add(std::vector<json> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match header");
    rows.push_back(std::move(row));
  }
};

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }
  return v.dump();
}

std::string render(const Table& t, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    json rows = json::array();
    for (const auto& r : t.rows) {
      json o = json::object();
      for (std::size_t c = 0; c < t.columns.size(); ++c) o[t.columns[c]] = r[c];
      rows.push_back(std::move(o));
    }
    os << rows.dump(2) << '\n';
    return os.str();
  }
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << csv_cell(r[c]);
    os << '\n';
  }
  return os.str();
}

void emit(const std::string& text, const Global& g, std::ostream& out) {
  if (g.out.empty() || g.out == "-") {
    out << text;
    return;
  }
  std::filesystem::path path(g.out);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("PILGRIM_OUTPUT_DIR"); dir != nullptr && *dir != '\0') path = std::filesystem::path(dir) / path;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

json maybe(double v, bool present) { return present ? json(v) : json(nullptr); }

// ---- simulate ----

struct SimulateOpts {
  std::string report = "ledger";
  std::string funds;
};

std::string cmd_simulate(const Global& g, const SimulateOpts& o) {
  const auto p = g.params();
  Simulation sim = [&] {
    if (!o.funds.empty()) {
      const auto x = read_times_file(o.funds);
      return simulate_from_funds(x, p);
    }
    if (g.n < 1) throw std::invalid_argument("--n must be positive");
    return simulate(g.n, p, g.seed);
  }();
  if (o.report == "ledger") {
    if (g.format == "json") return ledger_json(sim.ledger).dump(2) + "\n";
    std::ostringstream os;
    write_ledger_csv(os, sim.ledger);
    return os.str();
  }
  Table t;
  if (o.report == "times") {
    t.columns = {"pilgrim", "time", "rho_time"};
    for (long i = 0; i < sim.times.size(); ++i) {
      t.add({i + 1, sim.times[i], p.rho() * sim.times[i]});
    }
  } else {
    t.columns = {"order", "index", "founding", "position", "occupancy", "wealth", "per_occupant"};
    for (auto order : {HotelOrder::kTemporal, HotelOrder::kSpatial}) {
      const char* name = order == HotelOrder::kTemporal ? "temporal" : "spatial";
      for (const auto& r : wealth_report(sim.ledger, order)) {
        t.add({name, r.index, r.founding, r.position, r.occupancy, r.wealth, r.per_occupant});
      }
    }
  }
  return render(t, g.format);
}

// ---- density ----

struct DensityOpts {
  std::string times;
  std::string family = "params";
  double lambda = 1.0;
};

std::string cmd_density(const Global& g, const DensityOpts& o) {
  const EventSequence t(read_times_file(o.times));
  const auto p = g.params();
  const CharacteristicExponent e = [&] {
    if (o.family == "pilgrim") return CharacteristicExponent::pilgrim(p.rho(), p.nu());
    if (o.family == "gamma") return CharacteristicExponent::gamma(p.rho(), p.nu());
    if (o.family == "iid") return CharacteristicExponent::iid(o.lambda);
    return CharacteristicExponent::from_params(p);
  }();
  Table tab;
  tab.columns = {"family", "n", "hotels", "log_density", "log_density_harmonic"};
  const bool harmonic = e.family() == ExponentFamily::kPilgrim;
  const double alt = harmonic ? log_density_pilgrim(t, ModelParams(e.rho(), 0.0, e.nu())) : 0.0;
  tab.add({to_string(e.family()), static_cast<long>(t.size()), static_cast<long>(t.ties().size()),
           log_density_general(t, e), maybe(alt, harmonic)});
  return render(tab, g.format);
}

// ---- predict ----

struct PredictOpts {
  std::string history;
  long upto = 0;
  int points = 200;
};

std::string cmd_predict(const Global& g, const PredictOpts& o) {
  auto values = read_times_file(o.history);
  if (o.upto > 0 && static_cast<std::size_t>(o.upto) < values.size()) values.resize(static_cast<std::size_t>(o.upto));
  const EventSequence h(values);
  if (h.empty()) throw std::invalid_argument("empty history");
  const auto p = g.params();
  const auto curve = predictive_survival(h, p);
  const auto km = kaplan_meier(h);
  const auto taxes = taxes_only_survival(h, p.rho());
  std::vector<double> grid{0.0};
  const double top = *std::max_element(values.begin(), values.end()) * 1.25;
  for (int i = 1; i <= o.points; ++i) grid.push_back(top * i / o.points);
  for (double v : values) grid.push_back(v);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  Table t;
  t.columns = {"t", "survival", "kaplan_meier", "taxes_only"};
  for (double x : grid) t.add({x, curve.survival(x), km(x), taxes(x)});
  return render(t, g.format);
}

// ---- blocks ----

struct BlocksOpts {
  bool trajectory = false;
  bool summary = false;
  int per_decade = 20;
};

std::string cmd_blocks(const Global& g, const BlocksOpts& o) {
  if (g.n < 1) throw std::invalid_argument("--n must be positive");
  const auto p = g.params();
  const auto checkpoints = log_checkpoints(g.n, o.per_decade);
  std::vector<std::vector<TrajectoryPoint>> traj;
  if (g.reps > 0) {
    traj = run_replicates<std::vector<TrajectoryPoint>>(
        g.reps, g.seed, [&](Rng& rng, int) { return simulate_trajectory(checkpoints, p, rng); }, g.threads);
  }
  Table t;
  if (o.summary) {
    if (traj.empty()) throw std::invalid_argument("--summary needs --reps > 0");
    const auto rep = growth_diagnostics(traj);
    t.columns = {"n", "reps", "slope", "intercept", "r2", "min_replicate_r2", "mean_hotels", "se_hotels",
                 "toll_ratio", "toll_ratio_se", "nu"};
    t.add({rep.final_n, g.reps, rep.mean_fit.slope, rep.mean_fit.intercept, rep.mean_fit.r2, rep.min_replicate_r2,
           rep.final_hotels.mean, rep.final_hotels.se, rep.final_toll_ratio.mean, rep.final_toll_ratio.se, p.nu()});
  } else if (o.trajectory) {
    t.columns = {"rep", "n", "log_n", "hotels", "tolls", "sqrt_hotels", "sqrt_tolls"};
    for (std::size_t r = 0; r < traj.size(); ++r) {
      for (const auto& pt : traj[r]) {
        const auto k = static_cast<double>(pt.hotels);
        t.add({static_cast<long>(r), pt.n, std::log(static_cast<double>(pt.n)), pt.hotels, pt.tolls, std::sqrt(k),
               std::sqrt(pt.tolls)});
      }
    }
  } else {
    const auto rec = expected_blocks_recursion(g.n, p);
    const auto exact = expected_blocks_exact(g.n, p);
    t.columns = {"n", "recursion", "exact", "mc_mean", "mc_se"};
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      const long m = checkpoints[i];
      std::vector<double> k;
      for (const auto& tr : traj) k.push_back(static_cast<double>(tr[i].hotels));
      const auto ms = mean_se(k);
      t.add({m, rec[m], exact[m], maybe(ms.mean, !k.empty()), maybe(ms.se, k.size() > 1)});
    }
  }
  return render(t, g.format);
}

// ---- occupancy ----

std::string cmd_occupancy(const Global& g, int j_max) {
  if (g.n < 1 || g.reps < 1) throw std::invalid_argument("--n and --reps must be positive");
  const auto p = g.params();
  const auto counts = run_replicates<std::vector<long>>(
      g.reps, g.seed,
      [&](Rng& rng, int) {
        const auto sim = simulate(g.n, p, rng, false);
        return occupancy_counts(sim.ledger, j_max);
      },
      g.threads);
  Table t;
  t.columns = {"j", "mean", "se", "var", "dispersion", "dispersion_p", "reference"};
  for (const auto& row : occupancy_spectrum(counts, j_max)) {
    const bool ref = p.beta() == 1.0;
    t.add({row.j, row.count.mean, row.count.se, row.count.var, row.dispersion, row.dispersion_p,
           maybe(p.rho() / row.j, ref)});
  }
  return render(t, g.format);
}

// ---- partition ----

struct PartitionOpts {
  std::string partition;
  bool ordered = false;
};

std::string cmd_partition(const Global& g, const PartitionOpts& o) {
  const auto p = g.params();
  Table t;
  t.columns = {"partition", "ordered", "probability", "esf"};
  if (!o.partition.empty()) {
    const auto b = Partition::parse(o.partition);
    if (o.ordered) {
      // keep the written block order
      std::vector<Block> blocks;
      std::istringstream in(o.partition);
      std::string part;
      while (std::getline(in, part, '|')) {
        Block blk;
        std::istringstream bs(part);
        int v = 0;
        while (bs >> v) blk.push_back(v);
        blocks.push_back(blk);
      }
      const OrderedPartition a(blocks);
      t.add({o.partition, true, std::exp(ordered_partition_logprob(a, p)), std::exp(esf_logprob(b, p.rho()))});
    } else {
      t.add({b.to_string(), false, induced_partition_prob(b, p), std::exp(esf_logprob(b, p.rho()))});
    }
    return render(t, g.format);
  }
  if (g.n < 1 || g.n > kMaxInducedBlocks) {
    throw std::invalid_argument("enumeration needs 1 <= n <= " + std::to_string(kMaxInducedBlocks));
  }
  for (const auto& b : all_set_partitions(static_cast<int>(g.n))) {
    t.add({b.to_string(), false, induced_partition_prob(b, p), std::exp(esf_logprob(b, p.rho()))});
  }
  return render(t, g.format);
}

// ---- voyage ----

std::string cmd_voyage(const Global& g, double horizon) {
  if (g.n < 1) throw std::invalid_argument("--n must be positive");
  const auto res = simulate_voyage(static_cast<int>(g.n), horizon, g.params(), g.seed);
  if (g.format == "json") return allocation_json(res.allocation).dump(2) + "\n";
  std::ostringstream os;
  write_incidence_csv(os, res.allocation.incidence());
  return os.str();
}

// ---- cladogram ----

struct CladogramOpts {
  double lambda2 = 1.0;
  bool comb = false;
};

std::string cmd_cladogram(const Global& g, const CladogramOpts& o) {
  if (g.n < 2) throw std::invalid_argument("--n must be at least 2");
  const auto model = o.comb ? SplitModel::comb() : SplitModel::beta_splitting(g.beta);
  const int reps = std::max(g.reps, 1);
  const auto trees = run_replicates<Cladogram>(
      reps, g.seed,
      [&](Rng& rng, int) { return sample_cladogram(static_cast<int>(g.n), model, o.lambda2, rng); }, g.threads);
  Table t;
  t.columns = {"rep", "newick", "colless", "root_small", "root_large", "root_length"};
  for (std::size_t r = 0; r < trees.size(); ++r) {
    const auto [a, b] = trees[r].root_split();
    const auto len = trees[r].root_length();
    t.add({static_cast<long>(r), to_newick(trees[r]), colless_index(trees[r]), a, b, maybe(len.value_or(0.0), len.has_value())});
  }
  return render(t, g.format);
}

// ---- check ----

void check_row(Table& t, const std::string& suite, const std::string& name, double value, double threshold, bool pass) {
  t.add({suite, name, value, threshold, pass});
}

void suite_continuity(Table& t, const Global& g, long order) {
  const double rho = g.rho;
  const auto pil = continuity_check(CharacteristicIndex::from_exponent(CharacteristicExponent::pilgrim(rho), order), 1e-10);
  check_row(t, "continuity", "pilgrim_max_violation", pil.max_violation, 1e-10, pil.max_violation <= 1e-10);
  const auto gam = continuity_check(CharacteristicIndex::from_exponent(CharacteristicExponent::gamma(rho), order), 1e-10);
  check_row(t, "continuity", "gamma_max_violation", gam.max_violation, 1e-3, gam.max_violation > 1e-3);
  const auto rebuilt = index_from_continuity(1.0 / rho, rho / (1.0 + rho), order);
  const auto e = CharacteristicExponent::pilgrim(rho);
  double worst = 0.0;
  for (long m = 1; m <= order; ++m) {
    const double truth = e.at_integer(m).value();
    worst = std::max(worst, std::abs(static_cast<double>(rebuilt[static_cast<std::size_t>(m - 1)]) - truth) / truth);
  }
  check_row(t, "continuity", "reconstruction_rel_error", worst, 1e-8, worst <= 1e-8);
}

void suite_normalization(Table& t, const Global& g) {
  const auto p = g.params();
  const long n = std::min<long>(g.n, 12);
  const double mass = ordered_partition_mass(static_cast<int>(n), p);
  check_row(t, "normalization", "ordered_partition_mass_error", std::abs(mass - 1.0), 1e-10, std::abs(mass - 1.0) < 1e-10);
  const long m_max = std::max<long>(g.n, 30);
  const SplittingRule rule(p, m_max);
  double worst = 0.0;
  for (long m = 1; m <= m_max; ++m) {
    double s = 0.0;
    for (long d = 1; d <= m; ++d) s += std::exp(rule.log_first_block(m, d));
    worst = std::max(worst, std::abs(s - 1.0));
  }
  check_row(t, "normalization", "splitting_rule_error", worst, 1e-10, worst < 1e-10);
}

void suite_theorem3(Table& t, const Global& g) {
  if (g.n < 1 || g.n > kMaxInducedBlocks) throw std::invalid_argument("theorem3 suite needs 1 <= n <= 9");
  const double tv = crp_equivalence_distance(static_cast<int>(g.n), g.rho);
  check_row(t, "theorem3", "esf_total_variation", tv, 1e-10, tv < 1e-10);
}

void suite_theorem4(Table& t, const Global& g) {
  const auto p = g.params();
  if (p.beta() > 0.0) throw std::invalid_argument("theorem4 suite needs beta <= 0");
  const double alpha = -p.beta();
  const double theta = p.rho() + p.beta();
  const double gamma = p.nu() * std::exp(std::lgamma(theta + alpha) + std::lgamma(1.0 - alpha) - std::lgamma(theta + 1.0));
  const int n = static_cast<int>(std::clamp<long>(g.n, 1, 3));
  double worst = 0.0;
  long patterns = 0;
  for (int m = 1; m <= n; ++m) {
    for (const auto& z : enumerate_incidence_patterns(m, 2)) {
      const double a = std::exp(voyage_pattern_log_prob(z, p));
      const double b = std::exp(ibp_pattern_log_prob(z, gamma, theta, alpha));
      worst = std::max(worst, std::abs(a - b));
      ++patterns;
    }
  }
  check_row(t, "theorem4", "pattern_max_abs_diff", worst, 1e-12, worst < 1e-12);
  check_row(t, "theorem4", "patterns_compared", static_cast<double>(patterns), 0.0, patterns > 0);
}

void suite_cladogram(Table& t, const Global& g) {
  const int n_max = static_cast<int>(std::max<long>(g.n, 3));
  const double eq = continuity_equality_check(0.0, n_max);
  check_row(t, "cladogram", "beta0_max_abs_diff", eq, 1e-12, eq < 1e-12);
  for (double beta : {0.5, -0.5}) {
    double worst = std::numeric_limits<double>::infinity();
    for (int n = 3; n <= n_max; ++n) {
      for (int i = 2; i < n; ++i) {
        const double diff = branch_prob_right(n, i, beta) - branch_prob_consecutive(n, i, beta);
        worst = std::min(worst, beta > 0 ? diff : -diff);
      }
    }
    check_row(t, "cladogram", beta > 0 ? "beta+0.5_min_gap" : "beta-0.5_min_gap", worst, 0.0, worst > 0.0);
  }
}

std::string cmd_check(const Global& g, const std::string& suite, long order) {
  Table t;
  t.columns = {"suite", "check", "value", "threshold", "pass"};
  const bool all = suite == "all";
  if (all || suite == "continuity") suite_continuity(t, g, order);
  if (all || suite == "normalization") suite_normalization(t, g);
  if (all || suite == "theorem3") suite_theorem3(t, g);
  if (all || suite == "theorem4") suite_theorem4(t, g);
  if (all || suite == "cladogram") suite_cladogram(t, g);
  return render(t, g.format);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pilgrim process simulation and diagnostics", "pilgrim"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--rho", g.rho, "total-mass parameter rho > 0");
  app.add_option("--beta", g.beta, "discount parameter beta > -1");
  app.add_option("--nu", g.nu, "toll scale nu > 0");
  app.add_option("--n", g.n, "number of pilgrims, leaves or customers");
  app.add_option("--seed", g.seed, "64-bit seed");
  app.add_option("--reps", g.reps, "replicates");
  app.add_option("--threads", g.threads, "worker threads, 0 for all cores");
  app.add_option("--out", g.out, "output file, '-' for stdout");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  SimulateOpts sim;
  auto* s_sim = app.add_subcommand("simulate", "event times and ledger");
  s_sim->add_option("--report", sim.report, "ledger, hotels or times")->check(CLI::IsMember({"ledger", "hotels", "times"}));
  s_sim->add_option("--funds", sim.funds, "file of funds X_i instead of random draws");

  DensityOpts den;
  auto* s_den = app.add_subcommand("density", "log-density of a times file");
  s_den->add_option("--times", den.times, "one time per line")->required();
  s_den->add_option("--family", den.family, "params, pilgrim, gamma or iid")
      ->check(CLI::IsMember({"params", "pilgrim", "gamma", "iid"}));
  s_den->add_option("--lambda", den.lambda, "rate of the iid family");

  PredictOpts pred;
  auto* s_pred = app.add_subcommand("predict", "conditional survival against Kaplan-Meier");
  s_pred->add_option("--history", pred.history, "observed times")->required();
  s_pred->add_option("--upto", pred.upto, "use only the first values");
  s_pred->add_option("--points", pred.points, "grid points")->check(CLI::PositiveNumber);

  BlocksOpts blk;
  auto* s_blk = app.add_subcommand("blocks", "expected hotel counts and growth");
  s_blk->add_flag("--trajectory", blk.trajectory, "per-replicate (n, K_n, Z_n)");
  s_blk->add_flag("--summary", blk.summary, "growth regression summary");
  s_blk->add_option("--per-decade", blk.per_decade, "checkpoints per decade")->check(CLI::PositiveNumber);

  int j_max = 10;
  auto* s_occ = app.add_subcommand("occupancy", "hotel size spectrum");
  s_occ->add_option("--jmax", j_max, "largest size reported")->check(CLI::PositiveNumber);

  PartitionOpts part;
  auto* s_part = app.add_subcommand("partition", "partition probabilities against Ewens");
  s_part->add_option("--partition", part.partition, "blocks like \"1 2|3\"");
  s_part->add_flag("--ordered", part.ordered, "treat the blocks as ordered by event time");

  double horizon = 1.0;
  auto* s_voy = app.add_subcommand("voyage", "feature allocation incidence matrix");
  s_voy->add_option("--horizon", horizon, "length of the road")->check(CLI::PositiveNumber);

  CladogramOpts clad;
  auto* s_clad = app.add_subcommand("cladogram", "beta-splitting trees in Newick form");
  s_clad->add_option("--lambda2", clad.lambda2, "holding rate of a two-leaf clade")->check(CLI::PositiveNumber);
  s_clad->add_flag("--comb", clad.comb, "comb model");

  std::string suite = "all";
  long order = 20;
  auto* s_chk = app.add_subcommand("check", "exact equivalence and normalization suites");
  s_chk->add_option("--suite", suite, "continuity, normalization, theorem3, theorem4, cladogram or all")
      ->check(CLI::IsMember({"continuity", "normalization", "theorem3", "theorem4", "cladogram", "all"}));
  s_chk->add_option("--order", order, "index length for the continuity suite")->check(CLI::Range(3L, 60L));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    std::string text;
    if (s_sim->parsed()) text = cmd_simulate(g, sim);
    else if (s_den->parsed()) text = cmd_density(g, den);
    else if (s_pred->parsed()) text = cmd_predict(g, pred);
    else if (s_blk->parsed()) text = cmd_blocks(g, blk);
    else if (s_occ->parsed()) text = cmd_occupancy(g, j_max);
    else if (s_part->parsed()) text = cmd_partition(g, part);
    else if (s_voy->parsed()) text = cmd_voyage(g, horizon);
    else if (s_clad->parsed()) text = cmd_cladogram(g, clad);
    else text = cmd_check(g, suite, order);
    emit(text, g, out);
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace pilgrim::cli
