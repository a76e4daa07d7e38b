#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dmem/evaluation.hpp"

namespace dmem {

namespace {

// per-replication bootstrap means of each model's losses under a shared
// moving-block index draw
Eigen::MatrixXd bootstrap_means(const Eigen::MatrixXd& losses, int B, int block,
                                std::uint64_t seed) {
  const Eigen::Index n = losses.rows();
  const Eigen::Index m = losses.cols();
  Eigen::MatrixXd bm(B, m);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> start(0, n - block);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (int b = 0; b < B; ++b) {
    Eigen::Index filled = 0;
    while (filled < n) {
      const Eigen::Index s = start(rng);
      for (Eigen::Index k = 0; k < block && filled < n; ++k, ++filled)
        idx[static_cast<std::size_t>(filled)] = s + k;
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) acc += losses(idx[static_cast<std::size_t>(i)], j);
      bm(b, j) = acc / static_cast<double>(n);
    }
  }
  return bm;
}

}  // namespace

McsResult mcs(const LossPanel& panel, const McsOptions& opt) {
  const Eigen::Index n = panel.losses.rows();
  const Eigen::Index m = panel.losses.cols();
  if (m < 2) throw std::invalid_argument("mcs needs at least 2 models");
  if (n < 50) throw std::invalid_argument("mcs needs at least 50 loss observations");
  if (opt.replications < 100) throw std::invalid_argument("mcs needs at least 100 replications");
  if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");

  int block = opt.block_length > 0
                  ? opt.block_length
                  : static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n))));
  block = std::min<int>(block, static_cast<int>(n));

  const Eigen::VectorXd full_mean = panel.losses.colwise().mean();
  // centered bootstrap means: cm(b,i) = boot_mean_i(b) - mean_i
  Eigen::MatrixXd cm = bootstrap_means(panel.losses, opt.replications, block, opt.seed);
  cm.rowwise() -= full_mean.transpose();
  const int B = opt.replications;

  std::vector<Eigen::Index> active(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) active[static_cast<std::size_t>(j)] = j;

  McsResult res;
  res.settings = opt;
  res.block_length_used = block;
  res.entries.resize(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) res.entries[static_cast<std::size_t>(j)].model =
      panel.models[static_cast<std::size_t>(j)];

  int order = 0;
  double running_p = 0.0;

  while (active.size() > 1) {
    const std::size_t s = active.size();
    Eigen::MatrixXd var = Eigen::MatrixXd::Zero(s, s);
    Eigen::MatrixXd dbar = Eigen::MatrixXd::Zero(s, s);
    bool any_stochastic = false;
    Eigen::Index degenerate_loser = -1;
    double degenerate_gap = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = i + 1; j < s; ++j) {
        const Eigen::Index a = active[i], b = active[j];
        double v = 0.0;
        for (int r = 0; r < B; ++r) {
          const double d = cm(r, a) - cm(r, b);
          v += d * d;
        }
        v /= static_cast<double>(B);
        const double d = full_mean[a] - full_mean[b];
        var(i, j) = var(j, i) = v;
        dbar(i, j) = d;
        dbar(j, i) = -d;
        if (v > 0.0) {
          any_stochastic = true;
        } else if (d != 0.0 && std::abs(d) > degenerate_gap) {
          // no bootstrap variation but a mean gap: dominance is deterministic
          degenerate_gap = std::abs(d);
          degenerate_loser = d > 0.0 ? static_cast<Eigen::Index>(i) : static_cast<Eigen::Index>(j);
        }
      }
    }

    if (degenerate_loser >= 0) {
      auto& e = res.entries[static_cast<std::size_t>(active[static_cast<std::size_t>(degenerate_loser)])];
      running_p = std::max(running_p, 0.0);
      e.elimination_order = ++order;
      e.p_value = running_p;
      active.erase(active.begin() + degenerate_loser);
      continue;
    }
    if (!any_stochastic) break;  // all remaining models tie exactly

    double tsq = 0.0;
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i + 1; j < s; ++j)
        if (var(i, j) > 0.0) tsq += dbar(i, j) * dbar(i, j) / var(i, j);

    int exceed = 0;
    for (int r = 0; r < B; ++r) {
      double t = 0.0;
      for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j)
          if (var(i, j) > 0.0) {
            const double d = cm(r, active[i]) - cm(r, active[j]);
            t += d * d / var(i, j);
          }
      if (t >= tsq) ++exceed;
    }
    const double p = static_cast<double>(exceed) / static_cast<double>(B);

    // eliminate the model with the largest studentized deficit
    std::size_t worst = 0;
    double worst_t = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s; ++i) {
      double ti = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < s; ++j)
        if (j != i && var(i, j) > 0.0) ti = std::max(ti, dbar(i, j) / std::sqrt(var(i, j)));
      if (ti > worst_t) {
        worst_t = ti;
        worst = i;
      }
    }
    running_p = std::max(running_p, p);
    auto& e = res.entries[static_cast<std::size_t>(active[worst])];
    e.elimination_order = ++order;
    e.p_value = running_p;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst));
  }

  for (const Eigen::Index j : active) {
    auto& e = res.entries[static_cast<std::size_t>(j)];
    e.p_value = 1.0;
    e.elimination_order = 0;
  }
  for (auto& e : res.entries) e.in_set = e.p_value >= opt.alpha;
  for (const auto& e : res.entries)
    if (e.in_set) res.surviving.push_back(e.model);
  return res;
}

}  // namespace dmem
