#include "dsml/proxy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dsml {

namespace {

constexpr double kDistanceEps = 1e-12;

struct LossParts {
  double loss = 0.0;
  std::vector<double> dloss_dphi;  // per class
};

// Shared value + dL/dphi computation. Distances enter through a
// max-subtracted log-sum-exp over -phi.
LossParts loss_parts(const Vec& x, int label, const ProxySet& proxies,
                     ProxyLossForm form, std::vector<double>* distances) {
  const auto num_classes = static_cast<int>(proxies.num_classes());
  if (num_classes < 2)
    throw std::invalid_argument("proxy loss: need at least 2 classes");
  if (label < 0 || label >= num_classes)
    throw std::invalid_argument("proxy loss: label out of range");

  std::vector<double> phi(static_cast<std::size_t>(num_classes));
  for (int k = 0; k < num_classes; ++k)
    phi[static_cast<std::size_t>(k)] =
        euclid(x, proxies.proxies[static_cast<std::size_t>(k)]);

  const bool include_label = form == ProxyLossForm::softmax_all;
  double mx = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < num_classes; ++k) {
    if (k == label && !include_label) continue;
    mx = std::max(mx, -phi[static_cast<std::size_t>(k)]);
  }
  double sum = 0.0;
  std::vector<double> weight(static_cast<std::size_t>(num_classes), 0.0);
  for (int k = 0; k < num_classes; ++k) {
    if (k == label && !include_label) continue;
    const double e = std::exp(-phi[static_cast<std::size_t>(k)] - mx);
    weight[static_cast<std::size_t>(k)] = e;
    sum += e;
  }
  for (double& w : weight) w /= sum;

  LossParts parts;
  parts.loss = phi[static_cast<std::size_t>(label)] + mx + std::log(sum);
  parts.dloss_dphi.assign(static_cast<std::size_t>(num_classes), 0.0);
  for (int k = 0; k < num_classes; ++k)
    parts.dloss_dphi[static_cast<std::size_t>(k)] =
        -weight[static_cast<std::size_t>(k)];
  parts.dloss_dphi[static_cast<std::size_t>(label)] += 1.0;

  if (distances) *distances = std::move(phi);
  return parts;
}

}  // namespace

ProxySet init_proxies(Rng& rng, std::size_t num_classes, std::size_t dim) {
  if (num_classes < 2)
    throw std::invalid_argument("init_proxies: need at least 2 classes");
  ProxySet set;
  set.proxies.resize(num_classes);
  set.grads.resize(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    set.proxies[c].resize(dim);
    for (double& v : set.proxies[c]) v = 0.1 * rng.normal();
    set.grads[c].assign(dim, 0.0);
  }
  return set;
}

double proxy_loss_value(const Vec& x, int label, const ProxySet& proxies,
                        ProxyLossForm form) {
  return loss_parts(x, label, proxies, form, nullptr).loss;
}

double proxy_loss_labeled(const Vec& x, int label, ProxySet& proxies,
                          ProxyLossForm form, Vec& dloss_dx, double scale) {
  std::vector<double> phi;
  const LossParts parts = loss_parts(x, label, proxies, form, &phi);

  const auto num_classes = static_cast<int>(proxies.num_classes());
  for (int k = 0; k < num_classes; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    if (phi[ks] < kDistanceEps) continue;  // subgradient 0 at the kink
    const double coeff = parts.dloss_dphi[ks] / phi[ks];
    const Vec& p = proxies.proxies[ks];
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double diff = x[i] - p[i];
      dloss_dx[i] += scale * coeff * diff;
      proxies.grads[ks][i] -= scale * coeff * diff;
    }
  }
  return parts.loss;
}

double proxy_loss_unlabeled(const Vec& x, const PseudoLabel& pl,
                            const ProxySet& proxies, ProxyLossForm form,
                            Vec& dloss_dx, double scale) {
  if (!pl.accepted())
    throw std::invalid_argument(
        "proxy_loss_unlabeled: rejected pseudo label reached the loss");
  std::vector<double> phi;
  const LossParts parts = loss_parts(x, *pl.class_id, proxies, form, &phi);

  const auto num_classes = static_cast<int>(proxies.num_classes());
  for (int k = 0; k < num_classes; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    if (phi[ks] < kDistanceEps) continue;
    const double coeff = parts.dloss_dphi[ks] / phi[ks];
    const Vec& p = proxies.proxies[ks];
    for (std::size_t i = 0; i < x.size(); ++i)
      dloss_dx[i] += scale * coeff * (x[i] - p[i]);
  }
  return parts.loss;
}

}  // namespace dsml
