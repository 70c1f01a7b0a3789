#pragma once

#include "dsml/numerics.hpp"
#include "dsml/scorer.hpp"

namespace dsml {

// Which denominator the proxy loss uses:
//   as_written   -- sum over k != c only (can go negative)
//   softmax_all  -- sum over all k, the standard proxy-NCA form (>= 0)
enum class ProxyLossForm { as_written, softmax_all };

// One learnable proxy vector per foreground class. Gradients accumulate
// only through the labeled loss; the unlabeled loss takes the set by
// const reference and cannot touch them.
struct ProxySet {
  std::vector<Vec> proxies;
  std::vector<Vec> grads;

  std::size_t num_classes() const { return proxies.size(); }
  std::size_t dim() const { return proxies.empty() ? 0 : proxies[0].size(); }

  void zero_grad() {
    for (Vec& g : grads) g.assign(g.size(), 0.0);
  }
};

// Entries drawn standard normal scaled by 0.1.
ProxySet init_proxies(Rng& rng, std::size_t num_classes, std::size_t dim);

// Proxy loss for a labeled embedding:
//   -log( exp(-phi(x, p_c)) / sum_{k in D} exp(-phi(x, p_k)) )
// with D = {k != c} (as_written) or all classes (softmax_all), computed via
// max-subtracted log-sum-exp. Accumulates scale * dL/dproxy into the set
// and scale * dL/dx into dloss_dx (which must be pre-sized and is added
// to, not overwritten). Requires C >= 2.
double proxy_loss_labeled(const Vec& x, int label, ProxySet& proxies,
                          ProxyLossForm form, Vec& dloss_dx,
                          double scale = 1.0);

// Same value as the labeled loss at the pseudo-label's class, but the
// proxies are constants: gradient flows only to the embedding.
// Throws if the pseudo label was rejected.
double proxy_loss_unlabeled(const Vec& x, const PseudoLabel& pl,
                            const ProxySet& proxies, ProxyLossForm form,
                            Vec& dloss_dx, double scale = 1.0);

// Value-only evaluation shared by both losses; used by the
// finite-difference oracle.
double proxy_loss_value(const Vec& x, int label, const ProxySet& proxies,
                        ProxyLossForm form);

}  // namespace dsml
