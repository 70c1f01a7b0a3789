#include "dsml/scorer.hpp"

#include <cmath>
#include <stdexcept>

namespace dsml {

Scorer init_scorer(Rng& rng, std::size_t num_classes, std::size_t d_in) {
  if (num_classes < 1 || d_in < 1)
    throw std::invalid_argument("init_scorer: dims must be >= 1");
  Scorer s;
  s.w = Mat(num_classes, d_in);
  s.b.assign(num_classes, 0.0);
  const double bound = std::sqrt(6.0 / static_cast<double>(d_in + num_classes));
  for (double& w : s.w.values) w = rng.uniform(-bound, bound);
  s.grad_w = Mat(num_classes, d_in);
  s.grad_b.assign(num_classes, 0.0);
  return s;
}

Vec logits(const Scorer& s, const Vec& input) {
  Vec out = matvec(s.w, input);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s.b[i];
  return out;
}

Vec score(const Scorer& s, const Vec& input) { return softmax(logits(s, input)); }

PseudoLabel pseudo_label(const Vec& q, double threshold) {
  if (q.empty()) throw std::invalid_argument("pseudo_label: empty scores");
  if (!(threshold > 0.0) || threshold > 1.0)
    throw std::invalid_argument("pseudo_label: threshold must be in (0, 1]");
  std::size_t best = 0;
  for (std::size_t i = 1; i < q.size(); ++i)
    if (q[i] > q[best]) best = i;
  PseudoLabel pl;
  pl.confidence = q[best];
  if (q[best] >= threshold) pl.class_id = static_cast<int>(best);
  return pl;
}

CeResult ce_loss_and_grad(Scorer& s, const Vec& input, int label, double scale) {
  const auto num_classes = static_cast<int>(s.num_classes());
  if (label < 0 || label >= num_classes)
    throw std::invalid_argument("ce_loss_and_grad: label out of range");

  const Vec l = logits(s, input);
  double mx = l[0];
  for (double v : l)
    if (v > mx) mx = v;
  double sum_exp = 0.0;
  for (double v : l) sum_exp += std::exp(v - mx);
  const double log_sum = mx + std::log(sum_exp);

  CeResult res;
  res.loss = log_sum - l[static_cast<std::size_t>(label)];
  res.dloss_dinput.assign(input.size(), 0.0);

  // dL/dlogit_j = q_j - 1[j == label]
  for (int j = 0; j < num_classes; ++j) {
    const double q_j = std::exp(l[static_cast<std::size_t>(j)] - mx) / sum_exp;
    const double g = q_j - (j == label ? 1.0 : 0.0);
    s.grad_b[static_cast<std::size_t>(j)] += scale * g;
    for (std::size_t c = 0; c < s.d_in(); ++c) {
      s.grad_w(static_cast<std::size_t>(j), c) += scale * g * input[c];
      res.dloss_dinput[c] += scale * g * s.w(static_cast<std::size_t>(j), c);
    }
  }
  return res;
}

void accumulate_score_component_grad(Scorer& s, const Vec& input, const Vec& q,
                                     int component, double upstream,
                                     double scale) {
  const auto num_classes = static_cast<int>(s.num_classes());
  if (component < 0 || component >= num_classes)
    throw std::invalid_argument("accumulate_score_component_grad: bad component");
  const double q_c = q[static_cast<std::size_t>(component)];
  // d q_c / d logit_j = q_c * (1[j == c] - q_j)
  for (int j = 0; j < num_classes; ++j) {
    const double dq_dl = q_c * ((j == component ? 1.0 : 0.0) -
                                q[static_cast<std::size_t>(j)]);
    const double g = scale * upstream * dq_dl;
    s.grad_b[static_cast<std::size_t>(j)] += g;
    for (std::size_t c = 0; c < s.d_in(); ++c)
      s.grad_w(static_cast<std::size_t>(j), c) += g * input[c];
  }
}

}  // namespace dsml
