#pragma once

#include <optional>

#include "dsml/numerics.hpp"

namespace dsml {

// Thresholded class assignment for an unlabeled proposal. class_id is
// present iff the top confidence reached the threshold.
struct PseudoLabel {
  std::optional<int> class_id;
  double confidence = 0.0;

  bool accepted() const { return class_id.has_value(); }
};

// Linear-softmax classification head over raw proposal features. Stands in
// for the detector's classification branch; produces the per-class scores
// the confidence-guided prototypes weight by.
struct Scorer {
  Mat w;  // C x d_in
  Vec b;  // C
  Mat grad_w;
  Vec grad_b;

  std::size_t num_classes() const { return w.rows; }
  std::size_t d_in() const { return w.cols; }

  void zero_grad() {
    grad_w.fill(0.0);
    grad_b.assign(grad_b.size(), 0.0);
  }
};

Scorer init_scorer(Rng& rng, std::size_t num_classes, std::size_t d_in);

// Raw logits W*H + b.
Vec logits(const Scorer& s, const Vec& input);

// softmax(W*H + b); entries in (0,1), sum to 1.
Vec score(const Scorer& s, const Vec& input);

// Argmax with ties broken toward the lowest class index; class_id present
// iff q[argmax] >= threshold.
PseudoLabel pseudo_label(const Vec& q, double threshold);

// Cross-entropy -log q[label]. Accumulates `scale`-weighted gradients into
// the scorer and returns (loss, scale * dL/dH). The returned loss is
// unscaled.
struct CeResult {
  double loss = 0.0;
  Vec dloss_dinput;
};
CeResult ce_loss_and_grad(Scorer& s, const Vec& input, int label,
                          double scale = 1.0);

// Given dL/dq for a single softmax component `component` (dL/dq[component]
// = upstream, all other components unused), accumulates scale-weighted
// gradients through the softmax into the scorer. Used where a prediction
// score enters a loss as a confidence weight.
void accumulate_score_component_grad(Scorer& s, const Vec& input, const Vec& q,
                                     int component, double upstream,
                                     double scale);

}  // namespace dsml
