#pragma once

#include "dsml/numerics.hpp"

namespace dsml {

// Intermediates of one forward pass, needed by backward.
struct ForwardTape {
  Vec input;           // H
  Vec pre_activation;  // a1 = W1 * H
  Vec hidden;          // h = relu(a1)
  Vec output;          // x = W2 * h
};

// Two-layer projection head x = W2 * relu(W1 * H), no bias terms.
// Gradients accumulate additively across backward calls until zero_grad.
struct ProjectionHead {
  Mat w1;  // d_hidden x d_in
  Mat w2;  // d_out x d_hidden
  Mat grad_w1;
  Mat grad_w2;

  std::size_t d_in() const { return w1.cols; }
  std::size_t d_hidden() const { return w1.rows; }
  std::size_t d_out() const { return w2.rows; }

  void zero_grad() {
    grad_w1.fill(0.0);
    grad_w2.fill(0.0);
  }
};

// Uniform init in +-sqrt(6 / (fan_in + fan_out)) per layer, gradients zeroed.
ProjectionHead init_projection(Rng& rng, std::size_t d_in, std::size_t d_hidden,
                               std::size_t d_out);

// Returns the embedding and fills the tape.
Vec forward(const ProjectionHead& head, const Vec& input, ForwardTape& tape);

// Convenience overload when the tape is not needed.
Vec forward(const ProjectionHead& head, const Vec& input);

// Accumulates grad_w1/grad_w2 from the cotangent dL/dx and returns dL/dH.
// The ReLU subgradient at exactly 0 is taken as 0.
Vec backward(ProjectionHead& head, const ForwardTape& tape, const Vec& dloss_dx);

}  // namespace dsml
