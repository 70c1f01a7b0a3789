#include "dsml/projection.hpp"

#include <cmath>
#include <stdexcept>

namespace dsml {

ProjectionHead init_projection(Rng& rng, std::size_t d_in, std::size_t d_hidden,
                               std::size_t d_out) {
  if (d_in < 1 || d_hidden < 1 || d_out < 1)
    throw std::invalid_argument("init_projection: dims must be >= 1");
  ProjectionHead head;
  head.w1 = Mat(d_hidden, d_in);
  head.w2 = Mat(d_out, d_hidden);
  const double b1 = std::sqrt(6.0 / static_cast<double>(d_in + d_hidden));
  const double b2 = std::sqrt(6.0 / static_cast<double>(d_hidden + d_out));
  for (double& w : head.w1.values) w = rng.uniform(-b1, b1);
  for (double& w : head.w2.values) w = rng.uniform(-b2, b2);
  head.grad_w1 = Mat(d_hidden, d_in);
  head.grad_w2 = Mat(d_out, d_hidden);
  return head;
}

Vec forward(const ProjectionHead& head, const Vec& input, ForwardTape& tape) {
  tape.input = input;
  tape.pre_activation = matvec(head.w1, input);
  tape.hidden = relu(tape.pre_activation);
  tape.output = matvec(head.w2, tape.hidden);
  return tape.output;
}

Vec forward(const ProjectionHead& head, const Vec& input) {
  ForwardTape tape;
  return forward(head, input, tape);
}

Vec backward(ProjectionHead& head, const ForwardTape& tape, const Vec& dloss_dx) {
  if (dloss_dx.size() != head.d_out())
    throw std::invalid_argument("backward: cotangent shape mismatch");
  if (tape.input.size() != head.d_in() || tape.hidden.size() != head.d_hidden())
    throw std::invalid_argument("backward: tape does not match head");

  // grad_w2 += dL/dx (outer) h
  for (std::size_t r = 0; r < head.d_out(); ++r)
    for (std::size_t c = 0; c < head.d_hidden(); ++c)
      head.grad_w2(r, c) += dloss_dx[r] * tape.hidden[c];

  // dL/dh gated by the ReLU mask (subgradient 0 at a1 == 0)
  Vec dhidden = matvec_transpose(head.w2, dloss_dx);
  for (std::size_t i = 0; i < dhidden.size(); ++i)
    if (!(tape.pre_activation[i] > 0.0)) dhidden[i] = 0.0;

  // grad_w1 += dL/da1 (outer) H
  for (std::size_t r = 0; r < head.d_hidden(); ++r)
    for (std::size_t c = 0; c < head.d_in(); ++c)
      head.grad_w1(r, c) += dhidden[r] * tape.input[c];

  return matvec_transpose(head.w1, dhidden);
}

}  // namespace dsml
