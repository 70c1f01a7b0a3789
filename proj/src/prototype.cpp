#include "dsml/prototype.hpp"

#include <cmath>
#include <stdexcept>

namespace dsml {

namespace {
constexpr double kDistanceEps = 1e-12;
}

ClassVectorsView view_of(const PrototypeSet& set) {
  ClassVectorsView v;
  v.slots.resize(set.entries.size(), nullptr);
  for (std::size_t c = 0; c < set.entries.size(); ++c)
    if (set.entries[c].present) v.slots[c] = &set.entries[c].value;
  return v;
}

ClassVectorsView view_of(const MeanPrototypes& means) {
  ClassVectorsView v;
  v.slots.resize(means.entries.size(), nullptr);
  for (std::size_t c = 0; c < means.entries.size(); ++c)
    if (means.entries[c].present) v.slots[c] = &means.entries[c].value;
  return v;
}

PrototypeSet prototypes_gg(std::span<const Vec> embeddings,
                           std::span<const int> labels, int num_classes) {
  if (embeddings.size() != labels.size())
    throw std::invalid_argument("prototypes_gg: size mismatch");
  PrototypeSet set(num_classes);
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const int c = labels[i];
    if (c < 0 || c >= num_classes)
      throw std::invalid_argument("prototypes_gg: class id out of range");
    auto& e = set.entries[static_cast<std::size_t>(c)];
    if (!e.present) {
      e.present = true;
      e.value.assign(embeddings[i].size(), 0.0);
    }
    axpy(1.0, embeddings[i], e.value);
    e.support_count += 1;
    e.support_weight += 1.0;
  }
  for (auto& e : set.entries)
    if (e.present)
      for (double& v : e.value) v /= static_cast<double>(e.support_count);
  return set;
}

PrototypeSet prototypes_cg(std::span<const Vec> embeddings,
                           std::span<const int> labels,
                           std::span<const double> weights, int num_classes) {
  if (embeddings.size() != labels.size() || embeddings.size() != weights.size())
    throw std::invalid_argument("prototypes_cg: size mismatch");
  PrototypeSet set(num_classes);
  std::vector<double> max_weight(static_cast<std::size_t>(num_classes), 0.0);
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const int c = labels[i];
    if (c < 0 || c >= num_classes)
      throw std::invalid_argument("prototypes_cg: class id out of range");
    if (!(weights[i] > 0.0))
      throw std::invalid_argument("prototypes_cg: weights must be positive");
    max_weight[static_cast<std::size_t>(c)] =
        std::max(max_weight[static_cast<std::size_t>(c)], weights[i]);
  }
  std::vector<double> weight_sum(static_cast<std::size_t>(num_classes), 0.0);
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    auto& e = set.entries[c];
    if (!e.present) {
      e.present = true;
      e.value.assign(embeddings[i].size(), 0.0);
    }
    const double w = weights[i] / max_weight[c];
    axpy(w, embeddings[i], e.value);
    weight_sum[c] += w;
    e.support_count += 1;
    e.support_weight += weights[i];
  }
  for (std::size_t c = 0; c < set.entries.size(); ++c) {
    auto& e = set.entries[c];
    if (e.present)
      for (double& v : e.value) v /= weight_sum[c];
  }
  return set;
}

AlignmentGrads make_alignment_grads(int num_classes) {
  AlignmentGrads g;
  g.side_a.resize(static_cast<std::size_t>(num_classes));
  g.side_b.resize(static_cast<std::size_t>(num_classes));
  return g;
}

namespace {

void add_into(Vec& slot, std::size_t dim, double coeff, const Vec& a, const Vec& b) {
  if (slot.empty()) slot.assign(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) slot[i] += coeff * (a[i] - b[i]);
}

}  // namespace

double loss_intra(const ClassVectorsView& a, const ClassVectorsView& b,
                  AlignmentGrads* grads) {
  if (a.num_classes() != b.num_classes())
    throw std::invalid_argument("loss_intra: class count mismatch");
  int co_present = 0;
  for (int c = 0; c < a.num_classes(); ++c)
    if (a.present(c) && b.present(c)) ++co_present;
  if (co_present == 0) return 0.0;

  const double inv = 1.0 / static_cast<double>(co_present);
  double total = 0.0;
  for (int c = 0; c < a.num_classes(); ++c) {
    if (!a.present(c) || !b.present(c)) continue;
    const Vec& pa = a.value(c);
    const Vec& pb = b.value(c);
    const double phi = euclid(pa, pb);
    total += phi;
    if (grads && phi >= kDistanceEps) {
      const double coeff = inv / phi;
      const std::size_t dim = pa.size();
      add_into(grads->side_a[static_cast<std::size_t>(c)], dim, coeff, pa, pb);
      add_into(grads->side_b[static_cast<std::size_t>(c)], dim, coeff, pb, pa);
    }
  }
  return total * inv;
}

double loss_inter(const ClassVectorsView& a, const ClassVectorsView& b,
                  double margin, AlignmentGrads* grads) {
  if (a.num_classes() != b.num_classes())
    throw std::invalid_argument("loss_inter: class count mismatch");
  if (!(margin > 0.0)) throw std::invalid_argument("loss_inter: margin must be > 0");

  int pairs = 0;
  for (int c = 0; c < a.num_classes(); ++c) {
    if (!a.present(c)) continue;
    for (int k = 0; k < b.num_classes(); ++k)
      if (k != c && b.present(k)) ++pairs;
  }
  if (pairs == 0) return 0.0;

  const double inv = 1.0 / static_cast<double>(pairs);
  double total = 0.0;
  for (int c = 0; c < a.num_classes(); ++c) {
    if (!a.present(c)) continue;
    for (int k = 0; k < b.num_classes(); ++k) {
      if (k == c || !b.present(k)) continue;
      const Vec& pa = a.value(c);
      const Vec& pb = b.value(k);
      const double phi = euclid(pa, pb);
      if (phi >= margin) continue;  // hinge inactive (subgradient 0 at phi == m)
      total += margin - phi;
      if (grads && phi >= kDistanceEps) {
        const double coeff = -inv / phi;
        const std::size_t dim = pa.size();
        add_into(grads->side_a[static_cast<std::size_t>(c)], dim, coeff, pa, pb);
        add_into(grads->side_b[static_cast<std::size_t>(k)], dim, coeff, pb, pa);
      }
    }
  }
  return total * inv;
}

double loss_pmb(const MeanPrototypes& bank_means, const PrototypeSet& cg,
                double margin, std::vector<Vec>* dloss_dcg) {
  const ClassVectorsView bank = view_of(bank_means);
  const ClassVectorsView cg_view = view_of(cg);

  AlignmentGrads g_intra = make_alignment_grads(cg.num_classes());
  AlignmentGrads g_inter = make_alignment_grads(cg.num_classes());
  AlignmentGrads g_self = make_alignment_grads(cg.num_classes());

  const double intra = loss_intra(bank, cg_view, dloss_dcg ? &g_intra : nullptr);
  const double inter = loss_inter(bank, cg_view, margin, dloss_dcg ? &g_inter : nullptr);
  const double self_sep = loss_inter(cg_view, cg_view, margin, dloss_dcg ? &g_self : nullptr);

  if (dloss_dcg) {
    auto& out = *dloss_dcg;
    out.resize(cg.entries.size());
    for (std::size_t c = 0; c < cg.entries.size(); ++c) {
      if (!cg.entries[c].present) continue;
      const std::size_t dim = cg.entries[c].value.size();
      auto add = [&](const Vec& src) {
        if (src.empty()) return;
        if (out[c].empty()) out[c].assign(dim, 0.0);
        axpy(1.0, src, out[c]);
      };
      // bank side of intra/inter is constant; only the cg side flows
      add(g_intra.side_b[c]);
      add(g_inter.side_b[c]);
      add(g_self.side_a[c]);
      add(g_self.side_b[c]);
    }
  }
  return intra + inter + self_sep;
}

void scatter_cg_gradient(const PrototypeSet& cg,
                         std::span<const Vec> embeddings,
                         std::span<const int> labels,
                         std::span<const double> weights,
                         const std::vector<Vec>& dloss_dproto, double scale,
                         std::vector<Vec>& dloss_dembedding,
                         std::vector<double>* dloss_dweight) {
  std::vector<double> max_weight(cg.entries.size(), 0.0);
  std::vector<double> norm_weight_sum(cg.entries.size(), 0.0);
  for (std::size_t i = 0; i < embeddings.size(); ++i)
    max_weight[static_cast<std::size_t>(labels[i])] =
        std::max(max_weight[static_cast<std::size_t>(labels[i])], weights[i]);
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    norm_weight_sum[c] += weights[i] / max_weight[c];
  }

  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    if (c >= dloss_dproto.size() || dloss_dproto[c].empty()) continue;
    const Vec& up = dloss_dproto[c];
    const double w_norm = weights[i] / max_weight[c];
    axpy(scale * w_norm / norm_weight_sum[c], up, dloss_dembedding[i]);
    if (dloss_dweight) {
      // dP_c/dq_i = (x_i - P_c) / sum_q; the ratio form is scale invariant
      const double sum_q = cg.entries[c].support_weight;
      double acc = 0.0;
      const Vec& proto = cg.entries[c].value;
      for (std::size_t d = 0; d < up.size(); ++d)
        acc += up[d] * (embeddings[i][d] - proto[d]);
      (*dloss_dweight)[i] += scale * acc / sum_q;
    }
  }
}

void scatter_gg_gradient(const PrototypeSet& gg, std::span<const int> labels,
                         const std::vector<Vec>& dloss_dproto, double scale,
                         std::vector<Vec>& dloss_dembedding) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    if (c >= dloss_dproto.size() || dloss_dproto[c].empty()) continue;
    const double inv_n =
        1.0 / static_cast<double>(gg.entries[c].support_count);
    axpy(scale * inv_n, dloss_dproto[c], dloss_dembedding[i]);
  }
}

MemoryBank::MemoryBank(int num_classes, int total_capacity) {
  if (num_classes < 1)
    throw std::invalid_argument("MemoryBank: need at least one class");
  per_class_capacity_ = total_capacity / num_classes;
  if (per_class_capacity_ < 1)
    throw std::invalid_argument("MemoryBank: capacity below one slot per class");
  buffers_.resize(static_cast<std::size_t>(num_classes));
}

void MemoryBank::push(const PrototypeSet& gg_labeled) {
  if (gg_labeled.num_classes() != num_classes())
    throw std::invalid_argument("MemoryBank::push: class count mismatch");
  const auto cap = static_cast<std::size_t>(per_class_capacity_);
  for (int c = 0; c < num_classes(); ++c) {
    if (!gg_labeled.present(c)) continue;
    auto& buf = buffers_[static_cast<std::size_t>(c)];
    if (buf.slots.size() < cap) {
      buf.slots.push_back(gg_labeled.value(c));
    } else {
      buf.slots[buf.next] = gg_labeled.value(c);
      buf.next = (buf.next + 1) % cap;
    }
  }
}

MeanPrototypes MemoryBank::means() const {
  MeanPrototypes m;
  m.entries.resize(buffers_.size());
  for (std::size_t c = 0; c < buffers_.size(); ++c) {
    const auto& buf = buffers_[c];
    if (buf.slots.empty()) continue;
    const std::size_t dim = buf.slots[0].size();
    std::vector<long double> acc(dim, 0.0L);
    for (const Vec& v : buf.slots)
      for (std::size_t d = 0; d < dim; ++d) acc[d] += v[d];
    auto& e = m.entries[c];
    e.present = true;
    e.value.resize(dim);
    const auto n = static_cast<long double>(buf.slots.size());
    for (std::size_t d = 0; d < dim; ++d)
      e.value[d] = static_cast<double>(acc[d] / n);
  }
  return m;
}

std::vector<Vec> MemoryBank::snapshot_fifo(int c) const {
  const auto& buf = buffers_[static_cast<std::size_t>(c)];
  std::vector<Vec> out;
  out.reserve(buf.slots.size());
  const auto cap = static_cast<std::size_t>(per_class_capacity_);
  if (buf.slots.size() < cap) {
    out = buf.slots;
  } else {
    for (std::size_t i = 0; i < cap; ++i)
      out.push_back(buf.slots[(buf.next + i) % cap]);
  }
  return out;
}

void MemoryBank::restore(int per_class_capacity,
                         std::vector<ClassBuffer> buffers) {
  per_class_capacity_ = per_class_capacity;
  buffers_ = std::move(buffers);
}

}  // namespace dsml
