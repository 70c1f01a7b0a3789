#pragma once

#include <span>

#include "dsml/numerics.hpp"

namespace dsml {

// Per-class batch prototypes. A class is present iff at least one proposal
// contributed to it.
struct PrototypeSet {
  struct Entry {
    bool present = false;
    Vec value;
    int support_count = 0;
    double support_weight = 0.0;  // sum of confidence weights
  };
  std::vector<Entry> entries;

  PrototypeSet() = default;
  explicit PrototypeSet(int num_classes)
      : entries(static_cast<std::size_t>(num_classes)) {}

  int num_classes() const { return static_cast<int>(entries.size()); }
  bool present(int c) const { return entries[static_cast<std::size_t>(c)].present; }
  const Vec& value(int c) const { return entries[static_cast<std::size_t>(c)].value; }
};

// Per-class means over the memory bank; absent where the buffer is empty.
struct MeanPrototypes {
  struct Entry {
    bool present = false;
    Vec value;
  };
  std::vector<Entry> entries;

  int num_classes() const { return static_cast<int>(entries.size()); }
  bool present(int c) const { return entries[static_cast<std::size_t>(c)].present; }
  const Vec& value(int c) const { return entries[static_cast<std::size_t>(c)].value; }
};

// Non-owning per-class view shared by PrototypeSet and MeanPrototypes so the
// alignment losses accept either side.
struct ClassVectorsView {
  std::vector<const Vec*> slots;  // nullptr where absent

  int num_classes() const { return static_cast<int>(slots.size()); }
  bool present(int c) const { return slots[static_cast<std::size_t>(c)] != nullptr; }
  const Vec& value(int c) const { return *slots[static_cast<std::size_t>(c)]; }
};

ClassVectorsView view_of(const PrototypeSet& set);
ClassVectorsView view_of(const MeanPrototypes& means);

// Ground-truth-guided prototypes: unweighted per-class mean.
PrototypeSet prototypes_gg(std::span<const Vec> embeddings,
                           std::span<const int> labels, int num_classes);

// Confidence-guided prototypes: weight-normalized per-class mean. Weights
// must be > 0. Weights are pre-divided by the class maximum, so an
// all-equal-weights class reduces bitwise to the unweighted mean.
PrototypeSet prototypes_cg(std::span<const Vec> embeddings,
                           std::span<const int> labels,
                           std::span<const double> weights, int num_classes);

// Per-class gradients of an alignment loss with respect to each side's
// vectors. Entries for absent or untouched classes stay empty.
struct AlignmentGrads {
  std::vector<Vec> side_a;
  std::vector<Vec> side_b;
};

// Mean distance between co-present classes; 0 when no class is co-present
// (category mismatch). The divisor is the co-present count. Gradients, when
// requested, are added into grads (pre-sized by the caller via
// make_alignment_grads).
double loss_intra(const ClassVectorsView& a, const ClassVectorsView& b,
                  AlignmentGrads* grads = nullptr);

// Mean hinge max(0, margin - phi(A_c, B_k)) over ordered pairs c != k with
// both sides present; divisor is the pair count; 0 when no valid pair.
// Subgradient 0 at phi == margin and at phi == 0.
double loss_inter(const ClassVectorsView& a, const ClassVectorsView& b,
                  double margin, AlignmentGrads* grads = nullptr);

AlignmentGrads make_alignment_grads(int num_classes);

// Prototype alignment against the memory bank:
//   L_intra(bank, cg) + L_inter(bank, cg) + L_inter(cg, cg)
// Bank means are constants; when dloss_dcg is non-null, the per-class
// gradient with respect to the cg vectors is added into it (sized C,
// entries for absent classes left empty). Used for both the labeled and
// the unlabeled confidence-guided sets.
double loss_pmb(const MeanPrototypes& bank_means, const PrototypeSet& cg,
                double margin, std::vector<Vec>* dloss_dcg = nullptr);

// Distributes per-class prototype gradients back to the contributing
// embeddings (and optionally the confidence weights) of a cg set.
void scatter_cg_gradient(const PrototypeSet& cg,
                         std::span<const Vec> embeddings,
                         std::span<const int> labels,
                         std::span<const double> weights,
                         const std::vector<Vec>& dloss_dproto, double scale,
                         std::vector<Vec>& dloss_dembedding,
                         std::vector<double>* dloss_dweight = nullptr);

// Same for a gg set (uniform 1/N weights).
void scatter_gg_gradient(const PrototypeSet& gg, std::span<const int> labels,
                         const std::vector<Vec>& dloss_dproto, double scale,
                         std::vector<Vec>& dloss_dembedding);

// Fixed-capacity per-class ring buffers of labeled ground-truth-guided
// prototypes. Per-class capacity is floor(total_capacity / num_classes);
// eviction is strictly FIFO within a class. Stored vectors are snapshots.
class MemoryBank {
 public:
  MemoryBank() = default;
  MemoryBank(int num_classes, int total_capacity);

  // Appends each present class's prototype, evicting FIFO at capacity.
  void push(const PrototypeSet& gg_labeled);

  MeanPrototypes means() const;

  int num_classes() const { return static_cast<int>(buffers_.size()); }
  int per_class_capacity() const { return per_class_capacity_; }
  int size(int c) const {
    return static_cast<int>(buffers_[static_cast<std::size_t>(c)].slots.size());
  }
  // Stored entries oldest first.
  std::vector<Vec> snapshot_fifo(int c) const;

  // Raw ring state, for checkpointing.
  struct ClassBuffer {
    std::vector<Vec> slots;
    std::size_t next = 0;  // write cursor once the buffer is full
  };
  const std::vector<ClassBuffer>& raw_buffers() const { return buffers_; }
  void restore(int per_class_capacity, std::vector<ClassBuffer> buffers);

 private:
  std::vector<ClassBuffer> buffers_;
  int per_class_capacity_ = 0;
};

}  // namespace dsml
