#pragma once

#include <iosfwd>
#include <string>

#include "dsml/numerics.hpp"

namespace dsml {

// Gaussian cluster generator standing in for detector proposal features.
// Cluster means are sampled on a sphere of radius r_sep; samples are
// N(mu_c, sigma^2 I). Counts are totals, split evenly across classes.
struct DatasetSpec {
  std::uint64_t seed = 1234;
  int num_classes = 4;
  int d_in = 32;
  double r_sep = 3.0;
  double sigma_cluster = 1.2;
  int n_labeled = 160;    // full labeled pool; the split keeps labeled_fraction of it
  int n_unlabeled = 400;
  int n_test = 400;
  double labeled_fraction = 1.0;
  int n_distractor = 40;  // unlabeled-only off-cluster samples
  double distractor_spread = 3.0;
};

// A proposal feature with its (possibly hidden) class. For unlabeled
// samples the class is retained for evaluation diagnostics only; training
// code receives unlabeled features through a label-free view.
struct LabeledSample {
  Vec feature;
  int label = -1;
};

struct Dataset {
  int num_classes = 0;
  int d_in = 0;
  std::vector<LabeledSample> labeled;
  std::vector<Vec> unlabeled;               // features only; what training sees
  std::vector<int> unlabeled_hidden_class;  // -1 for distractors; eval-only
  std::vector<LabeledSample> test;

  bool operator==(const Dataset&) const = default;
};

void validate(const DatasetSpec& spec);

Dataset generate(const DatasetSpec& spec);

// Plain-text format: header "C d_in", then one record per line
// "split,class,feat_0,...,feat_{d-1}". Floats are written with shortest
// round-trip precision, so export/import is bitwise lossless.
void export_dataset(const Dataset& ds, std::ostream& out);
void export_dataset(const Dataset& ds, const std::string& path);

// Throws std::runtime_error with the offending line number on malformed
// input; never returns a partial dataset.
Dataset import_dataset(std::istream& in);
Dataset import_dataset(const std::string& path);

}  // namespace dsml
