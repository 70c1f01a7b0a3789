#include "dsml/synthgen.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dsml {

namespace {

Vec draw_normal_vec(Rng& rng, int dim) {
  Vec v(static_cast<std::size_t>(dim));
  for (double& x : v) x = rng.normal();
  return v;
}

Vec sample_around(Rng& rng, const Vec& mean, double sigma) {
  Vec v(mean.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mean[i] + sigma * rng.normal();
  return v;
}

void write_double(std::ostream& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, res.ptr - buf);
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("dataset parse error at line " +
                           std::to_string(line_no) + ": " + what);
}

}  // namespace

void validate(const DatasetSpec& spec) {
  if (spec.num_classes < 2)
    throw std::invalid_argument("dataset: need at least 2 classes");
  if (spec.d_in < 1) throw std::invalid_argument("dataset: d_in must be >= 1");
  if (!(spec.sigma_cluster > 0.0))
    throw std::invalid_argument("dataset: sigma_cluster must be > 0");
  if (!(spec.r_sep >= 0.0)) throw std::invalid_argument("dataset: r_sep must be >= 0");
  if (spec.n_labeled < 0 || spec.n_unlabeled < 0 || spec.n_test < 0 ||
      spec.n_distractor < 0)
    throw std::invalid_argument("dataset: counts must be >= 0");
  if (!(spec.labeled_fraction > 0.0) || spec.labeled_fraction > 1.0)
    throw std::invalid_argument("dataset: labeled_fraction must be in (0, 1]");
  if (!(spec.distractor_spread > 0.0))
    throw std::invalid_argument("dataset: distractor_spread must be > 0");
}

Dataset generate(const DatasetSpec& spec) {
  validate(spec);
  Rng rng(spec.seed, /*stream=*/1);

  Dataset ds;
  ds.num_classes = spec.num_classes;
  ds.d_in = spec.d_in;

  std::vector<Vec> means(static_cast<std::size_t>(spec.num_classes));
  for (auto& mu : means) {
    mu = draw_normal_vec(rng, spec.d_in);
    const double n = norm(mu);
    for (double& x : mu) x = x / n * spec.r_sep;
  }

  const int labeled_per_class = spec.n_labeled / spec.num_classes;
  const int unlabeled_per_class = spec.n_unlabeled / spec.num_classes;
  const int test_per_class = spec.n_test / spec.num_classes;
  const int kept_labeled_per_class = static_cast<int>(
      std::llround(labeled_per_class * spec.labeled_fraction));

  // The full labeled pool is drawn and a per-class prefix kept, so smaller
  // fractions are subsets of larger ones under the same seed.
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int i = 0; i < labeled_per_class; ++i) {
      Vec f = sample_around(rng, means[static_cast<std::size_t>(c)],
                            spec.sigma_cluster);
      if (i < kept_labeled_per_class) ds.labeled.push_back({std::move(f), c});
    }
  }
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int i = 0; i < unlabeled_per_class; ++i) {
      ds.unlabeled.push_back(sample_around(
          rng, means[static_cast<std::size_t>(c)], spec.sigma_cluster));
      ds.unlabeled_hidden_class.push_back(c);
    }
  }
  for (int i = 0; i < spec.n_distractor; ++i) {
    Vec f = draw_normal_vec(rng, spec.d_in);
    for (double& x : f) x *= spec.distractor_spread;
    ds.unlabeled.push_back(std::move(f));
    ds.unlabeled_hidden_class.push_back(-1);
  }
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int i = 0; i < test_per_class; ++i) {
      ds.test.push_back({sample_around(rng, means[static_cast<std::size_t>(c)],
                                       spec.sigma_cluster),
                         c});
    }
  }
  return ds;
}

void export_dataset(const Dataset& ds, std::ostream& out) {
  out << ds.num_classes << ' ' << ds.d_in << '\n';
  auto write_record = [&](const char* split, int cls, const Vec& f) {
    out << split << ',' << cls;
    for (double v : f) {
      out << ',';
      write_double(out, v);
    }
    out << '\n';
  };
  for (const auto& s : ds.labeled) write_record("labeled", s.label, s.feature);
  for (std::size_t i = 0; i < ds.unlabeled.size(); ++i)
    write_record("unlabeled", ds.unlabeled_hidden_class[i], ds.unlabeled[i]);
  for (const auto& s : ds.test) write_record("test", s.label, s.feature);
}

void export_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  export_dataset(ds, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset import_dataset(std::istream& in) {
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) parse_fail(1, "missing header");
  ++line_no;
  {
    std::istringstream hs(line);
    if (!(hs >> ds.num_classes >> ds.d_in) || ds.num_classes < 1 || ds.d_in < 1)
      parse_fail(line_no, "bad header, expected 'C d_in'");
    std::string rest;
    if (hs >> rest) parse_fail(line_no, "trailing content in header");
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();

    const char* comma = std::find(p, end, ',');
    if (comma == end) parse_fail(line_no, "missing split field");
    const std::string split(p, comma);
    p = comma + 1;

    comma = std::find(p, end, ',');
    int cls = 0;
    {
      const char* cls_end = comma == end ? end : comma;
      const auto res = std::from_chars(p, cls_end, cls);
      if (res.ec != std::errc{} || res.ptr != cls_end)
        parse_fail(line_no, "bad class field");
    }
    Vec feature;
    feature.reserve(static_cast<std::size_t>(ds.d_in));
    while (comma != end) {
      p = comma + 1;
      comma = std::find(p, end, ',');
      double v = 0.0;
      const char* val_end = comma == end ? end : comma;
      const auto res = std::from_chars(p, val_end, v);
      if (res.ec != std::errc{} || res.ptr != val_end)
        parse_fail(line_no, "bad feature value");
      feature.push_back(v);
    }
    if (feature.size() != static_cast<std::size_t>(ds.d_in))
      parse_fail(line_no, "expected " + std::to_string(ds.d_in) +
                              " features, got " + std::to_string(feature.size()));

    if (split == "labeled") {
      if (cls < 0 || cls >= ds.num_classes) parse_fail(line_no, "labeled class out of range");
      ds.labeled.push_back({std::move(feature), cls});
    } else if (split == "unlabeled") {
      if (cls < -1 || cls >= ds.num_classes) parse_fail(line_no, "unlabeled class out of range");
      ds.unlabeled.push_back(std::move(feature));
      ds.unlabeled_hidden_class.push_back(cls);
    } else if (split == "test") {
      if (cls < 0 || cls >= ds.num_classes) parse_fail(line_no, "test class out of range");
      ds.test.push_back({std::move(feature), cls});
    } else {
      parse_fail(line_no, "unknown split '" + split + "'");
    }
  }
  return ds;
}

Dataset import_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  return import_dataset(in);
}

}  // namespace dsml
