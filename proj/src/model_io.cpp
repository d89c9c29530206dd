#include <istream>
#include <ostream>
#include <string>

#include "csv.hpp"
#include "har/classifiers.hpp"
#include "har/error.hpp"

namespace har {

namespace {

constexpr int kFormatVersion = 1;

std::string num(double v) { return csv::format_double(v); }

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) fail("unexpected end of model file");
    return w;
  }
  void expect(std::string_view keyword) {
    const auto w = word();
    if (w != keyword) fail("expected '" + std::string(keyword) + "', found '" + w + "'");
  }
  double real() {
    const auto w = word();
    const auto v = csv::parse_double(w);
    if (!v) fail("bad number '" + w + "'");
    return *v;
  }
  std::int64_t integer() {
    const auto w = word();
    const auto v = csv::parse_int(w);
    if (!v) fail("bad integer '" + w + "'");
    return *v;
  }
  std::size_t count() {
    const auto v = integer();
    if (v < 0) fail("negative count");
    return static_cast<std::size_t>(v);
  }
  Activity activity() { return activity_from_code(static_cast<int>(integer())); }

  [[noreturn]] static void fail(const std::string& what) {
    throw Error(ErrorCode::SchemaMismatch, "model file: " + what);
  }

 private:
  std::istream& in_;
};

void write_tree(std::ostream& out, const DecisionTree& tree) {
  out << "nodes " << tree.nodes().size() << '\n';
  for (const auto& n : tree.nodes()) {
    out << n.feature << ' ' << num(n.threshold) << ' ' << n.left << ' ' << n.right << ' '
        << code(n.label) << ' ' << num(n.score) << '\n';
  }
}

DecisionTree read_tree(Reader& r, std::size_t width) {
  DecisionTree tree;
  r.expect("nodes");
  const std::size_t count = r.count();
  auto& nodes = tree.mutable_nodes();
  for (std::size_t i = 0; i < count; ++i) {
    DecisionTree::Node n;
    n.feature = static_cast<int>(r.integer());
    n.threshold = r.real();
    n.left = static_cast<std::int32_t>(r.integer());
    n.right = static_cast<std::int32_t>(r.integer());
    n.label = r.activity();
    n.score = r.real();
    nodes.push_back(n);
  }
  for (const auto& n : nodes) {
    if (n.feature < 0) continue;
    if (static_cast<std::size_t>(n.feature) >= width || n.left <= 0 || n.right <= 0 ||
        static_cast<std::size_t>(n.left) >= count || static_cast<std::size_t>(n.right) >= count) {
      Reader::fail("tree node out of range");
    }
  }
  if (nodes.empty()) Reader::fail("tree without nodes");
  return tree;
}

void write_row(std::ostream& out, std::span<const double> row) {
  for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << num(row[j]);
  out << '\n';
}

std::vector<double> read_row(Reader& r, std::size_t width) {
  std::vector<double> v(width);
  for (auto& x : v) x = r.real();
  return v;
}

}  // namespace

void save_model(std::ostream& out, const TrainedModel& model) {
  const std::size_t d = model.width();
  out << "har-model " << kFormatVersion << ' ' << model_label(model.kind()) << ' ' << d << '\n';
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DecisionTree>) {
          write_tree(out, m);
        } else if constexpr (std::is_same_v<T, GaussianNaiveBayes>) {
          out << "classes " << m.classes.size() << '\n';
          for (const auto& c : m.classes) {
            out << "class " << code(c.label) << ' ' << num(c.log_prior) << '\n';
            write_row(out, c.mean);
            write_row(out, c.variance);
          }
        } else if constexpr (std::is_same_v<T, KNearestNeighbors>) {
          out << "k " << m.k << "\npoints " << m.points.rows() << '\n';
          for (std::size_t i = 0; i < m.points.rows(); ++i) {
            out << code(m.labels[i]) << ' ';
            write_row(out, m.points.row(i));
          }
        } else if constexpr (std::is_same_v<T, SupportVectorMachine>) {
          out << "classes " << m.class_labels.size();
          for (Activity a : m.class_labels) out << ' ' << code(a);
          out << "\nvectors " << m.vectors.rows() << '\n';
          for (std::size_t i = 0; i < m.vectors.rows(); ++i) write_row(out, m.vectors.row(i));
          out << "machines " << m.machines.size() << '\n';
          for (const auto& bm : m.machines) {
            out << "machine " << code(bm.positive) << ' ' << code(bm.negative) << ' '
                << num(bm.bias) << ' ' << (bm.converged ? 1 : 0) << ' ' << bm.iterations << ' '
                << bm.support.size() << '\n';
            for (std::size_t s = 0; s < bm.support.size(); ++s) {
              out << bm.support[s] << ' ' << num(bm.weight[s]) << '\n';
            }
          }
        } else {
          out << "trees " << m.trees.size() << '\n';
          for (const auto& t : m.trees) write_tree(out, t);
        }
      },
      model.impl());
  if (!out) throw Error(ErrorCode::Io, "failed to write model");
}

TrainedModel load_model(std::istream& in) {
  Reader r(in);
  r.expect("har-model");
  if (r.integer() != kFormatVersion) Reader::fail("unsupported format version");
  ModelKind kind;
  try {
    kind = parse_model_kind(r.word());
  } catch (const Error& e) {
    Reader::fail(e.what());
  }
  const std::size_t d = r.count();

  switch (kind) {
    case ModelKind::DecisionTree:
      return TrainedModel(read_tree(r, d), d);
    case ModelKind::NaiveBayes: {
      GaussianNaiveBayes m;
      r.expect("classes");
      const std::size_t k = r.count();
      for (std::size_t c = 0; c < k; ++c) {
        r.expect("class");
        GaussianNaiveBayes::ClassModel cm;
        cm.label = r.activity();
        cm.log_prior = r.real();
        cm.mean = read_row(r, d);
        cm.variance = read_row(r, d);
        m.classes.push_back(std::move(cm));
      }
      if (m.classes.empty()) Reader::fail("naive Bayes without classes");
      return TrainedModel(std::move(m), d);
    }
    case ModelKind::Knn: {
      KNearestNeighbors m;
      r.expect("k");
      m.k = r.count();
      r.expect("points");
      const std::size_t n = r.count();
      m.points = Matrix(0, d);
      for (std::size_t i = 0; i < n; ++i) {
        m.labels.push_back(r.activity());
        m.points.append_row(read_row(r, d));
      }
      if (n == 0 || m.k == 0) Reader::fail("empty KNN model");
      return TrainedModel(std::move(m), d);
    }
    case ModelKind::Svm: {
      SupportVectorMachine m;
      r.expect("classes");
      const std::size_t k = r.count();
      for (std::size_t c = 0; c < k; ++c) m.class_labels.push_back(r.activity());
      if (k == 0) Reader::fail("SVM without classes");
      r.expect("vectors");
      const std::size_t nv = r.count();
      m.vectors = Matrix(0, d);
      for (std::size_t i = 0; i < nv; ++i) m.vectors.append_row(read_row(r, d));
      r.expect("machines");
      const std::size_t nm = r.count();
      for (std::size_t i = 0; i < nm; ++i) {
        r.expect("machine");
        SupportVectorMachine::BinaryMachine bm;
        bm.positive = r.activity();
        bm.negative = r.activity();
        bm.bias = r.real();
        bm.converged = r.integer() != 0;
        bm.iterations = r.count();
        const std::size_t ns = r.count();
        for (std::size_t s = 0; s < ns; ++s) {
          const std::size_t idx = r.count();
          if (idx >= nv) Reader::fail("support index out of range");
          bm.support.push_back(idx);
          bm.weight.push_back(r.real());
        }
        m.machines.push_back(std::move(bm));
      }
      return TrainedModel(std::move(m), d);
    }
    case ModelKind::Bagging: {
      BaggedTrees m;
      r.expect("trees");
      const std::size_t nt = r.count();
      for (std::size_t t = 0; t < nt; ++t) m.trees.push_back(read_tree(r, d));
      if (nt == 0) Reader::fail("bagging without trees");
      return TrainedModel(std::move(m), d);
    }
  }
  Reader::fail("unknown model kind");
}

}  // namespace har
