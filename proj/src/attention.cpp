#include "lrga/attention.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lrga/error.hpp"

namespace lrga {

namespace {

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

void check_input(const Matrix& x, const LrgaParams& params) {
  params.validate();
  if (x.rows() == 0) throw std::invalid_argument("LRGA input must have at least one row");
  if (static_cast<std::size_t>(x.cols()) != params.in_dim()) {
    throw std::invalid_argument("LRGA input has " + std::to_string(x.cols()) +
                                " columns, parameters expect " +
                                std::to_string(params.in_dim()));
  }
}

double eta_from(const Matrix& m1x, const Matrix& m2x) {
  return m1x.colwise().sum().dot(m2x.colwise().sum()) / static_cast<double>(m1x.rows());
}

nlohmann::json rowmap_to_json(const RowMap& m) {
  nlohmann::json j;
  j["in_dim"] = m.in_dim();
  j["out_dim"] = m.out_dim();
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(m.weight.size()));
  for (Eigen::Index r = 0; r < m.weight.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.weight.cols(); ++c) w.push_back(m.weight(r, c));
  }
  j["weight"] = w;
  j["bias"] = std::vector<double>(m.bias.data(), m.bias.data() + m.bias.size());
  j["activation"] = m.activation == Activation::relu ? "relu" : "identity";
  return j;
}

RowMap rowmap_from_json(const nlohmann::json& j) {
  RowMap m;
  const auto rows = j.at("in_dim").get<std::size_t>();
  const auto cols = j.at("out_dim").get<std::size_t>();
  const auto w = j.at("weight").get<std::vector<double>>();
  const auto b = j.at("bias").get<std::vector<double>>();
  if (w.size() != rows * cols || b.size() != cols) {
    throw std::invalid_argument("row map JSON: weight/bias sizes do not match dims");
  }
  m.weight.resize(idx(rows), idx(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m.weight(idx(r), idx(c)) = w[r * cols + c];
  }
  m.bias = Eigen::Map<const Vector>(b.data(), idx(b.size()));
  const auto act = j.value("activation", std::string("relu"));
  if (act == "relu") {
    m.activation = Activation::relu;
  } else if (act == "identity") {
    m.activation = Activation::identity;
  } else {
    throw std::invalid_argument("row map JSON: unknown activation '" + act + "'");
  }
  return m;
}

}  // namespace

Matrix RowMap::apply(const Matrix& x) const {
  Matrix out(x.rows(), weight.cols());
  apply_into(x, out);
  return out;
}

void RowMap::apply_into(const Matrix& x, Eigen::Ref<Matrix> out) const {
  if (x.cols() != weight.rows()) {
    throw std::invalid_argument("row map expects " + std::to_string(weight.rows()) +
                                " input columns, got " + std::to_string(x.cols()));
  }
  out.noalias() = x * weight;
  out.rowwise() += bias.transpose();
  if (activation == Activation::relu) out = out.cwiseMax(0.0);
}

RowMap RowMap::random(std::size_t in_dim, std::size_t out_dim, Rng& rng, Activation activation) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(in_dim)));
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
  RowMap m;
  m.weight.resize(idx(in_dim), idx(out_dim));
  for (Eigen::Index r = 0; r < m.weight.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.weight.cols(); ++c) m.weight(r, c) = normal(rng);
  }
  m.bias.resize(idx(out_dim));
  for (Eigen::Index c = 0; c < m.bias.size(); ++c) m.bias(c) = (2.0 * uniform01(rng) - 1.0) * bound;
  m.activation = activation;
  return m;
}

void LrgaParams::validate() const {
  const std::size_t k = kappa();
  const std::size_t d = in_dim();
  if (k == 0) throw std::invalid_argument("LRGA rank kappa must be positive");
  int index = 1;
  for (const RowMap* m : {&m1, &m2, &m3, &m4}) {
    if (m->out_dim() != k || m->in_dim() != d ||
        static_cast<std::size_t>(m->bias.size()) != k) {
      throw std::invalid_argument("LRGA map m" + std::to_string(index) +
                                  " must map " + std::to_string(d) + " -> " +
                                  std::to_string(k));
    }
    ++index;
  }
  if (m5) {
    if (m5->out_dim() != d || m5->in_dim() < d + 2 * k ||
        static_cast<std::size_t>(m5->bias.size()) != d) {
      throw std::invalid_argument("LRGA map m5 must map d + 2 kappa + d_gnn -> d");
    }
  }
  if (!(eta_epsilon >= 0.0)) throw std::invalid_argument("eta_epsilon must be non-negative");
}

LrgaParams LrgaParams::random(std::size_t in_dim, std::size_t kappa, std::uint64_t seed,
                              Activation activation) {
  Rng rng = make_rng(seed);
  LrgaParams p{RowMap::random(in_dim, kappa, rng, activation),
               RowMap::random(in_dim, kappa, rng, activation),
               RowMap::random(in_dim, kappa, rng, activation),
               RowMap::random(in_dim, kappa, rng, activation),
               std::nullopt};
  return p;
}

double eta(const Matrix& x, const LrgaParams& params) {
  check_input(x, params);
  return eta_from(params.m1.apply(x), params.m2.apply(x));
}

Matrix lrga_forward(const Matrix& x, const LrgaParams& params) {
  check_input(x, params);
  const auto k = idx(params.kappa());
  Matrix out(x.rows(), 2 * k);
  params.m4.apply_into(x, out.rightCols(k));

  const Matrix a = params.m1.apply(x);
  Matrix gram;  // kappa x kappa
  double norm = 0.0;
  {
    const Matrix b = params.m2.apply(x);
    norm = eta_from(a, b);
    if (!(std::abs(norm) > params.eta_epsilon)) throw DegenerateNormalization(norm);
    const Matrix c = params.m3.apply(x);
    gram.noalias() = b.transpose() * c;
  }
  gram /= norm;
  out.leftCols(k).noalias() = a * gram;
  return out;
}

Matrix augment_layer(const Matrix& x, const Matrix& gnn_out, const LrgaParams& params) {
  if (gnn_out.rows() != x.rows()) {
    throw std::invalid_argument("GNN output has " + std::to_string(gnn_out.rows()) +
                                " rows, expected " + std::to_string(x.rows()));
  }
  const Matrix attn = lrga_forward(x, params);
  Matrix cat(x.rows(), x.cols() + attn.cols() + gnn_out.cols());
  cat << x, attn, gnn_out;
  if (!params.m5) return cat;
  if (static_cast<std::size_t>(cat.cols()) != params.m5->in_dim()) {
    throw std::invalid_argument("m5 expects " + std::to_string(params.m5->in_dim()) +
                                " inputs, concatenation has " + std::to_string(cat.cols()));
  }
  return params.m5->apply(cat);
}

Matrix multi_head_forward(const Matrix& x, const std::vector<LrgaParams>& heads,
                          const Matrix& gnn_out) {
  if (heads.empty()) throw std::invalid_argument("multi-head LRGA needs at least one head");
  if (gnn_out.rows() != x.rows()) {
    throw std::invalid_argument("GNN output row count does not match input");
  }
  std::vector<Matrix> blocks;
  blocks.reserve(heads.size());
  Eigen::Index width = x.cols() + gnn_out.cols();
  for (std::size_t h = 0; h < heads.size(); ++h) {
    try {
      blocks.push_back(lrga_forward(x, heads[h]));
    } catch (const DegenerateNormalization& e) {
      throw DegenerateNormalization(e.eta(), "head " + std::to_string(h));
    }
    width += blocks.back().cols();
  }
  Matrix out(x.rows(), width);
  Eigen::Index col = 0;
  out.middleCols(col, x.cols()) = x;
  col += x.cols();
  for (const auto& b : blocks) {
    out.middleCols(col, b.cols()) = b;
    col += b.cols();
  }
  out.middleCols(col, gnn_out.cols()) = gnn_out;
  return out;
}

Matrix dense_attention_oracle(const Matrix& x, const LrgaParams& params) {
  check_input(x, params);
  if (static_cast<std::size_t>(x.rows()) > kDenseOracleMaxNodes) {
    throw std::invalid_argument("dense attention oracle is limited to n <= " +
                                std::to_string(kDenseOracleMaxNodes));
  }
  const Matrix a = params.m1.apply(x);
  const Matrix b = params.m2.apply(x);
  const double norm = eta_from(a, b);
  if (!(std::abs(norm) > params.eta_epsilon)) throw DegenerateNormalization(norm);
  const Matrix attention = (a * b.transpose()) / norm;  // n x n
  Matrix out(x.rows(), 2 * a.cols());
  out << attention * params.m3.apply(x), params.m4.apply(x);
  return out;
}

nlohmann::json params_to_json(const LrgaParams& params) {
  nlohmann::json j;
  j["kappa"] = params.kappa();
  j["in_dim"] = params.in_dim();
  j["eta_epsilon"] = params.eta_epsilon;
  j["m1"] = rowmap_to_json(params.m1);
  j["m2"] = rowmap_to_json(params.m2);
  j["m3"] = rowmap_to_json(params.m3);
  j["m4"] = rowmap_to_json(params.m4);
  j["m5"] = params.m5 ? rowmap_to_json(*params.m5) : nlohmann::json(nullptr);
  return j;
}

LrgaParams params_from_json(const nlohmann::json& j) {
  LrgaParams p{rowmap_from_json(j.at("m1")), rowmap_from_json(j.at("m2")),
               rowmap_from_json(j.at("m3")), rowmap_from_json(j.at("m4")), std::nullopt};
  if (j.contains("m5") && !j.at("m5").is_null()) p.m5 = rowmap_from_json(j.at("m5"));
  p.eta_epsilon = j.value("eta_epsilon", 1e-12);
  if (j.contains("kappa") && j.at("kappa").get<std::size_t>() != p.kappa()) {
    throw std::invalid_argument("params JSON: kappa does not match map widths");
  }
  p.validate();
  return p;
}

}  // namespace lrga
