#include "lrga/learn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lrga/poly_kernels.hpp"

namespace lrga {

namespace {

enum Stream : std::uint64_t { kInit = 0, kTrain = 1, kTest = 2, kBatch = 3 };

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_batch(const TwoLayerMlp& mlp, const Matrix& x, const Vector& y) {
  mlp.validate();
  if (static_cast<std::size_t>(x.cols()) != mlp.input_dim()) {
    throw std::invalid_argument("MLP expects " + std::to_string(mlp.input_dim()) +
                                " input columns, got " + std::to_string(x.cols()));
  }
  if (y.size() != x.rows()) throw std::invalid_argument("targets and inputs differ in length");
  if (x.rows() == 0) throw std::invalid_argument("empty batch");
}

}  // namespace

void TwoLayerMlp::validate() const {
  if (w1.cols() == 0) throw std::invalid_argument("MLP width must be at least 1");
  if (b1.size() != w1.cols() || a2.size() != w1.cols()) {
    throw std::invalid_argument("MLP parameter shapes are inconsistent");
  }
}

TwoLayerMlp TwoLayerMlp::init(std::size_t d_in, std::size_t h, double init_scale,
                              std::uint64_t seed) {
  if (d_in == 0 || h == 0) throw std::invalid_argument("MLP dimensions must be positive");
  if (!(init_scale > 0.0)) throw std::invalid_argument("init_scale must be positive");
  Rng rng = make_rng(seed, kInit);
  std::normal_distribution<double> first(0.0, init_scale / std::sqrt(static_cast<double>(d_in)));
  std::normal_distribution<double> second(0.0, 1.0 / std::sqrt(static_cast<double>(h)));
  TwoLayerMlp mlp;
  mlp.init_scale = init_scale;
  mlp.seed = seed;
  mlp.w1.resize(static_cast<Eigen::Index>(d_in), static_cast<Eigen::Index>(h));
  for (Eigen::Index i = 0; i < mlp.w1.rows(); ++i) {
    for (Eigen::Index j = 0; j < mlp.w1.cols(); ++j) mlp.w1(i, j) = first(rng);
  }
  mlp.b1 = Vector::Zero(static_cast<Eigen::Index>(h));
  mlp.a2.resize(static_cast<Eigen::Index>(h));
  for (Eigen::Index j = 0; j < mlp.a2.size(); ++j) mlp.a2(j) = second(rng);
  return mlp;
}

Vector forward(const TwoLayerMlp& mlp, const Matrix& x) {
  mlp.validate();
  if (static_cast<std::size_t>(x.cols()) != mlp.input_dim()) {
    throw std::invalid_argument("MLP expects " + std::to_string(mlp.input_dim()) +
                                " input columns, got " + std::to_string(x.cols()));
  }
  Matrix hidden = x * mlp.w1;
  hidden.rowwise() += mlp.b1.transpose();
  hidden = hidden.cwiseMax(0.0);
  return hidden * mlp.a2;
}

double mse_loss(const TwoLayerMlp& mlp, const Matrix& x, const Vector& y) {
  check_batch(mlp, x, y);
  return (forward(mlp, x) - y).squaredNorm() / static_cast<double>(x.rows());
}

double MlpGradients::max_abs() const {
  double m = 0.0;
  if (w1.size() > 0) m = std::max(m, w1.cwiseAbs().maxCoeff());
  if (b1.size() > 0) m = std::max(m, b1.cwiseAbs().maxCoeff());
  if (a2.size() > 0) m = std::max(m, a2.cwiseAbs().maxCoeff());
  return m;
}

namespace {

double loss_and_gradients(const TwoLayerMlp& mlp, const Matrix& x, const Vector& y,
                          MlpGradients& g) {
  check_batch(mlp, x, y);
  Matrix pre = x * mlp.w1;
  pre.rowwise() += mlp.b1.transpose();
  const Matrix hidden = pre.cwiseMax(0.0);
  const Vector error = hidden * mlp.a2 - y;
  const double m = static_cast<double>(x.rows());
  const Vector residual = error * (2.0 / m);

  g.a2.noalias() = hidden.transpose() * residual;
  Matrix upstream = residual * mlp.a2.transpose();
  upstream.array() *= (pre.array() > 0.0).cast<double>();
  g.w1.noalias() = x.transpose() * upstream;
  g.b1 = upstream.colwise().sum().transpose();
  return error.squaredNorm() / m;
}

}  // namespace

MlpGradients gradients(const TwoLayerMlp& mlp, const Matrix& x, const Vector& y) {
  MlpGradients g;
  loss_and_gradients(mlp, x, y, g);
  return g;
}

double gradient_check(const TwoLayerMlp& mlp, const Matrix& x, const Vector& y, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const MlpGradients g = gradients(mlp, x, y);
  TwoLayerMlp probe = mlp;
  double worst = 0.0;
  const auto visit = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + step;
    const double up = mse_loss(probe, x, y);
    param = saved - step;
    const double down = mse_loss(probe, x, y);
    param = saved;
    const double numeric = (up - down) / (2.0 * step);
    worst = std::max(worst, std::abs(numeric - analytic) / std::max(1.0, std::abs(numeric)));
  };
  for (Eigen::Index i = 0; i < probe.w1.rows(); ++i) {
    for (Eigen::Index j = 0; j < probe.w1.cols(); ++j) visit(probe.w1(i, j), g.w1(i, j));
  }
  for (Eigen::Index j = 0; j < probe.b1.size(); ++j) visit(probe.b1(j), g.b1(j));
  for (Eigen::Index j = 0; j < probe.a2.size(); ++j) visit(probe.a2(j), g.a2(j));
  return worst;
}

double min_abs_preactivation(const TwoLayerMlp& mlp, const Matrix& x) {
  Matrix pre = x * mlp.w1;
  pre.rowwise() += mlp.b1.transpose();
  return pre.size() == 0 ? std::numeric_limits<double>::infinity() : pre.cwiseAbs().minCoeff();
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (batch && *batch == 0) throw std::invalid_argument("batch size must be positive");
  if (curve_stride == 0) throw std::invalid_argument("curve stride must be positive");
}

MonomialDataset sample_monomial_data(const MonomialTask& task, std::size_t m,
                                     std::uint64_t seed, std::uint64_t stream) {
  const std::size_t dim = task.input_dim();
  Rng rng = make_rng(seed, stream);
  MonomialDataset data;
  data.x.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(task.network_input_dim()));
  data.y.resize(static_cast<Eigen::Index>(m));
  std::vector<double> point(dim);
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    for (std::size_t k = 0; k < dim; ++k) {
      point[k] = 2.0 * uniform01(rng) - 1.0;
      data.x(row, static_cast<Eigen::Index>(k)) = point[k];
    }
    if (task.append_one) data.x(row, static_cast<Eigen::Index>(dim)) = 1.0;
    data.y(row) = monomial(point, task.delta);
  }
  return data;
}

TrainResult train_monomial(const MonomialTask& task, std::size_t m, std::size_t width,
                           const TrainConfig& cfg, double init_scale) {
  cfg.validate();
  if (m < 10) throw std::invalid_argument("train_monomial needs at least 10 samples");
  if (task.network_input_dim() == 0) {
    throw std::invalid_argument("monomial task has no inputs; set append_one or use D >= 1");
  }
  const MonomialDataset train = sample_monomial_data(task, m, cfg.seed, kTrain);
  const MonomialDataset test = sample_monomial_data(task, 10 * m, cfg.seed, kTest);

  TrainResult result;
  result.model = TwoLayerMlp::init(task.network_input_dim(), width, init_scale, cfg.seed);
  TwoLayerMlp& mlp = result.model;
  result.initial_train_mse = mse_loss(mlp, train.x, train.y);
  result.curve.emplace_back(0, result.initial_train_mse);

  Rng batch_rng = make_rng(cfg.seed, kBatch);
  const auto blew_up = [&](double loss) {
    return !std::isfinite(loss) || loss > kDivergenceFactor * result.initial_train_mse;
  };
  Matrix bx;
  Vector by;
  MlpGradients g;
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    if (cfg.batch && *cfg.batch < m) {
      const auto b = static_cast<Eigen::Index>(*cfg.batch);
      bx.resize(b, train.x.cols());
      by.resize(b);
      for (Eigen::Index k = 0; k < b; ++k) {
        const auto pick = static_cast<Eigen::Index>(batch_rng() % m);
        bx.row(k) = train.x.row(pick);
        by(k) = train.y(pick);
      }
      loss_and_gradients(mlp, bx, by, g);
      if ((step - 1) % cfg.curve_stride == 0 && step > 1) {
        const double loss = mse_loss(mlp, train.x, train.y);
        result.curve.emplace_back(step - 1, loss);
        if (blew_up(loss)) {
          result.diverged = true;
          break;
        }
      }
    } else {
      // The full-batch pass also yields the loss after step - 1 updates.
      const double loss = loss_and_gradients(mlp, train.x, train.y, g);
      if (step > 1 && (step - 1) % cfg.curve_stride == 0) result.curve.emplace_back(step - 1, loss);
      if (blew_up(loss)) {
        result.diverged = true;
        break;
      }
    }
    mlp.w1 -= cfg.learning_rate * g.w1;
    mlp.b1 -= cfg.learning_rate * g.b1;
    mlp.a2 -= cfg.learning_rate * g.a2;
    result.steps_run = step;
  }

  result.train_mse = mse_loss(mlp, train.x, train.y);
  if (blew_up(result.train_mse)) result.diverged = true;
  if (result.steps_run > 0 && result.curve.back().first != result.steps_run) {
    result.curve.emplace_back(result.steps_run, result.train_mse);
  }
  result.test_mse = result.diverged ? std::numeric_limits<double>::infinity()
                                    : mse_loss(mlp, test.x, test.y);
  return result;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size() / 2;
  return values.size() % 2 == 1 ? values[k] : 0.5 * (values[k - 1] + values[k]);
}

std::string ComplexityTable::to_csv() const {
  std::ostringstream out;
  out << "m,median_test_mse,median_train_mse,diverged,bound\n";
  for (const auto& r : rows) {
    out << r.m << ',' << fmt17(r.median_test_mse) << ',' << fmt17(r.median_train_mse) << ','
        << r.diverged << ',' << fmt17(r.bound) << '\n';
  }
  return out.str();
}

ComplexityTable sample_complexity_experiment(const MonomialTask& task,
                                             const std::vector<std::size_t>& m_grid,
                                             const std::vector<std::uint64_t>& seeds,
                                             std::size_t width, const TrainConfig& cfg,
                                             double init_scale) {
  if (m_grid.empty() || seeds.empty()) {
    throw std::invalid_argument("sample_complexity_experiment needs a grid and seeds");
  }
  for (std::size_t k = 1; k < m_grid.size(); ++k) {
    if (m_grid[k] <= m_grid[k - 1]) throw std::invalid_argument("m grid must be ascending");
  }
  // Cells are independent and fully seeded, so they run concurrently and
  // land in fixed slots; the table does not depend on the thread count.
  const std::size_t n_seeds = seeds.size();
  const std::size_t cells = m_grid.size() * n_seeds;
  std::vector<TrainResult> results(cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t c = next++; c < cells; c = next++) {
      try {
        TrainConfig cell = cfg;
        cell.seed = seeds[c % n_seeds];
        results[c] = train_monomial(task, m_grid[c / n_seeds], width, cell, init_scale);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(cells, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  ComplexityTable table;
  for (std::size_t k = 0; k < m_grid.size(); ++k) {
    std::vector<double> test, train;
    ComplexityRow row;
    row.m = m_grid[k];
    for (std::size_t s = 0; s < n_seeds; ++s) {
      const TrainResult& r = results[k * n_seeds + s];
      test.push_back(r.test_mse);
      train.push_back(r.train_mse);
      if (r.diverged) ++row.diverged;
    }
    row.median_test_mse = median(test);
    row.median_train_mse = median(train);
    const double eps = std::sqrt(row.median_test_mse);
    row.bound = eps > 0.0 && std::isfinite(eps)
                    ? sample_complexity_bound(task.delta.degree(), task.input_dim(), eps, 0.1)
                    : std::numeric_limits<double>::quiet_NaN();
    table.rows.push_back(row);
    table.per_seed.push_back(std::move(test));
  }
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    if (table.rows[k].median_test_mse > table.rows[k - 1].median_test_mse) ++table.inversions;
  }
  table.monotone = table.inversions <= 1;
  return table;
}

}  // namespace lrga
