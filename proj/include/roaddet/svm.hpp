#pragma once

// Linear soft-margin SVM trained on the dual
//   max  sum_i l_i - 1/2 sum_ij l_i l_j y_i y_j <x_i, x_j>
//   s.t. sum_i l_i y_i = 0,  0 <= l_i <= C
// by sequential minimal optimization with second-order working-set
// selection. The kernel is the plain dot product, so the weight vector is
// kept explicitly and every gradient costs O(Dim).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "roaddet/error.hpp"

namespace roaddet {

template <std::size_t Dim>
using Feature = std::array<double, Dim>;

template <std::size_t Dim>
double dot(const Feature<Dim>& a, const Feature<Dim>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < Dim; ++k) s += a[k] * b[k];
  return s;
}

template <std::size_t Dim>
struct TrainingSet {
  std::vector<Feature<Dim>> samples;
  std::vector<int> labels;  // +1 road, -1 non-road

  void add(const Feature<Dim>& x, int y) {
    samples.push_back(x);
    labels.push_back(y);
  }
  std::size_t size() const noexcept { return samples.size(); }
};

struct SvmHyper {
  double C = 10.0;
  double tol = 1e-3;
  long max_sweeps = 10000;  // a sweep is `size()` pair updates
};

template <std::size_t Dim>
struct SvmModel {
  std::vector<Feature<Dim>> support_vectors;
  std::vector<double> multipliers;
  std::vector<int> labels;
  double bias = 0.0;
  double C = 10.0;
  double tol = 1e-3;
  bool converged = true;
  long iterations = 0;

  Feature<Dim> weights() const {
    Feature<Dim> w{};
    for (std::size_t i = 0; i < support_vectors.size(); ++i)
      for (std::size_t k = 0; k < Dim; ++k)
        w[k] += labels[i] * multipliers[i] * support_vectors[i][k];
    return w;
  }

  // sum_i y_i l_i <x, x_i> + b
  double decision_value(const Feature<Dim>& x) const {
    double s = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i)
      s += labels[i] * multipliers[i] * dot(x, support_vectors[i]);
    return s;
  }

  // sign(0) = +1
  int predict(const Feature<Dim>& x) const { return decision_value(x) >= 0.0 ? 1 : -1; }
};

// Dual objective sum l - 1/2 |sum l y x|^2 for arbitrary multipliers.
template <std::size_t Dim>
double dual_objective(const TrainingSet<Dim>& data, const std::vector<double>& lambda) {
  Feature<Dim> w{};
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    sum += lambda[i];
    for (std::size_t k = 0; k < Dim; ++k) w[k] += lambda[i] * data.labels[i] * data.samples[i][k];
  }
  return sum - 0.5 * dot(w, w);
}

template <std::size_t Dim>
struct SvmTrainResult {
  SvmModel<Dim> model;
  std::vector<double> multipliers;  // one per training sample
  double objective = 0.0;
};

template <std::size_t Dim>
SvmTrainResult<Dim> train_svm_full(const TrainingSet<Dim>& data, const SvmHyper& hyper = {}) {
  const std::size_t n = data.size();
  if (data.labels.size() != n) throw Error(ErrorKind::DimensionMismatch, "labels vs samples");
  if (!(hyper.C > 0.0)) throw Error(ErrorKind::InvalidConfig, "C must be positive");
  if (!(hyper.tol > 0.0)) throw Error(ErrorKind::InvalidConfig, "tol must be positive");
  bool pos = false, neg = false;
  for (int y : data.labels) {
    if (y == 1) pos = true;
    else if (y == -1) neg = true;
    else throw Error(ErrorKind::InvalidConfig, "labels must be +1 or -1");
  }
  if (!pos || !neg) throw Error(ErrorKind::SingleClass, "training set holds a single class");

  const double C = hyper.C;
  // The pair loop stops once max violation <= tol/2, which keeps every
  // sample within tol of its KKT condition after the bias is averaged.
  const double eps = 0.5 * hyper.tol;
  constexpr double kTau = 1e-12;

  std::vector<double> lambda(n, 0.0);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = dot(data.samples[i], data.samples[i]);
  Feature<Dim> w{};

  auto in_up = [&](std::size_t t) {
    return (data.labels[t] == 1 && lambda[t] < C) || (data.labels[t] == -1 && lambda[t] > 0.0);
  };
  auto in_low = [&](std::size_t t) {
    return (data.labels[t] == 1 && lambda[t] > 0.0) || (data.labels[t] == -1 && lambda[t] < C);
  };
  // -y_t * grad_t with grad_t = y_t <w, x_t> - 1
  auto score = [&](std::size_t t) { return data.labels[t] - dot(w, data.samples[t]); };

  const long cap = hyper.max_sweeps * static_cast<long>(std::max<std::size_t>(n, 1));
  long iter = 0;
  bool converged = false;
  std::vector<double> scores(n);
  for (; iter < cap; ++iter) {
    for (std::size_t t = 0; t < n; ++t) scores[t] = score(t);
    // i: maximal violator in I_up.
    std::size_t i = n;
    double m_up = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t)
      if (in_up(t) && scores[t] > m_up) {
        m_up = scores[t];
        i = t;
      }
    // j: second-order choice in I_low among t with score below m_up.
    std::size_t j = n;
    double m_low = std::numeric_limits<double>::infinity();
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      m_low = std::min(m_low, scores[t]);
      if (i == n) continue;
      const double diff = m_up - scores[t];
      if (diff <= 0.0) continue;
      double curvature = sq[i] + sq[t] - 2.0 * dot(data.samples[i], data.samples[t]);
      if (curvature <= 0.0) curvature = kTau;
      const double gain = diff * diff / curvature;
      if (gain > best_gain) {
        best_gain = gain;
        j = t;
      }
    }
    if (i == n || j == n || m_up - m_low <= eps) {
      converged = true;
      break;
    }

    // Analytic two-variable step along y_i d_i = -y_j d_j.
    const double yi = data.labels[i], yj = data.labels[j];
    double curvature = sq[i] + sq[j] - 2.0 * dot(data.samples[i], data.samples[j]);
    if (curvature <= 0.0) curvature = kTau;
    const double old_i = lambda[i], old_j = lambda[j];
    // Moving l_i by +yi*t and l_j by -yj*t changes the objective at rate
    // (scores[i] - scores[j]) with curvature `curvature`.
    double step = (scores[i] - scores[j]) / curvature;
    // Box limits for t.
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    auto limit = [&](double current, double direction) {
      if (direction > 0) {
        hi = std::min(hi, (C - current) / direction);
        lo = std::max(lo, -current / direction);
      } else {
        hi = std::min(hi, -current / direction);
        lo = std::max(lo, (C - current) / direction);
      }
    };
    limit(old_i, yi);
    limit(old_j, -yj);
    step = std::clamp(step, lo, hi);
    double new_i = old_i + yi * step, new_j = old_j - yj * step;
    // Snap to the bounds to keep 0 <= l <= C exact.
    auto snap = [C](double v) {
      if (v < 1e-12 * C) return 0.0;
      if (v > C - 1e-12 * C) return C;
      return v;
    };
    new_i = snap(new_i);
    new_j = snap(new_j);
    const double di = new_i - old_i, dj = new_j - old_j;
    for (std::size_t k = 0; k < Dim; ++k)
      w[k] += di * yi * data.samples[i][k] + dj * yj * data.samples[j][k];
    lambda[i] = new_i;
    lambda[j] = new_j;
    if (di == 0.0 && dj == 0.0) {
      // No progress is possible on the most violating pair.
      converged = m_up - m_low <= eps;
      break;
    }
  }

  // Bias: mean over free multipliers of y_i - <w, x_i>, else the midpoint
  // of the interval allowed by the bounded ones.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double up_min = std::numeric_limits<double>::infinity();
  double low_max = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double s = score(t);
    if (lambda[t] > 0.0 && lambda[t] < C) {
      free_sum += s;
      ++free_count;
    }
    // KKT: b >= s on the up set, b <= s on the low set.
    if (in_up(t)) low_max = std::max(low_max, s);
    if (in_low(t)) up_min = std::min(up_min, s);
  }
  double bias;
  if (free_count > 0) {
    bias = free_sum / static_cast<double>(free_count);
  } else if (std::isfinite(up_min) && std::isfinite(low_max)) {
    bias = 0.5 * (up_min + low_max);
  } else {
    bias = std::isfinite(up_min) ? up_min : low_max;
  }

  SvmTrainResult<Dim> result;
  auto& model = result.model;
  model.C = C;
  model.tol = hyper.tol;
  model.bias = bias;
  model.converged = converged;
  model.iterations = iter;
  for (std::size_t t = 0; t < n; ++t)
    if (lambda[t] > 0.0) {
      model.support_vectors.push_back(data.samples[t]);
      model.multipliers.push_back(lambda[t]);
      model.labels.push_back(data.labels[t]);
    }
  result.objective = dual_objective(data, lambda);
  result.multipliers = std::move(lambda);
  return result;
}

template <std::size_t Dim>
SvmModel<Dim> train_svm(const TrainingSet<Dim>& data, double C = 10.0, double tol = 1e-3,
                        long max_sweeps = 10000) {
  return train_svm_full(data, SvmHyper{C, tol, max_sweeps}).model;
}

// Plain-text model file:
//   svm-linear v1
//   C <value>
//   tol <value>
//   b <value>
//   <lambda> <y> <x_1> ... <x_Dim>     (one line per support vector)
template <std::size_t Dim>
void write_model(std::ostream& out, const SvmModel<Dim>& model) {
  out << "svm-linear v1\n" << std::setprecision(17);
  out << "C " << model.C << "\n";
  out << "tol " << model.tol << "\n";
  out << "b " << model.bias << "\n";
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    out << model.multipliers[i] << " " << model.labels[i];
    for (double v : model.support_vectors[i]) out << " " << v;
    out << "\n";
  }
}

template <std::size_t Dim>
SvmModel<Dim> read_model(std::istream& in) {
  auto fail = [](const std::string& why) -> Error {
    return Error(ErrorKind::MalformedHeader, "svm model: " + why);
  };
  std::string line;
  if (!std::getline(in, line) || line != "svm-linear v1") throw fail("bad header line");
  SvmModel<Dim> model;
  auto read_field = [&](const char* key, double& dst) {
    if (!std::getline(in, line)) throw fail(std::string("missing ") + key);
    std::istringstream ss(line);
    std::string name;
    if (!(ss >> name >> dst) || name != key) throw fail(std::string("bad ") + key + " line");
  };
  read_field("C", model.C);
  read_field("tol", model.tol);
  read_field("b", model.bias);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double lambda;
    int y;
    Feature<Dim> x{};
    if (!(ss >> lambda >> y)) throw fail("bad support vector line");
    for (auto& v : x)
      if (!(ss >> v)) throw fail("short support vector line");
    if (y != 1 && y != -1) throw fail("label must be +1 or -1");
    model.multipliers.push_back(lambda);
    model.labels.push_back(y);
    model.support_vectors.push_back(x);
  }
  return model;
}

}  // namespace roaddet
