#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "sprachbund/error.hpp"
#include "sprachbund/io.hpp"
#include "sprachbund/projection.hpp"
#include "sprachbund/simmatrix.hpp"

namespace sprachbund {

using nlohmann::json;

namespace {

constexpr double kEntropyTolerance = 1e-10;
constexpr int kMaxBisectionSteps = 200;

// Standard normal draws via Box-Muller; std::normal_distribution is not
// specified bit-for-bit across standard libraries.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      kl += p[i] * std::log(p[i] / std::max(q[i], std::numeric_limits<double>::min()));
    }
  }
  return kl;
}

}  // namespace

json TsneParams::to_json() const {
  return {{"perplexity", perplexity},
          {"iterations", iterations},
          {"learning_rate", learning_rate},
          {"exaggeration", exaggeration},
          {"exaggeration_iterations", exaggeration_iterations},
          {"initial_momentum", initial_momentum},
          {"final_momentum", final_momentum},
          {"init_stddev", init_stddev},
          {"min_gain", min_gain},
          {"seed", seed},
          {"metric", "1-cosine"}};
}

ConditionalAffinities conditional_affinities(std::span<const double> distances, std::size_t self,
                                             double perplexity) {
  const std::size_t m = distances.size();
  if (m < 2 || self >= m) {
    throw DataError("conditional affinities need a row of at least 2 distances");
  }
  if (!(perplexity > 0.0)) {
    throw UsageError("perplexity must be positive");
  }
  const double target = std::log2(perplexity);
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    if (j != self) {
      dmin = std::min(dmin, distances[j]);
    }
  }

  ConditionalAffinities out;
  out.probabilities.assign(m, 0.0);
  double beta = 1.0;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  auto evaluate = [&](double b) {
    double sum = 0.0, weighted = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == self) {
        out.probabilities[j] = 0.0;
        continue;
      }
      const double shifted = distances[j] - dmin;
      const double w = std::exp(-b * shifted);
      out.probabilities[j] = w;
      sum += w;
      weighted += w * shifted;
    }
    for (auto& p : out.probabilities) {
      p /= sum;
    }
    // Entropy in nats of exp(-b d) / Z with the shift folded into Z.
    return (std::log(sum) + b * weighted / sum) / std::numbers::ln2;
  };

  double entropy = evaluate(beta);
  for (int step = 0; step < kMaxBisectionSteps && std::abs(entropy - target) > kEntropyTolerance; ++step) {
    if (entropy > target) {
      lo = beta;
      beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
    } else {
      hi = beta;
      beta = 0.5 * (beta + lo);
    }
    entropy = evaluate(beta);
  }
  out.beta = beta;
  out.entropy_bits = entropy;
  return out;
}

std::vector<double> joint_affinities(std::span<const double> distances, std::size_t m, double perplexity) {
  if (distances.size() != m * m) {
    throw DataError("distance matrix must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  std::vector<double> cond(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = conditional_affinities(distances.subspan(i * m, m), i, perplexity);
    std::copy(row.probabilities.begin(), row.probabilities.end(), cond.begin() + static_cast<std::ptrdiff_t>(i * m));
  }
  std::vector<double> p(m * m);
  const double denom = 2.0 * static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const double v = (cond[i * m + j] + cond[j * m + i]) / denom;
      p[i * m + j] = v;
      p[j * m + i] = v;
    }
  }
  return p;
}

std::vector<double> cosine_distances(const std::vector<LanguageRepresentation>& reps) {
  const std::size_t m = reps.size();
  std::vector<double> d(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = 1.0 - cosine(std::span<const float>(reps[i].vector), std::span<const float>(reps[j].vector));
      d[i * m + j] = v;
      d[j * m + i] = v;
    }
  }
  return d;
}

TsneResult tsne_distances(std::span<const double> distances, std::size_t m, const TsneParams& params) {
  if (m < 4) {
    throw DataError("t-SNE needs at least 4 points, got " + std::to_string(m));
  }
  if (!(params.perplexity * 3.0 < static_cast<double>(m - 1))) {
    throw DataError("perplexity " + std::to_string(params.perplexity) + " is too large for " + std::to_string(m) +
                    " points (must be < (M-1)/3)");
  }
  if (distances.size() != m * m) {
    throw DataError("distance matrix must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  const double dmax = *std::max_element(distances.begin(), distances.end());
  if (!(dmax > 1e-12)) {
    throw DataError("t-SNE input is degenerate: all points are identical");
  }

  const std::vector<double> p = joint_affinities(distances, m, params.perplexity);

  GaussianSource gauss(params.seed);
  std::vector<double> y(2 * m);
  for (auto& v : y) {
    v = params.init_stddev * gauss.next();
  }
  std::vector<double> update(2 * m, 0.0);
  std::vector<double> gains(2 * m, 1.0);
  std::vector<double> grad(2 * m);
  std::vector<double> num(m * m);
  std::vector<double> q(m * m);

  TsneResult result;
  result.kl_history.reserve(params.iterations);
  for (std::size_t iter = 0; iter < params.iterations; ++iter) {
    const bool exaggerating = iter < params.exaggeration_iterations;
    const double exaggeration = exaggerating ? params.exaggeration : 1.0;
    const double momentum = exaggerating ? params.initial_momentum : params.final_momentum;

    double sum_num = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      num[i * m + i] = 0.0;
      for (std::size_t j = i + 1; j < m; ++j) {
        const double dx = y[2 * i] - y[2 * j];
        const double dy = y[2 * i + 1] - y[2 * j + 1];
        const double v = 1.0 / (1.0 + dx * dx + dy * dy);
        num[i * m + j] = v;
        num[j * m + i] = v;
        sum_num += 2.0 * v;
      }
    }
    for (std::size_t k = 0; k < m * m; ++k) {
      q[k] = num[k] / sum_num;
    }
    for (std::size_t i = 0; i < m; ++i) {
      double gx = 0.0, gy = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double mult = (exaggeration * p[i * m + j] - q[i * m + j]) * num[i * m + j];
        gx += mult * (y[2 * i] - y[2 * j]);
        gy += mult * (y[2 * i + 1] - y[2 * j + 1]);
      }
      grad[2 * i] = 4.0 * gx;
      grad[2 * i + 1] = 4.0 * gy;
    }
    for (std::size_t k = 0; k < 2 * m; ++k) {
      const bool sign_flip = update[k] * grad[k] < 0.0;
      gains[k] = sign_flip ? gains[k] + 0.2 : gains[k] * 0.8;
      gains[k] = std::max(gains[k], params.min_gain);
      update[k] = momentum * update[k] - params.learning_rate * gains[k] * grad[k];
      y[k] += update[k];
    }
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      cx += y[2 * i];
      cy += y[2 * i + 1];
    }
    cx /= static_cast<double>(m);
    cy /= static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
      y[2 * i] -= cx;
      y[2 * i + 1] -= cy;
    }

    // KL of the positions just produced, against the true P.
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double dx = y[2 * i] - y[2 * j];
        const double dy = y[2 * i + 1] - y[2 * j + 1];
        const double v = 1.0 / (1.0 + dx * dx + dy * dy);
        q[i * m + j] = v;
        q[j * m + i] = v;
        s += 2.0 * v;
      }
      q[i * m + i] = 0.0;
    }
    for (auto& v : q) {
      v /= s;
    }
    result.kl_history.push_back(kl_divergence(p, q));
  }

  result.points.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    result.points[i] = {y[2 * i], y[2 * i + 1]};
  }
  return result;
}

TsneResult tsne(const std::vector<LanguageRepresentation>& reps, const TsneParams& params) {
  const auto d = cosine_distances(reps);
  return tsne_distances(d, reps.size(), params);
}

}  // namespace sprachbund
