#ifndef MEMEKIT_SIMLOSS_HPP
#define MEMEKIT_SIMLOSS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "memekit/errors.hpp"
#include "memekit/rng.hpp"

namespace memekit {

using Vec = std::vector<double>;

inline double cosine_similarity(const Vec& u, const Vec& v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::DimMismatch,
                std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) {
    throw Error(ErrorCode::ZeroVector, "cosine similarity of a zero vector");
  }
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

/// 2N projection vectors; rows (2k, 2k+1) are the positive pair for
/// sample k (0-based).
struct EmbeddingBatch {
  std::size_t n_pairs = 0;
  std::size_t dim = 0;
  std::vector<Vec> vectors;

  void validate() const {
    if (n_pairs < 1 || vectors.size() != 2 * n_pairs) {
      throw Error(ErrorCode::DimMismatch, "batch must hold exactly 2N vectors, N >= 1");
    }
    for (const auto& v : vectors) {
      if (v.size() != dim) {
        throw Error(ErrorCode::DimMismatch, "inconsistent vector dimension");
      }
      bool all_zero = true;
      for (double x : v) {
        if (!std::isfinite(x)) {
          throw Error(ErrorCode::DimMismatch, "non-finite embedding value");
        }
        if (x != 0.0) all_zero = false;
      }
      if (all_zero) throw Error(ErrorCode::ZeroVector, "all-zero embedding vector");
    }
  }
};

/// NT-Xent contrastive loss over the batch:
///   l(i,j) = -log( exp(s(i,j)/tau) / sum_{k != i} exp(s(i,k)/tau) )
///   L = (1/2N) sum over pairs of [l(2k,2k+1) + l(2k+1,2k)]
/// The log-sum-exp is max-subtracted.
inline double nt_xent_loss(const EmbeddingBatch& batch, double tau = 0.5) {
  if (!(tau > 0.0)) {
    throw Error(ErrorCode::InvalidTau, "tau must be > 0");
  }
  batch.validate();
  const std::size_t m = batch.vectors.size();

  std::vector<double> sims(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = i + 1; k < m; ++k) {
      const double s = cosine_similarity(batch.vectors[i], batch.vectors[k]);
      sims[i * m + k] = s;
      sims[k * m + i] = s;
    }
  }

  auto loss_term = [&](std::size_t i, std::size_t j) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
      if (k == i) continue;
      mx = std::max(mx, sims[i * m + k] / tau);
    }
    double denom = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == i) continue;
      denom += std::exp(sims[i * m + k] / tau - mx);
    }
    return (mx + std::log(denom)) - sims[i * m + j] / tau;
  };

  double total = 0.0;
  for (std::size_t p = 0; p < batch.n_pairs; ++p) {
    total += loss_term(2 * p, 2 * p + 1) + loss_term(2 * p + 1, 2 * p);
  }
  return total / static_cast<double>(m);
}

// ---------------------------------------------------------------------------
// Embedding perturbation

struct UniformNoise {
  double eps = 0.0;
};
struct GaussianNoise {
  double sigma = 0.0;
};
using NoiseKind = std::variant<UniformNoise, GaussianNoise>;

/// k independent seeded noisy copies of v. Uniform adds i.i.d. noise in
/// [-eps, eps]; Gaussian adds i.i.d. N(0, sigma^2). Magnitude 0 is the
/// exact identity.
inline std::vector<Vec> perturb_embedding(const Vec& v, const NoiseKind& kind,
                                          std::size_t count, std::uint64_t seed) {
  const double magnitude = std::holds_alternative<UniformNoise>(kind)
                               ? std::get<UniformNoise>(kind).eps
                               : std::get<GaussianNoise>(kind).sigma;
  if (magnitude < 0.0) {
    throw Error(ErrorCode::InvalidMagnitude, "noise magnitude must be >= 0");
  }
  std::vector<Vec> out;
  out.reserve(count);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    Vec w = v;
    if (magnitude > 0.0) {
      for (double& x : w) {
        if (std::holds_alternative<UniformNoise>(kind)) {
          x += rng.next_real(-magnitude, magnitude);
        } else {
          x += magnitude * rng.next_gaussian();
        }
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ensemble averaging

struct ProbVector {
  Vec probs;

  void validate() const {
    double sum = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::InvalidScore, "probability outside [0,1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(ErrorCode::InvalidScore, "probabilities sum to " + std::to_string(sum));
    }
  }
};

inline ProbVector ensemble_average(const ProbVector& a, const ProbVector& b) {
  if (a.probs.size() != b.probs.size()) {
    throw Error(ErrorCode::DimMismatch, "class count mismatch");
  }
  a.validate();
  b.validate();
  ProbVector out;
  out.probs.resize(a.probs.size());
  for (std::size_t i = 0; i < a.probs.size(); ++i) {
    out.probs[i] = 0.5 * (a.probs[i] + b.probs[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Embedding file IO (JSON-lines: {"id", "pair", "view", "z"})

inline EmbeddingBatch load_embedding_batch(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  // pair index -> (view1, view2)
  std::map<int, std::pair<Vec, Vec>> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      const int pair = j.at("pair").get<int>();
      const int view = j.at("view").get<int>();
      if (view != 1 && view != 2) {
        throw Error(ErrorCode::ParseError, "view must be 1 or 2");
      }
      Vec z = j.at("z").get<Vec>();
      auto& slot = view == 1 ? pairs[pair].first : pairs[pair].second;
      if (!slot.empty()) {
        throw Error(ErrorCode::DuplicateId,
                    "duplicate (pair, view) at line " + std::to_string(lineno));
      }
      slot = std::move(z);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  EmbeddingBatch batch;
  for (auto& [pair, views] : pairs) {
    if (views.first.empty() || views.second.empty()) {
      throw Error(ErrorCode::ParseError,
                  "pair " + std::to_string(pair) + " is missing a view");
    }
    batch.vectors.push_back(std::move(views.first));
    batch.vectors.push_back(std::move(views.second));
  }
  batch.n_pairs = batch.vectors.size() / 2;
  batch.dim = batch.vectors.empty() ? 0 : batch.vectors.front().size();
  batch.validate();
  return batch;
}

}  // namespace memekit

#endif  // MEMEKIT_SIMLOSS_HPP
