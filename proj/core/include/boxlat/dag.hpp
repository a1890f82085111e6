#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boxlat/vocabulary.hpp"

namespace boxlat {

// Square score matrix with labelled rows/columns; entry (i, j) = scores[i * n + j].
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(Vocabulary ids, std::vector<double> values);

  std::size_t size() const noexcept { return ids_.size(); }
  const Vocabulary& ids() const noexcept { return ids_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * size() + j]; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  Vocabulary ids_;
  std::vector<double> values_;
};

// Unary marginals plus a symmetric table of pairwise joints. Conditionals
// P(x_i | x_j) = joint(i, j) / p_j are derived, so the consistency
// C[i][j] p_j == C[j][i] p_i holds by construction. Joints absent from the
// table are zero.
class CpdTable {
 public:
  struct JointEntry {
    std::size_t i;
    std::size_t j;
    double joint;
  };

  CpdTable() = default;
  // Throws DataError unless marginals lie in (0, 1] and every joint lies in
  // [0, min(p_i, p_j)] (1e-9 slack).
  CpdTable(Vocabulary vocab, std::vector<double> marginals, const std::vector<JointEntry>& joints);

  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  std::size_t size() const noexcept { return marginals_.size(); }
  double marginal(std::size_t i) const { return marginals_.at(i); }
  const std::vector<double>& marginals() const noexcept { return marginals_; }
  double joint(std::size_t i, std::size_t j) const;
  double conditional(std::size_t i, std::size_t j) const;  // P(x_i | x_j)

  // Nonzero off-diagonal joints with i < j, sorted.
  std::vector<JointEntry> joints() const;

  // Dense conditional matrix with a zero diagonal.
  ScoreMatrix conditional_matrix() const;

 private:
  static std::uint64_t key(std::size_t i, std::size_t j);

  Vocabulary vocab_;
  std::vector<double> marginals_;
  std::vector<std::pair<std::uint64_t, double>> joints_;  // sorted by key
};

struct Edge {
  std::size_t src = 0;
  std::size_t dst = 0;
  double weight = 0.0;

  bool operator==(const Edge&) const = default;
};

struct Digraph {
  std::size_t vertices = 0;
  std::vector<Edge> edges;
};

struct AcyclicityResult {
  bool acyclic = true;
  std::vector<std::size_t> cycle;  // v0 -> v1 -> ... -> v0 when cyclic
};

// Keeps edge j -> i with weight scores(i, j) iff scores(i, j) > scores(j, i);
// ties keep neither. Pairs whose entries differ by less than `threshold` are
// dropped first. The diagonal is ignored. With a conditional matrix this
// reads "j entails i": edges run from the less to the more probable concept.
Digraph asymmetrize(const ScoreMatrix& scores, double threshold = 0.0);

AcyclicityResult is_acyclic(const Digraph& g);

// Convex combination (1 - lambda) * table + lambda * (independent random
// Bernoullis), applied to marginals and joints so the result stays consistent.
CpdTable perturb_ties(const CpdTable& table, double lambda, std::uint64_t seed);

struct DiagGaussian {
  std::vector<double> mean;
  std::vector<double> variance;
};

// KL(a || b) for diagonal Gaussians.
double gaussian_kl(const DiagGaussian& a, const DiagGaussian& b);

enum class KlDirection {
  forward,  // A_ij = KL(G_i || G_j)
  reverse,  // A_ij = KL(G_j || G_i)
};

ScoreMatrix kl_matrix(const std::vector<DiagGaussian>& gaussians, KlDirection direction = KlDirection::forward);
Digraph kl_graph(const std::vector<DiagGaussian>& gaussians, double threshold,
                 KlDirection direction = KlDirection::forward);

// Score matrix TSV: a header row of ids, then one row per id (id first) of
// decimal scores.
ScoreMatrix read_score_matrix(const std::filesystem::path& path);
ScoreMatrix parse_score_matrix(std::string_view text, std::string_view source = "<matrix>");
std::string format_score_matrix(const ScoreMatrix& m);

// Edge list TSV: src<TAB>dst<TAB>weight, ids taken from `ids`.
std::string format_edge_list(const Digraph& g, const Vocabulary& ids);

}  // namespace boxlat
