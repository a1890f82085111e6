#include "boxlat/dag.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "boxlat/error.hpp"
#include "boxlat/random.hpp"
#include "boxlat/tsv.hpp"

namespace boxlat {

ScoreMatrix::ScoreMatrix(Vocabulary ids, std::vector<double> values) : ids_(std::move(ids)), values_(std::move(values)) {
  if (values_.size() != ids_.size() * ids_.size()) throw InvalidArgument("score matrix is not square");
}

CpdTable::CpdTable(Vocabulary vocab, std::vector<double> marginals, const std::vector<JointEntry>& joints)
    : vocab_(std::move(vocab)), marginals_(std::move(marginals)) {
  if (vocab_.size() != marginals_.size()) throw DataError("CPD vocabulary and marginals differ in size");
  for (std::size_t i = 0; i < marginals_.size(); ++i) {
    if (!(marginals_[i] > 0.0 && marginals_[i] <= 1.0)) {
      throw DataError("marginal of '" + vocab_.id(i) + "' is outside (0, 1]");
    }
  }
  joints_.reserve(joints.size());
  for (const auto& e : joints) {
    if (e.i >= size() || e.j >= size()) throw DataError("CPD joint references an unknown concept");
    if (e.i == e.j) continue;
    const double bound = std::min(marginals_[e.i], marginals_[e.j]);
    if (!(e.joint >= 0.0 && e.joint <= bound + 1e-9)) {
      throw DataError("joint of '" + vocab_.id(e.i) + "' and '" + vocab_.id(e.j) + "' is inconsistent with the marginals");
    }
    if (e.joint > 0.0) joints_.emplace_back(key(e.i, e.j), std::min(e.joint, bound));
  }
  std::sort(joints_.begin(), joints_.end());
  for (std::size_t k = 1; k < joints_.size(); ++k) {
    if (joints_[k].first == joints_[k - 1].first) throw DataError("CPD lists a joint twice");
  }
}

std::uint64_t CpdTable::key(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
}

double CpdTable::joint(std::size_t i, std::size_t j) const {
  if (i == j) return marginal(i);
  const auto k = key(i, j);
  auto it = std::lower_bound(joints_.begin(), joints_.end(), std::pair<std::uint64_t, double>{k, -1.0});
  return (it != joints_.end() && it->first == k) ? it->second : 0.0;
}

double CpdTable::conditional(std::size_t i, std::size_t j) const { return joint(i, j) / marginal(j); }

std::vector<CpdTable::JointEntry> CpdTable::joints() const {
  std::vector<JointEntry> out;
  out.reserve(joints_.size());
  for (const auto& [k, v] : joints_) {
    out.push_back({static_cast<std::size_t>(k >> 32), static_cast<std::size_t>(k & 0xffffffffULL), v});
  }
  return out;
}

ScoreMatrix CpdTable::conditional_matrix() const {
  const std::size_t n = size();
  std::vector<double> values(n * n, 0.0);
  for (const auto& e : joints()) {
    values[e.i * n + e.j] = e.joint / marginals_[e.j];
    values[e.j * n + e.i] = e.joint / marginals_[e.i];
  }
  return ScoreMatrix(vocab_, std::move(values));
}

Digraph asymmetrize(const ScoreMatrix& scores, double threshold) {
  const std::size_t n = scores.size();
  Digraph g{n, {}};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double forward = scores(i, j);
      const double backward = scores(j, i);
      if (std::abs(forward - backward) < threshold) continue;
      if (forward > backward) g.edges.push_back({j, i, forward});
    }
  }
  return g;
}

AcyclicityResult is_acyclic(const Digraph& g) {
  const std::size_t n = g.vertices;
  std::vector<std::size_t> offsets(n + 1, 0);
  for (const auto& e : g.edges) {
    if (e.src >= n || e.dst >= n) throw InvalidArgument("edge endpoint outside the graph");
    ++offsets[e.src + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
  std::vector<std::size_t> targets(g.edges.size());
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& e : g.edges) targets[fill[e.src]++] = e.dst;

  enum : unsigned char { white, gray, black };
  std::vector<unsigned char> color(n, white);
  std::vector<std::size_t> parent(n, n);
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // (vertex, next edge offset)
  for (std::size_t root = 0; root < n; ++root) {
    if (color[root] != white) continue;
    stack.emplace_back(root, offsets[root]);
    color[root] = gray;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next == offsets[v + 1]) {
        color[v] = black;
        stack.pop_back();
        continue;
      }
      const std::size_t w = targets[next++];
      if (color[w] == gray) {
        AcyclicityResult r{false, {}};
        for (std::size_t u = v; u != w; u = parent[u]) r.cycle.push_back(u);
        r.cycle.push_back(w);
        std::reverse(r.cycle.begin(), r.cycle.end());
        return r;
      }
      if (color[w] == white) {
        color[w] = gray;
        parent[w] = v;
        stack.emplace_back(w, offsets[w]);
      }
    }
  }
  return {true, {}};
}

CpdTable perturb_ties(const CpdTable& table, double lambda, std::uint64_t seed) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("perturbation weight must lie in (0, 1)");
  const std::size_t n = table.size();
  Rng rng(seed);
  std::vector<double> q(n);
  for (auto& v : q) v = rng.uniform(0.05, 0.95);
  std::vector<double> marginals(n);
  for (std::size_t i = 0; i < n; ++i) marginals[i] = (1.0 - lambda) * table.marginal(i) + lambda * q[i];
  std::vector<CpdTable::JointEntry> joints;
  joints.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      joints.push_back({i, j, (1.0 - lambda) * table.joint(i, j) + lambda * q[i] * q[j]});
    }
  }
  return CpdTable(table.vocabulary(), std::move(marginals), joints);
}

double gaussian_kl(const DiagGaussian& a, const DiagGaussian& b) {
  const std::size_t n = a.mean.size();
  if (a.variance.size() != n || b.mean.size() != n || b.variance.size() != n) {
    throw InvalidArgument("Gaussian dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a.variance[i] > 0.0) || !(b.variance[i] > 0.0)) throw InvalidArgument("variances must be positive");
    const double diff = b.mean[i] - a.mean[i];
    total += a.variance[i] / b.variance[i] + diff * diff / b.variance[i] - 1.0 + std::log(b.variance[i] / a.variance[i]);
  }
  return 0.5 * total;
}

ScoreMatrix kl_matrix(const std::vector<DiagGaussian>& gaussians, KlDirection direction) {
  const std::size_t n = gaussians.size();
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i + 1));
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      values[i * n + j] = direction == KlDirection::forward ? gaussian_kl(gaussians[i], gaussians[j])
                                                            : gaussian_kl(gaussians[j], gaussians[i]);
    }
  }
  return ScoreMatrix(Vocabulary(std::move(ids)), std::move(values));
}

Digraph kl_graph(const std::vector<DiagGaussian>& gaussians, double threshold, KlDirection direction) {
  if (!(threshold >= 0.0)) throw InvalidArgument("threshold must be nonnegative");
  return asymmetrize(kl_matrix(gaussians, direction), threshold);
}

ScoreMatrix parse_score_matrix(std::string_view text, std::string_view source) {
  const std::string where(source);
  const auto rows = tsv::read_text(text);
  if (rows.empty()) throw DataError(where + ": empty score matrix");
  std::vector<std::string> header = rows.front().fields;
  if (!header.empty() && header.front().empty()) header.erase(header.begin());
  const std::size_t n = header.size();
  Vocabulary ids;
  for (const auto& id : header) {
    if (ids.find(id)) throw DataError(where + ":" + std::to_string(rows.front().line) + ": duplicate id '" + id + "'");
    ids.add(id);
  }
  if (rows.size() != n + 1) {
    throw DataError(where + ": matrix is not square (" + std::to_string(n) + " columns, " +
                    std::to_string(rows.size() - 1) + " rows)");
  }
  std::vector<double> values(n * n);
  std::vector<bool> seen(n, false);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != n + 1) {
      throw DataError(where + ":" + std::to_string(row.line) + ": expected " + std::to_string(n + 1) + " fields");
    }
    auto idx = ids.find(row.fields[0]);
    if (!idx) throw DataError(where + ":" + std::to_string(row.line) + ": row id '" + row.fields[0] + "' not in header");
    if (seen[*idx]) throw DataError(where + ":" + std::to_string(row.line) + ": row '" + row.fields[0] + "' repeated");
    seen[*idx] = true;
    for (std::size_t j = 0; j < n; ++j) values[*idx * n + j] = tsv::parse_double(row.fields[j + 1], where, row.line);
  }
  return ScoreMatrix(std::move(ids), std::move(values));
}

ScoreMatrix read_score_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_score_matrix(buffer.str(), path.string());
}

std::string format_score_matrix(const ScoreMatrix& m) {
  std::string out;
  for (std::size_t j = 0; j < m.size(); ++j) out += (j ? "\t" : "") + m.ids().id(j);
  out += "\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += m.ids().id(i);
    for (std::size_t j = 0; j < m.size(); ++j) out += "\t" + tsv::format(m(i, j), 17);
    out += "\n";
  }
  return out;
}

std::string format_edge_list(const Digraph& g, const Vocabulary& ids) {
  std::string out;
  for (const auto& e : g.edges) {
    out += ids.id(e.src) + "\t" + ids.id(e.dst) + "\t" + tsv::format(e.weight, 17) + "\n";
  }
  return out;
}

}  // namespace boxlat
