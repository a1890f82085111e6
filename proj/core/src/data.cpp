#include "boxlat/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "boxlat/error.hpp"
#include "boxlat/random.hpp"
#include "boxlat/tsv.hpp"

namespace boxlat {

namespace {

std::string at(std::string_view where, std::size_t line) { return std::string(where) + ":" + std::to_string(line); }

// Ancestor lists (sorted, self excluded) in topological order of the
// child -> parent edges. Throws DataError with a witness cycle.
std::vector<std::vector<std::uint32_t>> ancestor_sets(const Hierarchy& h) {
  const std::size_t n = h.nodes.size();
  std::vector<std::vector<std::uint32_t>> parents(n);
  std::vector<std::vector<std::uint32_t>> children(n);
  for (const auto& [c, p] : h.edges) {
    parents[c].push_back(static_cast<std::uint32_t>(p));
    children[p].push_back(static_cast<std::uint32_t>(c));
  }
  // A node's ancestors are known once all its parents are done, so process
  // roots first: Kahn's algorithm over parent counts.
  std::vector<std::size_t> missing(n);
  std::vector<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) {
    missing[v] = parents[v].size();
    if (missing[v] == 0) queue.push_back(v);
  }
  std::vector<std::vector<std::uint32_t>> anc(n);
  std::size_t done = 0;
  std::vector<std::uint32_t> merged;
  while (done < queue.size()) {
    const std::size_t v = queue[done++];
    merged.clear();
    for (auto p : parents[v]) {
      merged.push_back(p);
      merged.insert(merged.end(), anc[p].begin(), anc[p].end());
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    anc[v] = merged;
    for (auto c : children[v]) {
      if (--missing[c] == 0) queue.push_back(c);
    }
  }
  if (done != n) {
    Digraph g{n, {}};
    for (const auto& [c, p] : h.edges) g.edges.push_back({c, p, 1.0});
    const auto result = is_acyclic(g);
    std::string witness;
    for (auto v : result.cycle) witness += h.nodes.id(v) + " -> ";
    if (!result.cycle.empty()) witness += h.nodes.id(result.cycle.front());
    throw DataError("hierarchy has a cycle: " + witness);
  }
  return anc;
}

}  // namespace

std::vector<std::size_t> Hierarchy::leaves() const {
  std::vector<bool> is_parent(nodes.size(), false);
  for (const auto& e : edges) is_parent[e.second] = true;
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (!is_parent[v]) out.push_back(v);
  }
  return out;
}

Hierarchy parse_hierarchy(std::string_view text, std::string_view source) {
  Hierarchy h;
  for (const auto& row : tsv::read_text(text)) {
    if (row.fields.size() != 2 || row.fields[0].empty() || row.fields[1].empty()) {
      throw DataError(at(source, row.line) + ": expected child<TAB>parent");
    }
    const std::size_t c = h.nodes.add(row.fields[0]);
    const std::size_t p = h.nodes.add(row.fields[1]);
    if (c == p) throw DataError(at(source, row.line) + ": self edge on '" + row.fields[0] + "'");
    h.edges.emplace_back(c, p);
  }
  std::sort(h.edges.begin(), h.edges.end());
  h.edges.erase(std::unique(h.edges.begin(), h.edges.end()), h.edges.end());
  return h;
}

Hierarchy read_hierarchy(const std::filesystem::path& path) {
  return parse_hierarchy(read_text_file(path), path.string());
}

std::string format_edges(const Hierarchy& h) {
  std::string out;
  for (const auto& [c, p] : h.edges) out += h.nodes.id(c) + "\t" + h.nodes.id(p) + "\n";
  return out;
}

Hierarchy transitive_closure(const Hierarchy& h) {
  const auto anc = ancestor_sets(h);
  Hierarchy out{h.nodes, {}};
  std::size_t total = 0;
  for (const auto& a : anc) total += a.size();
  out.edges.reserve(total);
  for (std::size_t v = 0; v < anc.size(); ++v) {
    for (auto a : anc[v]) out.edges.emplace_back(v, a);
  }
  return out;
}

std::vector<double> node_marginals(const Hierarchy& h, bool include_self) {
  const auto anc = ancestor_sets(h);
  const std::size_t n = h.nodes.size();
  std::vector<double> counts(n, include_self ? 1.0 : 0.0);
  for (const auto& a : anc) {
    for (auto v : a) counts[v] += 1.0;
  }
  for (auto& c : counts) c /= static_cast<double>(n);
  return counts;
}

CpdTable leaf_cooccurrence_cpd(const Hierarchy& h) {
  const auto anc = ancestor_sets(h);
  const auto leaves = h.leaves();
  if (leaves.empty()) throw DataError("hierarchy has no leaves");
  const std::size_t n = h.nodes.size();
  std::vector<double> counts(n, 0.0);
  std::unordered_map<std::uint64_t, double> pair_counts;
  std::vector<std::uint32_t> set;
  for (auto leaf : leaves) {
    set = anc[leaf];
    set.insert(std::lower_bound(set.begin(), set.end(), static_cast<std::uint32_t>(leaf)),
               static_cast<std::uint32_t>(leaf));
    for (std::size_t x = 0; x < set.size(); ++x) {
      counts[set[x]] += 1.0;
      for (std::size_t y = x + 1; y < set.size(); ++y) {
        pair_counts[(static_cast<std::uint64_t>(set[x]) << 32) | set[y]] += 1.0;
      }
    }
  }
  const double total = static_cast<double>(leaves.size());
  std::vector<double> marginals(n);
  for (std::size_t v = 0; v < n; ++v) marginals[v] = counts[v] / total;
  std::vector<CpdTable::JointEntry> joints;
  joints.reserve(pair_counts.size());
  for (const auto& [k, c] : pair_counts) {
    joints.push_back({static_cast<std::size_t>(k >> 32), static_cast<std::size_t>(k & 0xffffffffULL), c / total});
  }
  return CpdTable(h.nodes, std::move(marginals), joints);
}

std::vector<SoftEdge> prune_cpd(const CpdTable& table, double hi, double lo) {
  if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) throw InvalidArgument("prune thresholds need 0 <= lo <= hi <= 1");
  std::vector<SoftEdge> out;
  auto consider = [&](std::size_t t1, std::size_t t2) {
    const double forward = table.conditional(t1, t2);
    if (forward >= hi && table.conditional(t2, t1) <= lo) out.push_back({t1, t2, forward});
  };
  if (hi == 0.0) {
    // Zero joints can qualify only when hi is 0.
    for (std::size_t i = 0; i < table.size(); ++i) {
      for (std::size_t j = 0; j < table.size(); ++j) {
        if (i != j) consider(i, j);
      }
    }
  } else {
    for (const auto& e : table.joints()) {
      consider(e.i, e.j);
      consider(e.j, e.i);
    }
  }
  std::sort(out.begin(), out.end(), [](const SoftEdge& a, const SoftEdge& b) {
    return std::pair(a.t1, a.t2) < std::pair(b.t1, b.t2);
  });
  return out;
}

EdgeSet::EdgeSet(std::span<const NodePair> edges) {
  keys_.reserve(edges.size());
  for (const auto& e : edges) insert(e);
}

std::vector<LabeledPair> corrupt_negatives(std::span<const NodePair> positives, const EdgeSet& known,
                                           std::size_t node_count, std::size_t k, std::uint64_t seed) {
  if (node_count < 2) throw InvalidArgument("need at least two nodes to corrupt edges");
  constexpr std::size_t kMaxAttempts = 10000;
  Rng rng(seed);
  std::vector<LabeledPair> out;
  out.reserve(positives.size() * (k + 1));
  for (const auto& [child, parent] : positives) {
    if (child >= node_count || parent >= node_count) throw InvalidArgument("edge endpoint outside the node range");
    out.push_back({child, parent, 1.0});
    for (std::size_t s = 0; s < k; ++s) {
      std::size_t attempt = 0;
      while (true) {
        if (++attempt > kMaxAttempts) throw DataError("could not find a valid corruption");
        NodePair c{child, parent};
        if (rng.coin()) {
          c.first = rng.index(node_count);
        } else {
          c.second = rng.index(node_count);
        }
        if (c.first == c.second || known.contains(c)) continue;
        out.push_back({c.first, c.second, 0.0});
        break;
      }
    }
  }
  return out;
}

EdgeSplit split_edges(std::span<const NodePair> edges, std::size_t dev_count, std::size_t test_count,
                      std::uint64_t seed) {
  if (dev_count + test_count > edges.size()) throw InvalidArgument("split larger than the edge set");
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first dev + test slots are a uniform sample.
  for (std::size_t i = 0; i < dev_count + test_count; ++i) {
    std::swap(order[i], order[i + rng.index(edges.size() - i)]);
  }
  std::vector<unsigned char> part(edges.size(), 0);
  for (std::size_t i = 0; i < dev_count; ++i) part[order[i]] = 1;
  for (std::size_t i = dev_count; i < dev_count + test_count; ++i) part[order[i]] = 2;
  EdgeSplit s;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    (part[i] == 0 ? s.train : part[i] == 1 ? s.dev : s.test).push_back(edges[i]);
  }
  return s;
}

Vocabulary ToySpec::vocabulary() const {
  Vocabulary v;
  for (const auto& leaf : leaves) {
    for (const auto& c : leaf.concepts) v.add(c);
  }
  return v;
}

void ToySpec::validate() const {
  if (leaves.empty()) throw DataError("toy spec has no leaves");
  double total = 0.0;
  for (const auto& leaf : leaves) {
    if (!(leaf.weight > 0.0) || !std::isfinite(leaf.weight)) throw DataError("toy leaf weights must be positive");
    if (leaf.concepts.empty()) throw DataError("toy leaf carries no concepts");
    total += leaf.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DataError("toy leaf weights sum to " + tsv::format(total, 12) + ", not 1");
}

ToySpec parse_toy_spec(std::string_view text, std::string_view source) {
  ToySpec spec;
  for (const auto& row : tsv::read_text(text)) {
    if (row.fields.size() != 2) throw DataError(at(source, row.line) + ": expected weight<TAB>concepts");
    ToyLeaf leaf{tsv::parse_double(row.fields[0], source, row.line), {}};
    for (auto& c : tsv::split(row.fields[1], ',')) {
      if (c.empty()) throw DataError(at(source, row.line) + ": empty concept name");
      if (std::find(leaf.concepts.begin(), leaf.concepts.end(), c) != leaf.concepts.end()) {
        throw DataError(at(source, row.line) + ": concept '" + c + "' repeated in a leaf");
      }
      leaf.concepts.push_back(std::move(c));
    }
    spec.leaves.push_back(std::move(leaf));
  }
  spec.validate();
  return spec;
}

ToySpec read_toy_spec(const std::filesystem::path& path) { return parse_toy_spec(read_text_file(path), path.string()); }

std::string format_toy_spec(const ToySpec& spec) {
  std::string out;
  for (const auto& leaf : spec.leaves) {
    out += tsv::format(leaf.weight, 17) + "\t";
    for (std::size_t i = 0; i < leaf.concepts.size(); ++i) out += (i ? "," : "") + leaf.concepts[i];
    out += "\n";
  }
  return out;
}

const ToySpec& default_toy_spec() {
  // Mirrors data/toy_leaves_v1.tsv.
  static const ToySpec spec = parse_toy_spec(
      "0.12\tanimal,mammal,bear,grizzly_bear,omnivore,brown,american\n"
      "0.08\tanimal,mammal,bear,omnivore,american\n"
      "0.06\tanimal,mammal,bear,carnivore,white\n"
      "0.06\tanimal,mammal,rabbit,herbivore,white\n"
      "0.07\tanimal,mammal,rabbit,herbivore,brown,american\n"
      "0.12\tanimal,mammal,deer,herbivore,brown,american\n"
      "0.06\tanimal,reptile,snake,carnivore,green\n"
      "0.05\tanimal,reptile,snake,carnivore,brown,american\n"
      "0.09\tplant,cactus,green,american\n"
      "0.03\tplant,cactus,green,flower\n"
      "0.10\tplant,tree,green,american\n"
      "0.04\tplant,tree,brown\n"
      "0.07\tplant,flower,white\n"
      "0.05\tanimal,mammal,herbivore,white,american\n",
      "<default toy>");
  return spec;
}

CpdTable toy_dataset(const ToySpec& spec) {
  spec.validate();
  const Vocabulary vocab = spec.vocabulary();
  const std::size_t n = vocab.size();
  std::vector<double> marginals(n, 0.0);
  std::map<NodePair, double> joints;
  for (const auto& leaf : spec.leaves) {
    std::vector<std::size_t> ids;
    for (const auto& c : leaf.concepts) ids.push_back(vocab.index_of(c));
    std::sort(ids.begin(), ids.end());
    for (std::size_t x = 0; x < ids.size(); ++x) {
      marginals[ids[x]] += leaf.weight;
      for (std::size_t y = x + 1; y < ids.size(); ++y) joints[{ids[x], ids[y]}] += leaf.weight;
    }
  }
  std::vector<CpdTable::JointEntry> entries;
  for (const auto& [k, p] : joints) entries.push_back({k.first, k.second, p});
  for (auto& p : marginals) p = std::min(p, 1.0);
  return CpdTable(vocab, std::move(marginals), entries);
}

std::vector<TrainExample> cpd_examples(const CpdTable& table, double unary_weight, double edge_weight) {
  std::vector<TrainExample> out;
  const std::size_t n = table.size();
  for (std::size_t i = 0; i < n; ++i) out.push_back(TrainExample::unary(i, table.marginal(i), unary_weight));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b) out.push_back(TrainExample::pair(a, b, std::min(1.0, table.conditional(a, b)), edge_weight));
    }
  }
  return out;
}

std::vector<TrainExample> hierarchy_examples(const Hierarchy& h, std::size_t negatives, std::uint64_t seed,
                                             double unary_weight, double edge_weight, const EdgeSet* known) {
  const auto marginals = node_marginals(h);
  std::vector<TrainExample> out;
  out.reserve(marginals.size() + h.edges.size() * (negatives + 1));
  for (std::size_t i = 0; i < marginals.size(); ++i) out.push_back(TrainExample::unary(i, marginals[i], unary_weight));
  const EdgeSet own(h.edges);
  for (const auto& p : corrupt_negatives(h.edges, known ? *known : own, h.nodes.size(), negatives, seed)) {
    const bool negative = p.label < 0.5;
    out.push_back(TrainExample::pair(p.ancestor, p.descendant, p.label, edge_weight, negative));
  }
  return out;
}

std::string format_marginals(const Vocabulary& vocab, std::span<const double> marginals) {
  std::string out;
  for (std::size_t i = 0; i < marginals.size(); ++i) out += vocab.id(i) + "\t" + tsv::format(marginals[i], 12) + "\n";
  return out;
}

std::vector<std::pair<std::string, double>> parse_marginals(std::string_view text, std::string_view source) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& row : tsv::read_text(text)) {
    if (row.fields.size() != 2) throw DataError(at(source, row.line) + ": expected concept<TAB>prob");
    out.emplace_back(row.fields[0], tsv::parse_double(row.fields[1], source, row.line));
  }
  return out;
}

std::string format_soft_edges(const Vocabulary& vocab, std::span<const SoftEdge> edges) {
  std::string out;
  for (const auto& e : edges) out += vocab.id(e.t1) + "\t" + vocab.id(e.t2) + "\t" + tsv::format(e.p, 12) + "\n";
  return out;
}

std::string format_labeled_pairs(const Vocabulary& vocab, std::span<const LabeledPair> pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += vocab.id(p.descendant) + "\t" + vocab.id(p.ancestor) + "\t" + tsv::format(p.label, 12) + "\n";
  }
  return out;
}

std::vector<LabeledPair> parse_labeled_pairs(const Vocabulary& vocab, std::string_view text, std::string_view source) {
  std::vector<LabeledPair> out;
  for (const auto& row : tsv::read_text(text)) {
    if (row.fields.size() != 2 && row.fields.size() != 3) {
      throw DataError(at(source, row.line) + ": expected descendant<TAB>ancestor[<TAB>label]");
    }
    auto find = [&](const std::string& id) {
      auto idx = vocab.find(id);
      if (!idx) throw DataError(at(source, row.line) + ": unknown concept '" + id + "'");
      return *idx;
    };
    const double label = row.fields.size() == 3 ? tsv::parse_double(row.fields[2], source, row.line) : 1.0;
    if (!(label >= 0.0 && label <= 1.0)) throw DataError(at(source, row.line) + ": label outside [0, 1]");
    out.push_back({find(row.fields[0]), find(row.fields[1]), label});
  }
  return out;
}

std::string format_cpd(const CpdTable& table) {
  const auto& vocab = table.vocabulary();
  std::string out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    out += "m\t" + vocab.id(i) + "\t" + tsv::format(table.marginal(i), 17) + "\n";
  }
  for (const auto& e : table.joints()) {
    out += "j\t" + vocab.id(e.i) + "\t" + vocab.id(e.j) + "\t" + tsv::format(e.joint, 17) + "\n";
  }
  return out;
}

CpdTable parse_cpd(std::string_view text, std::string_view source) {
  Vocabulary vocab;
  std::vector<double> marginals;
  std::vector<std::tuple<std::string, std::string, double, std::size_t>> pending;
  for (const auto& row : tsv::read_text(text)) {
    const auto& f = row.fields;
    if (f.size() == 3 && f[0] == "m") {
      if (vocab.find(f[1])) throw DataError(at(source, row.line) + ": marginal of '" + f[1] + "' repeated");
      vocab.add(f[1]);
      marginals.push_back(tsv::parse_double(f[2], source, row.line));
    } else if (f.size() == 4 && f[0] == "j") {
      pending.emplace_back(f[1], f[2], tsv::parse_double(f[3], source, row.line), row.line);
    } else {
      throw DataError(at(source, row.line) + ": expected an 'm' or 'j' row");
    }
  }
  std::vector<CpdTable::JointEntry> joints;
  for (const auto& [a, b, p, line] : pending) {
    auto ia = vocab.find(a);
    auto ib = vocab.find(b);
    if (!ia || !ib) throw DataError(at(source, line) + ": joint names a concept without a marginal");
    joints.push_back({*ia, *ib, p});
  }
  return CpdTable(std::move(vocab), std::move(marginals), joints);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace boxlat
