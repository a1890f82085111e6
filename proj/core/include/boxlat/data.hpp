#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "boxlat/dag.hpp"
#include "boxlat/train.hpp"
#include "boxlat/vocabulary.hpp"

namespace boxlat {

// (child, parent) index pair.
using NodePair = std::pair<std::size_t, std::size_t>;

// A directed graph over named nodes with edges child -> parent. Leaves are
// nodes that are nobody's parent.
struct Hierarchy {
  Vocabulary nodes;
  std::vector<NodePair> edges;

  std::vector<std::size_t> leaves() const;
};

// Edges TSV: child<TAB>parent per line. Node indices follow first appearance.
Hierarchy parse_hierarchy(std::string_view text, std::string_view source = "<edges>");
Hierarchy read_hierarchy(const std::filesystem::path& path);
std::string format_edges(const Hierarchy& h);

// Every (u, v) with a directed path u -> v, sorted, over the same node set.
// Throws DataError listing a witness cycle when the hierarchy is cyclic.
Hierarchy transitive_closure(const Hierarchy& h);

// |descendants(n)| / |nodes|. With include_self the node counts as its own
// descendant, so every value lies in (0, 1].
std::vector<double> node_marginals(const Hierarchy& h, bool include_self = true);

// Each leaf contributes its ancestor set (itself included) as one atomic
// observation; joints and marginals are co-occurrence counts divided by the
// number of leaves.
CpdTable leaf_cooccurrence_cpd(const Hierarchy& h);

struct SoftEdge {
  std::size_t t1 = 0;
  std::size_t t2 = 0;
  double p = 0.0;  // P(t1 | t2)

  bool operator==(const SoftEdge&) const = default;
};

// Ordered pairs with P(t1 | t2) >= hi and P(t2 | t1) <= lo, sorted.
std::vector<SoftEdge> prune_cpd(const CpdTable& table, double hi = 0.6, double lo = 0.4);

// Hypernym-style example: `ancestor` is scored by P(ancestor | descendant).
// label is 1/0 for classification or a gold probability.
struct LabeledPair {
  std::size_t descendant = 0;
  std::size_t ancestor = 0;
  double label = 0.0;

  bool operator==(const LabeledPair&) const = default;
};

class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::span<const NodePair> edges);

  void insert(NodePair e) { keys_.insert(key(e)); }
  bool contains(NodePair e) const { return keys_.count(key(e)) != 0; }
  std::size_t size() const noexcept { return keys_.size(); }

 private:
  static std::uint64_t key(NodePair e) { return (static_cast<std::uint64_t>(e.first) << 32) | e.second; }
  std::unordered_set<std::uint64_t> keys_;
};

// Each positive (label 1) followed by k corruptions (label 0): one endpoint,
// chosen by a fair coin, is replaced by a uniform node. Corruptions that are
// self pairs or members of `known` are redrawn. Throws InvalidArgument for
// fewer than two nodes and DataError when no valid corruption is found.
std::vector<LabeledPair> corrupt_negatives(std::span<const NodePair> positives, const EdgeSet& known,
                                           std::size_t node_count, std::size_t k, std::uint64_t seed);

struct EdgeSplit {
  std::vector<NodePair> train;
  std::vector<NodePair> dev;
  std::vector<NodePair> test;
};

// Samples dev and test positives without replacement; the rest is train.
// Every part keeps the input order.
EdgeSplit split_edges(std::span<const NodePair> edges, std::size_t dev_count, std::size_t test_count,
                      std::uint64_t seed);

// Leaf table for the toy lattice: each leaf is an atomic event carrying a set
// of concepts.
struct ToyLeaf {
  double weight = 0.0;
  std::vector<std::string> concepts;
};

struct ToySpec {
  std::vector<ToyLeaf> leaves;

  // Concepts in first-appearance order.
  Vocabulary vocabulary() const;
  // Throws DataError unless weights are positive and sum to 1 (1e-9).
  void validate() const;
};

// Toy TSV: weight<TAB>concept,concept,... per leaf.
ToySpec parse_toy_spec(std::string_view text, std::string_view source = "<toy>");
ToySpec read_toy_spec(const std::filesystem::path& path);
std::string format_toy_spec(const ToySpec& spec);

// The shipped 19-concept toy lattice (fixture version 1).
const ToySpec& default_toy_spec();

// p(c) = total weight of leaves containing c; P(a, b) likewise.
CpdTable toy_dataset(const ToySpec& spec);

// Unary targets for every concept plus P(a | b) targets for every ordered
// pair of distinct concepts.
std::vector<TrainExample> cpd_examples(const CpdTable& table, double unary_weight, double edge_weight);

// Training data from a hierarchy whose edges are the positive (closure)
// pairs: a unary target node_marginals(h) per node, P(parent | child) = 1 per
// edge, and `negatives` corruptions per edge with target 0. Corruptions avoid
// `known` when given, else the hierarchy's own edges.
std::vector<TrainExample> hierarchy_examples(const Hierarchy& h, std::size_t negatives, std::uint64_t seed,
                                             double unary_weight, double edge_weight, const EdgeSet* known = nullptr);

// Marginals TSV: concept<TAB>prob.
std::string format_marginals(const Vocabulary& vocab, std::span<const double> marginals);
std::vector<std::pair<std::string, double>> parse_marginals(std::string_view text,
                                                            std::string_view source = "<marginals>");

// Soft-edge TSV: t1<TAB>t2<TAB>P(t1|t2).
std::string format_soft_edges(const Vocabulary& vocab, std::span<const SoftEdge> edges);

// Labeled pair TSV: descendant<TAB>ancestor<TAB>label.
std::string format_labeled_pairs(const Vocabulary& vocab, std::span<const LabeledPair> pairs);
std::vector<LabeledPair> parse_labeled_pairs(const Vocabulary& vocab, std::string_view text,
                                             std::string_view source = "<pairs>");

// CPD TSV: rows "m<TAB>concept<TAB>p" for marginals and
// "j<TAB>a<TAB>b<TAB>P(a,b)" for nonzero joints.
std::string format_cpd(const CpdTable& table);
CpdTable parse_cpd(std::string_view text, std::string_view source = "<cpd>");

// Text of a file, throwing DataError naming the path when unreadable.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace boxlat
