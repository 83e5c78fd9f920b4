#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "heisenlab/config.hpp"
#include "heisenlab/heisenberg.hpp"
#include "heisenlab/rational.hpp"
#include "heisenlab/utgroup.hpp"

namespace heisenlab {

/// Dense square bit matrix, one padded row of 64-bit words per vertex.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n);

  std::size_t size() const { return n_; }
  bool test(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + (j >> 6)] >> (j & 63)) & 1u;
  }
  void set(std::size_t i, std::size_t j) { bits_[i * words_ + (j >> 6)] |= std::uint64_t{1} << (j & 63); }
  void reset(std::size_t i, std::size_t j) { bits_[i * words_ + (j >> 6)] &= ~(std::uint64_t{1} << (j & 63)); }

  std::span<const std::uint64_t> row(std::size_t i) const { return {bits_.data() + i * words_, words_}; }
  std::uint64_t row_count(std::size_t i) const;
  // |row(i) & row(j)|
  std::uint64_t and_count(std::size_t i, std::size_t j) const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

enum class GroupFamily { heisenberg, ut };
enum class GraphMode { full, quotient };

std::string to_string(GroupFamily f);
std::string to_string(GraphMode m);

using VertexTag = std::variant<HeisElem, UtMatrix, ClassLabel>;

std::string to_string(const VertexTag& tag);

struct GraphParams {
  GroupFamily family = GroupFamily::heisenberg;
  std::uint32_t p = 3;
  // Heisenberg rank k for H_{2k+1}(p), or the matrix size n for UT(n, p).
  std::size_t k = 1;
  GraphMode mode = GraphMode::quotient;
  bool loops = true;
};

inline constexpr std::size_t kMaxGraphVertices = std::size_t{1} << 15;

/// A commuting graph. In full mode the vertices are the group elements in
/// canonical order. In quotient mode (Heisenberg only) vertex v has base-p
/// digits (x, y); vertex 0 stands for the center and every other vertex for
/// the class [x, y, *].
class CommGraph {
 public:
  CommGraph(GraphParams params, std::vector<VertexTag> tags, BitMatrix adjacency);

  const GraphParams& params() const { return params_; }
  std::size_t size() const { return tags_.size(); }
  const std::vector<VertexTag>& tags() const { return tags_; }
  const BitMatrix& adjacency() const { return adj_; }

  bool adjacent(std::size_t v, std::size_t w) const { return adj_.test(v, w); }
  std::uint64_t degree(std::size_t v) const { return adj_.row_count(v); }
  // Ordered adjacent pairs, loops counted once each.
  std::uint64_t ordered_edge_count() const;

 private:
  GraphParams params_;
  std::vector<VertexTag> tags_;
  BitMatrix adj_;
};

/// Builds Γ or Γ~. Throws PreconditionError for a UT quotient and
/// SizeCapError when the vertex count exceeds kMaxGraphVertices or the cap.
CommGraph build_graph(const GraphParams& params, std::uint64_t cap = enumeration_cap());

/// Quotient-mode vertex of the class containing a.
std::uint64_t quotient_vertex(const HeisElem& a);

std::uint64_t codegree(const CommGraph& g, std::size_t v, std::size_t w);

struct QuasiStats {
  std::uint64_t n = 0;
  std::uint64_t ordered_edges = 0;
  Rational density;
  // sum over ordered (v, w) of | |N(v) ∩ N(w)| - density^2 n |
  Rational codegree_deviation_sum;
  Rational normalized_sum;  // codegree_deviation_sum / n^3
  std::map<std::uint64_t, std::uint64_t> degree_histogram;
  std::map<std::uint64_t, std::uint64_t> codegree_histogram;  // over ordered pairs
};

QuasiStats quasi_stats(const CommGraph& g);

struct BipartiteCount {
  std::uint64_t count = 0;       // ordered pairs (a, b) in A x B with an edge
  Rational density_baseline;     // density |A||B|
  Rational density_deviation;    // |count - density |A||B||
  Rational p_baseline;           // p |A||B|, the constant as printed
  Rational p_deviation;
};

BipartiteCount bipartite_edge_count(const CommGraph& g, std::span<const std::size_t> a,
                                    std::span<const std::size_t> b);

/// Finite simple graph on vertices 0..n-1.
class SimpleGraph {
 public:
  explicit SimpleGraph(std::size_t n = 0) : n_(n), adj_(n * n, false) {}

  std::size_t size() const { return n_; }
  void add_edge(std::size_t u, std::size_t v);
  bool has_edge(std::size_t u, std::size_t v) const { return u != v && adj_[u * n_ + v]; }
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

 private:
  std::size_t n_;
  std::vector<bool> adj_;
};

struct EmbeddingWitness {
  std::size_t k = 0;
  std::uint32_t p = 0;
  std::vector<HeisElem> vertex_images;
  bool distinct_noncentral = false;
  bool pattern_matches = false;
  bool verified = false;
};

/// Vertex i goes to [e_i, c_i, 0] in H_{2k+1}(p) with c_i(j) = 1 exactly
/// when j < i and {i, j} is not an edge.
EmbeddingWitness embed_graph(const SimpleGraph& graph, PrimeModulus p);

/// True when the vertices are distinct and their induced adjacency, loops
/// ignored, is exactly the pattern in the given order.
bool induced_subgraph_check(const CommGraph& g, std::span<const std::size_t> vertices,
                            const SimpleGraph& pattern);

// Edge lists: '#' header lines, then one "u v" per line with u <= v.
void write_edgelist(const CommGraph& g, std::ostream& out);
SimpleGraph read_edgelist(std::istream& in);

}  // namespace heisenlab
