#include "heisenlab/commgraph.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "heisenlab/errors.hpp"
#include "heisenlab/parallel.hpp"

namespace heisenlab {

BitMatrix::BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

std::uint64_t BitMatrix::row_count(std::size_t i) const {
  std::uint64_t c = 0;
  for (auto w : row(i)) c += std::popcount(w);
  return c;
}

std::uint64_t BitMatrix::and_count(std::size_t i, std::size_t j) const {
  const auto a = row(i);
  const auto b = row(j);
  std::uint64_t c = 0;
  for (std::size_t k = 0; k < words_; ++k) c += std::popcount(a[k] & b[k]);
  return c;
}

std::string to_string(GroupFamily f) { return f == GroupFamily::heisenberg ? "heisenberg" : "ut"; }
std::string to_string(GraphMode m) { return m == GraphMode::full ? "full" : "quotient"; }

std::string to_string(const VertexTag& tag) {
  return std::visit([](const auto& v) { return to_string(v); }, tag);
}

CommGraph::CommGraph(GraphParams params, std::vector<VertexTag> tags, BitMatrix adjacency)
    : params_(params), tags_(std::move(tags)), adj_(std::move(adjacency)) {
  if (adj_.size() != tags_.size()) throw DimensionError("adjacency size differs from vertex count");
}

std::uint64_t CommGraph::ordered_edge_count() const {
  std::uint64_t total = 0;
  for (std::size_t v = 0; v < size(); ++v) total += degree(v);
  return total;
}

namespace {

std::uint64_t vertex_count_or_throw(std::uint64_t p, std::uint64_t exponent, std::uint64_t cap) {
  std::uint64_t n = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    n *= p;
    if (n > kMaxGraphVertices) {
      throw SizeCapError("graph would exceed " + std::to_string(kMaxGraphVertices) + " vertices");
    }
  }
  if (n > cap) throw SizeCapError("graph exceeds the enumeration cap of " + std::to_string(cap));
  return n;
}

template <class Adjacent>
BitMatrix fill_rows(std::size_t n, bool loops, Adjacent&& adjacent) {
  BitMatrix adj(n);
  parallel_ranges(n, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t v = begin; v < end; ++v) {
      for (std::size_t w = 0; w < n; ++w) {
        if (v == w ? loops : adjacent(v, w)) adj.set(v, w);
      }
    }
  });
  return adj;
}

CommGraph build_quotient(const GraphParams& params, std::uint64_t cap) {
  const PrimeModulus p(params.p);
  const std::size_t k = params.k;
  const std::size_t n = vertex_count_or_throw(p.value(), 2 * k, cap);
  const HeisenbergGroup group(k, p);

  // Row v holds the digits (x_1..x_k, y_1..y_k) of the class label.
  std::vector<Residue> digits(n * 2 * k);
  std::vector<VertexTag> tags;
  tags.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    const HeisElem rep = group.element(static_cast<std::uint64_t>(v) * p.value());
    std::copy(rep.x.begin(), rep.x.end(), digits.begin() + v * 2 * k);
    std::copy(rep.y.begin(), rep.y.end(), digits.begin() + v * 2 * k + k);
    tags.emplace_back(class_of(rep));
  }
  auto adjacent = [&](std::size_t v, std::size_t w) {
    const Residue* a = digits.data() + v * 2 * k;
    const Residue* b = digits.data() + w * 2 * k;
    std::uint64_t plus = 0, minus = 0;
    for (std::size_t i = 0; i < k; ++i) {
      plus += static_cast<std::uint64_t>(a[i]) * b[k + i];
      minus += static_cast<std::uint64_t>(a[k + i]) * b[i];
    }
    return plus % p.value() == minus % p.value();
  };
  return CommGraph(params, std::move(tags), fill_rows(n, params.loops, adjacent));
}

template <class Group>
CommGraph build_full(const GraphParams& params, const Group& group, std::uint64_t cap) {
  const auto elements = group.enumerate(cap);
  if (elements.size() > kMaxGraphVertices) {
    throw SizeCapError("graph would exceed " + std::to_string(kMaxGraphVertices) + " vertices");
  }
  auto adjacent = [&](std::size_t v, std::size_t w) { return group.commutes(elements[v], elements[w]); };
  BitMatrix adj = fill_rows(elements.size(), params.loops, adjacent);
  std::vector<VertexTag> tags(elements.begin(), elements.end());
  return CommGraph(params, std::move(tags), std::move(adj));
}

}  // namespace

CommGraph build_graph(const GraphParams& params, std::uint64_t cap) {
  const PrimeModulus p(params.p);
  if (params.family == GroupFamily::ut) {
    if (params.mode == GraphMode::quotient) {
      throw PreconditionError("quotient graphs are only defined for the Heisenberg family");
    }
    const UnitriangularGroup group(params.k, p);
    group.require_enumerable(std::min<std::uint64_t>(cap, kMaxGraphVertices));
    return build_full(params, group, cap);
  }
  if (params.k == 0) throw DomainError("Heisenberg rank must be at least 1");
  if (params.mode == GraphMode::quotient) return build_quotient(params, cap);
  vertex_count_or_throw(p.value(), 2 * params.k + 1, cap);
  return build_full(params, HeisenbergGroup(params.k, p), cap);
}

std::uint64_t quotient_vertex(const HeisElem& a) {
  std::uint64_t v = 0;
  for (auto d : a.x) v = v * a.p.value() + d;
  for (auto d : a.y) v = v * a.p.value() + d;
  return v;
}

std::uint64_t codegree(const CommGraph& g, std::size_t v, std::size_t w) {
  if (v >= g.size() || w >= g.size()) throw DomainError("vertex out of range");
  return g.adjacency().and_count(v, w);
}

QuasiStats quasi_stats(const CommGraph& g) {
  QuasiStats s;
  const std::size_t n = g.size();
  s.n = n;
  s.ordered_edges = g.ordered_edge_count();
  s.density = make_rational(BigInt(std::to_string(s.ordered_edges)), BigInt(std::to_string(n)) * n);
  for (std::size_t v = 0; v < n; ++v) ++s.degree_histogram[g.degree(v)];

  std::vector<std::map<std::uint64_t, std::uint64_t>> partial(worker_count());
  parallel_ranges(n, [&](std::size_t begin, std::size_t end, unsigned w) {
    auto& hist = partial[w];
    for (std::size_t v = begin; v < end; ++v) {
      for (std::size_t u = 0; u < n; ++u) ++hist[g.adjacency().and_count(v, u)];
    }
  });
  for (const auto& hist : partial) {
    for (const auto& [c, count] : hist) s.codegree_histogram[c] += count;
  }

  // density^2 n = E^2 / n^3, so each term is |c n^3 - E^2| / n^3.
  const BigInt n_big(std::to_string(n));
  const BigInt n3 = n_big * n_big * n_big;
  const BigInt e(std::to_string(s.ordered_edges));
  const BigInt e2 = e * e;
  BigInt total = 0;
  for (const auto& [c, count] : s.codegree_histogram) {
    const BigInt term = abs(BigInt(std::to_string(c)) * n3 - e2);
    total += term * BigInt(std::to_string(count));
  }
  s.codegree_deviation_sum = make_rational(total, n3);
  s.normalized_sum = make_rational(total, n3 * n3);
  return s;
}

BipartiteCount bipartite_edge_count(const CommGraph& g, std::span<const std::size_t> a,
                                    std::span<const std::size_t> b) {
  BipartiteCount r;
  for (auto v : a) {
    for (auto w : b) {
      if (v >= g.size() || w >= g.size()) throw DomainError("vertex out of range");
      if (g.adjacent(v, w)) ++r.count;
    }
  }
  const Rational n = make_rational(BigInt(std::to_string(g.ordered_edge_count())),
                                   BigInt(std::to_string(g.size())) * g.size());
  const Rational ab(BigInt(std::to_string(a.size())) * BigInt(std::to_string(b.size())));
  const Rational count(BigInt(std::to_string(r.count)));
  r.density_baseline = n * ab;
  r.density_deviation = abs(count - r.density_baseline);
  r.p_baseline = Rational(g.params().p) * ab;
  r.p_deviation = abs(count - r.p_baseline);
  return r;
}

void SimpleGraph::add_edge(std::size_t u, std::size_t v) {
  if (u >= n_ || v >= n_) throw DomainError("edge endpoint out of range");
  if (u == v) return;
  adj_[u * n_ + v] = true;
  adj_[v * n_ + u] = true;
}

std::vector<std::pair<std::size_t, std::size_t>> SimpleGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t u = 0; u < n_; ++u) {
    for (std::size_t v = u + 1; v < n_; ++v) {
      if (has_edge(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

EmbeddingWitness embed_graph(const SimpleGraph& graph, PrimeModulus p) {
  const std::size_t k = graph.size();
  if (k == 0) throw DomainError("graph must have at least one vertex");
  EmbeddingWitness w;
  w.k = k;
  w.p = p.value();
  for (std::size_t i = 0; i < k; ++i) {
    FpVec x = FpVec::basis(k, i);
    FpVec c(k);
    for (std::size_t j = 0; j < i; ++j) c[j] = graph.has_edge(i, j) ? 0 : 1;
    w.vertex_images.emplace_back(std::move(x), std::move(c), 0, p);
  }

  std::vector<ClassLabel> classes;
  w.distinct_noncentral = true;
  for (const auto& img : w.vertex_images) {
    const ClassLabel c = class_of(img);
    if (c.is_central() || std::find(classes.begin(), classes.end(), c) != classes.end()) {
      w.distinct_noncentral = false;
    }
    classes.push_back(c);
  }
  w.pattern_matches = true;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (h_commutes(w.vertex_images[i], w.vertex_images[j]) != graph.has_edge(i, j)) {
        w.pattern_matches = false;
      }
    }
  }
  w.verified = w.distinct_noncentral && w.pattern_matches;
  return w;
}

bool induced_subgraph_check(const CommGraph& g, std::span<const std::size_t> vertices,
                            const SimpleGraph& pattern) {
  if (vertices.size() != pattern.size()) return false;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] >= g.size()) throw DomainError("vertex out of range");
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (vertices[i] == vertices[j]) return false;
      if (g.adjacent(vertices[i], vertices[j]) != pattern.has_edge(i, j)) return false;
    }
  }
  return true;
}

void write_edgelist(const CommGraph& g, std::ostream& out) {
  const auto& pr = g.params();
  out << "# family=" << to_string(pr.family) << " p=" << pr.p << " k=" << pr.k
      << " mode=" << to_string(pr.mode) << " loops=" << (pr.loops ? 1 : 0) << '\n';
  out << "# vertices=" << g.size() << '\n';
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (std::size_t v = u; v < g.size(); ++v) {
      if (g.adjacent(u, v)) out << u << ' ' << v << '\n';
    }
  }
}

SimpleGraph read_edgelist(std::istream& in) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t declared = 0;
  std::size_t max_vertex = 0;
  bool any = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("vertices=");
      if (pos != std::string::npos) declared = std::stoull(line.substr(pos + 9));
      continue;
    }
    std::istringstream fields(line);
    long long u = -1, v = -1;
    if (!(fields >> u >> v) || u < 0 || v < 0) {
      throw DomainError("malformed edge on line " + std::to_string(line_no));
    }
    edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
    max_vertex = std::max({max_vertex, edges.back().first, edges.back().second});
    any = true;
  }
  const std::size_t n = std::max(declared, any ? max_vertex + 1 : 0);
  if (any && declared != 0 && max_vertex >= declared) {
    throw DomainError("edge endpoint exceeds the declared vertex count");
  }
  SimpleGraph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

}  // namespace heisenlab
