#ifndef SECTORNET_PLANARITY_HPP_
#define SECTORNET_PLANARITY_HPP_

#include <algorithm>
#include <cstddef>
#include <string>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <boost/graph/graph_traits.hpp>
#include <boost/property_map/property_map.hpp>

#include "sectornet/errors.hpp"

namespace sectornet {

/// Rotation system: for every vertex, its neighbours in clockwise order.
using Rotation = std::vector<std::vector<std::size_t>>;

/// Growing simple graph with an edge-addition (Boyer-Myrvold) planarity test per
/// insertion. Edges that would break planarity are rolled back.
class IncrementalPlanarGraph {
public:
    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                        boost::property<boost::vertex_index_t, int>,
                                        boost::property<boost::edge_index_t, int>>;

    explicit IncrementalPlanarGraph(std::size_t n) : graph_(n), parent_(n), edges_(0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t vertex_count() const { return boost::num_vertices(graph_); }
    std::size_t edge_count() const { return edges_; }

    bool has_edge(std::size_t i, std::size_t j) const { return boost::edge(i, j, graph_).second; }

    /// Would the graph stay planar with (i, j) added? Leaves the graph unchanged.
    bool admits(std::size_t i, std::size_t j) {
        validate(i, j);
        if (find(i) != find(j)) return true; // joining two components cannot create a Kuratowski subgraph
        auto [e, ok] = boost::add_edge(i, j, graph_);
        const bool planar = boost::boyer_myrvold_planarity_test(graph_);
        boost::remove_edge(e, graph_);
        return planar;
    }

    /// Inserts (i, j) if the result is planar; returns whether it was inserted.
    bool try_add(std::size_t i, std::size_t j) {
        validate(i, j);
        const auto ri = find(i);
        const auto rj = find(j);
        auto [e, ok] = boost::add_edge(i, j, graph_);
        if (ri != rj) {
            parent_[ri] = rj;
            ++edges_;
            return true;
        }
        if (!boost::boyer_myrvold_planarity_test(graph_)) {
            boost::remove_edge(e, graph_);
            return false;
        }
        ++edges_;
        return true;
    }

    /// A planar rotation system for the current graph.
    Rotation embedding() {
        using Edge = boost::graph_traits<Graph>::edge_descriptor;
        int k = 0;
        for (auto [it, end] = boost::edges(graph_); it != end; ++it) boost::put(boost::edge_index, graph_, *it, k++);
        std::vector<std::vector<Edge>> emb(boost::num_vertices(graph_));
        const bool planar = boost::boyer_myrvold_planarity_test(
            boost::boyer_myrvold_params::graph = graph_,
            boost::boyer_myrvold_params::embedding =
                boost::make_iterator_property_map(emb.begin(), boost::get(boost::vertex_index, graph_)));
        if (!planar) throw NumericalError("graph lost planarity");
        Rotation rot(emb.size());
        for (std::size_t v = 0; v < emb.size(); ++v) {
            for (const auto& e : emb[v]) {
                const auto s = boost::source(e, graph_);
                const auto t = boost::target(e, graph_);
                rot[v].push_back(s == v ? t : s);
            }
        }
        return rot;
    }

private:
    void validate(std::size_t i, std::size_t j) const {
        if (i >= vertex_count() || j >= vertex_count()) throw UsageError("edge endpoint out of range");
        if (i == j) throw UsageError("self-loop (" + std::to_string(i) + ", " + std::to_string(i) + ")");
        if (has_edge(i, j)) {
            throw UsageError("duplicate edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        }
    }

    std::size_t find(std::size_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    Graph graph_;
    std::vector<std::size_t> parent_;
    std::size_t edges_;
};

/// Checks that `rotation` is a genus-0 embedding of the simple graph given by `edges`:
/// every rotation is a permutation of the vertex's neighbours and face tracing
/// satisfies Euler's formula V - E + F = 2 on every component with an edge.
inline bool is_planar_embedding(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                const Rotation& rotation) {
    if (rotation.size() != n) return false;
    std::vector<std::vector<std::size_t>> nbrs(n);
    for (auto [i, j] : edges) {
        if (i >= n || j >= n || i == j) return false;
        nbrs[i].push_back(j);
        nbrs[j].push_back(i);
    }
    // position[v][w] = index of w in v's rotation
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> position(n);
    for (std::size_t v = 0; v < n; ++v) {
        auto expect = nbrs[v];
        auto have = rotation[v];
        std::sort(expect.begin(), expect.end());
        std::sort(have.begin(), have.end());
        if (expect != have || std::adjacent_find(have.begin(), have.end()) != have.end()) return false;
        for (std::size_t k = 0; k < rotation[v].size(); ++k) position[v].emplace_back(rotation[v][k], k);
        std::sort(position[v].begin(), position[v].end());
    }
    auto index_of = [&](std::size_t v, std::size_t w) {
        auto it = std::lower_bound(position[v].begin(), position[v].end(), std::make_pair(w, std::size_t{0}));
        return it->second;
    };

    // Darts (v, k) = edge from v to rotation[v][k].
    std::vector<std::vector<bool>> seen(n);
    for (std::size_t v = 0; v < n; ++v) seen[v].assign(rotation[v].size(), false);
    std::vector<std::size_t> comp(n, n);
    std::vector<std::size_t> faces_in(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] != n) continue;
        std::vector<std::size_t> stack{s};
        comp[s] = s;
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (auto w : nbrs[v]) {
                if (comp[w] == n) {
                    comp[w] = s;
                    stack.push_back(w);
                }
            }
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t k = 0; k < rotation[v].size(); ++k) {
            if (seen[v][k]) continue;
            ++faces_in[comp[v]];
            std::size_t a = v, ka = k;
            while (!seen[a][ka]) {
                seen[a][ka] = true;
                const auto b = rotation[a][ka];
                const auto back = index_of(b, a);
                const auto next = (back + 1) % rotation[b].size();
                a = b;
                ka = next;
            }
        }
    }
    std::vector<long> vcount(n, 0), ecount(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        ++vcount[comp[v]];
        ecount[comp[v]] += static_cast<long>(nbrs[v].size());
    }
    for (std::size_t r = 0; r < n; ++r) {
        if (comp[r] != r || ecount[r] == 0) continue;
        const long e = ecount[r] / 2;
        if (vcount[r] - e + static_cast<long>(faces_in[r]) != 2) return false;
    }
    return true;
}

} // namespace sectornet

#endif // SECTORNET_PLANARITY_HPP_
