#ifndef SECTORNET_PMFG_HPP_
#define SECTORNET_PMFG_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "sectornet/errors.hpp"
#include "sectornet/planarity.hpp"

namespace sectornet {

/// Candidate ordering. Distance: d = sqrt(2(1 - c)) ascending. Absolute: |c| descending.
enum class PmfgMethod { Distance, Absolute };

inline const char* to_string(PmfgMethod m) { return m == PmfgMethod::Distance ? "distance" : "absolute"; }

inline PmfgMethod parse_pmfg_method(std::string_view s) {
    if (s == "distance") return PmfgMethod::Distance;
    if (s == "absolute") return PmfgMethod::Absolute;
    throw UsageError("unknown PMFG method '" + std::string(s) + "' (expected distance|absolute)");
}

struct EdgeCandidate {
    std::size_t i = 0;
    std::size_t j = 0;
    double weight = 0.0; // signed correlation carried onto the graph
    double key = 0.0;    // ordering key
    std::size_t rank = 0; // 1-based position in the sorted list
};

struct GraphEdge {
    std::size_t i = 0;
    std::size_t j = 0;
    double weight = 0.0;
    std::size_t rank = 0;

    friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct ConstructionStep {
    std::size_t rank = 0;
    bool accepted = false;

    friend bool operator==(const ConstructionStep&, const ConstructionStep&) = default;
};

/// Planar graph produced by greedy rank-ordered insertion. Edges appear in acceptance order.
struct PlanarGraph {
    std::size_t n = 0;
    PmfgMethod method = PmfgMethod::Distance;
    std::vector<GraphEdge> edges;
    std::vector<std::vector<std::size_t>> adjacency;
    std::vector<ConstructionStep> construction_log;

    std::vector<std::pair<std::size_t, std::size_t>> edge_pairs() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        out.reserve(edges.size());
        for (const auto& e : edges) out.emplace_back(e.i, e.j);
        return out;
    }

    bool has_edge(std::size_t i, std::size_t j) const {
        if (i >= n || j >= n) return false;
        const auto& a = adjacency[i];
        return std::find(a.begin(), a.end(), j) != a.end();
    }
};

/// Edge count of a maximal planar graph on n >= 3 vertices.
constexpr std::size_t maximal_planar_edges(std::size_t n) { return n >= 3 ? 3 * (n - 2) : (n == 2 ? 1 : 0); }

/// All N(N-1)/2 pairs of `matrix` sorted by the method's key; ties by (i, j).
inline std::vector<EdgeCandidate> build_candidates(const Eigen::MatrixXd& matrix, PmfgMethod method) {
    const auto n = matrix.rows();
    if (n != matrix.cols()) throw UsageError("candidate matrix must be square");
    if (n < 3) throw DataError("PMFG needs at least 3 nodes");
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        throw NumericalError("candidate matrix is not symmetric");
    }
    std::vector<EdgeCandidate> out;
    out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double c = matrix(i, j);
            if (!std::isfinite(c)) throw NumericalError("non-finite correlation in candidate matrix");
            EdgeCandidate e;
            e.i = static_cast<std::size_t>(i);
            e.j = static_cast<std::size_t>(j);
            e.weight = c;
            if (method == PmfgMethod::Distance) {
                if (c > 1.0 + 1e-12) {
                    throw NumericalError("correlation " + std::to_string(c) + " > 1 at (" + std::to_string(i) +
                                         ", " + std::to_string(j) + "); distance undefined");
                }
                e.key = std::sqrt(std::max(0.0, 2.0 * (1.0 - c)));
            } else {
                e.key = std::abs(c);
            }
            out.push_back(e);
        }
    }
    const bool ascending = method == PmfgMethod::Distance;
    std::stable_sort(out.begin(), out.end(), [ascending](const EdgeCandidate& a, const EdgeCandidate& b) {
        if (a.key != b.key) return ascending ? a.key < b.key : a.key > b.key;
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    for (std::size_t r = 0; r < out.size(); ++r) out[r].rank = r + 1;
    return out;
}

/// Would `graph` plus (i, j) be planar? Self-loops and existing edges are errors.
inline bool planarity_check(const PlanarGraph& graph, std::size_t i, std::size_t j) {
    IncrementalPlanarGraph g(graph.n);
    for (const auto& e : graph.edges) g.try_add(e.i, e.j);
    return g.admits(i, j);
}

/// Greedy insertion in rank order, skipping edges that break planarity. Planarity tests stop
/// once 3(n-2) edges are in; the log still holds one entry per candidate.
inline PlanarGraph build_pmfg(const std::vector<EdgeCandidate>& candidates, std::size_t n,
                              PmfgMethod method = PmfgMethod::Distance) {
    if (n < 3) throw DataError("PMFG needs at least 3 nodes");
    PlanarGraph graph;
    graph.n = n;
    graph.method = method;
    graph.adjacency.assign(n, {});
    const auto target = maximal_planar_edges(n);
    IncrementalPlanarGraph planar(n);
    for (const auto& c : candidates) {
        if (c.i >= n || c.j >= n) throw UsageError("candidate endpoint out of range");
        if (graph.edges.size() == target) {
            // maximal: nothing later can be planar, so the tail is logged as rejected untested
            graph.construction_log.push_back({c.rank, false});
            continue;
        }
        const bool accepted = planar.try_add(c.i, c.j);
        graph.construction_log.push_back({c.rank, accepted});
        if (!accepted) continue;
        graph.edges.push_back({c.i, c.j, c.weight, c.rank});
        graph.adjacency[c.i].push_back(c.j);
        graph.adjacency[c.j].push_back(c.i);
    }
    return graph;
}

inline PlanarGraph build_pmfg(const Eigen::MatrixXd& matrix, PmfgMethod method) {
    return build_pmfg(build_candidates(matrix, method), static_cast<std::size_t>(matrix.rows()), method);
}

/// Planar rotation system of a finished graph (for certificate checking).
inline Rotation planar_embedding(const PlanarGraph& graph) {
    IncrementalPlanarGraph g(graph.n);
    for (const auto& e : graph.edges) {
        if (!g.try_add(e.i, e.j)) throw NumericalError("graph is not planar");
    }
    return g.embedding();
}

/// Symmetric sparse matrix holding matrix(i, j) on graph edges and nothing elsewhere.
inline Eigen::SparseMatrix<double> to_weighted_adjacency(const PlanarGraph& graph, const Eigen::MatrixXd& matrix) {
    const auto n = static_cast<Eigen::Index>(graph.n);
    if (matrix.rows() != n || matrix.cols() != n) {
        throw UsageError("adjacency matrix dimension " + std::to_string(matrix.rows()) + "x" +
                         std::to_string(matrix.cols()) + " does not match graph size " + std::to_string(graph.n));
    }
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(graph.edges.size() * 2);
    for (const auto& e : graph.edges) {
        const auto i = static_cast<Eigen::Index>(e.i);
        const auto j = static_cast<Eigen::Index>(e.j);
        triplets.emplace_back(i, j, matrix(i, j));
        triplets.emplace_back(j, i, matrix(j, i));
    }
    Eigen::SparseMatrix<double> adj(n, n);
    adj.setFromTriplets(triplets.begin(), triplets.end());
    return adj;
}

} // namespace sectornet

#endif // SECTORNET_PMFG_HPP_
