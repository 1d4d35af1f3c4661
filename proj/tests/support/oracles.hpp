// Test-only reference implementations. Each one is deliberately naive and shares no code
// path with the library routine it checks.
#ifndef SECTORNET_TESTS_ORACLES_HPP_
#define SECTORNET_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// ---------------------------------------------------------------- statistics

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        mx += x[t];
        my += y[t];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        sxy += (x[t] - mx) * (y[t] - my);
        sxx += (x[t] - mx) * (x[t] - mx);
        syy += (y[t] - my) * (y[t] - my);
    }
    return (sxy / n) / (std::sqrt(sxx / n) * std::sqrt(syy / n));
}

/// Composite Simpson rule on [a, b] with `intervals` (even) sub-intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int k = 1; k < intervals; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Adjusted Rand index between two labellings.
inline double adjusted_rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::map<std::pair<std::size_t, std::size_t>, double> joint;
    std::map<std::size_t, double> ra, rb;
    for (std::size_t k = 0; k < a.size(); ++k) {
        joint[{a[k], b[k]}] += 1;
        ra[a[k]] += 1;
        rb[b[k]] += 1;
    }
    auto c2 = [](double x) { return x * (x - 1) / 2; };
    double index = 0, sa = 0, sb = 0;
    for (auto& [_, v] : joint) index += c2(v);
    for (auto& [_, v] : ra) sa += c2(v);
    for (auto& [_, v] : rb) sb += c2(v);
    const double expected = sa * sb / c2(static_cast<double>(a.size()));
    const double max_index = 0.5 * (sa + sb);
    if (max_index == expected) return 1.0;
    return (index - expected) / (max_index - expected);
}

// ---------------------------------------------------------------- graphs

/// Dense power iteration of the damped walk on a symmetric weight matrix.
inline std::vector<double> pagerank_dense(const Eigen::MatrixXd& w, double d, double tol = 1e-14) {
    const auto n = w.rows();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n); // column-stochastic
    for (Eigen::Index j = 0; j < n; ++j) {
        const double s = w.col(j).sum();
        for (Eigen::Index i = 0; i < n; ++i) t(i, j) = s > 0 ? w(i, j) / s : 1.0 / static_cast<double>(n);
    }
    Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    for (int it = 0; it < 100000; ++it) {
        Eigen::VectorXd q = d * t * p + Eigen::VectorXd::Constant(n, (1 - d) / static_cast<double>(n));
        q /= q.sum();
        const double change = (q - p).lpNorm<1>();
        p = q;
        if (change < tol) break;
    }
    return {p.data(), p.data() + n};
}

/// Kruskal minimum spanning forest over an explicit (i, j) order. Returns accepted pairs.
inline std::set<std::pair<std::size_t, std::size_t>> kruskal(std::size_t n,
                                                             const std::vector<std::pair<std::size_t, std::size_t>>& order) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    std::set<std::pair<std::size_t, std::size_t>> tree;
    for (auto [i, j] : order) {
        const auto a = find(i), b = find(j);
        if (a == b) continue;
        parent[a] = b;
        tree.insert({std::min(i, j), std::max(i, j)});
    }
    return tree;
}

/// Brute-force Kuratowski search: does the graph contain a subdivision of K5 or K3,3?
/// Exponential; intended for n <= 10.
class KuratowskiSearch {
public:
    explicit KuratowskiSearch(std::vector<std::vector<bool>> adj) : adj_(std::move(adj)), n_(adj_.size()) {}

    bool nonplanar() {
        std::vector<std::size_t> deg(n_, 0);
        for (std::size_t v = 0; v < n_; ++v)
            for (std::size_t w = 0; w < n_; ++w) deg[v] += adj_[v][w];
        std::vector<std::size_t> idx;
        // K5 subdivisions: five branch vertices of degree >= 4
        for (std::size_t v = 0; v < n_; ++v)
            if (deg[v] >= 4) idx.push_back(v);
        if (choose(idx, 5, [&](const std::vector<std::size_t>& br) {
                std::vector<std::pair<std::size_t, std::size_t>> pairs;
                for (std::size_t a = 0; a < 5; ++a)
                    for (std::size_t b = a + 1; b < 5; ++b) pairs.emplace_back(br[a], br[b]);
                return routable(br, pairs);
            }))
            return true;
        // K3,3 subdivisions: six branch vertices of degree >= 3, split into two triples
        idx.clear();
        for (std::size_t v = 0; v < n_; ++v)
            if (deg[v] >= 3) idx.push_back(v);
        return choose(idx, 6, [&](const std::vector<std::size_t>& br) {
            // br[0] on side A; pick two more for A from br[1..5]
            for (std::size_t x = 1; x < 6; ++x) {
                for (std::size_t y = x + 1; y < 6; ++y) {
                    std::vector<std::size_t> a{br[0], br[x], br[y]}, b;
                    for (std::size_t k = 1; k < 6; ++k)
                        if (k != x && k != y) b.push_back(br[k]);
                    std::vector<std::pair<std::size_t, std::size_t>> pairs;
                    for (auto u : a)
                        for (auto w : b) pairs.emplace_back(u, w);
                    if (routable(br, pairs)) return true;
                }
            }
            return false;
        });
    }

private:
    template <class F>
    bool choose(const std::vector<std::size_t>& pool, std::size_t k, F&& f) {
        if (pool.size() < k) return false;
        std::vector<std::size_t> pick;
        std::function<bool(std::size_t)> rec = [&](std::size_t start) -> bool {
            if (pick.size() == k) return f(pick);
            for (std::size_t s = start; s + (k - pick.size()) <= pool.size(); ++s) {
                pick.push_back(pool[s]);
                if (rec(s + 1)) return true;
                pick.pop_back();
            }
            return false;
        };
        return rec(0);
    }

    // Internally vertex-disjoint paths for every pair, interiors avoiding branch vertices.
    bool routable(const std::vector<std::size_t>& branch, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
        std::vector<bool> used(n_, false);
        for (auto b : branch) used[b] = true;
        std::function<bool(std::size_t)> route = [&](std::size_t p) -> bool {
            if (p == pairs.size()) return true;
            const auto [s, t] = pairs[p];
            if (adj_[s][t]) return route(p + 1); // the direct edge never hurts other pairs
            std::vector<std::size_t> path;
            std::function<bool(std::size_t)> extend = [&](std::size_t v) -> bool {
                for (std::size_t w = 0; w < n_; ++w) {
                    if (!adj_[v][w]) continue;
                    if (w == t && v != s) {
                        if (route(p + 1)) return true;
                        continue;
                    }
                    if (used[w]) continue;
                    used[w] = true;
                    path.push_back(w);
                    if (extend(w)) return true;
                    path.pop_back();
                    used[w] = false;
                }
                return false;
            };
            return extend(s);
        };
        return route(0);
    }

    std::vector<std::vector<bool>> adj_;
    std::size_t n_;
};

inline bool planar_by_kuratowski(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (auto [i, j] : edges) adj[i][j] = adj[j][i] = true;
    if (n >= 3 && edges.size() > 3 * n - 6) return false;
    return !KuratowskiSearch(adj).nonplanar();
}

/// Greedy maximal planar subgraph using the brute-force planarity oracle.
inline std::set<std::pair<std::size_t, std::size_t>> greedy_planar_bruteforce(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& order) {
    std::vector<std::pair<std::size_t, std::size_t>> kept;
    for (auto e : order) {
        if (kept.size() == 3 * (n - 2)) break;
        kept.push_back(e);
        if (!planar_by_kuratowski(n, kept)) kept.pop_back();
    }
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (auto [i, j] : kept) out.insert({std::min(i, j), std::max(i, j)});
    return out;
}

// ---------------------------------------------------------------- partitions

/// Calls f on every set partition of {0..n-1} as a restricted growth string.
inline void for_each_partition(std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> a(n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t max_label) {
        if (k == n) {
            f(a);
            return;
        }
        for (std::size_t c = 0; c <= max_label + 1; ++c) {
            a[k] = c;
            rec(k + 1, std::max(max_label, c));
        }
    };
    if (n == 0) return;
    a[0] = 0;
    rec(1, 0);
}

inline double entropy_bits(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    if (total <= 0) return 0;
    double h = 0;
    for (double w : weights)
        if (w > 0) h -= (w / total) * std::log2(w / total);
    return h;
}

/// Map equation written literally as q H(Q) + sum_i p_i H(P^i) from a dense weight matrix,
/// visit rates `p`, and link flows p_u w_uv / s_u.
inline double codelength_literal(const Eigen::MatrixXd& w, const std::vector<double>& p,
                                 const std::vector<std::size_t>& module) {
    const auto n = static_cast<std::size_t>(w.rows());
    std::size_t k = 0;
    for (auto m : module) k = std::max(k, m + 1);
    std::vector<double> exit(k, 0), enter(k, 0);
    for (std::size_t u = 0; u < n; ++u) {
        const double s = w.row(static_cast<Eigen::Index>(u)).sum();
        for (std::size_t v = 0; v < n; ++v) {
            if (module[u] == module[v] || s <= 0) continue;
            const double f = p[u] * w(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) / s;
            exit[module[u]] += f;
            enter[module[v]] += f;
        }
    }
    double q = 0;
    for (double e : enter) q += e;
    double length = q * entropy_bits(enter);
    for (std::size_t m = 0; m < k; ++m) {
        std::vector<double> parts{exit[m]};
        double inside = 0;
        for (std::size_t u = 0; u < n; ++u)
            if (module[u] == m) {
                parts.push_back(p[u]);
                inside += p[u];
            }
        if (inside == 0) continue;
        length += (exit[m] + inside) * entropy_bits(parts);
    }
    return length;
}

} // namespace oracle

#endif // SECTORNET_TESTS_ORACLES_HPP_
