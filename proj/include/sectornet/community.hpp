#ifndef SECTORNET_COMMUNITY_HPP_
#define SECTORNET_COMMUNITY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "sectornet/errors.hpp"
#include "sectornet/ingest.hpp"
#include "sectornet/pmfg.hpp"

namespace sectornet {

struct FlowArc {
    std::size_t to = 0;
    double weight = 0.0;
};

/// Undirected weighted network with the stationary visit rates of its damped random walk.
struct FlowNetwork {
    std::size_t n = 0;
    double damping = 0.85;
    std::vector<std::vector<FlowArc>> arcs; // each undirected edge stored in both directions
    std::vector<double> strength;
    std::vector<double> visit_rate;

    /// Flow along u -> v: visit rate of u times the transition share of the arc.
    double link_flow(std::size_t u, const FlowArc& arc) const {
        return strength[u] > 0.0 ? visit_rate[u] * arc.weight / strength[u] : 0.0;
    }
};

struct FlowOptions {
    double damping = 0.85;
    bool weighted = true;
    double floor = 1e-6; // minimum flow weight on a retained edge
};

/// Stationary vector of the damped walk PR = (1-d)/n + d * W^T D^-1 PR, iterated until the L1
/// change drops below `tolerance`. Dangling nodes teleport uniformly.
inline std::vector<double> pagerank(const FlowNetwork& net, double tolerance = 1e-12,
                                    std::size_t max_iterations = 1'000'000) {
    const auto n = net.n;
    if (n == 0) return {};
    const double d = net.damping;
    if (!(d >= 0.0 && d <= 1.0)) throw UsageError("damping must lie in [0, 1]");
    bool dangling = false;
    for (double s : net.strength) dangling = dangling || !(s > 0.0);
    if (dangling && d == 1.0) throw NumericalError("dangling node with damping 1: random walk undefined");

    std::vector<double> pr(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        double dangling_mass = 0.0;
        for (std::size_t u = 0; u < n; ++u)
            if (!(net.strength[u] > 0.0)) dangling_mass += pr[u];
        const double base = ((1.0 - d) + d * dangling_mass) / static_cast<double>(n);
        std::fill(next.begin(), next.end(), base);
        for (std::size_t u = 0; u < n; ++u) {
            if (!(net.strength[u] > 0.0)) continue;
            const double share = d * pr[u] / net.strength[u];
            for (const auto& a : net.arcs[u]) next[a.to] += share * a.weight;
        }
        const double total = std::accumulate(next.begin(), next.end(), 0.0);
        double change = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            next[u] /= total;
            change += std::abs(next[u] - pr[u]);
        }
        pr.swap(next);
        if (change < tolerance) return pr;
    }
    throw NumericalError("PageRank did not converge");
}

/// Builds a flow network from (i, j, w) undirected edges with w >= 0.
inline FlowNetwork make_flow_network(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
                                     double damping = 0.85) {
    FlowNetwork net;
    net.n = n;
    net.damping = damping;
    net.arcs.assign(n, {});
    net.strength.assign(n, 0.0);
    for (const auto& [i, j, w] : edges) {
        if (i >= n || j >= n) throw UsageError("edge endpoint out of range");
        if (i == j) throw UsageError("self-loops are not supported in flow networks");
        if (!(w >= 0.0) || !std::isfinite(w)) throw UsageError("flow weights must be finite and non-negative");
        net.arcs[i].push_back({j, w});
        net.arcs[j].push_back({i, w});
        net.strength[i] += w;
        net.strength[j] += w;
    }
    net.visit_rate = pagerank(net);
    return net;
}

/// Flow network over a PMFG. Signed correlations become max(c, floor) so anti-correlated
/// edges carry (almost) no flow yet keep the graph connected; `weighted = false` uses unit weights.
inline FlowNetwork make_flow_network(const PlanarGraph& graph, const FlowOptions& options = {}) {
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    edges.reserve(graph.edges.size());
    for (const auto& e : graph.edges) {
        edges.emplace_back(e.i, e.j, options.weighted ? std::max(e.weight, options.floor) : 1.0);
    }
    return make_flow_network(graph.n, edges, options.damping);
}

inline double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

/// Two-level map equation L(M) in bits for an arbitrary labelling of the nodes.
inline double map_equation(const std::vector<std::size_t>& assignment, const FlowNetwork& net) {
    if (assignment.size() != net.n) {
        throw UsageError("assignment covers " + std::to_string(assignment.size()) + " nodes, network has " +
                         std::to_string(net.n));
    }
    std::map<std::size_t, std::size_t> index;
    for (auto m : assignment) index.emplace(m, index.size());
    std::vector<double> flow(index.size(), 0.0), exit(index.size(), 0.0), enter(index.size(), 0.0);
    double node_term = 0.0;
    for (std::size_t u = 0; u < net.n; ++u) {
        const auto mu = index.at(assignment[u]);
        flow[mu] += net.visit_rate[u];
        node_term += plogp(net.visit_rate[u]);
        for (const auto& a : net.arcs[u]) {
            const auto mv = index.at(assignment[a.to]);
            if (mu == mv) continue;
            const double f = net.link_flow(u, a);
            exit[mu] += f;
            enter[mv] += f;
        }
    }
    double total_enter = 0.0, enter_term = 0.0, exit_term = 0.0, module_term = 0.0;
    for (std::size_t m = 0; m < flow.size(); ++m) {
        total_enter += enter[m];
        enter_term += plogp(enter[m]);
        exit_term += plogp(exit[m]);
        module_term += plogp(exit[m] + flow[m]);
    }
    return plogp(total_enter) - enter_term - exit_term - node_term + module_term;
}

/// Result of the map-equation search. Module ids run from 1, ranked by descending summed PageRank.
struct CommunityPartition {
    std::vector<std::size_t> assignment;
    std::vector<std::vector<std::size_t>> modules; // modules[k] = members of module k + 1
    std::vector<double> pagerank;
    double codelength = 0.0;
    std::vector<double> trace; // codelength after each accepted move of the winning trial

    std::size_t module_count() const { return modules.size(); }
};

namespace detail {

struct LevelLink {
    std::size_t to;
    double out; // flow from this node to `to`
    double in;  // flow from `to` to this node
};

struct LevelGraph {
    std::vector<double> flow;
    std::vector<double> out;
    std::vector<double> in;
    std::vector<std::vector<LevelLink>> links;

    std::size_t size() const { return flow.size(); }
};

inline LevelGraph node_level(const FlowNetwork& net) {
    LevelGraph g;
    g.flow = net.visit_rate;
    g.out.assign(net.n, 0.0);
    g.in.assign(net.n, 0.0);
    g.links.assign(net.n, {});
    std::vector<std::map<std::size_t, LevelLink>> merged(net.n);
    for (std::size_t u = 0; u < net.n; ++u) {
        for (const auto& a : net.arcs[u]) {
            const double f = net.link_flow(u, a);
            merged[u].try_emplace(a.to, LevelLink{a.to, 0.0, 0.0}).first->second.out += f;
            merged[a.to].try_emplace(u, LevelLink{u, 0.0, 0.0}).first->second.in += f;
        }
    }
    for (std::size_t u = 0; u < net.n; ++u) {
        for (const auto& [v, l] : merged[u]) {
            g.links[u].push_back(l);
            g.out[u] += l.out;
            g.in[u] += l.in;
        }
    }
    return g;
}

inline LevelGraph aggregate(const LevelGraph& g, const std::vector<std::size_t>& module_of, std::size_t modules) {
    LevelGraph a;
    a.flow.assign(modules, 0.0);
    a.out.assign(modules, 0.0);
    a.in.assign(modules, 0.0);
    a.links.assign(modules, {});
    std::vector<std::map<std::size_t, LevelLink>> merged(modules);
    for (std::size_t u = 0; u < g.size(); ++u) {
        const auto mu = module_of[u];
        a.flow[mu] += g.flow[u];
        for (const auto& l : g.links[u]) {
            const auto mv = module_of[l.to];
            if (mu == mv) continue;
            auto& m = merged[mu].try_emplace(mv, LevelLink{mv, 0.0, 0.0}).first->second;
            m.out += l.out;
            m.in += l.in;
        }
    }
    for (std::size_t m = 0; m < modules; ++m) {
        for (const auto& [v, l] : merged[m]) {
            a.links[m].push_back(l);
            a.out[m] += l.out;
            a.in[m] += l.in;
        }
    }
    return a;
}

/// Greedy local moves of level nodes between modules with incremental codelength bookkeeping.
/// With `parent` set, a node may only join modules whose members share its parent label.
class ModuleOptimizer {
public:
    ModuleOptimizer(const LevelGraph& g, std::vector<std::size_t>& module_of, double node_term,
                    const std::vector<std::size_t>* parent = nullptr)
        : g_(g), module_of_(module_of), node_term_(node_term), parent_(parent), stats_(g.size()), deltas_(g.size()),
          mark_(g.size(), 0), module_parent_(g.size(), 0) {
        if (parent_) {
            for (std::size_t u = 0; u < g.size(); ++u) module_parent_[module_of_[u]] = (*parent_)[u];
        }
        for (std::size_t u = 0; u < g.size(); ++u) {
            auto& s = stats_[module_of_[u]];
            s.flow += g.flow[u];
            s.exit += g.out[u];
            s.enter += g.in[u];
            ++s.members;
            for (const auto& l : g.links[u]) {
                if (module_of_[l.to] == module_of_[u]) {
                    s.exit -= l.out;
                    s.enter -= l.in;
                }
            }
        }
        for (std::size_t m = stats_.size(); m-- > 0;)
            if (stats_[m].members == 0) empty_.push_back(m);
        for (const auto& s : stats_) add_terms(s, +1.0);
    }

    double codelength() const {
        return plogp(sum_enter_) - enter_term_ - exit_term_ - node_term_ + module_term_;
    }

    /// Sweeps nodes in random order until a sweep makes no move. Returns the number of moves.
    template <class Rng>
    std::size_t run(Rng& rng, std::vector<double>* trace, std::size_t max_sweeps = 200) {
        std::size_t total = 0;
        std::vector<std::size_t> order(g_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
            for (std::size_t k = order.size(); k > 1; --k) {
                std::swap(order[k - 1], order[static_cast<std::size_t>(rng() % k)]);
            }
            std::size_t moved = 0;
            for (auto u : order) {
                if (try_move(u)) {
                    ++moved;
                    if (trace) trace->push_back(codelength());
                }
            }
            total += moved;
            if (moved == 0) break;
        }
        return total;
    }

private:
    struct Stats {
        double flow = 0.0;
        double exit = 0.0;
        double enter = 0.0;
        std::size_t members = 0;
    };

    struct Delta {
        double out = 0.0; // flow u -> module
        double in = 0.0;  // flow module -> u
    };

    void add_terms(const Stats& s, double sign) {
        sum_enter_ += sign * s.enter;
        enter_term_ += sign * plogp(s.enter);
        exit_term_ += sign * plogp(s.exit);
        module_term_ += sign * plogp(s.exit + s.flow);
    }

    static double terms(double enter, double exit, double flow) {
        return -plogp(enter) - plogp(exit) + plogp(exit + flow);
    }

    bool try_move(std::size_t u) {
        const auto cur = module_of_[u];
        touched_.clear();
        for (const auto& l : g_.links[u]) {
            const auto m = module_of_[l.to];
            if (!mark_[m]) {
                mark_[m] = 1;
                touched_.push_back(m);
            }
            deltas_[m].out += l.out;
            deltas_[m].in += l.in;
        }
        const Delta to_cur = deltas_[cur];
        const auto& sc = stats_[cur];
        const double cur_exit = sc.exit - g_.out[u] + to_cur.out + to_cur.in;
        const double cur_enter = sc.enter - g_.in[u] + to_cur.out + to_cur.in;
        const double cur_flow = sc.flow - g_.flow[u];
        const double old_cur = terms(sc.enter, sc.exit, sc.flow);
        const double new_cur = terms(cur_enter, cur_exit, cur_flow);

        double best_delta = 0.0;
        std::size_t best = cur;
        Stats best_stats{};
        auto consider = [&](std::size_t m, const Delta& d) {
            const auto& sm = stats_[m];
            const double m_exit = sm.exit + g_.out[u] - d.out - d.in;
            const double m_enter = sm.enter + g_.in[u] - d.out - d.in;
            const double m_flow = sm.flow + g_.flow[u];
            const double new_sum = sum_enter_ - sc.enter - sm.enter + cur_enter + m_enter;
            const double delta = plogp(new_sum) - plogp(sum_enter_) + (new_cur - old_cur) +
                                 (terms(m_enter, m_exit, m_flow) - terms(sm.enter, sm.exit, sm.flow));
            if (delta < best_delta - 1e-13) {
                best_delta = delta;
                best = m;
                best_stats = Stats{m_flow, m_exit, m_enter, sm.members + 1};
            }
        };
        const auto allowed = [&](std::size_t m) { return !parent_ || module_parent_[m] == (*parent_)[u]; };
        for (auto m : touched_) {
            if (m != cur && allowed(m)) consider(m, deltas_[m]);
        }
        if (sc.members > 1 && !empty_.empty()) consider(empty_.back(), Delta{});

        for (auto m : touched_) {
            deltas_[m] = Delta{};
            mark_[m] = 0;
        }
        if (best == cur) return false;

        add_terms(stats_[cur], -1.0);
        add_terms(stats_[best], -1.0);
        if (stats_[best].members == 0) {
            empty_.pop_back();
            if (parent_) module_parent_[best] = (*parent_)[u];
        }
        stats_[cur] = Stats{cur_flow, cur_exit, cur_enter, sc.members - 1};
        stats_[best] = best_stats;
        if (stats_[cur].members == 0) {
            stats_[cur] = Stats{};
            empty_.push_back(cur);
        }
        add_terms(stats_[cur], +1.0);
        add_terms(stats_[best], +1.0);
        module_of_[u] = best;
        return true;
    }

    const LevelGraph& g_;
    std::vector<std::size_t>& module_of_;
    double node_term_;
    const std::vector<std::size_t>* parent_;
    std::vector<Stats> stats_;
    std::vector<std::size_t> empty_;
    std::vector<Delta> deltas_;
    std::vector<char> mark_;
    std::vector<std::size_t> module_parent_;
    std::vector<std::size_t> touched_;
    double sum_enter_ = 0.0;
    double enter_term_ = 0.0;
    double exit_term_ = 0.0;
    double module_term_ = 0.0;
};

/// Relabels module ids to 0..k-1 in order of first appearance; returns k.
inline std::size_t compact(std::vector<std::size_t>& module_of) {
    std::map<std::size_t, std::size_t> ids;
    for (auto& m : module_of) m = ids.try_emplace(m, ids.size()).first->second;
    return ids.size();
}

struct TrialResult {
    std::vector<std::size_t> assignment;
    double codelength = std::numeric_limits<double>::infinity();
    std::vector<double> trace;
};

inline TrialResult optimize_trial(const FlowNetwork& net, const LevelGraph& nodes, double node_term,
                                  std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::mt19937_64 rng(seq);

    TrialResult result;
    std::vector<std::size_t> assignment(net.n);
    std::iota(assignment.begin(), assignment.end(), std::size_t{0});
    result.trace.push_back(map_equation(assignment, net));

    // Moves whole modules until no merge helps.
    auto coarsen = [&](std::vector<double>* trace) {
        for (;;) {
            const auto k = compact(assignment);
            const auto level = aggregate(nodes, assignment, k);
            std::vector<std::size_t> merged(k);
            std::iota(merged.begin(), merged.end(), std::size_t{0});
            ModuleOptimizer opt(level, merged, node_term);
            if (opt.run(rng, trace) == 0) break;
            for (auto& m : assignment) m = merged[m];
        }
    };

    // node moves, module merges, then submodule moves between modules
    auto refine = [&](std::vector<double>* trace) {
        compact(assignment);
        {
            ModuleOptimizer opt(nodes, assignment, node_term);
            opt.run(rng, trace);
        }
        coarsen(trace);
        std::vector<std::size_t> sub(net.n);
        std::iota(sub.begin(), sub.end(), std::size_t{0});
        ModuleOptimizer split(nodes, sub, node_term, &assignment);
        split.run(rng, nullptr);
        const auto ks = compact(sub);
        const auto level = aggregate(nodes, sub, ks);
        std::vector<std::size_t> host(ks);
        for (std::size_t u = 0; u < net.n; ++u) host[sub[u]] = assignment[u];
        ModuleOptimizer opt(level, host, node_term);
        if (opt.run(rng, trace) > 0) {
            for (std::size_t u = 0; u < net.n; ++u) assignment[u] = host[sub[u]];
            coarsen(trace);
        }
    };

    for (int round = 0; round < 50; ++round) {
        refine(&result.trace);
        const double length = map_equation(assignment, net);
        if (!(length < result.codelength - 1e-12)) break;
        result.codelength = length;
        result.assignment = assignment;
    }

    // Kicks: merge two adjacent modules and refine; keep the first merge that shortens the code.
    for (int kick = 0; kick < 100; ++kick) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t u = 0; u < net.n; ++u) {
            for (const auto& l : nodes.links[u]) {
                const auto a = result.assignment[u];
                const auto b = result.assignment[l.to];
                if (a < b) pairs.emplace_back(a, b);
            }
        }
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        for (std::size_t k = pairs.size(); k > 1; --k) std::swap(pairs[k - 1], pairs[static_cast<std::size_t>(rng() % k)]);
        bool improved = false;
        for (const auto& [a, b] : pairs) {
            assignment = result.assignment;
            for (auto& m : assignment)
                if (m == b) m = a;
            refine(nullptr);
            const double length = map_equation(assignment, net);
            if (length < result.codelength - 1e-12) {
                result.codelength = length;
                result.trace.push_back(length);
                result.assignment = assignment;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return result;
}

} // namespace detail

/// Minimises the two-level map equation by repeated greedy node moves, module aggregation
/// and node-level refinement, keeping the best of `trials` seeded runs.
inline CommunityPartition detect_communities(const FlowNetwork& net, std::uint64_t seed = 1, std::size_t trials = 10) {
    if (trials == 0) throw UsageError("detect_communities needs at least one trial");
    if (net.n == 0) throw UsageError("empty network");
    const auto nodes = detail::node_level(net);
    double node_term = 0.0;
    for (double p : net.visit_rate) node_term += plogp(p);

    detail::TrialResult best;
    for (std::size_t t = 0; t < trials; ++t) {
        auto r = detail::optimize_trial(net, nodes, node_term, seed, t);
        if (r.codelength < best.codelength - 1e-12) best = std::move(r);
    }

    // rank modules by summed PageRank, ties by smallest member index
    const auto k = detail::compact(best.assignment);
    std::vector<std::vector<std::size_t>> members(k);
    std::vector<double> mass(k, 0.0);
    for (std::size_t u = 0; u < net.n; ++u) {
        members[best.assignment[u]].push_back(u);
        mass[best.assignment[u]] += net.visit_rate[u];
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (mass[a] != mass[b]) return mass[a] > mass[b];
        return members[a].front() < members[b].front();
    });
    std::vector<std::size_t> rank_of(k);
    for (std::size_t r = 0; r < k; ++r) rank_of[order[r]] = r;

    CommunityPartition out;
    out.pagerank = net.visit_rate;
    out.assignment.resize(net.n);
    out.modules.resize(k);
    for (std::size_t u = 0; u < net.n; ++u) {
        const auto r = rank_of[best.assignment[u]];
        out.assignment[u] = r + 1;
        out.modules[r].push_back(u);
    }
    out.codelength = map_equation(out.assignment, net);
    out.trace = std::move(best.trace);
    return out;
}

/// Average signed correlation between each node and its graph neighbours, read from `matrix`.
inline std::vector<double> mean_neighbor_correlation(const PlanarGraph& graph, const Eigen::MatrixXd& matrix) {
    if (matrix.rows() != static_cast<Eigen::Index>(graph.n) || matrix.cols() != matrix.rows()) {
        throw UsageError("matrix does not match graph size");
    }
    std::vector<double> out(graph.n, 0.0);
    for (std::size_t i = 0; i < graph.n; ++i) {
        const auto& nb = graph.adjacency[i];
        if (nb.empty()) throw DataError("node " + std::to_string(i) + " is isolated");
        double sum = 0.0;
        for (auto j : nb) sum += matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        out[i] = sum / static_cast<double>(nb.size());
    }
    return out;
}

/// Same average, read from the signed weights stored on the graph edges.
inline std::vector<double> mean_neighbor_correlation(const PlanarGraph& graph) {
    std::vector<double> sum(graph.n, 0.0);
    std::vector<std::size_t> deg(graph.n, 0);
    for (const auto& e : graph.edges) {
        sum[e.i] += e.weight;
        sum[e.j] += e.weight;
        ++deg[e.i];
        ++deg[e.j];
    }
    for (std::size_t i = 0; i < graph.n; ++i) {
        if (deg[i] == 0) throw DataError("node " + std::to_string(i) + " is isolated");
        sum[i] /= static_cast<double>(deg[i]);
    }
    return sum;
}

/// A sector is listed for a community when it has at least `min_count` members
/// and at least `min_fraction` of the roster.
struct ProminenceRule {
    std::size_t min_count = 3;
    double min_fraction = 0.2;
};

struct SectorRoster {
    std::map<std::string, std::size_t> gics; // sums to the roster size
    std::size_t sh = 0;                      // New Shanghai overlay
    std::size_t size = 0;
};

struct Community {
    std::size_t id = 0;
    std::vector<std::size_t> members;     // node indices, ascending
    std::vector<std::size_t> top_members; // highest-PageRank half
    std::size_t n_stock = 0;
    double sum_pagerank = 0.0;
    double sum_mean_corr = 0.0;
    SectorRoster roster_all;
    SectorRoster roster_top;
};

inline SectorRoster make_roster(const std::vector<std::size_t>& members, const std::vector<SectorLabel>& labels) {
    SectorRoster r;
    r.size = members.size();
    for (auto m : members) {
        ++r.gics[labels[m].code];
        if (labels[m].sh) ++r.sh;
    }
    return r;
}

/// Prominent sectors as "EN(10), MA(23) & IN(10)", ordered by descending count.
inline std::string format_roster(const SectorRoster& roster, const ProminenceRule& rule = {}) {
    std::vector<std::pair<std::string, std::size_t>> picked;
    auto prominent = [&](std::size_t count) {
        return count >= rule.min_count &&
               static_cast<double>(count) >= rule.min_fraction * static_cast<double>(roster.size);
    };
    for (const auto& [code, count] : roster.gics)
        if (prominent(count)) picked.emplace_back(code, count);
    if (prominent(roster.sh)) picked.emplace_back(kNewShanghaiCode, roster.sh);
    std::stable_sort(picked.begin(), picked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::string out;
    for (std::size_t k = 0; k < picked.size(); ++k) {
        if (k) out += (k + 1 == picked.size()) ? " & " : ", ";
        out += picked[k].first + "(" + std::to_string(picked[k].second) + ")";
    }
    return out;
}

/// Top-k communities by summed PageRank with member statistics and sector rosters.
/// The top half is ceil(size / 2) members by PageRank, ties by node order.
inline std::vector<Community> community_report(const CommunityPartition& partition, const PlanarGraph& graph,
                                               const std::vector<SectorLabel>& labels, std::size_t k = 8) {
    if (partition.assignment.size() != graph.n || labels.size() != graph.n) {
        throw UsageError("partition, graph and sector labels disagree on node count");
    }
    const auto mean_corr = mean_neighbor_correlation(graph);
    std::vector<Community> out;
    const auto count = std::min(k, partition.modules.size());
    for (std::size_t r = 0; r < count; ++r) {
        Community c;
        c.id = r + 1;
        c.members = partition.modules[r];
        std::sort(c.members.begin(), c.members.end());
        c.n_stock = c.members.size();
        for (auto m : c.members) {
            c.sum_pagerank += partition.pagerank[m];
            c.sum_mean_corr += mean_corr[m];
        }
        auto by_rank = c.members;
        std::stable_sort(by_rank.begin(), by_rank.end(), [&](std::size_t a, std::size_t b) {
            return partition.pagerank[a] > partition.pagerank[b];
        });
        by_rank.resize((c.n_stock + 1) / 2);
        c.top_members = by_rank;
        c.roster_all = make_roster(c.members, labels);
        c.roster_top = make_roster(c.top_members, labels);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace sectornet

#endif // SECTORNET_COMMUNITY_HPP_
