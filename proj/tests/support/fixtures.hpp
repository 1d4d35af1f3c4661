// Small weighted graphs shared by the community tests and the acceptance run.
#ifndef SECTORNET_TESTS_FIXTURES_HPP_
#define SECTORNET_TESTS_FIXTURES_HPP_

#include <tuple>
#include <vector>

#include <Eigen/Dense>

namespace fixture {

using EdgeList = std::vector<std::tuple<std::size_t, std::size_t, double>>;

inline EdgeList clique(std::size_t from, std::size_t size, double w = 1.0) {
    EdgeList e;
    for (std::size_t a = from; a < from + size; ++a)
        for (std::size_t b = a + 1; b < from + size; ++b) e.emplace_back(a, b, w);
    return e;
}

inline EdgeList join(EdgeList a, const EdgeList& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline Eigen::MatrixXd dense(std::size_t n, const EdgeList& edges) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (auto [i, j, x] : edges) {
        w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += x;
        w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) += x;
    }
    return w;
}

struct Fixture {
    const char* name;
    std::size_t n;
    EdgeList edges;
};

inline std::vector<Fixture> small_fixtures() {
    std::vector<Fixture> f;
    f.push_back({"two 4-cliques", 8, join(join(clique(0, 4), clique(4, 4)), {{3, 4, 1.0}})});
    f.push_back({"ring of 2 4-cliques", 8, join(join(clique(0, 4), clique(4, 4)), {{3, 4, 1.0}, {7, 0, 1.0}})});
    f.push_back({"ring of 2 triangles and a pair", 8,
                 join(join(join(clique(0, 3), clique(3, 3)), clique(6, 2)), {{2, 3, 1.0}, {5, 6, 1.0}, {7, 0, 1.0}})});
    EdgeList path, star;
    for (std::size_t k = 0; k + 1 < 8; ++k) path.emplace_back(k, k + 1, 1.0);
    for (std::size_t k = 1; k < 7; ++k) star.emplace_back(0, k, 1.0);
    f.push_back({"path P8", 8, path});
    f.push_back({"star K1,6", 7, star});
    f.push_back({"K5", 5, clique(0, 5)});
    f.push_back({"triangle", 3, clique(0, 3)});
    EdgeList weighted = join(clique(0, 4, 0.9), clique(4, 3, 0.7));
    weighted.emplace_back(1, 5, 0.05);
    weighted.emplace_back(2, 4, 0.1);
    f.push_back({"weighted pair of cliques", 7, weighted});
    return f;
}

} // namespace fixture

#endif // SECTORNET_TESTS_FIXTURES_HPP_
