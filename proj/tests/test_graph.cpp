#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "zcover/errors.hpp"
#include "zcover/graph.hpp"

using namespace zcover;

namespace {

std::string serialize(const Graph& g) {
    std::ostringstream out;
    write_graph(out, g);
    return out.str();
}

struct Moments {
    double sum = 0, sum_sq = 0;
    int count = 0;
    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++count;
    }
    double mean() const { return sum / count; }
    double variance() const { return (sum_sq - sum * sum / count) / (count - 1); }
};

}  // namespace

TEST_CASE("sample_gnp: sure and impossible events") {
    CHECK(sample_gnp(5, 0.0, {1}).edge_count() == 0);
    CHECK(sample_gnp(5, 1.0, {1}) == complete_graph(5));
    CHECK_THROWS_AS(sample_gnp(5, 1.5, {1}), ParameterError);
    CHECK_THROWS_AS(sample_gnp(5, -0.1, {1}), ParameterError);
    CHECK_THROWS_AS(sample_gnp(0, 0.5, {1}), ParameterError);
}

TEST_CASE("sample_gnp: edge count matches binomial moments") {
    // C(200,2) = 19900 trials, p = 0.3: mean 5970, sd sqrt(19900*0.21) ~ 64.6.
    Moments m;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        m.add(static_cast<double>(sample_gnp(200, 0.3, {s}).edge_count()));
    }
    const double sd = std::sqrt(19900 * 0.3 * 0.7);
    CHECK(std::abs(m.mean() - 5970.0) <= 3 * sd / std::sqrt(1000.0));
    CHECK(std::sqrt(m.variance()) == doctest::Approx(sd).epsilon(0.1));
}

TEST_CASE("sample_gnp: 2x2 edge indicator tables pass a chi-square independence test") {
    // Pairs of edges sharing a vertex and disjoint pairs; 1 dof, alpha = 1e-3.
    const std::vector<std::pair<Edge, Edge>> pairs = {{{0, 1}, {0, 2}}, {{0, 1}, {2, 3}}, {{1, 4}, {3, 4}}};
    for (const auto& [e, f] : pairs) {
        double table[2][2] = {{0, 0}, {0, 0}};
        const int seeds = 20000;
        for (int s = 0; s < seeds; ++s) {
            const Graph g = sample_gnp(5, 0.4, {static_cast<std::uint64_t>(s)});
            table[g.adjacent(e.u, e.v)][g.adjacent(f.u, f.v)] += 1;
        }
        double chi = 0;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const double row = table[i][0] + table[i][1];
                const double col = table[0][j] + table[1][j];
                const double expected = row * col / seeds;
                chi += (table[i][j] - expected) * (table[i][j] - expected) / expected;
            }
        }
        CHECK(chi < 10.83);
    }
}

TEST_CASE("samplers are deterministic in the seed") {
    CHECK(serialize(sample_gnp(40, 0.3, {99})) == serialize(sample_gnp(40, 0.3, {99})));
    CHECK(serialize(sample_gnp(40, 0.3, {99})) != serialize(sample_gnp(40, 0.3, {100})));
    const auto h1 = sample_h(60, 0.3, 0.4, 0.2, {7});
    const auto h2 = sample_h(60, 0.3, 0.4, 0.2, {7});
    CHECK(serialize(h1.graph) == serialize(h2.graph));
    CHECK(h1.partA == h2.partA);
    CHECK(h1.origin == h2.origin);
}

TEST_CASE("sample_two_param") {
    CHECK(sample_two_param(10, 1.0, 1.0, {3}).graph == complete_graph(10));
    CHECK(sample_two_param(10, 0.0, 0.5, {3}).graph.order() == 0);
    Moments m;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        m.add(static_cast<double>(sample_two_param(500, 0.5, 0.1, {s}).graph.order()));
    }
    const double sd = std::sqrt(500 * 0.25);
    CHECK(std::abs(m.mean() - 250.0) <= 3 * sd / std::sqrt(1000.0));
    const auto r = sample_two_param(30, 0.5, 0.5, {11});
    for (std::size_t i = 1; i < r.origin.size(); ++i) {
        CHECK(r.origin[i - 1] < r.origin[i]);
    }
}

TEST_CASE("sample_h") {
    const auto k6 = sample_h(6, 1.0, 0.0, 1.0, 1.0, 1.0, {5});
    CHECK(k6.graph == complete_graph(6));
    CHECK(k6.partB.empty());
    CHECK_THROWS_AS(sample_h(6, 0.5, 0.6, 0.5, 0.5, 0.5, {5}), ParameterError);

    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto bg = sample_h(400, 0.5, 0.5, 0.0, 0.0, 1.0, {s});
        CHECK(bg.crossing_edges() == bg.partA.size() * bg.partB.size());
        CHECK(bg.graph.edge_count() == bg.partA.size() * bg.partB.size());
        CHECK(bg.partA.size() + bg.partB.size() == 400);
    }
}

TEST_CASE("complement") {
    CHECK(complement(complete_graph(5)).edge_count() == 0);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Graph g = sample_gnp(12, 0.4, {s});
        CHECK(complement(complement(g)) == g);
        CHECK(complement(g).edge_count() + g.edge_count() == 66);
    }
}

TEST_CASE("common_neighbor_graph: hand examples") {
    const Vertex plus[] = {0};
    const Vertex minus[] = {1};
    const auto k4 = common_neighbor_graph(complete_graph(4), plus, minus);
    CHECK(k4.partA.empty());
    CHECK(k4.partB.empty());
    const auto empty = common_neighbor_graph(Graph(4), plus, minus);
    CHECK(empty.partA.empty());
    CHECK(empty.partB.empty());

    // Path 0-2-3-1: +0 sees 2 (nbr of 0, not near 1); -1 sees 3.
    const Edge path_edges[] = {{0, 2}, {2, 3}, {1, 3}};
    const auto path = common_neighbor_graph(Graph::from_edges(4, path_edges), plus, minus);
    REQUIRE(path.partA.size() == 1);
    REQUIRE(path.partB.size() == 1);
    CHECK(path.origin[path.partA[0]] == 2);
    CHECK(path.origin[path.partB[0]] == 3);
    CHECK(path.graph.edge_count() == 0);  // 2~3 in g, so no crossing edge

    const Vertex both[] = {1};
    CHECK_THROWS_AS(common_neighbor_graph(complete_graph(4), both, both), PreconditionError);
    CHECK_THROWS_AS(common_neighbor_graph(complete_graph(4), {}, {}), PreconditionError);
}

TEST_CASE("common_neighbor_graph: sides are disjoint from the query set and each other") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const Graph g = sample_gnp(25, 0.3, {s});
        const Vertex plus[] = {static_cast<Vertex>(s % 25), static_cast<Vertex>((s + 7) % 25)};
        const Vertex minus[] = {static_cast<Vertex>((s + 3) % 25)};
        const auto bg = common_neighbor_graph(g, plus, minus);
        std::set<Vertex> a, b;
        for (Vertex v : bg.partA) a.insert(bg.origin[v]);
        for (Vertex v : bg.partB) b.insert(bg.origin[v]);
        for (Vertex q : {plus[0], plus[1], minus[0]}) {
            CHECK(a.count(q) == 0);
            CHECK(b.count(q) == 0);
        }
        for (Vertex v : a) CHECK(b.count(v) == 0);
        CHECK(bg.partA.size() + bg.partB.size() == bg.graph.order());
    }
}

TEST_CASE("common_neighbor_graph on G(n,p) follows the H model") {
    // k = 2 plus, l = 1 minus, n = 60, p = 0.3:
    // |A| ~ Bin(57, p^2 (1-p)), |B| ~ Bin(57, p (1-p)^2), crossing density 1-p.
    const std::size_t n = 60;
    const double p = 0.3;
    const int seeds = 1500;
    const Vertex plus[] = {0, 1};
    const Vertex minus[] = {2};
    Moments a_obs, b_obs, a_model, b_model;
    double cross_obs = 0, pairs_obs = 0, cross_model = 0, pairs_model = 0;
    for (int s = 0; s < seeds; ++s) {
        const auto bg = common_neighbor_graph(sample_gnp(n, p, {static_cast<std::uint64_t>(s)}), plus, minus);
        a_obs.add(static_cast<double>(bg.partA.size()));
        b_obs.add(static_cast<double>(bg.partB.size()));
        cross_obs += static_cast<double>(bg.crossing_edges());
        pairs_obs += static_cast<double>(bg.partA.size() * bg.partB.size());
        const auto h = sample_h(n - 3, p * p * (1 - p), p * (1 - p) * (1 - p), p,
                                {static_cast<std::uint64_t>(s) + 1'000'000});
        a_model.add(static_cast<double>(h.partA.size()));
        b_model.add(static_cast<double>(h.partB.size()));
        cross_model += static_cast<double>(h.crossing_edges());
        pairs_model += static_cast<double>(h.partA.size() * h.partB.size());
    }
    const double mean_a = 57 * p * p * (1 - p);
    const double sd_a = std::sqrt(mean_a * (1 - p * p * (1 - p)));
    CHECK(std::abs(a_obs.mean() - mean_a) <= 3 * sd_a / std::sqrt(seeds));
    auto two_sample_ok = [&](const Moments& x, const Moments& y) {
        const double se = std::sqrt(x.variance() / x.count + y.variance() / y.count);
        return std::abs(x.mean() - y.mean()) <= 3 * se;
    };
    CHECK(two_sample_ok(a_obs, a_model));
    CHECK(two_sample_ok(b_obs, b_model));
    const double dens_obs = cross_obs / pairs_obs;
    const double dens_model = cross_model / pairs_model;
    CHECK(std::abs(dens_obs - (1 - p)) <= 3 * std::sqrt(p * (1 - p) / pairs_obs));
    CHECK(std::abs(dens_model - (1 - p)) <= 3 * std::sqrt(p * (1 - p) / pairs_model));
}

TEST_CASE("graph text format") {
    const Graph g = sample_gnp(15, 0.4, {21});
    std::istringstream in(serialize(g));
    CHECK(read_graph(in) == g);

    std::istringstream dup("3 2\n0 1\n0 1\n");
    CHECK_THROWS_AS(read_graph(dup), FormatError);
    std::istringstream range("3 1\n0 3\n");
    CHECK_THROWS_AS(read_graph(range), FormatError);
    std::istringstream order("3 1\n2 1\n");
    CHECK_THROWS_AS(read_graph(order), FormatError);
    std::istringstream truncated("3 2\n0 1\n");
    CHECK_THROWS_AS(read_graph(truncated), FormatError);

    CHECK(serialize(cycle_graph(4)) == "4 4\n0 1\n0 3\n1 2\n2 3\n");
}

TEST_CASE("components") {
    const Edge e[] = {{0, 1}, {2, 3}, {3, 4}};
    const Graph g = Graph::from_edges(6, e);
    CHECK(component_count(g) == 3);
    CHECK(component_count(complete_graph(7)) == 1);
}
