#include "fixtures.hpp"
#include "oracles.hpp"

#include "njgl/datagen.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

using namespace njgl;

namespace {

using Adjacency = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

std::size_t upper_nonzeros(const Matrix& M) {
    std::size_t c = 0;
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        for (Eigen::Index i = 0; i < j; ++i) c += M(i, j) != 0.0;
    return c;
}

double min_eig(const Matrix& M) {
    return Eigen::SelfAdjointEigenSolver<Matrix>(M, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

bool contains(const std::vector<std::size_t>& v, Eigen::Index i) {
    return std::find(v.begin(), v.end(), static_cast<std::size_t>(i)) != v.end();
}

}  // namespace

TEST_SUITE("datagen") {

TEST_CASE("random stream basics") {
    Rng a(5), b(5), c(6);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        differs |= x != c.uniform();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
    CHECK(differs);
    Rng r(7);
    double s = 0, s2 = 0;
    const int N = 200000;
    for (int i = 0; i < N; ++i) {
        const double z = r.normal();
        s += z;
        s2 += z * z;
    }
    CHECK(std::abs(s / N) < 0.01);
    CHECK(std::abs(s2 / N - 1.0) < 0.02);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) ++hits[r.index(7)];
    for (int h : hits) CHECK(h > 800);
    CHECK_THROWS_AS(r.index(0), std::invalid_argument);
    for (int i = 0; i < 1000; ++i) {
        const double w = draw_edge_weight(r);
        CHECK(std::abs(w) >= 0.3);
        CHECK(std::abs(w) <= 0.6);
    }
    CHECK(std::string(kGeneratorVersion).find("mt19937_64") != std::string::npos);
}

TEST_CASE("option validation and names") {
    CHECK_THROWS_AS(gen_erdos(7, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_erdos(10, 1, 1), std::invalid_argument);
    GenOptions o;
    o.p = 10;
    o.n_perturbed = 6;
    o.n_cohub = 5;
    CHECK_THROWS_AS(generate(Network::Erdos, o), std::invalid_argument);
    CHECK(parse_network("scalefree") == Network::ScaleFree);
    CHECK(to_string(Network::Community) == "community");
    CHECK_THROWS_AS(parse_network("random"), std::invalid_argument);
}

TEST_CASE("base graph edge fraction") {
    const double pairs = 200.0 * 199.0 / 2.0;
    const double mean = 0.02 * pairs, sd = std::sqrt(pairs * 0.02 * 0.98);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto d = gen_erdos(200, 10, seed);
        const double count = static_cast<double>(upper_nonzeros(d.truth.base));
        CHECK(std::abs(count - mean) <= 3.0 * sd);
        CHECK(d.truth.base.diagonal().isZero(0.0));
    }
}

TEST_CASE("edge magnitudes and positive definiteness") {
    for (Network net : {Network::Erdos, Network::ScaleFree, Network::Community})
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            GenOptions o;
            o.seed = seed;
            o.n = 10;
            const auto d = generate(net, o);
            for (const Matrix* T : {&d.truth.theta1, &d.truth.theta2}) {
                CHECK(min_eig(*T) >= 0.1 - 1e-9);
                CHECK(*T == T->transpose());
                for (Eigen::Index j = 0; j < T->cols(); ++j)
                    for (Eigen::Index i = 0; i < T->rows(); ++i) {
                        if (i == j) {
                            CHECK((*T)(i, i) == d.truth.shift);
                        } else if ((*T)(i, j) != 0.0) {
                            CHECK(std::abs((*T)(i, j)) >= 0.3);
                            CHECK(std::abs((*T)(i, j)) <= 0.6);
                        }
                    }
            }
        }
}

TEST_CASE("truths differ only in perturbed rows and columns") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto d = gen_erdos(40, 10, seed);
        const auto& t = d.truth;
        REQUIRE(t.perturbed_idx.size() == 2);
        REQUIRE(t.cohub_idx.size() == 2);
        std::set<std::size_t> special(t.perturbed_idx.begin(), t.perturbed_idx.end());
        special.insert(t.cohub_idx.begin(), t.cohub_idx.end());
        CHECK(special.size() == 4);
        const Matrix D = t.theta1 - t.theta2;
        for (Eigen::Index j = 0; j < 40; ++j)
            for (Eigen::Index i = 0; i < 40; ++i)
                if (!contains(t.perturbed_idx, i) && !contains(t.perturbed_idx, j))
                    CHECK(D(i, j) == 0.0);
        // a perturbed column is dense in the class that received it
        for (std::size_t a = 0; a < 2; ++a) {
            const Matrix& T = t.perturbed_class[a] == 1 ? t.theta1 : t.theta2;
            const auto c = static_cast<Eigen::Index>(t.perturbed_idx[a]);
            for (Eigen::Index i = 0; i < 40; ++i)
                if (i != c && !contains(t.perturbed_idx, i)) CHECK(T(i, c) != 0.0);
        }
        // co-hub columns are dense and shared
        for (std::size_t node : t.cohub_idx) {
            const auto c = static_cast<Eigen::Index>(node);
            CHECK(t.theta1.col(c) == t.theta2.col(c));
            for (Eigen::Index i = 0; i < 40; ++i)
                if (i != c && !contains(t.perturbed_idx, i)) CHECK(t.theta1(i, c) != 0.0);
        }
    }
}

TEST_CASE("scale-free graphs are connected with 2p - 3 edges") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        const std::size_t p = 60;
        const Matrix adj = scale_free_adjacency(p, rng);
        CHECK(upper_nonzeros(adj) == 2 * p - 3);
        CHECK(adj.diagonal().isZero(0.0));
        const Adjacency A = (adj.array() != 0.0) || Matrix::Identity(60, 60).array() != 0.0;
        CHECK(oracle::bfs_components(A).size() == 1);
    }
}

TEST_CASE("scale-free degrees are heavy tailed") {
    int heavy = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(seed);
        const Matrix adj = scale_free_adjacency(200, rng);
        std::vector<double> deg(200);
        for (Eigen::Index j = 0; j < 200; ++j) deg[j] = adj.col(j).sum();
        const double top = *std::max_element(deg.begin(), deg.end());
        std::nth_element(deg.begin(), deg.begin() + 100, deg.end());
        const double hi = deg[100];
        std::nth_element(deg.begin(), deg.begin() + 99, deg.end());
        const double median = 0.5 * (hi + deg[99]);
        heavy += top >= 3.0 * median;
    }
    CHECK(heavy == 50);
}

TEST_CASE("scale-free pipeline keeps base edges") {
    const auto d = gen_scalefree(50, 10, 3);
    CHECK(upper_nonzeros(d.truth.base) == 2 * 50 - 3);
    CHECK(d.truth.network == Network::ScaleFree);
}

TEST_CASE("community mask") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto d = gen_community(100, 10, seed);
        for (const Matrix* T : {&d.truth.theta1, &d.truth.theta2}) {
            CHECK(T->block(0, 60, 40, 40).isZero(0.0));
            CHECK(T->block(60, 0, 40, 40).isZero(0.0));
            // every nonzero lies in one of the two 60 x 60 principal blocks
            for (Eigen::Index j = 0; j < 100; ++j)
                for (Eigen::Index i = 0; i < 100; ++i)
                    if ((*T)(i, j) != 0.0) CHECK(((i < 60 && j < 60) || (i >= 40 && j >= 40)));
        }
    }
    // other sizes scale the boundaries
    const auto d = gen_community(50, 10, 1);
    CHECK(d.truth.theta1.block(0, 30, 20, 20).isZero(0.0));
}

TEST_CASE("same seed gives bitwise identical data") {
    for (Network net : {Network::Erdos, Network::ScaleFree, Network::Community}) {
        GenOptions o;
        o.p = 30;
        o.n = 15;
        o.seed = 99;
        const auto a = generate(net, o), b = generate(net, o);
        CHECK(a.truth.theta1 == b.truth.theta1);
        CHECK(a.truth.theta2 == b.truth.theta2);
        CHECK(a.X1 == b.X1);
        CHECK(a.X2 == b.X2);
        CHECK(a.S1 == b.S1);
        CHECK(a.truth.perturbed_idx == b.truth.perturbed_idx);
        CHECK(a.truth.perturbed_class == b.truth.perturbed_class);
        o.seed = 100;
        CHECK_FALSE(generate(net, o).X1 == a.X1);
    }
}

TEST_CASE("covariances are centered and scaled by n") {
    const auto d = gen_erdos(12, 30, 4);
    Matrix Xc = d.X1;
    const Vector mean = Xc.colwise().mean();
    for (Eigen::Index i = 0; i < Xc.rows(); ++i) Xc.row(i) -= mean.transpose();
    Matrix S = Matrix::Zero(12, 12);
    for (Eigen::Index r = 0; r < Xc.rows(); ++r) S += Xc.row(r).transpose() * Xc.row(r);
    S /= 30.0;
    CHECK((S - d.S1).norm() <= 1e-12);
    const EmpiricalModel m = d.model();
    CHECK(m.K() == 2);
    CHECK(m.n(1) == 30);
}

TEST_CASE("sample covariance converges to the truth") {
    const auto d = gen_erdos(20, 10000, 8);
    for (auto [S, T] : {std::pair{&d.S1, &d.truth.theta1}, {&d.S2, &d.truth.theta2}}) {
        const Matrix sigma = oracle::inverse(*T);
        CHECK((*S - sigma).norm() / sigma.norm() <= 0.1);
    }
}

}  // TEST_SUITE
