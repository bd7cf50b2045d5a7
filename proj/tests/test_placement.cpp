#include "dmdplace/placement.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace dmdplace;

namespace {

// Test-local oracle: literal Hankel assembly plus Jacobi SVD, independent of
// the library path.
double naive_subset_cost(const Matrix& Y, const std::vector<Index>& subset,
                         Index s, Index truncation) {
    const Index r = Y.cols() - 2 * s + 1;
    Matrix      H(s * static_cast<Index>(subset.size()), r);
    for (std::size_t b = 0; b < subset.size(); ++b) {
        for (Index u = 0; u < s; ++u) {
            for (Index v = 0; v < r; ++v) {
                H(static_cast<Index>(b) * s + u, v) = Y(subset[b], u + v);
            }
        }
    }
    Eigen::JacobiSVD<Matrix> svd(H);
    const Vector             sv = svd.singularValues();
    if (truncation > sv.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double cost = 0.0;
    for (Index i = 0; i < truncation; ++i) {
        if (!(sv(i) > sv(0) * 1e-12)) {
            return std::numeric_limits<double>::infinity();
        }
        cost += 1.0 / sv(i);
    }
    return cost;
}

Matrix random_outputs(std::mt19937_64& rng, Index n_rows, Index n_cols) {
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    Matrix Y(n_rows, n_cols);
    for (Index i = 0; i < n_rows; ++i) {
        for (Index k = 0; k < n_cols; ++k) {
            Y(i, k) = entry(rng);
        }
    }
    return Y;
}

PlacementProblem toy_problem(std::mt19937_64& rng, Index n_candidates) {
    PlacementProblem problem;
    problem.Y = random_outputs(rng, n_candidates, 40);
    for (Index i = 0; i < n_candidates; ++i) {
        problem.candidates.push_back(i);
    }
    problem.n_sensors    = 2;
    problem.hankel_depth = 4;
    problem.truncation   = 4;
    problem.lower_bound  = 0;
    problem.upper_bound  = n_candidates - 1;
    return problem;
}

}  // namespace

TEST_CASE("reciprocal cost basics") {
    Vector sv(2);
    sv << 2.0, 1.0;
    CHECK(placement_cost(sv, 2) == doctest::Approx(1.5).epsilon(1e-15));

    Vector doubled = 2.0 * sv;
    CHECK(placement_cost(doubled, 2) == doctest::Approx(0.75).epsilon(1e-15));

    Vector degenerate(3);
    degenerate << 1.0, 0.5, 0.0;
    CHECK(std::isinf(placement_cost(degenerate, 3)));
    CHECK(std::isinf(placement_cost(sv, 5)));
}

TEST_CASE("single candidate single sensor") {
    std::mt19937_64  rng(3);
    PlacementProblem problem;
    problem.Y            = random_outputs(rng, 1, 20);
    problem.candidates   = {0};
    problem.n_sensors    = 1;
    problem.hankel_depth = 3;
    problem.truncation   = 2;
    problem.upper_bound  = 0;

    const PlacementResult result = exhaustive_search(problem);
    CHECK(result.best_subset == std::vector<Index>{0});
    CHECK(result.evaluations == 1);
    CHECK(result.best_cost ==
          doctest::Approx(naive_subset_cost(problem.Y, {0}, 3, 2)).epsilon(1e-10));
}

TEST_CASE("five-candidate search matches the naive enumeration") {
    std::mt19937_64 rng(12021);
    for (int trial = 0; trial < 20; ++trial) {
        PlacementProblem problem = toy_problem(rng, 5);
        const PlacementResult result = exhaustive_search(problem);
        CHECK(result.evaluations == 10);  // C(5, 2)

        double             best = std::numeric_limits<double>::infinity();
        std::vector<Index> best_subset;
        for (Index i = 0; i < 5; ++i) {
            for (Index j = i + 1; j < 5; ++j) {
                const double cost = naive_subset_cost(
                    problem.Y, {i, j}, problem.hankel_depth, problem.truncation);
                if (cost < best) {
                    best        = cost;
                    best_subset = {i, j};
                }
            }
        }
        CHECK(result.best_subset == best_subset);
        CHECK(result.best_cost == doctest::Approx(best).epsilon(1e-10));
    }
}

TEST_CASE("landscape of a two-candidate problem mirrors the single pair") {
    std::mt19937_64  rng(808);
    PlacementProblem problem = toy_problem(rng, 2);
    const auto       landscape = cost_landscape(problem);
    REQUIRE(landscape.size() == 2);
    CHECK(landscape[0].partner == 1);
    CHECK(landscape[1].partner == 0);
    CHECK(landscape[0].cost == landscape[1].cost);
}

TEST_CASE("landscape minima agree with the oracle and the search") {
    std::mt19937_64  rng(90210);
    PlacementProblem problem = toy_problem(rng, 5);
    const PlacementResult result = exhaustive_search(problem);
    REQUIRE(result.landscape.size() == 5);

    double curve_min = std::numeric_limits<double>::infinity();
    for (const LandscapePoint& point : result.landscape) {
        curve_min = std::min(curve_min, point.cost);
        double best_partner_cost = std::numeric_limits<double>::infinity();
        Index  best_partner      = -1;
        for (Index j = 0; j < 5; ++j) {
            if (j == point.outer) {
                continue;
            }
            std::vector<Index> pair = point.outer < j
                                          ? std::vector<Index>{point.outer, j}
                                          : std::vector<Index>{j, point.outer};
            const double cost = naive_subset_cost(problem.Y, pair,
                                                  problem.hankel_depth,
                                                  problem.truncation);
            if (cost < best_partner_cost) {
                best_partner_cost = cost;
                best_partner      = j;
            }
        }
        CHECK(point.partner == best_partner);
        CHECK(point.cost == doctest::Approx(best_partner_cost).epsilon(1e-10));
    }
    CHECK(curve_min == doctest::Approx(result.best_cost).epsilon(1e-12));
}

TEST_CASE("positive scaling of the data keeps the argmin") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 100; ++trial) {
        PlacementProblem problem = toy_problem(rng, 5);
        const PlacementResult base = exhaustive_search(problem);

        std::uniform_real_distribution<double> scale_dist(0.01, 100.0);
        const double scale = scale_dist(rng);
        PlacementProblem scaled = problem;
        scaled.Y *= scale;
        const PlacementResult result = exhaustive_search(scaled);

        CHECK(result.best_subset == base.best_subset);
        CHECK(result.best_cost ==
              doctest::Approx(base.best_cost / scale).epsilon(1e-9));
    }
}

TEST_CASE("evaluation count is exactly n choose k") {
    std::mt19937_64  rng(55);
    PlacementProblem problem = toy_problem(rng, 7);
    problem.n_sensors        = 3;
    const PlacementResult result = exhaustive_search(problem);
    CHECK(result.evaluations == 35);  // C(7, 3)
}

TEST_CASE("removing the winners cannot improve the cost") {
    std::mt19937_64 rng(31312);
    for (int trial = 0; trial < 100; ++trial) {
        PlacementProblem problem = toy_problem(rng, 6);
        const PlacementResult base = exhaustive_search(problem);

        PlacementProblem reduced = problem;
        reduced.candidates.clear();
        for (Index c : problem.candidates) {
            if (c != base.best_subset[0] && c != base.best_subset[1]) {
                reduced.candidates.push_back(c);
            }
        }
        const PlacementResult result = exhaustive_search(reduced);
        CHECK(result.best_cost >= base.best_cost * (1.0 - 1e-12));
    }
}

TEST_CASE("identical inputs give identical results") {
    std::mt19937_64  rng(2);
    PlacementProblem problem = toy_problem(rng, 6);
    const PlacementResult a = exhaustive_search(problem);
    const PlacementResult b = exhaustive_search(problem);
    CHECK(a.best_subset == b.best_subset);
    CHECK(a.best_cost == b.best_cost);
    CHECK(a.evaluations == b.evaluations);
    REQUIRE(a.landscape.size() == b.landscape.size());
    for (std::size_t i = 0; i < a.landscape.size(); ++i) {
        CHECK(a.landscape[i].partner == b.landscape[i].partner);
        CHECK(a.landscape[i].cost == b.landscape[i].cost);
    }
}

TEST_CASE("problem validation rejects bad setups") {
    std::mt19937_64  rng(44);
    PlacementProblem problem = toy_problem(rng, 5);

    SUBCASE("subset budget") {
        PlacementProblem big;
        big.Y = Matrix::Zero(40, 10);
        for (Index i = 0; i < 40; ++i) {
            big.candidates.push_back(i);
        }
        big.n_sensors    = 10;  // C(40, 10) > 1e6
        big.hankel_depth = 2;
        big.truncation   = 2;
        big.upper_bound  = 39;
        CHECK_THROWS_AS(big.validate(), std::invalid_argument);
    }
    SUBCASE("bounds filter") {
        problem.lower_bound = 1;  // candidate 0 now violates the box bound
        CHECK_THROWS_AS(problem.validate(), std::invalid_argument);
    }
    SUBCASE("short record") {
        problem.hankel_depth = 30;
        CHECK_THROWS_AS(problem.validate(), std::invalid_argument);
    }
    SUBCASE("too many sensors") {
        problem.n_sensors = 6;
        CHECK_THROWS_AS(problem.validate(), std::invalid_argument);
    }
    SUBCASE("unsorted candidates") {
        std::swap(problem.candidates[0], problem.candidates[1]);
        CHECK_THROWS_AS(problem.validate(), std::invalid_argument);
    }
}

TEST_CASE("degenerate subsets rank last through the sentinel") {
    std::mt19937_64  rng(987);
    PlacementProblem problem = toy_problem(rng, 4);
    problem.Y.row(0).setZero();  // candidate 0 sees nothing
    problem.truncation = 5;      // a pair with a zero row cannot fill 5 values
    problem.hankel_depth = 4;

    const PlacementResult result = exhaustive_search(problem);
    CHECK(result.best_subset[0] != 0);
    CHECK(result.best_subset[1] != 0);
    CHECK(std::isfinite(result.best_cost));
}
