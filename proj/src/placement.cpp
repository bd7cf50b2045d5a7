#include "dmdplace/placement.hpp"

#include "dmdplace/hankel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dmdplace {

namespace {

// Saturates well above the 1e6 subset budget instead of overflowing.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        if (result > (1ULL << 40)) {
            return result;
        }
        result = result * (n - k + i) / i;
    }
    return result;
}

// Advances `subset` (indices into 0..n-1) to the next lexicographic
// combination; returns false past the last one.
bool next_combination(std::vector<Index>& subset, Index n) {
    const Index k = static_cast<Index>(subset.size());
    Index       i = k - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - k + i) {
        --i;
    }
    if (i < 0) {
        return false;
    }
    ++subset[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
        subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
    return true;
}

}  // namespace

void PlacementProblem::validate() const {
    if (candidates.empty()) {
        throw std::invalid_argument("PlacementProblem: empty candidate list");
    }
    if (n_sensors < 1 || n_sensors > static_cast<Index>(candidates.size())) {
        throw std::invalid_argument("PlacementProblem: n_sensors must be in [1, |candidates|]");
    }
    if (truncation < 1) {
        throw std::invalid_argument("PlacementProblem: truncation index must be >= 1");
    }
    if (hankel_depth < 1) {
        throw std::invalid_argument("PlacementProblem: hankel_depth must be >= 1");
    }
    if (Y.cols() < 2 * hankel_depth) {
        throw std::invalid_argument("PlacementProblem: record too short for the Hankel depth");
    }
    if (lower_bound > upper_bound) {
        throw std::invalid_argument("PlacementProblem: lower_bound exceeds upper_bound");
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Index c = candidates[i];
        if (c < 0 || c >= Y.rows()) {
            throw std::invalid_argument("PlacementProblem: candidate index outside Y");
        }
        if (c < lower_bound || c > upper_bound) {
            throw std::invalid_argument("PlacementProblem: candidate index outside bounds");
        }
        if (i > 0 && c <= candidates[i - 1]) {
            throw std::invalid_argument("PlacementProblem: candidates must be strictly increasing");
        }
    }
    const std::uint64_t subsets = binomial(candidates.size(), static_cast<std::uint64_t>(n_sensors));
    if (subsets > 1000000ULL) {
        throw std::invalid_argument("PlacementProblem: subset budget exceeded (> 1e6 combinations)");
    }
}

double placement_cost(const Eigen::Ref<const Vector>& singular_values,
                      Index truncation) {
    if (truncation > singular_values.size()) {
        return std::numeric_limits<double>::infinity();
    }
    const double floor =
        singular_values.size() > 0 ? singular_values.maxCoeff() * 1e-12 : 0.0;
    double cost = 0.0;
    for (Index i = 0; i < truncation; ++i) {
        if (!(singular_values(i) > floor)) {
            return std::numeric_limits<double>::infinity();
        }
        cost += 1.0 / singular_values(i);
    }
    return cost;
}

Vector output_hankel_singular_values(const Eigen::Ref<const Matrix>& Y,
                                     const std::vector<Index>& subset,
                                     Index s) {
    const Matrix H = build_output_hankel(Y, subset, s);
    // Wide Hankels are cheaper through the Gram matrix; the spectra agree to
    // roundoff either way.
    if (H.cols() > 2 * H.rows()) {
        const Matrix gram = H * H.transpose();
        Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
        Vector vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        std::reverse(vals.data(), vals.data() + vals.size());
        return vals;
    }
    Eigen::BDCSVD<Matrix> svd(H);
    return svd.singularValues();
}

namespace {

// Pairwise sweep through cached per-candidate Gram blocks: the spectrum of
// H = [H_i; H_j] is read off [[H_i H_i', H_i H_j'], [.., H_j H_j']], so each
// pair costs one cross product and one small symmetric eigensolve.
PlacementResult pairwise_search_cached(const PlacementProblem& problem) {
    const Index n = static_cast<Index>(problem.candidates.size());
    const Index s = problem.hankel_depth;

    std::vector<Matrix> rows(static_cast<std::size_t>(n));
    std::vector<Matrix> self_gram(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        rows[static_cast<std::size_t>(i)] = build_output_hankel(
            problem.Y, {problem.candidates[static_cast<std::size_t>(i)]}, s);
        self_gram[static_cast<std::size_t>(i)] =
            rows[static_cast<std::size_t>(i)] *
            rows[static_cast<std::size_t>(i)].transpose();
    }

    PlacementResult result;
    result.best_cost = std::numeric_limits<double>::infinity();
    result.landscape.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        result.landscape[static_cast<std::size_t>(i)] = {
            problem.candidates[static_cast<std::size_t>(i)], -1,
            std::numeric_limits<double>::infinity()};
    }

    Matrix pair_gram(2 * s, 2 * s);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const Matrix cross = rows[static_cast<std::size_t>(i)] *
                                 rows[static_cast<std::size_t>(j)].transpose();
            pair_gram.topLeftCorner(s, s)     = self_gram[static_cast<std::size_t>(i)];
            pair_gram.topRightCorner(s, s)    = cross;
            pair_gram.bottomLeftCorner(s, s)  = cross.transpose();
            pair_gram.bottomRightCorner(s, s) = self_gram[static_cast<std::size_t>(j)];

            Eigen::SelfAdjointEigenSolver<Matrix> eig(pair_gram);
            Vector sv = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
            std::reverse(sv.data(), sv.data() + sv.size());

            const double cost = placement_cost(sv, problem.truncation);
            ++result.evaluations;

            if (cost < result.best_cost) {
                result.best_cost = cost;
                result.best_subset = {problem.candidates[static_cast<std::size_t>(i)],
                                      problem.candidates[static_cast<std::size_t>(j)]};
            }
            auto& outer = result.landscape[static_cast<std::size_t>(i)];
            if (cost < outer.cost) {
                outer.cost    = cost;
                outer.partner = problem.candidates[static_cast<std::size_t>(j)];
            }
            auto& inner = result.landscape[static_cast<std::size_t>(j)];
            if (cost < inner.cost) {
                inner.cost    = cost;
                inner.partner = problem.candidates[static_cast<std::size_t>(i)];
            }
        }
    }
    return result;
}

}  // namespace

PlacementResult exhaustive_search(const PlacementProblem& problem) {
    problem.validate();
    const Index n = static_cast<Index>(problem.candidates.size());
    const Index k = problem.n_sensors;

    {
        const Index s = problem.hankel_depth;
        const Index r = problem.Y.cols() - 2 * s + 1;
        const bool  wide       = r > 4 * s;
        const bool  cache_fits = n * s * r <= 30000000;
        if (k == 2 && wide && cache_fits) {
            return pairwise_search_cached(problem);
        }
    }

    PlacementResult result;
    result.best_cost = std::numeric_limits<double>::infinity();

    // Landscape bookkeeping for the pairwise sweep.
    const bool pairwise = (k == 2);
    std::vector<LandscapePoint> best_per_outer;
    if (pairwise) {
        best_per_outer.resize(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) {
            best_per_outer[static_cast<std::size_t>(i)] = {
                problem.candidates[static_cast<std::size_t>(i)], -1,
                std::numeric_limits<double>::infinity()};
        }
    }

    std::vector<Index> pick(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) {
        pick[static_cast<std::size_t>(i)] = i;
    }

    std::vector<Index> subset(static_cast<std::size_t>(k));
    do {
        for (Index i = 0; i < k; ++i) {
            subset[static_cast<std::size_t>(i)] =
                problem.candidates[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
        }
        const Vector sv = output_hankel_singular_values(problem.Y, subset,
                                                        problem.hankel_depth);
        const double cost = placement_cost(sv, problem.truncation);
        ++result.evaluations;

        if (cost < result.best_cost) {
            result.best_cost   = cost;
            result.best_subset = subset;
        }
        if (pairwise) {
            for (int side = 0; side < 2; ++side) {
                auto& entry =
                    best_per_outer[static_cast<std::size_t>(pick[static_cast<std::size_t>(side)])];
                if (cost < entry.cost) {
                    entry.cost    = cost;
                    entry.partner = subset[static_cast<std::size_t>(1 - side)];
                }
            }
        }
    } while (next_combination(pick, n));

    if (pairwise) {
        result.landscape = std::move(best_per_outer);
    }
    std::sort(result.best_subset.begin(), result.best_subset.end());
    return result;
}

std::vector<LandscapePoint> cost_landscape(const PlacementProblem& problem) {
    if (problem.n_sensors != 2) {
        throw std::invalid_argument("cost_landscape: defined for pairwise placement only");
    }
    return exhaustive_search(problem).landscape;
}

}  // namespace dmdplace
