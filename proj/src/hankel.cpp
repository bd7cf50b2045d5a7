#include "dmdplace/hankel.hpp"

#include "dmdplace/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dmdplace {

double spectral_radius(const Eigen::Ref<const Matrix>& A) {
    if (A.rows() == 0) {
        return 0.0;
    }
    return A.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<Matrix> markov_params(const LtiSystem& sys, Index count) {
    if (count < 1) {
        throw std::invalid_argument("markov_params: count must be >= 1");
    }
    std::vector<Matrix> h;
    h.reserve(static_cast<std::size_t>(count));
    Matrix reach = sys.B;  // A^(k-1) B
    for (Index k = 0; k < count; ++k) {
        h.push_back(sys.C * reach);
        reach = sys.A * reach;
    }
    return h;
}

Matrix build_hankel_markov(const std::vector<Matrix>& h, Index s, Index r) {
    if (s < 1 || r < 1) {
        throw std::invalid_argument("build_hankel_markov: s and r must be >= 1");
    }
    if (static_cast<Index>(h.size()) < s + r - 1) {
        throw std::invalid_argument("build_hankel_markov: need s + r - 1 Markov parameters");
    }
    const Index p = h.front().rows();
    const Index m = h.front().cols();
    Matrix H(s * p, r * m);
    for (Index i = 0; i < s; ++i) {
        for (Index j = 0; j < r; ++j) {
            H.block(i * p, j * m, p, m) = h[static_cast<std::size_t>(i + j)];
        }
    }
    return H;
}

Matrix observability_matrix(const LtiSystem& sys, Index s) {
    const Index n = sys.order();
    const Index p = sys.n_outputs();
    Matrix      Os(s * p, n);
    Matrix      block = sys.C;
    for (Index i = 0; i < s; ++i) {
        Os.middleRows(i * p, p) = block;
        block                   = block * sys.A;
    }
    return Os;
}

Matrix controllability_matrix(const LtiSystem& sys, Index r) {
    const Index n = sys.order();
    const Index m = sys.n_inputs();
    Matrix      Cr(n, r * m);
    Matrix      block = sys.B;
    for (Index j = 0; j < r; ++j) {
        Cr.middleCols(j * m, m) = block;
        block                   = sys.A * block;
    }
    return Cr;
}

Matrix build_output_hankel(const Eigen::Ref<const Matrix>& Y,
                           const std::vector<Index>& subset, Index s) {
    if (subset.empty()) {
        throw std::invalid_argument("build_output_hankel: empty output subset");
    }
    if (s < 1) {
        throw std::invalid_argument("build_output_hankel: s must be >= 1");
    }
    const Index n_t = Y.cols();
    if (n_t < 2 * s) {
        throw std::invalid_argument("build_output_hankel: record too short, need n_t >= 2s");
    }
    const Index r = n_t - 2 * s + 1;
    const Index k = static_cast<Index>(subset.size());

    Matrix H(s * k, r);
    for (Index b = 0; b < k; ++b) {
        const Index row = subset[static_cast<std::size_t>(b)];
        if (row < 0 || row >= Y.rows()) {
            throw std::out_of_range("build_output_hankel: output index out of range");
        }
        for (Index i = 0; i < s; ++i) {
            H.row(b * s + i) = Y.row(row).segment(i, r);
        }
    }
    return H;
}

Index choose_hankel_depth(const Eigen::Ref<const Matrix>& Y, double dt) {
    const double f_dom = dominant_frequency(Y, dt);  // throws on degenerate data
    const double t_dom = 1.0 / f_dom;
    Index        s     = static_cast<Index>(std::ceil(t_dom / dt));
    s                  = std::max<Index>(s, 1);
    s                  = std::min(s, Y.cols() / 2);
    return s;
}

GramianPair finite_gramians(const LtiSystem& sys, Index s, Index r) {
    if (s < 1 || r < 1) {
        throw std::invalid_argument("finite_gramians: s and r must be >= 1");
    }
    const Matrix Cr = controllability_matrix(sys, r);
    const Matrix Os = observability_matrix(sys, s);
    GramianPair  g;
    g.Wc = Cr * Cr.transpose();
    g.Wo = Os.transpose() * Os;
    // enforce exact symmetry against accumulation noise
    g.Wc = 0.5 * (g.Wc + g.Wc.transpose()).eval();
    g.Wo = 0.5 * (g.Wo + g.Wo.transpose()).eval();
    return g;
}

namespace {

// Nonzero part of a descending spectrum, cut at max * floor_rel.
Vector nonzero_part(const Vector& values, double floor_rel) {
    if (values.size() == 0) {
        return values;
    }
    const double floor = values.maxCoeff() * floor_rel;
    Index        count = 0;
    while (count < values.size() && values(count) > floor && values(count) > 0.0) {
        ++count;
    }
    return values.head(count);
}

Vector descending_sqrt_eigenvalues(const Matrix& sym) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (sym + sym.transpose()));
    Vector vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::reverse(vals.data(), vals.data() + vals.size());
    return vals;
}

double max_rel_deviation(const Vector& a, const Vector& b, double floor_abs) {
    double dev = 0.0;
    const Index n = std::max(a.size(), b.size());
    for (Index i = 0; i < n; ++i) {
        const double va = i < a.size() ? a(i) : 0.0;
        const double vb = i < b.size() ? b(i) : 0.0;
        if (std::max(va, vb) <= 2.0 * floor_abs) {
            continue;  // both within the zero band
        }
        const double scale = std::max({std::abs(va), std::abs(vb), 1e-300});
        dev                = std::max(dev, std::abs(va - vb) / scale);
    }
    return dev;
}

}  // namespace

EquivalenceReport verify_spectrum_equivalence(const LtiSystem& sys, Index s,
                                              Index r, double tol) {
    EquivalenceReport rep;
    rep.n = sys.order();
    rep.s = s;
    rep.r = r;

    const Matrix H0 = build_hankel_markov(markov_params(sys, s + r - 1), s, r);

    // Forming Os Wc Os' squares the spectrum, so its roundoff noise sits at
    // eps in the eigenvalue scale. The zero/nonzero cut (1e-12 of the
    // largest value) therefore lives on the eigenvalue side, with the
    // matching square-root cut of 1e-6 on the singular-value side; for a
    // relative comparison at `tol` only values with (max/sigma)^2 * eps
    // below tol carry information, which pushes the cut up accordingly.
    const double floor_rel =
        std::max(1e-6, std::sqrt(2.3e-16 / std::max(tol, 1e-15)) * 4.0);

    Eigen::BDCSVD<Matrix> svd(H0);
    const Vector hankel_sv = nonzero_part(svd.singularValues(), floor_rel);

    const GramianPair g  = finite_gramians(sys, s, r);
    const Matrix      Os = observability_matrix(sys, s);
    const Matrix      Cr = controllability_matrix(sys, r);

    const Vector from_wc = nonzero_part(
        descending_sqrt_eigenvalues(Os * g.Wc * Os.transpose()), floor_rel);
    const Vector from_wo = nonzero_part(
        descending_sqrt_eigenvalues(Cr.transpose() * g.Wo * Cr), floor_rel);

    const double floor_abs =
        svd.singularValues().size() > 0
            ? svd.singularValues().maxCoeff() * floor_rel
            : 0.0;
    rep.max_rel_dev = std::max(max_rel_deviation(hankel_sv, from_wc, floor_abs),
                               max_rel_deviation(hankel_sv, from_wo, floor_abs));
    rep.pass = rep.max_rel_dev <= tol;
    return rep;
}

LtiSystem random_stable_system(Index n, Index m, Index p, std::uint64_t seed) {
    if (n < 1 || m < 1 || p < 1) {
        throw std::invalid_argument("random_stable_system: dimensions must be >= 1");
    }
    std::mt19937_64                  rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> mag(0.2, 0.95);
    std::bernoulli_distribution            flip(0.5);

    Matrix G(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            G(i, j) = gauss(rng);
        }
    }
    const Eigen::HouseholderQR<Matrix> qr(G);
    const Matrix                       Q = qr.householderQ();

    Vector diag(n);
    for (Index i = 0; i < n; ++i) {
        diag(i) = (flip(rng) ? -1.0 : 1.0) * mag(rng);
    }

    LtiSystem sys;
    sys.A = Q * diag.asDiagonal() * Q.transpose();
    sys.B.resize(n, m);
    sys.C.resize(p, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < m; ++j) {
            sys.B(i, j) = gauss(rng);
        }
    }
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < n; ++j) {
            sys.C(i, j) = gauss(rng);
        }
    }
    sys.dt = 1.0;
    return sys;
}

LtiSystem equivalence_trial_system(Index trial, Index max_order,
                                   std::uint64_t seed) {
    const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(trial);
    std::mt19937_64     rng(trial_seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<Index> dim(1, max_order);
    const Index n = dim(rng);
    const Index m = std::uniform_int_distribution<Index>(1, 3)(rng);
    const Index p = std::uniform_int_distribution<Index>(1, 3)(rng);
    return random_stable_system(n, m, p, trial_seed);
}

EquivalenceSummary run_equivalence_trials(Index trials, Index max_order,
                                          double tol, std::uint64_t seed) {
    if (trials < 1) {
        throw std::invalid_argument("run_equivalence_trials: trials must be >= 1");
    }
    EquivalenceSummary summary;
    summary.trials.reserve(static_cast<std::size_t>(trials));
    summary.pass = true;
    for (Index t = 0; t < trials; ++t) {
        const LtiSystem   sys = equivalence_trial_system(t, max_order, seed);
        const Index       n   = sys.order();
        EquivalenceReport rep = verify_spectrum_equivalence(sys, 2 * n, 2 * n, tol);
        summary.worst_dev     = std::max(summary.worst_dev, rep.max_rel_dev);
        summary.pass          = summary.pass && rep.pass;
        summary.trials.push_back(rep);
    }
    return summary;
}

}  // namespace dmdplace
