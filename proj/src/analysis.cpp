#include "liectrl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace liectrl {

namespace {

std::string format_margin(double margin) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", margin);
    return buf;
}

}  // namespace

ControlGrid control_grid(const ControlRange& range, int points_per_axis, double margin,
                         std::uint64_t seed) {
    const int m = range.dim();
    ControlGrid grid;
    grid.points.push_back(Eigen::VectorXd::Zero(m));

    double total = 1.0;
    for (int i = 0; i < m; ++i) total *= points_per_axis;
    if (m >= 4 || total > 1e4) {
        Rng rng(seed);
        for (int s = 0; s < 256; ++s) {
            Eigen::VectorXd u(m);
            for (int i = 0; i < m; ++i)
                u(i) = rng.uniform(range.lower(i) + margin, range.upper(i) - margin);
            grid.points.push_back(u);
        }
        grid.description = "origin + 256 seeded uniform interior samples (margin " +
                           format_margin(margin) + ")";
        return grid;
    }

    std::vector<int> idx(m, 0);
    for (;;) {
        Eigen::VectorXd u(m);
        for (int i = 0; i < m; ++i) {
            const double lo = range.lower(i) + margin;
            const double hi = range.upper(i) - margin;
            u(i) = points_per_axis == 1 ? (lo + hi) / 2.0
                                        : lo + (hi - lo) * idx[i] / double(points_per_axis - 1);
        }
        grid.points.push_back(u);
        int axis = 0;
        while (axis < m && ++idx[axis] == points_per_axis) idx[axis++] = 0;
        if (axis == m) break;
    }
    grid.description = "origin + uniform " + std::to_string(points_per_axis) + "^" +
                       std::to_string(m) + " interior grid (margin " + format_margin(margin) + ")";
    return grid;
}

AlgebraBasis control_distribution_W(const LinearSystem& sys, const std::vector<Eigen::VectorXd>& grid,
                                    double fd_step, double tol) {
    if (grid.empty()) throw std::invalid_argument("control_distribution_W: empty grid");
    const int m = sys.range.dim();
    Eigen::MatrixXd stacked(sys.model.ambient_dim, static_cast<int>(grid.size()) * m);
    for (std::size_t i = 0; i < grid.size(); ++i)
        stacked.middleCols(static_cast<int>(i) * m, m) = hat_derivative_F(sys, grid[i], fd_step);
    return span_of_columns(stacked, tol);
}

AccessibilityReport accessibility_report(const LinearSystem& sys, const ControlGrid& grid,
                                         double tol, double fd_step) {
    AccessibilityReport rep;
    rep.n = sys.model.group_dim;
    rep.tol = tol;
    rep.fd_step = fd_step;
    rep.grid_description = grid.description;
    rep.grid_points = static_cast<int>(grid.points.size());

    rep.psi = infinitesimal_automorphism(sys, fd_step);
    rep.W = control_distribution_W(sys, grid.points, fd_step, tol);
    if (rep.W.dimension() == 0) {
        rep.V = AlgebraBasis::empty(sys.model.ambient_dim, tol);
        rep.h = rep.V;
    } else {
        // The ambient dimension is the safe power cap for embedded models.
        rep.V = psi_invariant_hull(rep.W, rep.psi, sys.model.ambient_dim, tol);
        rep.h = subalgebra_closure(sys.model, rep.V, tol);
    }
    rep.dim_W = rep.W.dimension();
    rep.dim_V = rep.V.dimension();
    rep.dim_h = rep.h.dimension();
    rep.accessible = rep.dim_h == rep.n;
    rep.verdict = rep.accessible ? "accessible" : "not-accessible-at-sampled-points";
    return rep;
}

AdRankReport ad_rank_report(const LinearSystem& sys, double fd_step, double tol) {
    AdRankReport rep;
    rep.n = sys.model.group_dim;
    rep.tol = tol;
    rep.fd_step = fd_step;
    rep.psi = infinitesimal_automorphism(sys, fd_step);

    const int m = sys.range.dim();
    const Eigen::MatrixXd B0 = hat_derivative_F(sys, Eigen::VectorXd::Zero(m), fd_step);
    rep.V_matrix.resize(sys.model.ambient_dim, rep.n * m);
    Eigen::MatrixXd block = B0;
    for (int p = 0; p < rep.n; ++p) {
        rep.V_matrix.middleCols((rep.n - 1 - p) * m, m) = block;
        if (p + 1 < rep.n) block = rep.psi * block;
    }
    rep.rank = numerical_rank(rep.V_matrix, tol).rank;
    rep.locally_controllable = rep.rank == rep.n;
    rep.verdict = rep.locally_controllable ? "locally-controllable" : "inconclusive";
    return rep;
}

int regular_rank(const LinearSystem& sys, int k, const ControlSequence& controls, double fd_step,
                 double tol) {
    if (k < 1) throw std::invalid_argument("regular_rank: k must be >= 1");
    if (static_cast<int>(controls.size()) < k)
        throw std::invalid_argument("regular_rank: fewer controls than steps");
    const int m = sys.range.dim();
    for (int i = 0; i < k; ++i)
        if (!sys.range.interior(controls[i], fd_step))
            throw BoundaryMargin("regular_rank: control " + std::to_string(i) +
                                 " too close to the boundary of U");

    const GroupPoint endpoint = solve(sys, k, sys.model.identity, controls);
    Eigen::MatrixXd J(sys.model.ambient_dim, k * m);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < m; ++j) {
            ControlSequence up = controls, um = controls;
            up[i](j) += fd_step;
            um[i](j) -= fd_step;
            const Eigen::VectorXd v = (solve(sys, k, sys.model.identity, up) -
                                       solve(sys, k, sys.model.identity, um)) /
                                      (2.0 * fd_step);
            J.col(i * m + j) = trivialize_tangent(sys.model, endpoint, v);
        }
    }
    return numerical_rank(J, tol).rank;
}

SampleCloud sample_reachable(const LinearSystem& sys, int k, int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample_reachable: count must be >= 1");
    SampleCloud cloud;
    cloud.k = k;
    cloud.seed = seed;
    cloud.count = count;
    Rng rng(seed);
    const int m = sys.range.dim();
    for (int c = 0; c < count; ++c) {
        GroupPoint g = sys.model.identity;
        for (int i = 0; i < k; ++i) {
            Eigen::VectorXd u(m);
            for (int j = 0; j < m; ++j) u(j) = rng.uniform(sys.range.lower(j), sys.range.upper(j));
            g = step(sys, u, g);
        }
        cloud.points.push_back(std::move(g));
    }
    return cloud;
}

int empirical_dimension(const LieGroupModel& model, const SampleCloud& cloud,
                        const GroupPoint& center, double radius_fraction, double rel_threshold) {
    if (cloud.points.size() < 20)
        throw InsufficientSamples("empirical_dimension: fewer than 20 points in the cloud");
    std::vector<double> dist(cloud.points.size());
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        dist[i] = (cloud.points[i] - center).norm();

    // Radius relative to the median center distance: the clouds have heavy
    // tails along the dominant directions, so a max-relative radius would
    // swallow enough anisotropy to mask the weak directions.
    std::vector<double> sorted = dist;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double radius = radius_fraction * sorted[sorted.size() / 2];

    std::vector<Eigen::VectorXd> offsets;
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        if (dist[i] <= radius)
            offsets.push_back(trivialize_tangent(model, center, cloud.points[i] - center));
    if (offsets.size() < 20)
        throw InsufficientSamples("empirical_dimension: fewer than 20 points within the radius");

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(model.ambient_dim);
    for (const Eigen::VectorXd& x : offsets) mean += x;
    mean /= double(offsets.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(model.ambient_dim, model.ambient_dim);
    for (const Eigen::VectorXd& x : offsets) cov += (x - mean) * (x - mean).transpose();
    cov /= double(offsets.size());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const double lmax = eig.eigenvalues().maxCoeff();
    if (lmax <= 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < eig.eigenvalues().size(); ++i)
        if (eig.eigenvalues()(i) > rel_threshold * lmax) ++rank;
    return rank;
}

ControlSetProbe control_set_probe(const LinearSystem& sys, int k, int count, std::uint64_t seed,
                                  double epsilon, double radius_fraction) {
    ControlSetProbe probe;
    probe.k = k;
    probe.count = count;
    probe.seed = seed;
    probe.epsilon = epsilon;
    probe.n = sys.model.group_dim;

    const AdRankReport ar = ad_rank_report(sys);
    probe.ad_rank = ar.rank;
    probe.gate_passed = ar.locally_controllable;
    if (!probe.gate_passed) return probe;

    const SampleCloud fwd = sample_reachable(sys, k, count, seed);
    const SampleCloud rev = sample_reachable(reversed_system(sys), k, count, seed + 1);

    int overlapping = 0;
    for (const GroupPoint& p : fwd.points) {
        double best = std::numeric_limits<double>::infinity();
        for (const GroupPoint& q : rev.points) best = std::min(best, (p - q).norm());
        if (best <= epsilon) ++overlapping;
    }
    probe.overlap_fraction = double(overlapping) / double(count);

    auto dim_at_e = [&](const SampleCloud& cloud) {
        try {
            return empirical_dimension(sys.model, cloud, sys.model.identity, radius_fraction);
        } catch (const InsufficientSamples&) {
            return -1;
        }
    };
    probe.dim_forward = dim_at_e(fwd);
    probe.dim_reversed = dim_at_e(rev);
    probe.full_dimension_both = probe.dim_forward == probe.n && probe.dim_reversed == probe.n;
    return probe;
}

}  // namespace liectrl
