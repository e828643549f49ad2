#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "liectrl/algebra.hpp"
#include "liectrl/system.hpp"

namespace liectrl {

inline constexpr int kDefaultGridPointsPerAxis = 11;
inline constexpr double kEmpiricalRankThreshold = 0.05;
inline constexpr double kDefaultRadiusFraction = 0.3;
inline constexpr double kDefaultProbeEpsilon = 0.1;

// Sampled interior control values used to span the control distribution W.
// Uniform points_per_axis grid per axis inside the margin-shrunk box, capped
// at 10^4 points (256 seeded uniform samples once m >= 4), plus the origin.
struct ControlGrid {
    std::vector<Eigen::VectorXd> points;
    std::string description;
};

ControlGrid control_grid(const ControlRange& range, int points_per_axis = kDefaultGridPointsPerAxis,
                         double margin = 2.0 * kDefaultFdStep, std::uint64_t seed = 0);

// span of the columns of hat_derivative_F over the grid.
AlgebraBasis control_distribution_W(const LinearSystem& sys, const std::vector<Eigen::VectorXd>& grid,
                                    double fd_step = kDefaultFdStep, double tol = kDefaultRankTol);

// The accessibility decision: W -> its psi-invariant Kalman hull V -> the
// subalgebra h generated by V; accessible iff dim h = group_dim. A sampled
// grid can only under-approximate W, so a full-dimensional h is conclusive
// while a deficient one is reported as not accessible at the sampled points.
struct AccessibilityReport {
    AlgebraBasis W, V, h;
    int dim_W = 0, dim_V = 0, dim_h = 0, n = 0;
    bool accessible = false;
    std::string verdict;  // "accessible" | "not-accessible-at-sampled-points"
    std::string grid_description;
    int grid_points = 0;
    double tol = kDefaultRankTol;
    double fd_step = kDefaultFdStep;
    Eigen::MatrixXd psi;
};

AccessibilityReport accessibility_report(const LinearSystem& sys, const ControlGrid& grid,
                                         double tol = kDefaultRankTol,
                                         double fd_step = kDefaultFdStep);

// The ad-rank test: V = (psi^{n-1} B0 ... psi B0  B0) with B0 = hat dF at 0;
// full rank n is sufficient for local controllability at the identity, and
// anything less is inconclusive.
struct AdRankReport {
    Eigen::MatrixXd V_matrix;  // N x (n*m)
    int rank = 0, n = 0;
    bool locally_controllable = false;
    std::string verdict;  // "locally-controllable" | "inconclusive"
    double tol = kDefaultRankTol;
    double fd_step = kDefaultFdStep;
    Eigen::MatrixXd psi;
};

AdRankReport ad_rank_report(const LinearSystem& sys, double fd_step = kDefaultFdStep,
                            double tol = kDefaultRankTol);

// Rank of the control-to-endpoint Jacobian of the k-step solution from the
// identity, trivialized at the endpoint. The pair (e, u) is regular iff the
// rank equals group_dim.
int regular_rank(const LinearSystem& sys, int k, const ControlSequence& controls,
                 double fd_step = kDefaultFdStep, double tol = kDefaultRankTol);

// Endpoints of `count` k-step trajectories from the identity with i.i.d.
// uniform controls; bit-identical replay for a fixed seed.
struct SampleCloud {
    std::vector<GroupPoint> points;
    int k = 0;
    std::uint64_t seed = 0;
    int count = 0;
};

SampleCloud sample_reachable(const LinearSystem& sys, int k, int count, std::uint64_t seed);

// Rank (relative eigenvalue threshold) of the covariance of right-trivialized
// offsets of the cloud points within radius_fraction * (median distance) of
// the center. Throws InsufficientSamples below 20 neighbors.
int empirical_dimension(const LieGroupModel& model, const SampleCloud& cloud,
                        const GroupPoint& center, double radius_fraction = kDefaultRadiusFraction,
                        double rel_threshold = kEmpiricalRankThreshold);

// Empirical probe of the control set D = closure(R) cap C around the
// identity, gated on the ad-rank verdict (the hypothesis of the control-set
// proposition). Evidence, not a proof.
struct ControlSetProbe {
    bool gate_passed = false;
    int ad_rank = 0, n = 0;
    double overlap_fraction = 0.0;
    double epsilon = kDefaultProbeEpsilon;
    int dim_forward = -1, dim_reversed = -1;  // -1: insufficient samples
    bool full_dimension_both = false;
    int k = 0, count = 0;
    std::uint64_t seed = 0;
};

ControlSetProbe control_set_probe(const LinearSystem& sys, int k, int count, std::uint64_t seed,
                                  double epsilon = kDefaultProbeEpsilon,
                                  double radius_fraction = kDefaultRadiusFraction);

}  // namespace liectrl
