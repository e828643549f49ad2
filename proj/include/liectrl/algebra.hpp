#pragma once

#include <Eigen/Dense>
#include <vector>

#include "liectrl/groups.hpp"

namespace liectrl {

// Default relative singular-value cutoff for rank decisions: a singular value
// counts when it exceeds tol * sigma_max.
inline constexpr double kDefaultRankTol = 1e-8;

// Span equality is decided by principal angles below this bound.
inline constexpr double kSpanEqualityTol = 1e-7;

// An orthonormal basis of a subspace of the ambient coordinate space, stored
// as the N x k matrix of its columns together with the tolerance it was
// orthonormalized at. k = 0 is the zero subspace.
struct AlgebraBasis {
    Eigen::MatrixXd vectors;
    double tol = kDefaultRankTol;

    int ambient_dim() const { return static_cast<int>(vectors.rows()); }
    int dimension() const { return static_cast<int>(vectors.cols()); }

    // Whether v lies in the span, up to containment_tol * max(1, |v|).
    bool contains(const Eigen::VectorXd& v, double containment_tol = kSpanEqualityTol) const {
        const Eigen::VectorXd r = v - vectors * (vectors.transpose() * v);
        return r.norm() <= containment_tol * std::max(1.0, v.norm());
    }

    static AlgebraBasis empty(int ambient, double tol = kDefaultRankTol) {
        return AlgebraBasis{Eigen::MatrixXd(ambient, 0), tol};
    }
};

struct RankResult {
    int rank = 0;
    AlgebraBasis column_basis;
};

// Numerical rank and orthonormal column basis of M via SVD. tol is relative:
// rank = #{sigma_i > tol * sigma_max}. Throws InvalidMatrix on empty input or
// non-finite entries.
RankResult numerical_rank(const Eigen::MatrixXd& M, double tol = kDefaultRankTol);

// Orthonormal basis of the span of raw column vectors (not necessarily
// orthonormal). Empty input columns give the zero subspace.
AlgebraBasis span_of_columns(const Eigen::MatrixXd& columns, double tol = kDefaultRankTol);

// Orthonormal basis of span(B1) + span(B2) + ... All inputs must share the
// ambient dimension (DimensionMismatch otherwise).
AlgebraBasis span_union(const std::vector<AlgebraBasis>& bases, double tol = kDefaultRankTol);

// The smallest psi-invariant subspace containing span(B): the column space of
// (psi^{p-1} B ... psi B  B) with p = power_cap. Callers pass the dimension
// of a psi-invariant subspace known to contain B (the ambient dimension is
// always safe). Throws SingularAutomorphism when psi is numerically singular.
AlgebraBasis psi_invariant_hull(const AlgebraBasis& B, const Eigen::MatrixXd& psi,
                                int power_cap, double tol = kDefaultRankTol);

// Largest principal angle between two subspaces of equal dimension; returns
// pi/2 when the dimensions differ.
double max_principal_angle(const AlgebraBasis& A, const AlgebraBasis& B);

bool spans_equal(const AlgebraBasis& A, const AlgebraBasis& B, double tol = kSpanEqualityTol);

// Lie bracket of two algebra elements via the model's declared mechanism.
// Throws NotInAlgebra when an argument is outside the model's algebra
// subspace.
AlgebraVector bracket(const LieGroupModel& model, const AlgebraVector& X, const AlgebraVector& Y);

// Smallest bracket-closed subspace containing the generators: alternates
// span_union with pairwise brackets of the current basis until the rank
// stabilizes. Terminates within group_dim rounds.
AlgebraBasis subalgebra_closure(const LieGroupModel& model, const AlgebraBasis& generators,
                                double tol = kDefaultRankTol);

}  // namespace liectrl
