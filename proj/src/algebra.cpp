#include "liectrl/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace liectrl {

RankResult numerical_rank(const Eigen::MatrixXd& M, double tol) {
    if (M.rows() == 0 || M.cols() == 0) throw InvalidMatrix("numerical_rank: empty matrix");
    if (!M.allFinite()) throw InvalidMatrix("numerical_rank: non-finite entries");
    if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("numerical_rank: tol must be in (0,1)");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * smax) ++rank;
    if (smax == 0.0) rank = 0;

    RankResult res;
    res.rank = rank;
    res.column_basis = AlgebraBasis{svd.matrixU().leftCols(rank), tol};
    return res;
}

AlgebraBasis span_of_columns(const Eigen::MatrixXd& columns, double tol) {
    if (columns.cols() == 0) return AlgebraBasis::empty(static_cast<int>(columns.rows()), tol);
    return numerical_rank(columns, tol).column_basis;
}

AlgebraBasis span_union(const std::vector<AlgebraBasis>& bases, double tol) {
    if (bases.empty()) throw DimensionMismatch("span_union: no inputs");
    const int N = bases.front().ambient_dim();
    int total = 0;
    for (const AlgebraBasis& b : bases) {
        if (b.ambient_dim() != N)
            throw DimensionMismatch("span_union: mismatched ambient dimensions");
        total += b.dimension();
    }
    Eigen::MatrixXd stacked(N, total);
    int at = 0;
    for (const AlgebraBasis& b : bases) {
        stacked.middleCols(at, b.dimension()) = b.vectors;
        at += b.dimension();
    }
    return span_of_columns(stacked, tol);
}

AlgebraBasis psi_invariant_hull(const AlgebraBasis& B, const Eigen::MatrixXd& psi,
                                int power_cap, double tol) {
    const int N = B.ambient_dim();
    if (B.dimension() == 0) throw std::invalid_argument("psi_invariant_hull: empty basis");
    if (psi.rows() != N || psi.cols() != N)
        throw DimensionMismatch("psi_invariant_hull: psi must be N x N");
    if (power_cap < 1) throw std::invalid_argument("psi_invariant_hull: power_cap must be >= 1");

    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(psi);
        const Eigen::VectorXd& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= tol * sv(0))
            throw SingularAutomorphism("psi_invariant_hull: psi is numerically singular");
    }

    const int k = B.dimension();
    Eigen::MatrixXd kalman(N, power_cap * k);
    Eigen::MatrixXd block = B.vectors;
    // Blocks in the order (psi^{p-1} B ... psi B  B).
    for (int p = 0; p < power_cap; ++p) {
        kalman.middleCols((power_cap - 1 - p) * k, k) = block;
        if (p + 1 < power_cap) block = psi * block;
    }
    return span_of_columns(kalman, tol);
}

double max_principal_angle(const AlgebraBasis& A, const AlgebraBasis& B) {
    if (A.dimension() != B.dimension()) return M_PI / 2.0;
    if (A.dimension() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A.vectors.transpose() * B.vectors);
    const double c = std::clamp(svd.singularValues().minCoeff(), -1.0, 1.0);
    return std::acos(c);
}

bool spans_equal(const AlgebraBasis& A, const AlgebraBasis& B, double tol) {
    return A.dimension() == B.dimension() && max_principal_angle(A, B) < tol;
}

namespace {

// Membership cutoff for bracket arguments, relative to the vector norm.
constexpr double kAlgebraMembershipTol = 1e-7;

void require_in_algebra(const LieGroupModel& model, const AlgebraVector& X, const char* who) {
    if (X.size() != model.ambient_dim)
        throw DimensionMismatch(std::string(who) + ": vector has wrong ambient dimension");
    if (model.algebra_residual(X) > kAlgebraMembershipTol * std::max(1.0, X.norm()))
        throw NotInAlgebra(std::string(who) + ": vector outside the model's algebra subspace");
}

}  // namespace

AlgebraVector bracket(const LieGroupModel& model, const AlgebraVector& X, const AlgebraVector& Y) {
    require_in_algebra(model, X, "bracket");
    require_in_algebra(model, Y, "bracket");
    if (const auto* shape = std::get_if<MatrixShape>(&model.bracket_mech)) {
        const Eigen::MatrixXd Xm = to_matrix(X, *shape);
        const Eigen::MatrixXd Ym = to_matrix(Y, *shape);
        return to_vector(Xm * Ym - Ym * Xm);
    }
    const auto& sc = std::get<StructureConstants>(model.bracket_mech);
    AlgebraVector out(model.ambient_dim);
    for (int k = 0; k < model.ambient_dim; ++k) out(k) = X.dot(sc.c[k] * Y);
    return out;
}

AlgebraBasis subalgebra_closure(const LieGroupModel& model, const AlgebraBasis& generators,
                                double tol) {
    AlgebraBasis S = span_of_columns(generators.vectors, tol);
    if (S.dimension() == 0) return S;

    auto close_once = [&](const AlgebraBasis& basis) {
        const int k = basis.dimension();
        Eigen::MatrixXd stacked(model.ambient_dim, k + k * (k - 1) / 2);
        stacked.leftCols(k) = basis.vectors;
        int at = k;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                stacked.col(at++) = bracket(model, basis.vectors.col(i), basis.vectors.col(j));
        return span_of_columns(stacked, tol);
    };

    // Each round either stabilizes or gains at least one dimension, so
    // group_dim rounds suffice; anything more is a float pathology.
    for (int round = 0; round <= model.group_dim; ++round) {
        AlgebraBasis next = close_once(S);
        if (next.dimension() == S.dimension()) return next;
        if (round == model.group_dim)
            throw Error("subalgebra_closure: rank still growing after group_dim rounds");
        S = next;
    }
    return S;
}

}  // namespace liectrl
