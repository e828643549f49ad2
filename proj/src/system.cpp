#include "liectrl/system.hpp"

#include <cmath>

#include "liectrl/algebra.hpp"

namespace liectrl {

ControlRange::ControlRange(Eigen::VectorXd lo, Eigen::VectorXd hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size() || lower.size() == 0)
        throw DimensionMismatch("ControlRange: bounds must be nonempty and of equal length");
    for (int i = 0; i < lower.size(); ++i)
        if (!(lower(i) < 0.0 && 0.0 < upper(i)))
            throw Error("ControlRange: axis " + std::to_string(i + 1) +
                        " must satisfy lower < 0 < upper");
}

bool ControlRange::contains(const Eigen::VectorXd& u) const {
    if (u.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (u(i) < lower(i) || u(i) > upper(i)) return false;
    return true;
}

bool ControlRange::interior(const Eigen::VectorXd& u, double margin) const {
    if (u.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (u(i) - lower(i) < margin || upper(i) - u(i) < margin) return false;
    return true;
}

ValidationReport validate(const LinearSystem& sys, std::uint64_t seed, int samples) {
    ValidationReport report;
    report.seed = seed;
    report.samples = samples;
    Rng rng(seed);
    const LieGroupModel& model = sys.model;

    auto push = [&](const std::string& name, double residual, double threshold) {
        report.checks.push_back({name, residual, threshold, residual <= threshold});
    };

    const Eigen::VectorXd zero_u = Eigen::VectorXd::Zero(sys.range.dim());
    push("F(0) = identity", (sys.control_map(zero_u) - model.identity).norm(), 1e-9);
    push("f0(identity) = identity", (sys.drift.forward(model.identity) - model.identity).norm(),
         1e-9);

    double hom = 0.0, inv = 0.0, memF = 0.0, memf0 = 0.0;
    for (int s = 0; s < samples; ++s) {
        const GroupPoint g = model.random_point(rng);
        const GroupPoint h = model.random_point(rng);
        hom = std::max(hom, (sys.drift.forward(model.product(g, h)) -
                             model.product(sys.drift.forward(g), sys.drift.forward(h)))
                                .norm());
        if (sys.drift.inverse)
            inv = std::max(inv, (sys.drift.inverse(sys.drift.forward(g)) - g).norm());
        memf0 = std::max(memf0, model.membership_residual(sys.drift.forward(g)));

        Eigen::VectorXd u(sys.range.dim());
        for (int i = 0; i < u.size(); ++i) u(i) = rng.uniform(sys.range.lower(i), sys.range.upper(i));
        memF = std::max(memF, model.membership_residual(sys.control_map(u)));
    }
    push("f0 is a homomorphism", hom, 1e-7);
    if (sys.drift.inverse) push("f0_inverse inverts f0", inv, 1e-7);
    push("F(U) lies in the group", memF, 1e-7);
    push("f0 preserves membership", memf0, 1e-7);
    return report;
}

GroupPoint step(const LinearSystem& sys, const Eigen::VectorXd& u, const GroupPoint& g) {
    if (!sys.range.contains(u))
        throw ControlOutOfRange("step: control outside the admissible box");
    return sys.model.product(sys.control_map(u), sys.drift.forward(g));
}

GroupPoint solve(const LinearSystem& sys, int k, const GroupPoint& g, const ControlSequence& controls) {
    if (k < 0) throw std::invalid_argument("solve: k must be >= 0");
    if (static_cast<int>(controls.size()) < k)
        throw std::invalid_argument("solve: fewer controls than steps");
    GroupPoint x = g;
    for (int i = 0; i < k; ++i) x = step(sys, controls[i], x);
    return x;
}

LinearSystem reversed_system(const LinearSystem& sys) {
    if (!sys.drift.inverse)
        throw NotInvertible("reversed_system: drift automorphism has no inverse");
    const auto model = sys.model;
    const auto F = sys.control_map;
    const auto f0 = sys.drift.forward;
    const auto f0inv = sys.drift.inverse;

    LinearSystem rev{sys.name + "-reversed", model,
                     // f_u^{-1}(e) = f0^{-1}(F(u)^{-1})
                     [model, F, f0inv](const Eigen::VectorXd& u) {
                         return f0inv(model.inverse(F(u)));
                     },
                     GroupMap{f0inv, f0}, sys.range};
    return rev;
}

Eigen::MatrixXd hat_derivative_F(const LinearSystem& sys, const Eigen::VectorXd& u, double fd_step) {
    const int m = sys.range.dim();
    if (u.size() != m) throw DimensionMismatch("hat_derivative_F: control has wrong dimension");
    if (!sys.range.interior(u, fd_step))
        throw BoundaryMargin("hat_derivative_F: control too close to the boundary of U");

    const GroupPoint Fu = sys.control_map(u);
    Eigen::MatrixXd D(sys.model.ambient_dim, m);
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd up = u, um = u;
        up(j) += fd_step;
        um(j) -= fd_step;
        const Eigen::VectorXd v = (sys.control_map(up) - sys.control_map(um)) / (2.0 * fd_step);
        D.col(j) = trivialize_tangent(sys.model, Fu, v);
    }
    return D;
}

Eigen::MatrixXd infinitesimal_automorphism(const LinearSystem& sys, double fd_step) {
    const LieGroupModel& model = sys.model;
    const int N = model.ambient_dim;
    Eigen::MatrixXd psi(N, N);
    for (int i = 0; i < N; ++i) {
        GroupPoint ep = model.identity, em = model.identity;
        ep(i) += fd_step;
        em(i) -= fd_step;
        psi.col(i) = (sys.drift.forward(ep) - sys.drift.forward(em)) / (2.0 * fd_step);
    }
    // f0(e) = e, so the hat-derivative needs no trivialization; but psi must
    // act invertibly on the algebra subspace.
    const Eigen::MatrixXd& Q = model.algebra_basis;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Q.transpose() * psi * Q);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= kDefaultRankTol * sv(0))
        throw SingularAutomorphism(
            "infinitesimal_automorphism: psi is rank deficient on the algebra");
    return psi;
}

namespace {

ControlRange symmetric_unit_range() {
    Eigen::VectorXd lo(1), hi(1);
    lo << -1.0;
    hi << 1.0;
    return ControlRange(lo, hi);
}

}  // namespace

LinearSystem make_paper_sl2() {
    LieGroupModel model = make_sl2();
    const MatrixShape shape{2, 2};
    Eigen::Matrix2d h;
    h << 1.0, 1.0, 0.0, 1.0;
    Eigen::Matrix2d hinv;
    hinv << 1.0, -1.0, 0.0, 1.0;

    auto F = [](const Eigen::VectorXd& u) {
        GroupPoint g(4);
        g << 1.0 + u(0), -u(0), u(0), 1.0 - u(0);
        return g;
    };
    auto f0 = [h, hinv, shape](const GroupPoint& g) {
        return to_vector(h * to_matrix(g, shape) * hinv);
    };
    auto f0inv = [h, hinv, shape](const GroupPoint& g) {
        return to_vector(hinv * to_matrix(g, shape) * h);
    };
    return LinearSystem{"paper-sl2", model, F, GroupMap{f0, f0inv}, symmetric_unit_range()};
}

LinearSystem make_paper_aff2(double a, double d) {
    if (d == 0.0) throw Error("paper-aff2: automorphism parameter d must be nonzero");
    LieGroupModel model = make_aff2();
    auto F = [](const Eigen::VectorXd& u) {
        GroupPoint g(2);
        g << std::exp(u(0)), u(0) * u(0);
        return g;
    };
    auto f0 = [a, d](const GroupPoint& g) {
        GroupPoint r(2);
        r << g(0), a * (g(0) - 1.0) + d * g(1);
        return r;
    };
    auto f0inv = [a, d](const GroupPoint& g) {
        GroupPoint r(2);
        r << g(0), (g(1) - a * (g(0) - 1.0)) / d;
        return r;
    };
    return LinearSystem{"paper-aff2", model, F, GroupMap{f0, f0inv}, symmetric_unit_range()};
}

LinearSystem make_paper_heisenberg() {
    LieGroupModel model = make_heisenberg();
    auto F = [](const Eigen::VectorXd& u) {
        GroupPoint g(3);
        g << -u(0) / 2.0 - u(0) * u(0) / 3.0, u(0), u(0) / 2.0;
        return g;
    };
    auto f0 = [](const GroupPoint& x) {
        GroupPoint r(3);
        r << x(0) + x(1) + x(1) * x(1) / 2.0, x(1), x(1) + x(2);
        return r;
    };
    auto f0inv = [](const GroupPoint& y) {
        GroupPoint r(3);
        r << y(0) - y(1) - y(1) * y(1) / 2.0, y(1), y(2) - y(1);
        return r;
    };
    return LinearSystem{"paper-heisenberg", model, F, GroupMap{f0, f0inv}, symmetric_unit_range()};
}

LinearSystem make_rn_linear(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, ControlRange range) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n) throw DimensionMismatch("rn system: A must be square");
    if (B.rows() != n) throw DimensionMismatch("rn system: B must have n rows");
    if (B.cols() != range.dim()) throw DimensionMismatch("rn system: B must have m columns");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) throw NotInvertible("rn system: A must be invertible");
    const Eigen::MatrixXd Ainv = lu.inverse();

    LieGroupModel model = make_rn(n);
    auto F = [B](const Eigen::VectorXd& u) -> GroupPoint { return B * u; };
    auto f0 = [A](const GroupPoint& x) -> GroupPoint { return A * x; };
    auto f0inv = [Ainv](const GroupPoint& x) -> GroupPoint { return Ainv * x; };
    return LinearSystem{"rn-linear", model, F, GroupMap{f0, f0inv}, std::move(range)};
}

}  // namespace liectrl
