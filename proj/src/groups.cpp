#include "liectrl/groups.hpp"

#include <cmath>

namespace liectrl {

namespace {

// Central-difference step for model Jacobians: 1e-5 * max(1, |g|).
constexpr double kModelFdStep = 1e-5;

double fd_step_for(const GroupPoint& g) { return kModelFdStep * std::max(1.0, g.norm()); }

Eigen::MatrixXd orthonormal_sl2_algebra() {
    // Traceless 2x2 matrices in row-major coordinates (a, b, c, d), a + d = 0.
    Eigen::MatrixXd Q(4, 3);
    const double s = 1.0 / std::sqrt(2.0);
    Q.col(0) << s, 0, 0, -s;
    Q.col(1) << 0, 1, 0, 0;
    Q.col(2) << 0, 0, 1, 0;
    return Q;
}

}  // namespace

Eigen::MatrixXd to_matrix(const Eigen::VectorXd& v, const MatrixShape& shape) {
    Eigen::MatrixXd M(shape.rows, shape.cols);
    for (int i = 0; i < shape.rows; ++i)
        for (int j = 0; j < shape.cols; ++j) M(i, j) = v(i * shape.cols + j);
    return M;
}

Eigen::VectorXd to_vector(const Eigen::MatrixXd& M) {
    Eigen::VectorXd v(M.rows() * M.cols());
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) v(i * M.cols() + j) = M(i, j);
    return v;
}

LieGroupModel make_heisenberg() {
    LieGroupModel m;
    m.name = "heisenberg";
    m.ambient_dim = 3;
    m.group_dim = 3;
    m.identity = Eigen::Vector3d::Zero();
    m.algebra_basis = Eigen::MatrixXd::Identity(3, 3);

    // Coordinates follow the matrix model [[1, x2, x1], [0, 1, x3], [0, 0, 1]]
    // (x1 is the corner entry), which gives [a, b] = (a2 b3 - a3 b2, 0, 0).
    StructureConstants sc;
    sc.c.assign(3, Eigen::MatrixXd::Zero(3, 3));
    sc.c[0](1, 2) = 1.0;
    sc.c[0](2, 1) = -1.0;
    m.bracket_mech = sc;

    m.product = [](const GroupPoint& x, const GroupPoint& y) {
        GroupPoint r(3);
        r << x(0) + y(0) + x(1) * y(2), x(1) + y(1), x(2) + y(2);
        return r;
    };
    m.inverse = [](const GroupPoint& x) {
        GroupPoint r(3);
        r << -x(0) + x(1) * x(2), -x(1), -x(2);
        return r;
    };
    m.membership_residual = [](const GroupPoint&) { return 0.0; };
    m.random_point = [](Rng& rng) {
        GroupPoint r(3);
        for (int i = 0; i < 3; ++i) r(i) = rng.uniform(-1.5, 1.5);
        return r;
    };
    return m;
}

LieGroupModel make_aff2() {
    LieGroupModel m;
    m.name = "aff2";
    m.ambient_dim = 2;
    m.group_dim = 2;
    m.identity = Eigen::Vector2d(1.0, 0.0);
    m.algebra_basis = Eigen::MatrixXd::Identity(2, 2);

    // [(x,y),(z,w)] = (0, xw - yz)
    StructureConstants sc;
    sc.c.assign(2, Eigen::MatrixXd::Zero(2, 2));
    sc.c[1](0, 1) = 1.0;
    sc.c[1](1, 0) = -1.0;
    m.bracket_mech = sc;

    m.product = [](const GroupPoint& a, const GroupPoint& b) {
        GroupPoint r(2);
        r << a(0) * b(0), b(1) + b(0) * a(1);
        return r;
    };
    m.inverse = [](const GroupPoint& a) {
        GroupPoint r(2);
        r << 1.0 / a(0), -a(1) / a(0);
        return r;
    };
    m.membership_residual = [](const GroupPoint& g) {
        return g(0) > 0.0 ? 0.0 : 1.0 + std::abs(g(0));
    };
    m.random_point = [](Rng& rng) {
        GroupPoint r(2);
        r << std::exp(rng.uniform(-1.0, 1.0)), rng.uniform(-1.5, 1.5);
        return r;
    };
    return m;
}

LieGroupModel make_sl2() {
    LieGroupModel m;
    m.name = "sl2";
    m.ambient_dim = 4;
    m.group_dim = 3;
    m.identity = Eigen::Vector4d(1.0, 0.0, 0.0, 1.0);
    m.algebra_basis = orthonormal_sl2_algebra();
    m.bracket_mech = MatrixShape{2, 2};

    m.product = [](const GroupPoint& a, const GroupPoint& b) {
        GroupPoint r(4);
        r << a(0) * b(0) + a(1) * b(2), a(0) * b(1) + a(1) * b(3),
            a(2) * b(0) + a(3) * b(2), a(2) * b(1) + a(3) * b(3);
        return r;
    };
    m.inverse = [](const GroupPoint& a) {
        const double det = a(0) * a(3) - a(1) * a(2);
        GroupPoint r(4);
        r << a(3) / det, -a(1) / det, -a(2) / det, a(0) / det;
        return r;
    };
    m.membership_residual = [](const GroupPoint& g) {
        return std::abs(g(0) * g(3) - g(1) * g(2) - 1.0);
    };
    m.random_point = [](Rng& rng) {
        // Pick a, b, c freely and solve for d, so det = 1 up to rounding.
        const double sign = rng.unit() < 0.5 ? -1.0 : 1.0;
        const double a = sign * rng.uniform(0.4, 1.6);
        const double b = rng.uniform(-1.0, 1.0);
        const double c = rng.uniform(-1.0, 1.0);
        GroupPoint r(4);
        r << a, b, c, (1.0 + b * c) / a;
        return r;
    };
    return m;
}

LieGroupModel make_rn(int n) {
    LieGroupModel m;
    m.name = "rn";
    m.ambient_dim = n;
    m.group_dim = n;
    m.identity = Eigen::VectorXd::Zero(n);
    m.algebra_basis = Eigen::MatrixXd::Identity(n, n);

    StructureConstants sc;
    sc.c.assign(n, Eigen::MatrixXd::Zero(n, n));
    m.bracket_mech = sc;

    m.product = [](const GroupPoint& a, const GroupPoint& b) -> GroupPoint { return a + b; };
    m.inverse = [](const GroupPoint& a) -> GroupPoint { return -a; };
    m.membership_residual = [](const GroupPoint&) { return 0.0; };
    m.random_point = [n](Rng& rng) {
        GroupPoint r(n);
        for (int i = 0; i < n; ++i) r(i) = rng.uniform(-1.5, 1.5);
        return r;
    };
    return m;
}

LieGroupModel model_by_name(const std::string& name, int n) {
    if (name == "heisenberg") return make_heisenberg();
    if (name == "aff2") return make_aff2();
    if (name == "sl2") return make_sl2();
    if (name == "rn") {
        if (n < 1) throw Error("model rn requires a positive dimension n");
        return make_rn(n);
    }
    throw Error("unknown group model: " + name);
}

Eigen::MatrixXd right_translation_jacobian(const LieGroupModel& model, const GroupPoint& g) {
    const int N = model.ambient_dim;
    const double h = fd_step_for(g);
    Eigen::MatrixXd J(N, N);
    for (int i = 0; i < N; ++i) {
        GroupPoint ep = model.identity, em = model.identity;
        ep(i) += h;
        em(i) -= h;
        J.col(i) = (model.product(ep, g) - model.product(em, g)) / (2.0 * h);
    }
    return J;
}

AlgebraVector trivialize_tangent(const LieGroupModel& model, const GroupPoint& g,
                                 const Eigen::VectorXd& v) {
    if (v.size() != model.ambient_dim)
        throw DimensionMismatch("trivialize_tangent: tangent vector has wrong dimension");
    if (const auto* shape = std::get_if<MatrixShape>(&model.bracket_mech)) {
        return to_vector(to_matrix(v, *shape) * to_matrix(model.inverse(g), *shape));
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(right_translation_jacobian(model, g));
    if (!lu.isInvertible())
        throw DegenerateChart("trivialize_tangent: singular right-translation Jacobian");
    return lu.solve(v);
}

Eigen::MatrixXd adjoint(const LieGroupModel& model, const GroupPoint& g) {
    const int N = model.ambient_dim;
    Eigen::MatrixXd A(N, N);
    if (const auto* shape = std::get_if<MatrixShape>(&model.bracket_mech)) {
        const Eigen::MatrixXd G = to_matrix(g, *shape);
        const Eigen::MatrixXd Gi = to_matrix(model.inverse(g), *shape);
        for (int i = 0; i < N; ++i) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(N);
            e(i) = 1.0;
            A.col(i) = to_vector(G * to_matrix(e, *shape) * Gi);
        }
        return A;
    }
    const double h = fd_step_for(g);
    for (int i = 0; i < N; ++i) {
        GroupPoint ep = model.identity, em = model.identity;
        ep(i) += h;
        em(i) -= h;
        const Eigen::VectorXd w = (model.product(g, ep) - model.product(g, em)) / (2.0 * h);
        A.col(i) = trivialize_tangent(model, g, w);
    }
    return A;
}

GroupPoint automorphism_power(const LieGroupModel& model, const GroupMap& f0, long k,
                              const GroupPoint& g) {
    if (g.size() != model.ambient_dim)
        throw DimensionMismatch("automorphism_power: point has wrong dimension");
    if (k < 0 && !f0.inverse)
        throw NotInvertible("automorphism_power: negative power needs an inverse map");
    GroupPoint x = g;
    if (k >= 0) {
        for (long i = 0; i < k; ++i) x = f0.forward(x);
    } else {
        for (long i = 0; i < -k; ++i) x = f0.inverse(x);
    }
    return x;
}

}  // namespace liectrl
