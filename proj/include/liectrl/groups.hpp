#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "liectrl/errors.hpp"
#include "liectrl/random.hpp"

namespace liectrl {

// Points and algebra elements are plain ambient coordinate vectors of length
// N (the model's ambient dimension). Heisenberg N=3, Aff2 N=2, SL2 N=4
// (row-major 2x2), R^n N=n.
using GroupPoint = Eigen::VectorXd;
using AlgebraVector = Eigen::VectorXd;

// How a model evaluates the Lie bracket on ambient coordinates.
//
// StructureConstants applies to coordinate models where the ambient
// coordinates are the algebra coordinates: [e_i, e_j] = sum_k c[k](i,j) e_k.
// MatrixShape reinterprets ambient vectors as row-major r x c matrices and
// takes the commutator XY - YX.
struct StructureConstants {
    std::vector<Eigen::MatrixXd> c;
};
struct MatrixShape {
    int rows = 0;
    int cols = 0;
};
using BracketMechanism = std::variant<StructureConstants, MatrixShape>;

// A Lie group presented in ambient coordinates. Immutable after construction;
// all member callables are pure.
struct LieGroupModel {
    std::string name;
    int ambient_dim = 0;  // N
    int group_dim = 0;    // n
    GroupPoint identity;
    Eigen::MatrixXd algebra_basis;  // N x n, orthonormal columns
    BracketMechanism bracket_mech;

    std::function<GroupPoint(const GroupPoint&, const GroupPoint&)> product;
    std::function<GroupPoint(const GroupPoint&)> inverse;
    // 0 on the model; grows with the constraint violation (SL2: |det - 1|).
    std::function<double(const GroupPoint&)> membership_residual;
    // Seeded sampler used by validation and the property tests.
    std::function<GroupPoint(Rng&)> random_point;

    bool contains(const GroupPoint& g, double tol = 1e-9) const {
        return g.size() == ambient_dim && membership_residual(g) <= tol;
    }

    // Distance from X to the algebra subspace span(algebra_basis).
    double algebra_residual(const AlgebraVector& X) const {
        return (X - algebra_basis * (algebra_basis.transpose() * X)).norm();
    }

    bool is_matrix_model() const {
        return std::holds_alternative<MatrixShape>(bracket_mech);
    }
};

// Built-in catalog. CLI names: heisenberg, aff2, sl2, rn.
LieGroupModel make_heisenberg();
LieGroupModel make_aff2();
LieGroupModel make_sl2();
LieGroupModel make_rn(int n);
LieGroupModel model_by_name(const std::string& name, int n = 0);

// A map G -> G together with an optional closed-form inverse. `inverse` may
// be left empty when none is available.
struct GroupMap {
    std::function<GroupPoint(const GroupPoint&)> forward;
    std::function<GroupPoint(const GroupPoint&)> inverse;
};

// d(R_g)_e as an N x N ambient matrix, i.e. the Jacobian of h -> product(h,g)
// at h = identity, by central differences.
Eigen::MatrixXd right_translation_jacobian(const LieGroupModel& model, const GroupPoint& g);

// Solves phi_g(X) = v for X, where phi_g = d(R_g)_e maps the algebra onto the
// tangent space at g. Matrix models use X = v * g^{-1}; coordinate models
// solve the finite-difference Jacobian system. Throws DegenerateChart when
// the Jacobian is singular.
AlgebraVector trivialize_tangent(const LieGroupModel& model, const GroupPoint& g,
                                 const Eigen::VectorXd& v);

// Ad(g) as an N x N ambient matrix: the hat-derivative of the left
// translation L_g. Matrix models conjugate the ambient basis; coordinate
// models differentiate h -> product(g, h) at e and trivialize at g.
Eigen::MatrixXd adjoint(const LieGroupModel& model, const GroupPoint& g);

// f0^k(g) by iterated application; k < 0 uses the inverse map and throws
// NotInvertible when it is missing.
GroupPoint automorphism_power(const LieGroupModel& model, const GroupMap& f0, long k,
                              const GroupPoint& g);

// Reshape helpers for matrix models (row-major).
Eigen::MatrixXd to_matrix(const Eigen::VectorXd& v, const MatrixShape& shape);
Eigen::VectorXd to_vector(const Eigen::MatrixXd& M);

}  // namespace liectrl
