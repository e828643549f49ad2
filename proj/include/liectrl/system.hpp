#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "liectrl/groups.hpp"

namespace liectrl {

inline constexpr double kDefaultFdStep = 1e-5;

// Axis-aligned control box U with 0 in its interior (lower < 0 < upper
// componentwise). Degenerate axes are rejected at construction.
struct ControlRange {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    ControlRange(Eigen::VectorXd lo, Eigen::VectorXd hi);

    int dim() const { return static_cast<int>(lower.size()); }
    bool contains(const Eigen::VectorXd& u) const;
    // Strictly inside with at least `margin` to every face.
    bool interior(const Eigen::VectorXd& u, double margin) const;
    ControlRange scaled(double lambda) const { return ControlRange(lambda * lower, lambda * upper); }
};

using ControlSequence = std::vector<Eigen::VectorXd>;

// Discrete-time linear system g_{k+1} = F(u_k) * f0(g_k) on a Lie group
// model: F maps U into G with F(0) = e, and f0 (the drift) is a group
// automorphism with a closed-form inverse when available.
struct LinearSystem {
    std::string name;
    LieGroupModel model;
    std::function<GroupPoint(const Eigen::VectorXd&)> control_map;  // F
    GroupMap drift;                                                 // f0
    ControlRange range;
};

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    std::uint64_t seed = 0;
    int samples = 0;

    bool pass() const {
        for (const CheckResult& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Checks the defining axioms (F(0) = e, f0(e) = e, f0 a homomorphism, inverse
// consistency, membership of F(U) and f0(G)) at `samples` seeded random
// points. Failures are reported, never thrown.
ValidationReport validate(const LinearSystem& sys, std::uint64_t seed, int samples);

// One step: product(F(u), f0(g)). Throws ControlOutOfRange when u is outside
// the box.
GroupPoint step(const LinearSystem& sys, const Eigen::VectorXd& u, const GroupPoint& g);

// k iterated steps driven by controls[0..k-1].
GroupPoint solve(const LinearSystem& sys, int k, const GroupPoint& g, const ControlSequence& controls);

// The reversed-time system g_{k+1} = f_u^{-1}(e) * f0^{-1}(g), itself a
// linear system; its reachable sets are the controllable sets of `sys`.
// Throws NotInvertible when the drift has no inverse.
LinearSystem reversed_system(const LinearSystem& sys);

// d^F_u as an N x m matrix: column j is the right-trivialized central
// difference of F along control axis j. Throws BoundaryMargin when u is
// closer than `fd_step` to the boundary of U.
Eigen::MatrixXd hat_derivative_F(const LinearSystem& sys, const Eigen::VectorXd& u,
                                 double fd_step = kDefaultFdStep);

// The infinitesimal automorphism psi: the ambient N x N Jacobian of f0 at
// the identity (central differences). Throws SingularAutomorphism when psi
// is rank deficient on the algebra subspace.
Eigen::MatrixXd infinitesimal_automorphism(const LinearSystem& sys, double fd_step = kDefaultFdStep);

// Built-in systems pinning the worked examples' parameter choices.
//
// paper-sl2:        F(u) = [[1+u,-u],[u,1-u]], f0 = conjugation by [[1,1],[0,1]],
//                   U = [-1,1].
// paper-aff2:       F(u) = (e^u, u^2), f0(x,y) = (x, a(x-1)+dy), U = [-1,1].
// paper-heisenberg: F(u) = (-u/2 - u^2/3, u, u/2),
//                   f0(x) = (x1+x2+x2^2/2, x2, x2+x3), U = [-1,1].
LinearSystem make_paper_sl2();
LinearSystem make_paper_aff2(double a = 1.0, double d = 1.0);
LinearSystem make_paper_heisenberg();

// x_{k+1} = A x_k + B u_k on the abelian model (A must be invertible).
LinearSystem make_rn_linear(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, ControlRange range);

}  // namespace liectrl
