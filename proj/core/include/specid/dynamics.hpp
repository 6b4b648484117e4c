#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specid/graph.hpp"
#include "specid/types.hpp"

namespace specid {

/// Identical unit attached to every node:
///   dx/dt = F(x) + G(x) u,   y = H(x),   u_k = sum_j W_kj (y_j - y_k).
struct UnitModel {
  using VectorMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using MatrixMap = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  int m = 0;  // state dimension
  int r = 0;  // coupling dimension
  VectorMap F;
  MatrixMap G;  // m x r
  VectorMap H;  // R^m -> R^r
  Eigen::VectorXd x_star;

  // Exact Jacobians at x_star, used instead of finite differences when set.
  std::optional<Eigen::MatrixXd> jacobian_F;  // m x m
  std::optional<Eigen::MatrixXd> jacobian_H;  // r x m

  std::string name;
  std::map<std::string, double> parameters;
};

/// Linearization at the synchronized equilibrium. `C` follows the gradient
/// convention (m x r, C = Jac(H)^T) so the coupling block is B C^T (m x m).
struct LinearizedSystem {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  Eigen::VectorXd x_star;
  int m_bar = 0;

  int m() const noexcept { return static_cast<int>(A.rows()); }
  Eigen::MatrixXd coupling() const { return B * C.transpose(); }
};

// Presets.
UnitModel linear_unit(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      const Eigen::MatrixXd& C);
/// dx = [[-1,-2],[1,-1]] x + diag(1,2) u, y = x.
UnitModel linear_preset();
/// Brusselator with coupling B = diag(1, 4.5), C = I; x* = (1, b/a).
UnitModel brusselator_preset(double a = 15.0, double b = 9.0,
                             double b_coupling_2 = 4.5);

/// Rank with singular values below 1e-10 * sigma_max treated as zero.
int numerical_rank(const Eigen::MatrixXd& M, double relative_tol = 1e-10);

LinearizedSystem linearize(const UnitModel& model, double fixed_point_tol = 1e-8);

/// Builds a linearized system directly from matrices (x* = 0).
LinearizedSystem make_linear_system(Eigen::MatrixXd A, Eigen::MatrixXd B,
                                    Eigen::MatrixXd C);

/// J = I_n (x) A - L (x) B C^T.
Eigen::MatrixXd build_jacobian(const LinearizedSystem& sys, const Laplacian& L);

/// Eigenvalues of J sorted by (real, imag).
ComplexList jacobian_spectrum(const Eigen::MatrixXd& J);

/// Vector field of the coupled network on R^{mn}; node k occupies entries
/// [k*m, (k+1)*m). Immutable after construction, safe to share across threads.
class NetworkVectorField {
 public:
  NetworkVectorField(UnitModel model, WeightedGraph graph);

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  int dimension() const noexcept { return model_.m * graph_.size(); }
  const UnitModel& model() const noexcept { return model_; }

 private:
  UnitModel model_;
  WeightedGraph graph_;
  Eigen::VectorXd degrees_;
};

NetworkVectorField assemble_network_rhs(const UnitModel& model, const WeightedGraph& g);

using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Trajectory sampled every dt: column k is the state at t = k * dt.
using Trajectory = Eigen::MatrixXd;

/// Fixed-step classical RK4 with step dt / substeps.
Trajectory simulate(const VectorField& rhs, const Eigen::VectorXd& x0, double dt,
                    int K, int substeps = 10);

/// q initial states, each component drawn from
/// U[x*_c - width/2, x*_c + width/2] around the synchronized state x* (x) 1_n.
std::vector<Eigen::VectorXd> sample_initial_conditions(const Eigen::VectorXd& x_star,
                                                       int n, int q, double width,
                                                       std::uint64_t seed);

std::vector<Eigen::VectorXd> sample_initial_conditions(const LinearizedSystem& sys,
                                                       int n, int q, double width,
                                                       std::uint64_t seed);

/// Selected state coordinates at each snapshot: p x (K+1).
Eigen::MatrixXd measure(const Trajectory& traj, const std::vector<int>& selector);

}  // namespace specid
