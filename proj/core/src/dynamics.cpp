#include "specid/dynamics.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "specid/error.hpp"

namespace specid {

UnitModel linear_unit(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      const Eigen::MatrixXd& C) {
  if (A.rows() != A.cols()) throw InvalidArgument("linear_unit: A must be square");
  if (B.rows() != A.rows() || C.rows() != A.rows() || C.cols() != B.cols()) {
    throw InvalidArgument("linear_unit: expected A m x m, B m x r, C m x r");
  }
  UnitModel model;
  model.m = static_cast<int>(A.rows());
  model.r = static_cast<int>(B.cols());
  model.F = [A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; };
  model.G = [B](const Eigen::VectorXd&) -> Eigen::MatrixXd { return B; };
  model.H = [C](const Eigen::VectorXd& x) -> Eigen::VectorXd { return C.transpose() * x; };
  model.x_star = Eigen::VectorXd::Zero(model.m);
  model.jacobian_F = A;
  model.jacobian_H = C.transpose();
  model.name = "linear";
  return model;
}

UnitModel linear_preset() {
  Eigen::Matrix2d A;
  A << -1.0, -2.0, 1.0, -1.0;
  Eigen::Matrix2d B = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  return linear_unit(A, B, Eigen::Matrix2d::Identity());
}

UnitModel brusselator_preset(double a, double b, double b_coupling_2) {
  if (a <= 0.0 || b < 0.0) throw InvalidArgument("brusselator: need a > 0 and b >= 0");
  UnitModel model;
  model.m = 2;
  model.r = 2;
  model.F = [a, b](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double x1sq_x2 = x(0) * x(0) * x(1);
    Eigen::VectorXd f(2);
    f(0) = 1.0 - (b + 1.0) * x(0) + a * x1sq_x2;
    f(1) = b * x(0) - a * x1sq_x2;
    return f;
  };
  Eigen::MatrixXd B = Eigen::Vector2d(1.0, b_coupling_2).asDiagonal();
  model.G = [B](const Eigen::VectorXd&) -> Eigen::MatrixXd { return B; };
  model.H = [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x; };
  model.x_star = Eigen::Vector2d(1.0, b / a);
  Eigen::MatrixXd J(2, 2);
  J << b - 1.0, a, -b, -a;
  model.jacobian_F = J;
  model.jacobian_H = Eigen::MatrixXd::Identity(2, 2);
  model.name = "brusselator";
  model.parameters = {{"a", a}, {"b", b}, {"coupling_2", b_coupling_2}};
  return model;
}

int numerical_rank(const Eigen::MatrixXd& M, double relative_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > relative_tol * s(0)) ++rank;
  }
  return rank;
}

namespace {

Eigen::MatrixXd central_difference(const UnitModel::VectorMap& f, const Eigen::VectorXd& x,
                                   int rows) {
  const int cols = static_cast<int>(x.size());
  Eigen::MatrixXd J(rows, cols);
  for (int c = 0; c < cols; ++c) {
    const double h = 1e-6 * (1.0 + std::abs(x(c)));
    Eigen::VectorXd xp = x, xm = x;
    xp(c) += h;
    xm(c) -= h;
    J.col(c) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

}  // namespace

LinearizedSystem linearize(const UnitModel& model, double fixed_point_tol) {
  if (model.m <= 0 || model.r <= 0 || !model.F || !model.G || !model.H) {
    throw InvalidArgument("linearize: incomplete unit model");
  }
  if (model.x_star.size() != model.m) {
    throw InvalidArgument("linearize: x_star has wrong dimension");
  }
  const Eigen::VectorXd f_star = model.F(model.x_star);
  if (f_star.size() != model.m || !f_star.allFinite()) {
    throw InvalidArgument("linearize: F does not evaluate finitely at x_star");
  }
  if (f_star.cwiseAbs().maxCoeff() > fixed_point_tol) {
    throw PreconditionViolation("linearize: x_star is not a fixed point, |F(x*)|_inf = " +
                                std::to_string(f_star.cwiseAbs().maxCoeff()));
  }
  LinearizedSystem sys;
  sys.x_star = model.x_star;
  sys.A = model.jacobian_F ? *model.jacobian_F
                           : central_difference(model.F, model.x_star, model.m);
  sys.B = model.G(model.x_star);
  if (sys.B.rows() != model.m || sys.B.cols() != model.r) {
    throw InvalidArgument("linearize: G(x*) must be m x r");
  }
  const Eigen::MatrixXd jac_h = model.jacobian_H
                                    ? *model.jacobian_H
                                    : central_difference(model.H, model.x_star, model.r);
  if (jac_h.rows() != model.r || jac_h.cols() != model.m) {
    throw InvalidArgument("linearize: Jacobian of H must be r x m");
  }
  sys.C = jac_h.transpose();
  sys.m_bar = numerical_rank(sys.coupling());
  return sys;
}

LinearizedSystem make_linear_system(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C) {
  if (A.rows() != A.cols() || B.rows() != A.rows() || C.rows() != A.rows() ||
      C.cols() != B.cols()) {
    throw InvalidArgument("make_linear_system: expected A m x m, B m x r, C m x r");
  }
  LinearizedSystem sys;
  sys.x_star = Eigen::VectorXd::Zero(A.rows());
  sys.A = std::move(A);
  sys.B = std::move(B);
  sys.C = std::move(C);
  sys.m_bar = numerical_rank(sys.coupling());
  return sys;
}

Eigen::MatrixXd build_jacobian(const LinearizedSystem& sys, const Laplacian& L) {
  const int m = sys.m();
  const int n = L.size();
  const Eigen::MatrixXd BCt = sys.coupling();
  if (BCt.rows() != m || BCt.cols() != m || L.matrix.cols() != n) {
    throw InvalidArgument("build_jacobian: dimension mismatch");
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m * n, m * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto block = J.block(i * m, j * m, m, m);
      if (L.matrix(i, j) != 0.0) block = -L.matrix(i, j) * BCt;
      if (i == j) block += sys.A;
    }
  }
  return J;
}

ComplexList jacobian_spectrum(const Eigen::MatrixXd& J) {
  if (J.rows() != J.cols()) throw InvalidArgument("jacobian_spectrum: matrix must be square");
  if (!J.allFinite()) throw InvalidArgument("jacobian_spectrum: non-finite entries");
  ComplexList out;
  if (J.size() == 0) return out;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(J, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("jacobian_spectrum: eigensolver did not converge (dim=" +
                           std::to_string(J.rows()) + ")");
  }
  out.assign(solver.eigenvalues().begin(), solver.eigenvalues().end());
  sort_complex(out);
  return out;
}

NetworkVectorField::NetworkVectorField(UnitModel model, WeightedGraph graph)
    : model_(std::move(model)), graph_(std::move(graph)), degrees_(graph_.degrees()) {
  if (model_.m <= 0 || model_.r <= 0 || !model_.F || !model_.G || !model_.H) {
    throw InvalidArgument("assemble_network_rhs: incomplete unit model");
  }
  if (graph_.size() == 0) throw InvalidArgument("assemble_network_rhs: empty graph");
}

Eigen::VectorXd NetworkVectorField::operator()(const Eigen::VectorXd& x) const {
  const int m = model_.m;
  const int n = graph_.size();
  if (x.size() != m * n) throw InvalidArgument("network vector field: wrong state dimension");
  Eigen::MatrixXd Y(model_.r, n);
  for (int k = 0; k < n; ++k) Y.col(k) = model_.H(x.segment(k * m, m));
  // u_k = sum_j W_kj (y_j - y_k) = (Y W^T)_k - d_k y_k
  Eigen::MatrixXd U = Y * graph_.weights().transpose();
  U -= Y * degrees_.asDiagonal();
  Eigen::VectorXd dx(m * n);
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXd xk = x.segment(k * m, m);
    dx.segment(k * m, m) = model_.F(xk) + model_.G(xk) * U.col(k);
  }
  return dx;
}

NetworkVectorField assemble_network_rhs(const UnitModel& model, const WeightedGraph& g) {
  return NetworkVectorField(model, g);
}

Trajectory simulate(const VectorField& rhs, const Eigen::VectorXd& x0, double dt, int K,
                    int substeps) {
  if (!(dt > 0.0)) throw InvalidArgument("simulate: dt must be positive");
  if (substeps < 1) throw InvalidArgument("simulate: substeps must be >= 1");
  if (K < 0) throw InvalidArgument("simulate: K must be nonnegative");
  const double h = dt / substeps;
  Trajectory traj(x0.size(), K + 1);
  traj.col(0) = x0;
  Eigen::VectorXd x = x0;
  for (int k = 1; k <= K; ++k) {
    for (int s = 0; s < substeps; ++s) {
      const Eigen::VectorXd k1 = rhs(x);
      const Eigen::VectorXd k2 = rhs(x + 0.5 * h * k1);
      const Eigen::VectorXd k3 = rhs(x + 0.5 * h * k2);
      const Eigen::VectorXd k4 = rhs(x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!x.allFinite()) {
      throw DivergenceError("simulate: non-finite state at snapshot " + std::to_string(k), k);
    }
    traj.col(k) = x;
  }
  return traj;
}

std::vector<Eigen::VectorXd> sample_initial_conditions(const Eigen::VectorXd& x_star, int n,
                                                       int q, double width,
                                                       std::uint64_t seed) {
  if (n <= 0 || q < 0) throw InvalidArgument("sample_initial_conditions: bad n or q");
  if (!(width >= 0.0)) throw InvalidArgument("sample_initial_conditions: width must be >= 0");
  const auto m = x_star.size();
  Rng rng(seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(q);
  for (int j = 0; j < q; ++j) {
    Eigen::VectorXd x0(m * n);
    for (int k = 0; k < n; ++k) {
      for (Eigen::Index c = 0; c < m; ++c) {
        const double u = rng.uniform() - 0.5;
        x0(k * m + c) = width == 0.0 ? x_star(c) : x_star(c) + width * u;
      }
    }
    out.push_back(std::move(x0));
  }
  return out;
}

std::vector<Eigen::VectorXd> sample_initial_conditions(const LinearizedSystem& sys, int n,
                                                       int q, double width,
                                                       std::uint64_t seed) {
  return sample_initial_conditions(sys.x_star, n, q, width, seed);
}

Eigen::MatrixXd measure(const Trajectory& traj, const std::vector<int>& selector) {
  if (selector.empty()) throw InvalidArgument("measure: empty selector");
  Eigen::MatrixXd out(selector.size(), traj.cols());
  for (std::size_t i = 0; i < selector.size(); ++i) {
    const int idx = selector[i];
    if (idx < 0 || idx >= traj.rows()) {
      throw InvalidArgument("measure: selector index " + std::to_string(idx) +
                            " out of range [0, " + std::to_string(traj.rows()) + ")");
    }
    out.row(static_cast<Eigen::Index>(i)) = traj.row(idx);
  }
  return out;
}

}  // namespace specid
