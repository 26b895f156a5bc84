#pragma once

#include "modukin/types.hpp"

#include <concepts>

// Joint-space dynamics assembled by summing over lumped bodies:
//
//   M(q)   = sum_b  m_b Jc_b^T Jc_b + I_b Jw_b^T Jw_b
//   tau_g  = -sum_b m_b Jc_b^T g
//   C(q,w) from Christoffel symbols of the first kind of M.
//
// Each body is a slender rod (or point mass, I_b = 0) whose angular velocity
// is perpendicular to the rod and whose angular Jacobian does not depend on q.
// Both the modular chain and the SCARA arm satisfy this.

namespace modukin::multibody {

template <int N>
using Vector = Eigen::Matrix<double, N, 1>;
template <int N>
using Matrix = Eigen::Matrix<double, N, N>;
template <int N>
using BodyJacobian = Eigen::Matrix<double, 3, N>;

template <int N>
struct BodyKinematics {
  Vec3 com = Vec3::Zero();
  BodyJacobian<N> com_jacobian = BodyJacobian<N>::Zero();
  BodyJacobian<N> angular_jacobian = BodyJacobian<N>::Zero();
  /// d(com_jacobian)/dq_k for each k.
  std::array<BodyJacobian<N>, N> com_jacobian_partials{};
};

template <class M>
concept LumpedBodyModel = requires(const M& model, const Vector<M::kDofs>& q, int b) {
  { M::kDofs } -> std::convertible_to<int>;
  { model.body_count() } -> std::convertible_to<int>;
  { model.body_mass(b) } -> std::convertible_to<double>;
  { model.body_transverse_inertia(b) } -> std::convertible_to<double>;
  { model.body_kinematics(b, q) } -> std::same_as<BodyKinematics<M::kDofs>>;
  { model.gravity() } -> std::convertible_to<Vec3>;
};

template <LumpedBodyModel Model>
double total_mass(const Model& model) {
  double m = 0.0;
  for (int b = 0; b < model.body_count(); ++b) m += model.body_mass(b);
  return m;
}

template <LumpedBodyModel Model>
void require_well_posed(const Model& model) {
  if (!(total_mass(model) > 0.0)) throw Error(ErrorCode::IllPosed, "total moving mass is zero");
}

template <LumpedBodyModel Model>
Matrix<Model::kDofs> mass_matrix(const Model& model, const Vector<Model::kDofs>& q) {
  require_well_posed(model);
  Matrix<Model::kDofs> m = Matrix<Model::kDofs>::Zero();
  for (int b = 0; b < model.body_count(); ++b) {
    const double mass = model.body_mass(b);
    const double inertia = model.body_transverse_inertia(b);
    if (mass == 0.0 && inertia == 0.0) continue;
    const auto kin = model.body_kinematics(b, q);
    m.noalias() += mass * kin.com_jacobian.transpose() * kin.com_jacobian;
    m.noalias() += inertia * kin.angular_jacobian.transpose() * kin.angular_jacobian;
  }
  // Exact symmetry; the products above agree only to rounding.
  return 0.5 * (m + m.transpose());
}

/// dM/dq_k for every k, analytic.
template <LumpedBodyModel Model>
std::array<Matrix<Model::kDofs>, Model::kDofs> mass_matrix_partials(const Model& model,
                                                                    const Vector<Model::kDofs>& q) {
  constexpr int n = Model::kDofs;
  require_well_posed(model);
  std::array<Matrix<n>, n> dm;
  for (auto& d : dm) d.setZero();
  for (int b = 0; b < model.body_count(); ++b) {
    const double mass = model.body_mass(b);
    if (mass == 0.0) continue;
    const auto kin = model.body_kinematics(b, q);
    for (int k = 0; k < n; ++k) {
      const Matrix<n> half =
          mass * kin.com_jacobian_partials[static_cast<std::size_t>(k)].transpose() *
          kin.com_jacobian;
      dm[static_cast<std::size_t>(k)] += half + half.transpose();
    }
  }
  return dm;
}

/// C with C_ij = sum_k 1/2 (dM_ij/dq_k + dM_ik/dq_j - dM_jk/dq_i) w_k, so that
/// the velocity-product torque is C w and Mdot - 2C is skew-symmetric.
template <int N>
Matrix<N> christoffel_matrix(const std::array<Matrix<N>, N>& dm, const Vector<N>& omega) {
  Matrix<N> c = Matrix<N>::Zero();
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      double sum = 0.0;
      for (int k = 0; k < N; ++k) {
        const auto& dk = dm[static_cast<std::size_t>(k)];
        const auto& dj = dm[static_cast<std::size_t>(j)];
        const auto& di = dm[static_cast<std::size_t>(i)];
        sum += 0.5 * (dk(i, j) + dj(i, k) - di(j, k)) * omega[k];
      }
      c(i, j) = sum;
    }
  }
  return c;
}

template <int N>
Matrix<N> mass_matrix_rate(const std::array<Matrix<N>, N>& dm, const Vector<N>& omega) {
  Matrix<N> md = Matrix<N>::Zero();
  for (int k = 0; k < N; ++k) md += dm[static_cast<std::size_t>(k)] * omega[k];
  return md;
}

template <LumpedBodyModel Model>
Matrix<Model::kDofs> christoffel_matrix(const Model& model, const Vector<Model::kDofs>& q,
                                        const Vector<Model::kDofs>& omega) {
  return christoffel_matrix<Model::kDofs>(mass_matrix_partials(model, q), omega);
}

template <LumpedBodyModel Model>
Vector<Model::kDofs> coriolis_vector(const Model& model, const Vector<Model::kDofs>& q,
                                     const Vector<Model::kDofs>& omega) {
  return christoffel_matrix(model, q, omega) * omega;
}

/// Gradient of the potential energy, i.e. the torque needed to hold against gravity.
template <LumpedBodyModel Model>
Vector<Model::kDofs> gravity_vector(const Model& model, const Vector<Model::kDofs>& q) {
  require_well_posed(model);
  Vector<Model::kDofs> tau = Vector<Model::kDofs>::Zero();
  const Vec3 g = model.gravity();
  for (int b = 0; b < model.body_count(); ++b) {
    const double mass = model.body_mass(b);
    if (mass == 0.0) continue;
    tau.noalias() -= mass * model.body_kinematics(b, q).com_jacobian.transpose() * g;
  }
  return tau;
}

template <LumpedBodyModel Model>
double potential_energy(const Model& model, const Vector<Model::kDofs>& q) {
  require_well_posed(model);
  double u = 0.0;
  const Vec3 g = model.gravity();
  for (int b = 0; b < model.body_count(); ++b) {
    const double mass = model.body_mass(b);
    if (mass == 0.0) continue;
    u -= mass * g.dot(model.body_kinematics(b, q).com);
  }
  return u;
}

template <LumpedBodyModel Model>
double kinetic_energy(const Model& model, const Vector<Model::kDofs>& q,
                      const Vector<Model::kDofs>& omega) {
  return 0.5 * omega.dot(mass_matrix(model, q) * omega);
}

}  // namespace modukin::multibody
