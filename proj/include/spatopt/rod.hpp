#pragma once

#include "spatopt/section.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <vector>

namespace spatopt {

/// Material and length parameters. Moduli in kPa, I_T in mm^4, H in mm.
struct MaterialParams {
  double youngs_modulus = 300.0;
  double shear_modulus = 100.0;
  double shear_correction = 1.0;
  double torsion_moment = 0.0;
  double length = 100.0;

  void validate() const;
};

/// Supply pressures in kPa.
struct PressureTriple {
  std::array<double, 3> p{0.0, 0.0, 0.0};

  static constexpr double kMax = 100.0;
  void validate() const;
  bool operator==(const PressureTriple&) const = default;
};

/// Newton start for the base loads.
enum class InitialGuess {
  Zero,            // unloaded base
  ConstantStrain,  // base loads of the uniform-strain solution, n(0) = F, m(0) = L
};

/// Shooting-method settings.
struct SolverConfig {
  int steps = 100;               // RK4 steps over the length
  double tolerance = 1e-8;       // residual norm, mixed N / N mm
  int max_iterations = 50;
  double fd_step = 1e-6;         // forward-difference step in load units
  int continuation_steps = 4;    // first continuation subdivision, doubled on failure
  int max_continuation_steps = 32;
  InitialGuess initial_guess = InitialGuess::ConstantStrain;
};

/// Diagonal stiffness in the principal frame. K in N, J in N mm^2.
struct Stiffness {
  Eigen::Vector3d k = Eigen::Vector3d::Zero();
  Eigen::Vector3d j = Eigen::Vector3d::Zero();
};

Stiffness stiffness_matrices(const SectionProperties& section, const MaterialParams& mat);

/// Per-supply resultant force P_i A_i (N) and its point of attack r_i (mm), principal frame.
struct ChamberLoad {
  double force = 0.0;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
};

struct RodLoads {
  std::array<ChamberLoad, 3> chambers{};
  /// Additional moment applied at the tip, expressed in the tip frame (N mm).
  /// Zero for pressure actuation; exposed for small-load verification.
  Eigen::Vector3d extra_tip_moment = Eigen::Vector3d::Zero();

  double total_force() const { return chambers[0].force + chambers[1].force + chambers[2].force; }
};

RodLoads pressure_loads(const SectionProperties& section, const PressureTriple& pressures);

/// Point loads at the closed tip in the tip frame: F = sum P_i A_i e3, L = sum r_i x F_i.
struct TipLoads {
  Eigen::Vector3d force = Eigen::Vector3d::Zero();
  Eigen::Vector3d moment = Eigen::Vector3d::Zero();
};

TipLoads pressure_point_loads(const SectionProperties& section, const PressureTriple& pressures);
TipLoads tip_loads(const RodLoads& loads);

/// Centerline state at arc length s. Position in mm, quaternion local-to-global,
/// internal force (N) and moment (N mm) in the global frame.
struct RodState {
  double s = 0.0;
  Eigen::Vector3d h = Eigen::Vector3d::Zero();
  Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
};

struct RodDerivative {
  Eigen::Vector3d h = Eigen::Vector3d::Zero();
  Eigen::Vector4d q = Eigen::Vector4d::Zero();  // (w, x, y, z)
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
};

/// Strains at a state: v = v* + K^-1 R^T n, u = J^-1 R^T m with u_3 = 0.
struct Strains {
  Eigen::Vector3d v;
  Eigen::Vector3d u;
};

/// Stiffness and loads prepared once per solve. Throws ConfigurationError
/// on zero stiffness entries other than torsion.
class RodModel {
 public:
  RodModel(const Stiffness& stiffness, const RodLoads& loads, double length);
  RodModel(const SectionProperties& section, const MaterialParams& mat, const PressureTriple& pressures);

  const Stiffness& stiffness() const { return stiffness_; }
  const RodLoads& loads() const { return loads_; }
  double length() const { return length_; }

  Strains strains(const RodState& state) const;
  /// Static Cosserat equilibrium with distributed pressure loads.
  RodDerivative rhs(const RodState& state) const;

 private:
  Stiffness stiffness_;
  RodLoads loads_;
  double length_;
  Eigen::Vector3d k_inv_;
  Eigen::Vector3d j_inv_;
};

RodDerivative ode_rhs(const RodState& state, const SectionProperties& section, const MaterialParams& mat,
                      const PressureTriple& pressures);

struct RodSolution {
  std::vector<RodState> states;
  Eigen::Vector3d tip = Eigen::Vector3d::Zero();
  bool converged = false;
  double residual_norm = 0.0;
  int iterations = 0;
  int continuation_steps = 0;  // 0 when the cold start succeeded
  /// Base loads found by the shooting method: (n_x, n_y, n_z, m_x, m_y) at s = 0.
  Eigen::Matrix<double, 5, 1> base_loads = Eigen::Matrix<double, 5, 1>::Zero();
};

/// Integrates from the clamped base with the given base loads; returns all nodes.
std::vector<RodState> integrate_rod(const RodModel& model, const Eigen::Matrix<double, 5, 1>& base, int steps);

/// Tip boundary residual for given base loads: force mismatch (global) and the
/// two bending components of the moment mismatch (tip frame).
Eigen::Matrix<double, 5, 1> shooting_residual(const RodModel& model, const Eigen::Matrix<double, 5, 1>& base,
                                              int steps);

/// Shooting solve. Throws NonConvergence when Newton fails even with
/// pressure continuation.
RodSolution solve_rod(const RodModel& model, const SolverConfig& cfg = {});
RodSolution solve_rod(const SectionProperties& section, const MaterialParams& mat, const PressureTriple& pressures,
                      const SolverConfig& cfg = {});

}  // namespace spatopt
