#include "spatopt/rod.hpp"

#include "spatopt/error.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <string>

namespace spatopt {

namespace {

constexpr double kKpaToMpa = 1e-3;

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

const Eigen::Vector3d kE3 = Eigen::Vector3d::UnitZ();

RodState add_scaled(const RodState& y, const RodDerivative& d, double dt) {
  RodState out;
  out.s = y.s + dt;
  out.h = y.h + dt * d.h;
  out.q = Eigen::Quaterniond(y.q.w() + dt * d.q[0], y.q.x() + dt * d.q[1], y.q.y() + dt * d.q[2],
                             y.q.z() + dt * d.q[3]);
  out.n = y.n + dt * d.n;
  out.m = y.m + dt * d.m;
  return out;
}

RodState rk4_step(const RodModel& model, const RodState& y, double dt) {
  const RodDerivative k1 = model.rhs(y);
  const RodDerivative k2 = model.rhs(add_scaled(y, k1, 0.5 * dt));
  const RodDerivative k3 = model.rhs(add_scaled(y, k2, 0.5 * dt));
  const RodDerivative k4 = model.rhs(add_scaled(y, k3, dt));
  RodDerivative avg;
  avg.h = (k1.h + 2.0 * k2.h + 2.0 * k3.h + k4.h) / 6.0;
  avg.q = (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q) / 6.0;
  avg.n = (k1.n + 2.0 * k2.n + 2.0 * k3.n + k4.n) / 6.0;
  avg.m = (k1.m + 2.0 * k2.m + 2.0 * k3.m + k4.m) / 6.0;
  RodState next = add_scaled(y, avg, dt);
  next.q.normalize();
  return next;
}

RodState base_state(const Vec5& base) {
  RodState y;
  y.n = base.head<3>();
  y.m = Eigen::Vector3d(base[3], base[4], 0.0);
  return y;
}

RodState integrate_to_tip(const RodModel& model, const Vec5& base, int steps) {
  const double dt = model.length() / steps;
  RodState y = base_state(base);
  for (int k = 0; k < steps; ++k) {
    y = rk4_step(model, y, dt);
    y.s = (k + 1) * dt;
  }
  return y;
}

Vec5 tip_residual(const RodModel& model, const RodState& tip) {
  const TipLoads target = tip_loads(model.loads());
  const Eigen::Matrix3d r = tip.q.toRotationMatrix();
  const Eigen::Vector3d force = tip.n - r * target.force;
  const Eigen::Vector3d moment = r.transpose() * tip.m - target.moment;
  Vec5 out;
  out << force, moment[0], moment[1];
  return out;
}

RodModel scaled(const RodModel& model, double factor) {
  RodLoads loads = model.loads();
  for (auto& c : loads.chambers) c.force *= factor;
  loads.extra_tip_moment *= factor;
  return RodModel(model.stiffness(), loads, model.length());
}

Vec5 initial_guess(const RodModel& model, const SolverConfig& cfg) {
  Vec5 x = Vec5::Zero();
  if (cfg.initial_guess == InitialGuess::ConstantStrain) {
    const TipLoads t = tip_loads(model.loads());
    x << t.force, t.moment[0], t.moment[1];
  }
  return x;
}

struct NewtonResult {
  Vec5 x;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

NewtonResult newton(const RodModel& model, const Vec5& guess, const SolverConfig& cfg) {
  NewtonResult res;
  res.x = guess;
  Vec5 r = shooting_residual(model, res.x, cfg.steps);
  double norm = r.norm();
  for (int it = 0; it < cfg.max_iterations; ++it) {
    res.iterations = it;
    if (!std::isfinite(norm)) break;
    if (norm == 0.0) {
      res.converged = true;
      break;
    }
    const bool within = norm < cfg.tolerance;

    Mat5 jac;
    for (int c = 0; c < 5; ++c) {
      Vec5 xp = res.x;
      xp[c] += cfg.fd_step;
      jac.col(c) = (shooting_residual(model, xp, cfg.steps) - r) / cfg.fd_step;
    }
    Eigen::FullPivLU<Mat5> lu(jac);
    if (!lu.isInvertible()) break;
    const Vec5 step = -lu.solve(r);

    if (within) {
      // One polishing step, kept only if it improves the residual.
      const Vec5 xp = res.x + step;
      const Vec5 rp = shooting_residual(model, xp, cfg.steps);
      if (rp.norm() < norm) {
        res.x = xp;
        norm = rp.norm();
      }
      res.converged = true;
      break;
    }

    double lambda = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      const Vec5 xp = res.x + lambda * step;
      const Vec5 rp = shooting_residual(model, xp, cfg.steps);
      const double np = rp.norm();
      if (std::isfinite(np) && np <= (1.0 - 1e-4 * lambda) * norm) {
        res.x = xp;
        r = rp;
        norm = np;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
  }
  if (!res.converged && norm < cfg.tolerance) res.converged = true;
  res.residual = norm;
  return res;
}

}  // namespace

void MaterialParams::validate() const {
  if (!(youngs_modulus > 0.0) || !(shear_modulus > 0.0) || !(shear_correction > 0.0) || !(length > 0.0) ||
      torsion_moment < 0.0)
    throw ValidationError("material parameters must satisfy E, G, kappa, H > 0 and I_T >= 0");
}

void PressureTriple::validate() const {
  for (double v : p)
    if (!(v >= 0.0) || v > kMax) throw ValidationError("pressure outside [0, 100] kPa");
}

Stiffness stiffness_matrices(const SectionProperties& section, const MaterialParams& mat) {
  mat.validate();
  if (!(section.material_area > 0.0)) throw DegenerateSectionError("section has zero material area");
  const double e = mat.youngs_modulus * kKpaToMpa;
  const double g = mat.shear_modulus * kKpaToMpa;
  const double a = section.material_area;
  Stiffness s;
  s.k = Eigen::Vector3d(mat.shear_correction * g * a, mat.shear_correction * g * a, e * a);
  s.j = Eigen::Vector3d(e * section.i1, e * section.i2, e * mat.torsion_moment);
  return s;
}

RodLoads pressure_loads(const SectionProperties& section, const PressureTriple& pressures) {
  pressures.validate();
  RodLoads loads;
  for (int i = 0; i < 3; ++i) {
    loads.chambers[i].force = pressures.p[i] * kKpaToMpa * section.chamber_area[i];
    loads.chambers[i].offset = section.chamber_offset[i];
  }
  return loads;
}

TipLoads tip_loads(const RodLoads& loads) {
  TipLoads t;
  for (const auto& c : loads.chambers) {
    const Eigen::Vector3d f = c.force * kE3;
    t.force += f;
    t.moment += c.offset.cross(f);
  }
  t.moment += loads.extra_tip_moment;
  return t;
}

TipLoads pressure_point_loads(const SectionProperties& section, const PressureTriple& pressures) {
  return tip_loads(pressure_loads(section, pressures));
}

RodModel::RodModel(const Stiffness& stiffness, const RodLoads& loads, double length)
    : stiffness_(stiffness), loads_(loads), length_(length) {
  if (!(length > 0.0)) throw ConfigurationError("rod length must be positive");
  for (int i = 0; i < 3; ++i)
    if (!(stiffness.k[i] > 0.0)) throw ConfigurationError("singular elongation/shear stiffness");
  if (!(stiffness.j[0] > 0.0) || !(stiffness.j[1] > 0.0)) throw ConfigurationError("singular bending stiffness");
  k_inv_ = stiffness.k.cwiseInverse();
  // Torsion is constrained (u_3 = 0), so the third entry is never inverted.
  j_inv_ = Eigen::Vector3d(1.0 / stiffness.j[0], 1.0 / stiffness.j[1], 0.0);
}

RodModel::RodModel(const SectionProperties& section, const MaterialParams& mat, const PressureTriple& pressures)
    : RodModel(stiffness_matrices(section, mat), pressure_loads(section, pressures), mat.length) {}

Strains RodModel::strains(const RodState& state) const {
  const Eigen::Matrix3d r = state.q.normalized().toRotationMatrix();
  const Eigen::Vector3d n_local = r.transpose() * state.n;
  const Eigen::Vector3d m_local = r.transpose() * state.m;
  Strains s;
  s.v = kE3 + k_inv_.cwiseProduct(n_local);
  s.u = j_inv_.cwiseProduct(m_local);
  return s;
}

RodDerivative RodModel::rhs(const RodState& state) const {
  const Eigen::Quaterniond qn = state.q.normalized();
  const Eigen::Matrix3d r = qn.toRotationMatrix();
  const Eigen::Vector3d n_local = r.transpose() * state.n;
  const Eigen::Vector3d m_local = r.transpose() * state.m;
  const Eigen::Vector3d v = kE3 + k_inv_.cwiseProduct(n_local);
  const Eigen::Vector3d u = j_inv_.cwiseProduct(m_local);

  RodDerivative d;
  d.h = r * v;
  const Eigen::Quaterniond qu = state.q * Eigen::Quaterniond(0.0, u.x(), u.y(), u.z());
  d.q = 0.5 * Eigen::Vector4d(qu.w(), qu.x(), qu.y(), qu.z());

  // Distributed pressure loads, summed per supply in the local frame:
  //   f_p = -sum P_i A_i R (u x e3)
  //   l_p = -sum P_i A_i R [(v + u x r_i) x e3 + r_i x (u x e3)]
  const Eigen::Vector3d u_e3 = u.cross(kE3);
  double total = 0.0;
  Eigen::Vector3d moment_local = Eigen::Vector3d::Zero();
  for (const auto& c : loads_.chambers) {
    if (c.force == 0.0) continue;
    total += c.force;
    moment_local += c.force * ((v + u.cross(c.offset)).cross(kE3) + c.offset.cross(u_e3));
  }
  const Eigen::Vector3d f_p = -total * (r * u_e3);
  const Eigen::Vector3d l_p = -(r * moment_local);
  d.n = -f_p;
  d.m = -d.h.cross(state.n) - l_p;
  return d;
}

RodDerivative ode_rhs(const RodState& state, const SectionProperties& section, const MaterialParams& mat,
                      const PressureTriple& pressures) {
  return RodModel(section, mat, pressures).rhs(state);
}

std::vector<RodState> integrate_rod(const RodModel& model, const Vec5& base, int steps) {
  if (steps < 1) throw ConfigurationError("rod integration needs at least one step");
  const double dt = model.length() / steps;
  std::vector<RodState> states;
  states.reserve(steps + 1);
  states.push_back(base_state(base));
  for (int k = 0; k < steps; ++k) {
    RodState next = rk4_step(model, states.back(), dt);
    next.s = (k + 1) * dt;
    states.push_back(next);
  }
  return states;
}

Vec5 shooting_residual(const RodModel& model, const Vec5& base, int steps) {
  return tip_residual(model, integrate_to_tip(model, base, steps));
}

RodSolution solve_rod(const RodModel& model, const SolverConfig& cfg) {
  if (cfg.steps < 1 || cfg.max_iterations < 1 || !(cfg.tolerance > 0.0) || !(cfg.fd_step > 0.0))
    throw ConfigurationError("invalid solver configuration");

  RodSolution sol;
  NewtonResult best = newton(model, initial_guess(model, cfg), cfg);
  double best_residual = best.residual;

  if (!best.converged) {
    for (int n_cont = cfg.continuation_steps; n_cont <= cfg.max_continuation_steps && !best.converged;
         n_cont *= 2) {
      if (n_cont < 1) break;
      Vec5 x = Vec5::Zero();
      NewtonResult stage;
      bool ok = true;
      int total_iterations = 0;
      for (int k = 1; k <= n_cont; ++k) {
        const RodModel partial = scaled(model, static_cast<double>(k) / n_cont);
        if (k == 1) x = initial_guess(partial, cfg);
        stage = newton(partial, x, cfg);
        total_iterations += stage.iterations;
        if (!stage.converged) {
          ok = false;
          break;
        }
        x = stage.x;
      }
      if (ok) {
        best = stage;
        best.iterations = total_iterations;
        sol.continuation_steps = n_cont;
      } else {
        best_residual = std::min(best_residual, stage.residual);
      }
    }
  }
  if (!best.converged)
    throw NonConvergence("shooting method did not converge (best residual " + std::to_string(best_residual) + ")",
                         best_residual);

  sol.converged = true;
  sol.residual_norm = best.residual;
  sol.iterations = best.iterations;
  sol.base_loads = best.x;
  sol.states = integrate_rod(model, best.x, cfg.steps);
  sol.tip = sol.states.back().h;
  return sol;
}

RodSolution solve_rod(const SectionProperties& section, const MaterialParams& mat, const PressureTriple& pressures,
                      const SolverConfig& cfg) {
  return solve_rod(RodModel(section, mat, pressures), cfg);
}

}  // namespace spatopt
