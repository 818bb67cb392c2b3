#include "l1quad/harness/simulation.hpp"

#include <cmath>
#include <limits>

namespace l1quad::harness {

namespace {

bool finite_state(const QuadState& x) {
  return x.position.allFinite() && x.velocity.allFinite() && x.body_rate.allFinite() &&
         x.attitude.matrix().allFinite();
}

EulerZYX euler_or_nan(const Rotation& r) {
  try {
    return rotation_to_euler(r);
  } catch (const Error&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
}

}  // namespace

RunLog run(const ScenarioConfig& config) {
  validate(config);

  RunLog log;
  log.scenario = config.name;
  log.l1_enabled = config.l1_enabled;

  const int ticks = config.control_ticks();
  const int substeps = config.substeps();
  const double dt = config.plant_dt;
  log.rows.reserve(static_cast<std::size_t>(ticks));

  QuadState x;
  try {
    x = geometric::on_trajectory_state(trajectory::sample(config.trajectory, 0.0), config.phys);
  } catch (const Error& e) {
    log.status = Termination::ControllerError;
    log.message = e.what();
    return log;
  }
  L1State l1_state = l1::init(config.l1, x.partial());

  for (int k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) / config.control_rate;
    const FlatOutput flat = trajectory::sample(config.trajectory, t);

    if (!finite_state(x) || (x.position - flat.position).norm() > kCrashDeviation) {
      log.status = Termination::Crashed;
      log.message = "tracking deviation exceeded the crash threshold";
      break;
    }

    ControlOutput ctrl;
    try {
      ctrl = geometric::control(x, flat, config.gains, config.phys);
    } catch (const Error& e) {
      log.status = Termination::ControllerError;
      log.message = e.what();
      break;
    }

    const Vec4 u_b = ctrl.input.as_vector();
    Vec4 u_ad = Vec4::Zero();
    if (config.l1_enabled) {
      try {
        u_ad = l1::step(l1_state, x.partial(), x.attitude, u_b, config.l1, config.phys);
      } catch (const Error& e) {
        log.status = Termination::Crashed;
        log.message = e.what();
        break;
      }
    }
    const ControlInput u = ControlInput::from_vector(config.saturation.apply(u_b + u_ad));

    LogRow row;
    row.t = t;
    row.position = x.position;
    row.velocity = x.velocity;
    row.euler = euler_or_nan(x.attitude);
    row.body_rate = x.body_rate;
    row.desired_position = flat.position;
    row.thrust = u.thrust;
    row.moment = u.moment;
    row.u_ad = u_ad;
    if (config.l1_enabled) {
      row.sigma_hat = l1_state.sigma_hat;
      row.z_tilde = l1_state.z_tilde;
    }
    const UncertaintyValue truth = plant::evaluate_uncertainty(config.uncertainty, t, x);
    row.sigma_m_true = truth.matched;
    row.sigma_um_true = truth.unmatched;
    log.rows.push_back(row);

    try {
      for (int j = 0; j < substeps; ++j) {
        x = plant::step(x, u, config.uncertainty, config.phys, config.mixer, t + j * dt, dt);
      }
    } catch (const Error& e) {
      log.status = Termination::Crashed;
      log.message = e.what();
      break;
    }
  }
  return log;
}

}  // namespace l1quad::harness
