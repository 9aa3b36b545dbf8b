#pragma once

namespace mb1d {

// Classic fourth-order Runge-Kutta step for any state type supporting
// state + state and state * double. rhs(state, stage) is called with
// stage = 0 (start of step), 1 and 2 (midpoint), 3 (end of step); the caller
// is responsible for sampling any time-dependent drive at those instants.
template <typename State, typename Rhs>
State rk4_step(const State& y, double dt, Rhs&& rhs) {
  const State k1 = rhs(y, 0);
  const State k2 = rhs(y + k1 * (dt / 2.0), 1);
  const State k3 = rhs(y + k2 * (dt / 2.0), 2);
  const State k4 = rhs(y + k3 * dt, 3);
  return y + (k1 + (k2 + k3) * 2.0 + k4) * (dt / 6.0);
}

}  // namespace mb1d
