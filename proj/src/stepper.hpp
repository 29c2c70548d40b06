#pragma once

// Fixed-step schemes shared by the vector, matrix and density integrators.
// `Field` maps a state to its time derivative; states only need +, scalar *.

namespace replidyn::detail {

template <typename State, typename Field>
State rk4_step(const Field& f, const State& s, double dt) {
  const State k1 = f(s);
  const State k2 = f(s + (0.5 * dt) * k1);
  const State k3 = f(s + (0.5 * dt) * k2);
  const State k4 = f(s + dt * k3);
  return s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <typename State, typename Field>
State euler_step(const Field& f, const State& s, double dt) {
  return s + dt * f(s);
}

}  // namespace replidyn::detail
