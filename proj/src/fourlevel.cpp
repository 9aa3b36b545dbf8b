#include "mb1d/fourlevel.hpp"

#include <array>

#include "mb1d/constants.hpp"
#include "mb1d/rk4.hpp"

namespace mb1d {

namespace {

constexpr complexd kImag{0.0, 1.0};

// Dense 4x4 density matrix with the linear-space arithmetic rk4_step needs.
struct Mat {
  std::array<complexd, 16> m{};
  complexd& at(int i, int j) { return m[4 * i + j]; }
  const complexd& at(int i, int j) const { return m[4 * i + j]; }

  friend Mat operator+(const Mat& a, const Mat& b) {
    Mat r;
    for (int k = 0; k < 16; ++k) r.m[k] = a.m[k] + b.m[k];
    return r;
  }
  friend Mat operator*(const Mat& a, double s) {
    Mat r;
    for (int k = 0; k < 16; ++k) r.m[k] = a.m[k] * s;
    return r;
  }
};

Mat multiply(const Mat& a, const Mat& b) {
  Mat r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      complexd acc{};
      for (int k = 0; k < 4; ++k) acc += a.at(i, k) * b.at(k, j);
      r.at(i, j) = acc;
    }
  return r;
}

// H/hbar for the given instantaneous field amplitudes.
Mat hamiltonian(double e1, double e2, const MediumParams& med) {
  const double half = 0.5 / constants::hbar;
  const complexd g_ax{med.dipole_ax * e1 * half, 0.0};
  const complexd g_ia{med.dipole_ia * e1 * half, 0.0};
  const complexd g_bi{med.dipole_bi * e2 * half, 0.0};
  Mat h;
  h.at(3, 3) = med.delta;
  h.at(1, 0) = -g_ax;             // |A><X|
  h.at(0, 1) = -std::conj(g_ax);
  h.at(3, 1) = -g_ia;             // |I><A|
  h.at(1, 3) = -std::conj(g_ia);
  h.at(2, 3) = -g_bi;             // |B><I|
  h.at(3, 2) = -std::conj(g_bi);
  return h;
}

Mat rhs(const Mat& rho, const Mat& h, const MediumParams& med) {
  const Mat hr = multiply(h, rho);
  const Mat rh = multiply(rho, h);
  Mat d;
  for (int k = 0; k < 16; ++k) d.m[k] = -kImag * (hr.m[k] - rh.m[k]);

  // population relaxation A->X, B->X
  const complexd loss_a = med.gamma_a * rho.at(1, 1);
  const complexd loss_b = med.gamma_b * rho.at(2, 2);
  d.at(1, 1) -= loss_a;
  d.at(2, 2) -= loss_b;
  d.at(0, 0) += loss_a + loss_b;

  // dephasing: mean of the levels' population decay rates plus collisions
  const double pop_rate[4] = {0.0, med.gamma_a, med.gamma_b, 0.0};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      d.at(i, j) -=
          (0.5 * (pop_rate[i] + pop_rate[j]) + med.gamma_col) * rho.at(i, j);
    }
  return d;
}

}  // namespace

FourLevelResult integrate_four_level(const PulseSpec& pump,
                                     const PulseSpec& read,
                                     const BlochState& initial,
                                     const MediumParams& medium,
                                     double t_start, double dt, int nt) {
  Mat rho;
  rho.at(0, 0) = initial.rho_xx();
  rho.at(1, 1) = initial.rho_aa;
  rho.at(2, 2) = initial.rho_bb;
  rho.at(1, 0) = initial.rho_ax;
  rho.at(0, 1) = std::conj(initial.rho_ax);
  rho.at(2, 1) = initial.rho_ba;
  rho.at(1, 2) = std::conj(initial.rho_ba);
  rho.at(2, 0) = initial.rho_bx;
  rho.at(0, 2) = std::conj(initial.rho_bx);

  FourLevelResult out;
  out.time.reserve(nt);
  const auto record = [&](double t) {
    out.time.push_back(t);
    out.rho_ax.push_back(rho.at(1, 0));
    out.rho_ba.push_back(rho.at(2, 1));
    out.rho_ia.push_back(rho.at(3, 1));
    out.rho_bi.push_back(rho.at(2, 3));
    out.rho_xx.push_back(rho.at(0, 0).real());
    out.rho_aa.push_back(rho.at(1, 1).real());
    out.rho_bb.push_back(rho.at(2, 2).real());
    out.rho_ii.push_back(rho.at(3, 3).real());
  };

  record(t_start);
  for (int i = 0; i + 1 < nt; ++i) {
    const double t = t_start + i * dt;
    const Mat h0 = hamiltonian(envelope_at(pump, t).real(),
                               envelope_at(read, t).real(), medium);
    const Mat hm = hamiltonian(envelope_at(pump, t + 0.5 * dt).real(),
                               envelope_at(read, t + 0.5 * dt).real(), medium);
    const Mat h1 = hamiltonian(envelope_at(pump, t + dt).real(),
                               envelope_at(read, t + dt).real(), medium);
    rho = rk4_step(rho, dt, [&](const Mat& y, int stage) {
      const Mat& h = stage == 0 ? h0 : (stage == 3 ? h1 : hm);
      return rhs(y, h, medium);
    });
    record(t + dt);
  }
  return out;
}

}  // namespace mb1d
