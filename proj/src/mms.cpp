#include "ferroflow/mms.hpp"

#include <cmath>

namespace ferroflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline double S(double s) { return std::sin(kPi * s); }
inline double C(double s) { return std::cos(kPi * s); }

// q(s) = (s^2 - s)^2 and derivatives; factor of the magnetostatic potential.
inline double q0(double s) { return (s * s - s) * (s * s - s); }
inline double q1(double s) { return 2.0 * (s * s - s) * (2.0 * s - 1.0); }
inline double q2(double s) {
  return 2.0 * ((2.0 * s - 1.0) * (2.0 * s - 1.0) + 2.0 * (s * s - s));
}

// w(s) = s^2 - s; factor of the second magnetization profile.
inline double w0(double s) { return s * s - s; }
inline double w1(double s) { return 2.0 * s - 1.0; }

// H = 100 sin(t) grad[q0(x) q0(y) q0(z)], shared by examples 1 and 2.
void attach_applied_field(ExactSolution& sol) {
  sol.H = [](const Vec3& x, double t) {
    const double a = 100.0 * std::sin(t);
    return Vec3(a * q1(x[0]) * q0(x[1]) * q0(x[2]),
                a * q0(x[0]) * q1(x[1]) * q0(x[2]),
                a * q0(x[0]) * q0(x[1]) * q1(x[2]));
  };
  sol.grad_H = [](const Vec3& x, double t) {
    const double a = 100.0 * std::sin(t);
    Mat3 G;
    G(0, 0) = q2(x[0]) * q0(x[1]) * q0(x[2]);
    G(1, 1) = q0(x[0]) * q2(x[1]) * q0(x[2]);
    G(2, 2) = q0(x[0]) * q0(x[1]) * q2(x[2]);
    G(0, 1) = G(1, 0) = q1(x[0]) * q1(x[1]) * q0(x[2]);
    G(0, 2) = G(2, 0) = q1(x[0]) * q0(x[1]) * q1(x[2]);
    G(1, 2) = G(2, 1) = q0(x[0]) * q1(x[1]) * q1(x[2]);
    return Mat3(a * G);
  };
  sol.div_H = [](const Vec3& x, double t) {
    const double a = 100.0 * std::sin(t);
    return a * (q2(x[0]) * q0(x[1]) * q0(x[2]) +
                q0(x[0]) * q2(x[1]) * q0(x[2]) +
                q0(x[0]) * q0(x[1]) * q2(x[2]));
  };
}

// ptilde = 120 x^2 y z - 40 y^3 z - 40 y z^3, shared by examples 1 and 2.
void attach_pressure(ExactSolution& sol) {
  sol.ptilde = [](const Vec3& x, double) {
    return 120.0 * x[0] * x[0] * x[1] * x[2] -
           40.0 * x[1] * x[1] * x[1] * x[2] - 40.0 * x[1] * x[2] * x[2] * x[2];
  };
  sol.grad_ptilde = [](const Vec3& x, double) {
    return Vec3(240.0 * x[0] * x[1] * x[2],
                120.0 * x[0] * x[0] * x[2] - 120.0 * x[1] * x[1] * x[2] -
                    40.0 * x[2] * x[2] * x[2],
                120.0 * x[0] * x[0] * x[1] - 40.0 * x[1] * x[1] * x[1] -
                    120.0 * x[1] * x[2] * x[2]);
  };
}

}  // namespace

void forcing_from_exact(ExactSolution& sol, double eta, double mu0,
                        double sigma, double tau, double chi0, double beta) {
  const ExactSolution s = sol;  // value copy: the callbacks must not dangle

  sol.z = [s](const Vec3& x, double t) {
    return Vec3(s.u(x, t).cross(s.m(x, t)));
  };
  sol.k = sol.curl_m;
  sol.g_u = sol.u;
  sol.divHe = [s](const Vec3& x, double t) {
    return -(s.div_H(x, t) + s.div_m(x, t));
  };

  sol.f_u = [s, eta, mu0](const Vec3& x, double t) {
    const Vec3 u = s.u(x, t), m = s.m(x, t), H = s.H(x, t);
    const Mat3 Gu = s.grad_u(x, t), Gm = s.grad_m(x, t), GH = s.grad_H(x, t);
    // grad p from the shifted pressure p = ptilde - |u|^2/2 - (m.H)/2
    const Vec3 grad_p = s.grad_ptilde(x, t) - Gu.transpose() * u -
                        0.5 * (Gm.transpose() * H + GH.transpose() * m);
    // curl(m x H) = m div H - H div m + (H.grad)m - (m.grad)H
    const Vec3 curl_mxH =
        m * s.div_H(x, t) - H * s.div_m(x, t) + Gm * H - GH * m;
    return Vec3(s.du_dt(x, t) + Gu * u - eta * s.lap_u(x, t) + grad_p -
                mu0 * GH * m - 0.5 * mu0 * curl_mxH);
  };

  sol.f_m = [s, sigma, tau, chi0, beta](const Vec3& x, double t) {
    const Vec3 u = s.u(x, t), m = s.m(x, t), H = s.H(x, t);
    return Vec3(s.dm_dt(x, t) + s.grad_m(x, t) * u - sigma * s.lap_m(x, t) -
                0.5 * s.curl_u(x, t).cross(m) + (m - chi0 * H) / tau +
                beta * m.cross(m.cross(H)));
  };
}

ExactSolution example1() {
  ExactSolution sol;
  sol.label = "example1";
  sol.T = 4.0;

  sol.u = [](const Vec3& x, double t) {
    return Vec3(std::sin(t) * Vec3(S(x[1]), S(x[2]), S(x[0])));
  };
  sol.du_dt = [](const Vec3& x, double t) {
    return Vec3(std::cos(t) * Vec3(S(x[1]), S(x[2]), S(x[0])));
  };
  sol.grad_u = [](const Vec3& x, double t) {
    Mat3 G = Mat3::Zero();
    G(0, 1) = kPi * C(x[1]);
    G(1, 2) = kPi * C(x[2]);
    G(2, 0) = kPi * C(x[0]);
    return Mat3(std::sin(t) * G);
  };
  sol.curl_u = [](const Vec3& x, double t) {
    return Vec3(-kPi * std::sin(t) * Vec3(C(x[2]), C(x[0]), C(x[1])));
  };
  sol.lap_u = [](const Vec3& x, double t) {
    return Vec3(-kPi * kPi * std::sin(t) * Vec3(S(x[1]), S(x[2]), S(x[0])));
  };

  sol.m = [](const Vec3& x, double t) {
    return Vec3(std::sin(t) * S(x[0]) * S(x[1]) * S(x[2]), 0.0, 0.0);
  };
  sol.dm_dt = [](const Vec3& x, double t) {
    return Vec3(std::cos(t) * S(x[0]) * S(x[1]) * S(x[2]), 0.0, 0.0);
  };
  sol.grad_m = [](const Vec3& x, double t) {
    Mat3 G = Mat3::Zero();
    const double a = kPi * std::sin(t);
    G(0, 0) = a * C(x[0]) * S(x[1]) * S(x[2]);
    G(0, 1) = a * S(x[0]) * C(x[1]) * S(x[2]);
    G(0, 2) = a * S(x[0]) * S(x[1]) * C(x[2]);
    return G;
  };
  sol.div_m = [](const Vec3& x, double t) {
    return kPi * std::sin(t) * C(x[0]) * S(x[1]) * S(x[2]);
  };
  sol.curl_m = [](const Vec3& x, double t) {
    const double a = kPi * std::sin(t);
    return Vec3(0.0, a * S(x[0]) * S(x[1]) * C(x[2]),
                -a * S(x[0]) * C(x[1]) * S(x[2]));
  };
  sol.lap_m = [](const Vec3& x, double t) {
    return Vec3(-3.0 * kPi * kPi * std::sin(t) * S(x[0]) * S(x[1]) * S(x[2]),
                0.0, 0.0);
  };

  attach_applied_field(sol);
  attach_pressure(sol);
  return sol;
}

ExactSolution example2() {
  ExactSolution sol;
  sol.label = "example2";
  sol.T = 1.0;

  sol.u = [](const Vec3& x, double t) {
    return Vec3(std::sin(t) * Vec3(S(x[1]) * S(x[2]), S(x[2]) * S(x[0]),
                                   S(x[0]) * S(x[1])));
  };
  sol.du_dt = [](const Vec3& x, double t) {
    return Vec3(std::cos(t) * Vec3(S(x[1]) * S(x[2]), S(x[2]) * S(x[0]),
                                   S(x[0]) * S(x[1])));
  };
  sol.grad_u = [](const Vec3& x, double t) {
    const double a = kPi * std::sin(t);
    Mat3 G = Mat3::Zero();
    G(0, 1) = a * C(x[1]) * S(x[2]);
    G(0, 2) = a * S(x[1]) * C(x[2]);
    G(1, 0) = a * C(x[0]) * S(x[2]);
    G(1, 2) = a * S(x[0]) * C(x[2]);
    G(2, 0) = a * C(x[0]) * S(x[1]);
    G(2, 1) = a * S(x[0]) * C(x[1]);
    return G;
  };
  sol.curl_u = [](const Vec3& x, double t) {
    const double a = kPi * std::sin(t);
    return Vec3(a * S(x[0]) * (C(x[1]) - C(x[2])),
                a * S(x[1]) * (C(x[2]) - C(x[0])),
                a * S(x[2]) * (C(x[0]) - C(x[1])));
  };
  sol.lap_u = [](const Vec3& x, double t) {
    return Vec3(-2.0 * kPi * kPi * std::sin(t) *
                Vec3(S(x[1]) * S(x[2]), S(x[2]) * S(x[0]),
                     S(x[0]) * S(x[1])));
  };

  sol.m = [](const Vec3& x, double t) {
    return Vec3(0.0, std::sin(t) * w0(x[0]) * w0(x[1]) * w0(x[2]), 0.0);
  };
  sol.dm_dt = [](const Vec3& x, double t) {
    return Vec3(0.0, std::cos(t) * w0(x[0]) * w0(x[1]) * w0(x[2]), 0.0);
  };
  sol.grad_m = [](const Vec3& x, double t) {
    const double a = std::sin(t);
    Mat3 G = Mat3::Zero();
    G(1, 0) = a * w1(x[0]) * w0(x[1]) * w0(x[2]);
    G(1, 1) = a * w0(x[0]) * w1(x[1]) * w0(x[2]);
    G(1, 2) = a * w0(x[0]) * w0(x[1]) * w1(x[2]);
    return G;
  };
  sol.div_m = [](const Vec3& x, double t) {
    return std::sin(t) * w0(x[0]) * w1(x[1]) * w0(x[2]);
  };
  sol.curl_m = [](const Vec3& x, double t) {
    const double a = std::sin(t);
    return Vec3(-a * w0(x[0]) * w0(x[1]) * w1(x[2]), 0.0,
                a * w1(x[0]) * w0(x[1]) * w0(x[2]));
  };
  sol.lap_m = [](const Vec3& x, double t) {
    // w'' = 2 along each axis
    return Vec3(0.0,
                2.0 * std::sin(t) *
                    (w0(x[1]) * w0(x[2]) + w0(x[0]) * w0(x[2]) +
                     w0(x[0]) * w0(x[1])),
                0.0);
  };

  attach_applied_field(sol);
  attach_pressure(sol);
  return sol;
}

ExactSolution example3() {
  ExactSolution sol;
  sol.label = "example3";
  sol.T = 1.0;
  sol.homogeneous = true;

  // initial data only; no applied field, forcing, or boundary inflow
  sol.u = [](const Vec3& x, double) {
    return Vec3(S(x[1]) * S(x[2]), S(x[2]) * S(x[0]), S(x[0]) * S(x[1]));
  };
  sol.m = [](const Vec3& x, double) {
    return Vec3(S(x[0]) * S(x[1]) * S(x[2]), 0.0, 0.0);
  };
  auto zero_v = [](const Vec3&, double) { return Vec3(Vec3::Zero()); };
  auto zero_s = [](const Vec3&, double) { return 0.0; };
  sol.H = zero_v;
  sol.div_H = zero_s;
  sol.f_u = zero_v;
  sol.f_m = zero_v;
  sol.divHe = zero_s;
  sol.g_u = zero_v;
  return sol;
}

}  // namespace ferroflow
