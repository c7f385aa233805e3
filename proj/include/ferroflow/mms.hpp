#pragma once

#include <functional>
#include <string>

#include "ferroflow/mesh.hpp"
#include "ferroflow/spaces.hpp"

namespace ferroflow {

using MatrixField = std::function<Mat3(const Vec3&, double)>;

/// Closed-form exact fields with hand-derived derivatives, plus the forcing
/// terms that make them solutions of the coupled flow/magnetization model
/// (method of manufactured solutions). grad fields use the convention
/// grad(i,j) = d(field_i)/dx_j.
struct ExactSolution {
  std::string label;
  double T = 1.0;

  VectorField u, du_dt, curl_u, lap_u;
  MatrixField grad_u;
  VectorField m, dm_dt, curl_m, lap_m;
  MatrixField grad_m;
  ScalarField div_m;
  VectorField H;
  MatrixField grad_H;
  ScalarField div_H;
  ScalarField ptilde;
  VectorField grad_ptilde;

  // derived (filled by forcing_from_exact)
  VectorField z;        // u x m
  VectorField k;        // curl m
  VectorField f_u, f_m; // strong-form residual forcings
  ScalarField divHe;    // -div(H + m)
  VectorField g_u;      // velocity Dirichlet trace

  // homogeneous run (no forcing, zero boundary velocity)
  bool homogeneous = false;
};

/// Derive f_u, f_m, divHe, z, k, g_u from the primitive callbacks using the
/// strong form of the model. The physical pressure gradient is recovered
/// from ptilde = p + |u|^2/2 + (m.H)/2.
void forcing_from_exact(ExactSolution& sol, double eta, double mu0,
                        double sigma, double tau, double chi0, double beta);

ExactSolution example1();  // T = 4
ExactSolution example2();  // T = 1
ExactSolution example3();  // energy test: initial data only, H_e = 0

}  // namespace ferroflow
