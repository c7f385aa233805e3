#pragma once

#include <string>
#include <vector>

#include "ferroflow/diagnostics.hpp"
#include "ferroflow/stepper.hpp"

namespace ferroflow {

/// Shortest round-trip decimal representation, locale-independent.
std::string format_double(double v);

/// Legacy ASCII unstructured-grid file: points, tet cells, nodal velocity,
/// cell-averaged m and H, cell-averaged pressure, potential.
/// Throws std::runtime_error on I/O failure.
void write_vtk(const Simulation& sim, const SimState& state,
               const std::string& path);

void write_energy_csv(const std::vector<EnergyRecord>& records,
                      const std::string& path);
void write_errors_csv(const ErrorReport& report, const std::string& path);
/// Table layout of a refinement sweep: one row per level plus an "order" row
/// (regression orders) when at least two levels are present.
void write_table_csv(const std::vector<int>& levels,
                     const std::vector<ErrorReport>& reports,
                     const ConvergenceSummary& summary,
                     const std::string& path);

}  // namespace ferroflow
