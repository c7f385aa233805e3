#include "ferroflow/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace ferroflow {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

void put_record(std::ofstream& out, const EnergyRecord& r) {
  out << r.step << ',' << format_double(r.t) << ',' << format_double(r.E)
      << ',' << format_double(r.F) << ',' << format_double(r.res_div_u) << ','
      << format_double(r.res_flux) << ',' << format_double(r.res_mstat)
      << '\n';
}

void put_report(std::ofstream& out, const ErrorReport& r) {
  const auto vals = r.as_array();
  for (int j = 0; j < ErrorReport::kFields; ++j)
    out << (j ? "," : "") << format_double(vals[j]);
  out << '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_vtk(const Simulation& sim, const SimState& state,
               const std::string& path) {
  const Mesh& mesh = sim.mesh();
  const DofMap& pres = sim.dofmap(SpaceKind::PressureP1);
  const DofMap& face = sim.dofmap(SpaceKind::Face0);
  auto out = open_out(path);

  out << "# vtk DataFile Version 3.0\n";
  out << "ferroflow state t=" << format_double(state.t) << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";

  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& v : mesh.vertices)
    out << format_double(v.x()) << ' ' << format_double(v.y()) << ' '
        << format_double(v.z()) << '\n';

  out << "CELLS " << mesh.num_cells() << ' ' << 5 * mesh.num_cells() << '\n';
  for (const auto& c : mesh.cells)
    out << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
  out << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c) out << "10\n";

  // nodal velocity (the bubble part vanishes at vertices)
  out << "POINT_DATA " << mesh.num_vertices() << '\n';
  out << "VECTORS u double\n";
  for (int v = 0; v < mesh.num_vertices(); ++v)
    out << format_double(state.u.values(3 * v)) << ' '
        << format_double(state.u.values(3 * v + 1)) << ' '
        << format_double(state.u.values(3 * v + 2)) << '\n';

  out << "CELL_DATA " << mesh.num_cells() << '\n';
  const Vec3 centroid(0.25, 0.25, 0.25);  // RT0 cell average = centroid value
  for (const char* name : {"m", "H"}) {
    const Eigen::VectorXd& vals =
        name[0] == 'm' ? state.m.values : state.H.values;
    out << "VECTORS " << name << " double\n";
    for (int c = 0; c < mesh.num_cells(); ++c) {
      Vec3 avg = Vec3::Zero();
      const auto basis = shape_values(mesh, SpaceKind::Face0, c, centroid);
      for (int f = 0; f < 4; ++f)
        avg += vals(face.cell_dofs[c][f]) * basis.col(f);
      out << format_double(avg.x()) << ' ' << format_double(avg.y()) << ' '
          << format_double(avg.z()) << '\n';
    }
  }

  out << "SCALARS p double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < mesh.num_cells(); ++c) {
    double avg = 0.0;
    for (int i = 0; i < 4; ++i) avg += state.p.values(pres.cell_dofs[c][i]);
    out << format_double(0.25 * avg) << '\n';
  }
  out << "SCALARS phi double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < mesh.num_cells(); ++c)
    out << format_double(state.phi.values(c)) << '\n';

  finish(out, path);
}

void write_energy_csv(const std::vector<EnergyRecord>& records,
                      const std::string& path) {
  auto out = open_out(path);
  out << "step,t,E,F,res_div_u,res_flux,res_mstat\n";
  for (const auto& r : records) put_record(out, r);
  finish(out, path);
}

void write_errors_csv(const ErrorReport& report, const std::string& path) {
  auto out = open_out(path);
  for (int j = 0; j < ErrorReport::kFields; ++j)
    out << (j ? "," : "") << ErrorReport::kColumns[j];
  out << '\n';
  put_report(out, report);
  finish(out, path);
}

void write_table_csv(const std::vector<int>& levels,
                     const std::vector<ErrorReport>& reports,
                     const ConvergenceSummary& summary,
                     const std::string& path) {
  if (levels.size() != reports.size())
    throw std::invalid_argument("write_table_csv: level/report mismatch");
  auto out = open_out(path);
  out << "n";
  for (int j = 0; j < ErrorReport::kFields; ++j)
    out << ',' << ErrorReport::kColumns[j];
  out << '\n';
  for (size_t i = 0; i < reports.size(); ++i) {
    out << levels[i] << ',';
    put_report(out, reports[i]);
  }
  if (reports.size() >= 2) {
    out << "order";
    for (int j = 0; j < ErrorReport::kFields; ++j)
      out << ',' << format_double(summary.regression[j]);
    out << '\n';
  }
  finish(out, path);
}

}  // namespace ferroflow
