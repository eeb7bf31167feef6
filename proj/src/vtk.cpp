#include "uwpg/vtk.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace uwpg {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  body(os);
  os.flush();
  if (!os) throw IoError("failed writing " + path);
}

void write_vtk_voxels(std::ostream& os, const VoxelField& field, const std::string& name) {
  os << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << field.mx + 1 << ' ' << field.my + 1 << " 1\n";
  os << "ORIGIN 0 0 0\n";
  os << "SPACING " << format_double(1.0 / field.mx) << ' ' << format_double(1.0 / field.my)
     << " 1\n";
  os << "CELL_DATA " << field.values.size() << "\nSCALARS " << name
     << " double 1\nLOOKUP_TABLE default\n";
  for (double v : field.values) os << format_double(v) << '\n';
}

namespace {

void write_quads(std::ostream& os, const Mesh& mesh, const std::string& name) {
  const int vx = mesh.nx() + 1, vy = mesh.ny() + 1;
  os << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << vx * vy << " double\n";
  for (int j = 0; j < vy; ++j)
    for (int i = 0; i < vx; ++i)
      os << format_double(i * mesh.hx()) << ' ' << format_double(j * mesh.hy()) << " 0\n";
  const int nc = mesh.num_cells();
  os << "CELLS " << nc << ' ' << 5 * nc << '\n';
  for (int c = 0; c < nc; ++c) {
    const auto [i, j] = mesh.cell_ij(c);
    const int v0 = j * vx + i;
    os << "4 " << v0 << ' ' << v0 + 1 << ' ' << v0 + 1 + vx << ' ' << v0 + vx << '\n';
  }
  os << "CELL_TYPES " << nc << '\n';
  for (int c = 0; c < nc; ++c) os << "9\n";
}

}  // namespace

void write_vtk_cells(std::ostream& os, const Mesh& mesh, const std::vector<double>& values,
                     const std::string& name) {
  if (static_cast<int>(values.size()) != mesh.num_cells())
    throw std::invalid_argument("one value per cell expected");
  write_quads(os, mesh, name);
  os << "CELL_DATA " << values.size() << "\nSCALARS " << name
     << " double 1\nLOOKUP_TABLE default\n";
  for (double v : values) os << format_double(v) << '\n';
}

void write_vtk_points(std::ostream& os, const Mesh& mesh, const std::vector<double>& values,
                      const std::string& name) {
  if (static_cast<int>(values.size()) != (mesh.nx() + 1) * (mesh.ny() + 1))
    throw std::invalid_argument("one value per vertex expected");
  write_quads(os, mesh, name);
  os << "POINT_DATA " << values.size() << "\nSCALARS " << name
     << " double 1\nLOOKUP_TABLE default\n";
  for (double v : values) os << format_double(v) << '\n';
}

std::vector<double> vertex_values(const FeFunction& f) {
  const Mesh& mesh = f.space().mesh();
  const int vx = mesh.nx() + 1, vy = mesh.ny() + 1;
  std::vector<double> out(static_cast<std::size_t>(vx) * vy);
  for (int j = 0; j < vy; ++j)
    for (int i = 0; i < vx; ++i) {
      const int ci = std::min(i, mesh.nx() - 1), cj = std::min(j, mesh.ny() - 1);
      out[static_cast<std::size_t>(j) * vx + i] =
          f.value(mesh.cell_index(ci, cj), {double(i - ci), double(j - cj)});
    }
  return out;
}

void write_voxel_csv(std::ostream& os, const VoxelField& field) {
  os << "x,y,value\n";
  for (int j = 0; j < field.my; ++j)
    for (int i = 0; i < field.mx; ++i) {
      const auto c = field.center(i, j);
      os << format_double(c[0]) << ',' << format_double(c[1]) << ','
         << format_double(field.at(i, j)) << '\n';
    }
}

}  // namespace uwpg
