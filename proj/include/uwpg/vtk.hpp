#ifndef UWPG_VTK_HPP
#define UWPG_VTK_HPP

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwpg/fe.hpp"
#include "uwpg/mesh.hpp"
#include "uwpg/reconstruct.hpp"

namespace uwpg {

/// Raised when an output file cannot be written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Legacy ASCII VTK writers, one scalar array per file.

/// STRUCTURED_POINTS with CELL_DATA.
void write_vtk_voxels(std::ostream& os, const VoxelField& field, const std::string& name);

/// UNSTRUCTURED_GRID of the mesh quads with one CELL_DATA value per cell.
void write_vtk_cells(std::ostream& os, const Mesh& mesh, const std::vector<double>& values,
                     const std::string& name);

/// UNSTRUCTURED_GRID of the mesh quads with POINT_DATA at the mesh vertices.
void write_vtk_points(std::ostream& os, const Mesh& mesh, const std::vector<double>& values,
                      const std::string& name);

/// Vertex values of an FE function, ordered like write_vtk_points expects.
std::vector<double> vertex_values(const FeFunction& f);

/// CSV with header x,y,value, one row per voxel.
void write_voxel_csv(std::ostream& os, const VoxelField& field);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

/// Opens `path` for writing and calls `body`; throws IoError on failure.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& body);

}  // namespace uwpg

#endif  // UWPG_VTK_HPP
