#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rheocontrol/fields.hpp"

namespace rheo {

// Shortest fixed-rule decimal form that reproduces the double bitwise
// (printf %.17g); the one number format used in every text artifact.
std::string format_full(double v);

// Indexed CSV: header line `i,j,value`, one row per sample, 0-based indices,
// i fastest within each j row, values printed with 17 significant digits so
// every finite double survives a write/read round trip bitwise.

void write_indexed_csv(const std::string& path, int ni, int nj,
                       const std::function<double(int, int)>& at);

// Reads a full (ni x nj) rectangle (dimensions inferred from the largest
// indices); duplicate or missing entries are errors.  Returns row-major
// storage with i fastest: value(i, j) at out[j * ni + i].
std::vector<double> read_indexed_csv(const std::string& path, int* ni, int* nj);

// Velocity components as two CSV files: u has (nx+1) x ny samples, v has
// nx x (ny+1), boundary faces included.
void export_velocity_csv(const StaggeredField& y, const std::string& u_path,
                         const std::string& v_path);
StaggeredField import_velocity_csv(const MacGrid& g, const std::string& u_path,
                                   const std::string& v_path);

void export_pressure_csv(const PressureField& p, const std::string& path);
PressureField import_pressure_csv(const MacGrid& g, const std::string& path);

// Legacy VTK structured-points ASCII, one dataset per file, sampled at cell
// centres (velocity is the two-face average per component).
void export_pressure_vtk(const PressureField& p, const std::string& path,
                         const std::string& name);
void export_velocity_vtk(const StaggeredField& y, const std::string& path,
                         const std::string& name);

}  // namespace rheo
