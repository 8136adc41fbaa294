#include "rheocontrol/field_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rheocontrol/errors.hpp"

namespace rheo {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string fmt17(double v) { return format_full(v); }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("field io: cannot write '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("field io: cannot read '" + path + "'");
  return in;
}

long parse_index(const std::string& s, const std::string& path, long line_no) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || v < 0)
    throw ConfigError("field io: '" + path + "' line " + std::to_string(line_no) +
                      ": bad index '" + s + "'");
  return v;
}

struct Row {
  int i, j;
  double value;
};

std::vector<Row> read_rows(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("field io: '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "i,j,value")
    throw ConfigError("field io: '" + path + "' must start with the header 'i,j,value'");

  std::vector<Row> rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos)
      throw ConfigError("field io: '" + path + "' line " + std::to_string(line_no) +
                        ": expected three comma-separated columns");
    Row r;
    r.i = static_cast<int>(parse_index(line.substr(0, c1), path, line_no));
    r.j = static_cast<int>(parse_index(line.substr(c1 + 1, c2 - c1 - 1), path, line_no));
    const std::string vs = line.substr(c2 + 1);
    char* end = nullptr;
    r.value = std::strtod(vs.c_str(), &end);
    if (end == vs.c_str() || *end != '\0')
      throw ConfigError("field io: '" + path + "' line " + std::to_string(line_no) +
                        ": bad value '" + vs + "'");
    rows.push_back(r);
  }
  if (rows.empty()) throw ConfigError("field io: '" + path + "' has no data rows");
  return rows;
}

std::vector<double> rows_to_rect(const std::vector<Row>& rows, const std::string& path, int* ni,
                                 int* nj) {
  int mi = 0, mj = 0;
  for (const Row& r : rows) {
    mi = std::max(mi, r.i);
    mj = std::max(mj, r.j);
  }
  const int w = mi + 1, h = mj + 1;
  if (static_cast<long>(rows.size()) != static_cast<long>(w) * h)
    throw ConfigError("field io: '" + path + "' does not fill a full " + std::to_string(w) +
                      " x " + std::to_string(h) + " rectangle");
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  std::vector<char> seen(out.size(), 0);
  for (const Row& r : rows) {
    const std::size_t k = static_cast<std::size_t>(r.j) * w + r.i;
    if (seen[k])
      throw ConfigError("field io: '" + path + "' has a duplicate entry for (" +
                        std::to_string(r.i) + ", " + std::to_string(r.j) + ")");
    seen[k] = 1;
    out[k] = r.value;
  }
  *ni = w;
  *nj = h;
  return out;
}

void write_vtk_header(std::ofstream& out, const MacGrid& g, const std::string& title) {
  const double h = g.h();
  out << "# vtk DataFile Version 3.0\n"
      << title << "\n"
      << "ASCII\n"
      << "DATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << g.nx() << " " << g.ny() << " 1\n"
      << "ORIGIN " << fmt17(0.5 * h) << " " << fmt17(0.5 * h) << " 0\n"
      << "SPACING " << fmt17(h) << " " << fmt17(h) << " 1\n"
      << "POINT_DATA " << g.n_cells() << "\n";
}

}  // namespace

void write_indexed_csv(const std::string& path, int ni, int nj,
                       const std::function<double(int, int)>& at) {
  std::ofstream out = open_out(path);
  out << "i,j,value\n";
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < ni; ++i) out << i << "," << j << "," << fmt17(at(i, j)) << "\n";
  if (!out) throw IoError("field io: write to '" + path + "' failed");
}

std::vector<double> read_indexed_csv(const std::string& path, int* ni, int* nj) {
  return rows_to_rect(read_rows(path), path, ni, nj);
}

void export_velocity_csv(const StaggeredField& y, const std::string& u_path,
                         const std::string& v_path) {
  const MacGrid& g = y.grid();
  write_indexed_csv(u_path, g.nx() + 1, g.ny(), [&](int i, int j) { return y.u(i, j); });
  write_indexed_csv(v_path, g.nx(), g.ny() + 1, [&](int i, int j) { return y.v(i, j); });
}

StaggeredField import_velocity_csv(const MacGrid& g, const std::string& u_path,
                                   const std::string& v_path) {
  int ni = 0, nj = 0;
  const std::vector<double> us = read_indexed_csv(u_path, &ni, &nj);
  if (ni != g.nx() + 1 || nj != g.ny())
    throw ShapeError("field io: '" + u_path + "' is " + std::to_string(ni) + " x " +
                     std::to_string(nj) + ", expected " + std::to_string(g.nx() + 1) + " x " +
                     std::to_string(g.ny()));
  const std::vector<double> vs = read_indexed_csv(v_path, &ni, &nj);
  if (ni != g.nx() || nj != g.ny() + 1)
    throw ShapeError("field io: '" + v_path + "' is " + std::to_string(ni) + " x " +
                     std::to_string(nj) + ", expected " + std::to_string(g.nx()) + " x " +
                     std::to_string(g.ny() + 1));
  StaggeredField y(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i)
      y.u(i, j) = us[static_cast<std::size_t>(j) * (g.nx() + 1) + i];
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) y.v(i, j) = vs[static_cast<std::size_t>(j) * g.nx() + i];
  return y;
}

void export_pressure_csv(const PressureField& p, const std::string& path) {
  const MacGrid& g = p.grid();
  write_indexed_csv(path, g.nx(), g.ny(), [&](int i, int j) { return p.at(i, j); });
}

PressureField import_pressure_csv(const MacGrid& g, const std::string& path) {
  int ni = 0, nj = 0;
  const std::vector<double> vals = read_indexed_csv(path, &ni, &nj);
  if (ni != g.nx() || nj != g.ny())
    throw ShapeError("field io: '" + path + "' is " + std::to_string(ni) + " x " +
                     std::to_string(nj) + ", expected " + std::to_string(g.nx()) + " x " +
                     std::to_string(g.ny()));
  PressureField p(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) p.at(i, j) = vals[static_cast<std::size_t>(j) * g.nx() + i];
  return p;
}

void export_pressure_vtk(const PressureField& p, const std::string& path,
                         const std::string& name) {
  const MacGrid& g = p.grid();
  std::ofstream out = open_out(path);
  write_vtk_header(out, g, name);
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out << fmt17(p.at(i, j)) << "\n";
  if (!out) throw IoError("field io: write to '" + path + "' failed");
}

void export_velocity_vtk(const StaggeredField& y, const std::string& path,
                         const std::string& name) {
  const MacGrid& g = y.grid();
  std::ofstream out = open_out(path);
  write_vtk_header(out, g, name);
  out << "VECTORS " << name << " double\n";
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double uc = 0.5 * (y.u(i, j) + y.u(i + 1, j));
      const double vc = 0.5 * (y.v(i, j) + y.v(i, j + 1));
      out << fmt17(uc) << " " << fmt17(vc) << " 0\n";
    }
  if (!out) throw IoError("field io: write to '" + path + "' failed");
}

}  // namespace rheo
