#include "shockamr/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/algorithm/string.hpp>

namespace shockamr {

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

}  // namespace

const std::string& csv_header() {
  static const std::string h = "step,cells,dofs,l1_error,wall_s,nl_iters,converged";
  return h;
}

std::string csv_row(const StepRecord& r) {
  std::ostringstream os;
  os << r.step << ',' << r.cells << ',' << r.dofs << ',' << fmt_double(r.l1_error) << ','
     << fmt_double(r.wall_s) << ',' << r.nl_iters << ',' << (r.converged ? 1 : 0);
  return os.str();
}

void write_csv(std::ostream& os, const std::vector<StepRecord>& records) {
  os << csv_header() << '\n';
  for (const auto& r : records) os << csv_row(r) << '\n';
}

void write_csv(const std::string& path, const std::vector<StepRecord>& records) {
  auto os = open_out(path);
  write_csv(os, records);
}

std::vector<StepRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || boost::trim_copy(line) != csv_header())
    throw std::invalid_argument("CSV header does not match " + csv_header());
  std::vector<StepRecord> out;
  while (std::getline(is, line)) {
    boost::trim(line);
    if (line.empty()) continue;
    std::vector<std::string> f;
    boost::split(f, line, boost::is_any_of(","));
    if (f.size() != 7) throw std::invalid_argument("CSV row needs 7 fields: " + line);
    StepRecord r;
    r.step = std::stoi(f[0]);
    r.cells = std::stoull(f[1]);
    r.dofs = std::stoull(f[2]);
    r.l1_error = parse_double(f[3]);
    r.wall_s = parse_double(f[4]);
    r.nl_iters = std::stoi(f[5]);
    r.converged = std::stoi(f[6]) != 0;
    out.push_back(r);
  }
  return out;
}

std::vector<StepRecord> read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  return read_csv(is);
}

void write_vtk(std::ostream& os, const FESpace& space, const StateVector& U, int m, const VtkFields& fields) {
  const std::size_t np = space.num_nodes();
  const std::size_t nc = space.mesh().num_cells();
  os << "# vtk DataFile Version 3.0\nshockamr\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << np << " double\n";
  os.precision(17);
  for (std::size_t k = 0; k < np; ++k) os << space.coord(k).x << ' ' << space.coord(k).y << " 0\n";
  os << "CELLS " << nc << ' ' << 5 * nc << '\n';
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& nd = space.cell_nodes(c);
    os << "4 " << nd[0] << ' ' << nd[1] << ' ' << nd[3] << ' ' << nd[2] << '\n';
  }
  os << "CELL_TYPES " << nc << '\n';
  for (std::size_t c = 0; c < nc; ++c) os << "9\n";
  if (fields.indicator) {
    if (fields.indicator->size() != nc) throw std::invalid_argument("indicator size does not match the mesh");
    os << "CELL_DATA " << nc << "\nSCALARS indicator double 1\nLOOKUP_TABLE default\n";
    for (double v : *fields.indicator) os << v << '\n';
  }
  os << "POINT_DATA " << np << '\n';
  for (int comp = 0; comp < m; ++comp) {
    const std::string name = comp < static_cast<int>(fields.component_names.size())
                                 ? fields.component_names[static_cast<std::size_t>(comp)]
                                 : "u" + std::to_string(comp);
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    const Eigen::VectorXd v = space.all_node_values(U, m, comp);
    for (Eigen::Index k = 0; k < v.size(); ++k) os << v[k] << '\n';
  }
  if (fields.alpha) {
    os << "SCALARS alpha double 1\nLOOKUP_TABLE default\n";
    for (std::size_t k = 0; k < np; ++k) os << fields.alpha->at(k, space.num_dofs()) << '\n';
  }
}

void write_vtk(const std::string& path, const FESpace& space, const StateVector& U, int m,
               const VtkFields& fields) {
  auto os = open_out(path);
  write_vtk(os, space, U, m, fields);
}

}  // namespace shockamr
