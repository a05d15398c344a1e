#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "shockamr/amr.hpp"
#include "shockamr/stabilization.hpp"

namespace shockamr {

/// Header of the per-step CSV: step,cells,dofs,l1_error,wall_s,nl_iters,converged
const std::string& csv_header();
/// One CSV row; doubles with 17 significant digits, NaN as "nan", converged as 0/1.
std::string csv_row(const StepRecord& r);
void write_csv(std::ostream& os, const std::vector<StepRecord>& records);
void write_csv(const std::string& path, const std::vector<StepRecord>& records);
/// Parses a CSV written by write_csv (report fields are not stored).
std::vector<StepRecord> read_csv(std::istream& is);
std::vector<StepRecord> read_csv(const std::string& path);

/// Legacy ASCII VTK unstructured grid. Every node (hanging ones included, with
/// their constrained values) is a point and every leaf a 4-node quad.
/// POINT_DATA holds each component and alpha (when given), CELL_DATA the
/// indicator (when given).
struct VtkFields {
  const DetectorField* alpha = nullptr;
  const IndicatorField* indicator = nullptr;
  std::vector<std::string> component_names;  // defaults to u0, u1, ...
};

void write_vtk(std::ostream& os, const FESpace& space, const StateVector& U, int m, const VtkFields& fields = {});
void write_vtk(const std::string& path, const FESpace& space, const StateVector& U, int m,
               const VtkFields& fields = {});

}  // namespace shockamr
