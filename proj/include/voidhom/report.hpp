#pragma once

#include <string>
#include <vector>

#include "voidhom/elastic.hpp"
#include "voidhom/grid.hpp"

namespace voidhom {

// One CSV record per cell solve.  The column set is fixed:
// scenario,kind,datum,rho,eps_or_r,spacing,raw_energy,normalized_density,
// tolerance,optimizer_flag.
struct CsvRow {
  std::string scenario;
  std::string kind;   // bulk | void | jump | gbv | fqc
  std::string datum;  // e.g. "nu=(1,0)" or "xi=[1,0;0,1]"
  double rho = 0.0;
  double eps_or_r = 0.0;
  double spacing = 0.0;
  double raw_energy = 0.0;
  double normalized_density = 0.0;
  double tolerance = 0.0;
  std::string optimizer_flag;
};

// 12 significant digits, shortest form ("%.12g"); the single float format
// used by every report writer so outputs are byte-stable.
std::string format_value(double v);

// Header plus one line per row, '\n' separated, trailing newline.
std::string csv_table(const std::vector<CsvRow>& rows);

// Grid labels as an SVG of unit squares, one per raster cell: solid/in dark,
// void/out light, jump sides in two tones, collar cells outlined.  No
// timestamps or other run metadata; byte-stable for identical inputs.
std::string svg_labels(const LabelField& field);

// Binary PGM (P5, maxval 255) over the full raster bounding box.
// Gray codes: 255 cells outside the domain shape, 0 IN, 32 SOLID_MINUS,
// 64 SOLID_PLUS, 128 VOID layer, 192 OUT (two-label void phase).
std::string pgm_labels(const LabelField& field);

// Legacy ASCII VTK unstructured grid carrying the P1 displacement
// (VECTORS, zero-padded z) or scalar field (SCALARS) on the mesh nodes.
std::string vtk_displacement(const FemMesh& mesh, const std::vector<double>& values,
                             bool scalar_field);

// Writes `content` to path, replacing any existing file; throws SolverError
// on I/O failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace voidhom
