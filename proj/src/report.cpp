#include "voidhom/report.hpp"

#include <cstdio>
#include <fstream>

#include "voidhom/errors.hpp"

namespace voidhom {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_table(const std::vector<CsvRow>& rows) {
  std::string out =
      "scenario,kind,datum,rho,eps_or_r,spacing,raw_energy,"
      "normalized_density,tolerance,optimizer_flag\n";
  for (const CsvRow& r : rows) {
    out += r.scenario;
    out += ',';
    out += r.kind;
    out += ',';
    out += r.datum;
    out += ',';
    out += format_value(r.rho);
    out += ',';
    out += format_value(r.eps_or_r);
    out += ',';
    out += format_value(r.spacing);
    out += ',';
    out += format_value(r.raw_energy);
    out += ',';
    out += format_value(r.normalized_density);
    out += ',';
    out += format_value(r.tolerance);
    out += ',';
    out += r.optimizer_flag;
    out += '\n';
  }
  return out;
}

namespace {

const char* label_fill(Label label) {
  switch (label) {
    case Label::In:
      return "#355070";
    case Label::Out:
      return "#eaac8b";
    case Label::SolidMinus:
      return "#355070";
    case Label::SolidPlus:
      return "#6d597a";
    case Label::Void:
      return "#e56b6f";
  }
  return "#000000";
}

uint8_t label_gray(Label label) {
  switch (label) {
    case Label::In:
      return 0;
    case Label::SolidMinus:
      return 32;
    case Label::SolidPlus:
      return 64;
    case Label::Void:
      return 128;
    case Label::Out:
      return 192;
  }
  return 255;
}

}  // namespace

std::string svg_labels(const LabelField& field) {
  const GridDomain& d = *field.domain;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 ";
  out += std::to_string(d.nx);
  out += ' ';
  out += std::to_string(d.ny);
  out += "\">\n";
  out += "<rect width=\"";
  out += std::to_string(d.nx);
  out += "\" height=\"";
  out += std::to_string(d.ny);
  out += "\" fill=\"#ffffff\"/>\n";
  for (int cell = 0; cell < d.cell_count(); ++cell) {
    IVec2 rc = d.raster_of_cell[size_t(cell)];
    out += "<rect x=\"";
    out += std::to_string(rc.x);
    out += "\" y=\"";
    out += std::to_string(d.ny - 1 - rc.y);  // image y grows downward
    out += "\" width=\"1\" height=\"1\" fill=\"";
    out += label_fill(field.labels[size_t(cell)]);
    out += '"';
    if (field.frozen[size_t(cell)]) out += " stroke=\"#222222\" stroke-width=\"0.08\"";
    out += "/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string pgm_labels(const LabelField& field) {
  const GridDomain& d = *field.domain;
  std::string out = "P5\n" + std::to_string(d.nx) + " " + std::to_string(d.ny) + "\n255\n";
  out.reserve(out.size() + size_t(d.nx) * size_t(d.ny));
  for (int iy = d.ny - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < d.nx; ++ix) {
      int32_t cell = d.cell_at(ix, iy);
      out += char(cell < 0 ? uint8_t(255) : label_gray(field.labels[size_t(cell)]));
    }
  }
  return out;
}

std::string vtk_displacement(const FemMesh& mesh, const std::vector<double>& values,
                             bool scalar_field) {
  const size_t comps = scalar_field ? 1 : 2;
  if (values.size() != comps * size_t(mesh.node_count()))
    throw SolverError("vtk export: field size does not match the mesh");
  std::string out = "# vtk DataFile Version 3.0\nP1 displacement field\nASCII\n";
  out += "DATASET UNSTRUCTURED_GRID\n";
  out += "POINTS " + std::to_string(mesh.node_count()) + " double\n";
  for (int node = 0; node < mesh.node_count(); ++node) {
    Vec2 p = mesh.node_position(node);
    out += format_value(p.x) + " " + format_value(p.y) + " 0\n";
  }
  const int ntri = mesh.triangle_count();
  out += "CELLS " + std::to_string(ntri) + " " + std::to_string(4 * ntri) + "\n";
  for (int t = 0; t < ntri; ++t) {
    const int32_t* nodes = &mesh.tri_nodes[size_t(t) * 3];
    out += "3 " + std::to_string(nodes[0]) + " " + std::to_string(nodes[1]) + " " +
           std::to_string(nodes[2]) + "\n";
  }
  out += "CELL_TYPES " + std::to_string(ntri) + "\n";
  for (int t = 0; t < ntri; ++t) out += "5\n";
  out += "POINT_DATA " + std::to_string(mesh.node_count()) + "\n";
  if (scalar_field) {
    out += "SCALARS u double 1\nLOOKUP_TABLE default\n";
    for (int node = 0; node < mesh.node_count(); ++node) {
      out += format_value(values[size_t(node)]) + "\n";
    }
  } else {
    out += "VECTORS u double\n";
    for (int node = 0; node < mesh.node_count(); ++node) {
      out += format_value(values[size_t(node) * 2]) + " " +
             format_value(values[size_t(node) * 2 + 1]) + " 0\n";
    }
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SolverError("cannot open for writing: " + path);
  out.write(content.data(), std::streamsize(content.size()));
  if (!out) throw SolverError("failed writing: " + path);
}

}  // namespace voidhom
