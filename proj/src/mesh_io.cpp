#include "tia/mesh_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tia/errors.hpp"

namespace tia {

MeshFormat mesh_format_from_string(const std::string& name) {
  if (name == "obj") return MeshFormat::Obj;
  if (name == "vtk-ascii") return MeshFormat::VtkAscii;
  throw Error("unknown mesh format: " + name);
}

namespace {

std::vector<double> face_pressure_table(const Assembly& asm_, Index body,
                                        const PressureField* pressures) {
  const Index nf = static_cast<Index>(asm_.bodies[body].mesh.surface_faces.size());
  std::vector<double> table(nf, 0.0);
  if (!pressures) return table;
  const BodyPressures& bp = pressures->bodies[body];
  for (Index i = 0; i < static_cast<Index>(bp.own_face.size()); ++i)
    table[bp.own_face[i]] = bp.pressure[i];
  return table;
}

}  // namespace

void export_mesh(const Assembly& asm_, MeshFormat format, const std::string& path,
                 const PressureField* pressures) {
  if (format == MeshFormat::Obj && pressures)
    throw Error("obj carries no per-face scalars; use vtk-ascii for pressures");

  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  char buf[256];

  if (format == MeshFormat::Obj) {
    out << "# tia surface mesh\n";
    Index vertex_base = 1;  // obj is 1-indexed
    for (const Body& b : asm_.bodies) {
      std::snprintf(buf, sizeof buf, "o body_%03" PRId64 "\n", b.id);
      out << buf;
      for (const Vec3& v : b.mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        out << buf;
      }
      for (const auto& f : b.mesh.surface_faces) {
        std::snprintf(buf, sizeof buf, "f %" PRId64 " %" PRId64 " %" PRId64 " %" PRId64 "\n",
                      vertex_base + f[0], vertex_base + f[1], vertex_base + f[2],
                      vertex_base + f[3]);
        out << buf;
      }
      vertex_base += static_cast<Index>(b.mesh.vertices.size());
    }
  } else {
    Index total_vertices = 0, total_faces = 0;
    for (const Body& b : asm_.bodies) {
      total_vertices += static_cast<Index>(b.mesh.vertices.size());
      total_faces += static_cast<Index>(b.mesh.surface_faces.size());
    }
    out << "# vtk DataFile Version 3.0\n";
    out << "tia surface mesh\n";
    out << "ASCII\nDATASET POLYDATA\n";
    out << "POINTS " << total_vertices << " double\n";
    for (const Body& b : asm_.bodies)
      for (const Vec3& v : b.mesh.vertices) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        out << buf;
      }
    out << "POLYGONS " << total_faces << " " << 5 * total_faces << "\n";
    Index base = 0;
    for (const Body& b : asm_.bodies) {
      for (const auto& f : b.mesh.surface_faces)
        out << "4 " << base + f[0] << " " << base + f[1] << " " << base + f[2] << " "
            << base + f[3] << "\n";
      base += static_cast<Index>(b.mesh.vertices.size());
    }
    out << "CELL_DATA " << total_faces << "\n";
    out << "SCALARS body_id int 1\nLOOKUP_TABLE default\n";
    for (const Body& b : asm_.bodies)
      for (size_t i = 0; i < b.mesh.surface_faces.size(); ++i) out << b.id << "\n";
    if (pressures) {
      out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
      for (const Body& b : asm_.bodies) {
        const auto table = face_pressure_table(asm_, b.id, pressures);
        for (double p : table) {
          std::snprintf(buf, sizeof buf, "%.17g\n", p);
          out << buf;
        }
      }
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

ImportedMesh import_mesh(MeshFormat format, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  ImportedMesh mesh;

  if (format == MeshFormat::Obj) {
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ss(line);
      std::string kw;
      ss >> kw;
      if (kw == "o") {
        ImportedObject obj;
        ss >> obj.name;
        mesh.objects.push_back(obj);
      } else if (kw == "v") {
        double x, y, z;
        ss >> x >> y >> z;
        mesh.vertices.emplace_back(x, y, z);
      } else if (kw == "f") {
        if (mesh.objects.empty()) mesh.objects.push_back({"default", {}});
        std::array<Index, 4> f;
        for (auto& idx : f) {
          long long v;
          ss >> v;
          idx = static_cast<Index>(v - 1);
        }
        mesh.objects.back().faces.push_back(f);
      }
    }
    return mesh;
  }

  // VTK legacy polydata
  std::string token;
  Index n_points = 0, n_polys = 0;
  while (in >> token) {
    if (token == "POINTS") {
      std::string type;
      in >> n_points >> type;
      mesh.vertices.resize(n_points);
      for (Index i = 0; i < n_points; ++i) {
        double x, y, z;
        in >> x >> y >> z;
        mesh.vertices[i] = Vec3(x, y, z);
      }
    } else if (token == "POLYGONS") {
      Index total;
      in >> n_polys >> total;
      mesh.objects.push_back({"polydata", {}});
      for (Index i = 0; i < n_polys; ++i) {
        Index k;
        in >> k;
        if (k != 4) throw IoError("vtk import: only quad polygons supported");
        std::array<Index, 4> f;
        for (auto& idx : f) in >> idx;
        mesh.objects.back().faces.push_back(f);
      }
    } else if (token == "SCALARS") {
      std::string name, type;
      int comps;
      in >> name >> type >> comps;
      std::string lut, lut_name;
      in >> lut >> lut_name;
      if (name == "pressure") {
        mesh.face_pressures.resize(n_polys);
        for (Index i = 0; i < n_polys; ++i) in >> mesh.face_pressures[i];
      } else {
        double dummy;
        for (Index i = 0; i < n_polys; ++i) in >> dummy;
      }
    }
  }
  return mesh;
}

}  // namespace tia
