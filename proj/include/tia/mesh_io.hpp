#pragma once

#include <array>
#include <string>
#include <vector>

#include "tia/geometry.hpp"
#include "tia/metrics.hpp"
#include "tia/types.hpp"

namespace tia {

enum class MeshFormat { Obj, VtkAscii };

MeshFormat mesh_format_from_string(const std::string& name);

/// Write the assembly surface as an ASCII polygon file. OBJ carries one
/// named object per body; VTK (legacy polydata) additionally carries
/// per-face "pressure" and "body_id" cell scalars. Pressures are only
/// representable in the VTK format.
void export_mesh(const Assembly& asm_, MeshFormat format, const std::string& path,
                 const PressureField* pressures = nullptr);

struct ImportedObject {
  std::string name;
  std::vector<std::array<Index, 4>> faces;  // global vertex indices
};

struct ImportedMesh {
  std::vector<Vec3> vertices;
  std::vector<ImportedObject> objects;
  std::vector<double> face_pressures;  // empty unless present in the file
};

ImportedMesh import_mesh(MeshFormat format, const std::string& path);

}  // namespace tia
