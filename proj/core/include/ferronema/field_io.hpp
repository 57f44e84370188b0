#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>

#include "ferronema/effective.hpp"
#include "ferronema/energy.hpp"

namespace ferronema {

// Floats as 17 significant digits, '.' decimal separator.
std::string format_number(double x);

// Legacy ASCII VTK STRUCTURED_POINTS.
void write_vtk(std::ostream& os, const VectorField& f, const std::string& name = "u");
void write_vtk(std::ostream& os, const MatrixField& A, const std::string& name = "A");
void write_vtk(std::ostream& os, const EffectiveMagnetization& M, const std::string& name = "M");

// CSV: x,y,z then 3 components (vectors) or 6 upper-triangle entries.
void write_csv(std::ostream& os, const VectorField& f);
void write_csv(std::ostream& os, const MatrixField& A);
void write_csv(std::ostream& os, const EffectiveMagnetization& M);


// Opens `path` for writing or throws ConfigError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace ferronema
