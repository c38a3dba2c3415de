#pragma once

#include <string>
#include <vector>

#include "hestonabc/abc.hpp"

namespace hestonabc::cli {

struct ReferenceCell {
  std::string table;
  std::string preset;
  abc::BoundaryKind kind = abc::BoundaryKind::original;
  double h = 0.0;
  double s_max = 0.0;
  double v_max = 0.0;
  double value = 0.0;
  double tol_rel = 0.0;
};

/// Directory holding reference_errors.csv: $HESTON_ABC_DATA_DIR, else the build-time path.
std::string data_dir();

/// Parses the '#'-commented CSV. Throws std::runtime_error on a malformed line.
std::vector<ReferenceCell> load_reference_tables(const std::string& path);

std::vector<ReferenceCell> load_default_reference_tables();

}  // namespace hestonabc::cli
