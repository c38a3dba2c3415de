#include "reference_tables.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hestonabc::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

std::string data_dir() {
  if (const char* env = std::getenv("HESTON_ABC_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return HESTON_ABC_DATA_DIR;
}

std::vector<ReferenceCell> load_reference_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reference table file " + path);
  std::vector<ReferenceCell> cells;
  std::string line;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = split(line);
    if (f.size() != 8) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 8 fields");
    }
    try {
      cells.push_back({f[0], f[1], abc::parse_boundary_kind(f[2]), std::stod(f[3]),
                       std::stod(f[4]), std::stod(f[5]), std::stod(f[6]), std::stod(f[7])});
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cells;
}

std::vector<ReferenceCell> load_default_reference_tables() {
  return load_reference_tables(data_dir() + "/reference_errors.csv");
}

}  // namespace hestonabc::cli
