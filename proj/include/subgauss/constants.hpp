#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "subgauss/bounds.hpp"

namespace subgauss {

/// Absolute constants that the theory leaves unnamed. Values are fitted once
/// by subgauss_calibrate on seeds disjoint from the acceptance seeds and then
/// frozen in data/constants.txt (mirrored by the compiled-in defaults).
struct NamedConstant {
  double value = 0.0;
  Provenance provenance = Provenance::Fitted;
  std::string note;
};

class ConstantTable {
 public:
  /// Compiled-in defaults.
  static ConstantTable defaults();

  /// Parses `name=value # provenance note` lines; unknown names are rejected.
  static ConstantTable load(const std::filesystem::path& path);

  double value(const std::string& name) const;
  const NamedConstant& at(const std::string& name) const;
  void set(const std::string& name, NamedConstant c);
  const std::map<std::string, NamedConstant>& entries() const { return entries_; }

  std::string serialize() const;

 private:
  std::map<std::string, NamedConstant> entries_;
};

/// Process-wide table used when a caller does not pass a constant.
const ConstantTable& active_constants();
void set_active_constants(ConstantTable table);

/// Path of the shipped constants file.
std::filesystem::path default_constants_path();

}  // namespace subgauss
