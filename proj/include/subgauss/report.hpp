#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "subgauss/bounds.hpp"
#include "subgauss/orlicz.hpp"

namespace subgauss {

using Json = nlohmann::ordered_json;

/// Rows of scalar cells rendered as CSV with a header line.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  void add(std::vector<Json> row);
  std::string to_csv() const;
};

/// Finite doubles round-trip; non-finite values become null in JSON.
Json number(double v);

Json to_json(const PsiNorm& n);
Json to_json(const TailBound& b);
Table to_table(const BoundReport& r);

/// Writes `text` to `path`, or to stdout when `path` is empty or "-".
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace subgauss
