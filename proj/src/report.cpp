#include "subgauss/report.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "subgauss/error.hpp"

namespace subgauss {

namespace {

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + "\"";
  }
  return v.dump();
}

}  // namespace

void Table::add(std::vector<Json> row) {
  require(row.size() == columns.size(), ErrorKind::InvalidArgument,
          "row width does not match the header");
  rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << columns[j];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << csv_cell(row[j]);
    os << '\n';
  }
  return os.str();
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const PsiNorm& n) {
  Json j;
  j["alpha"] = n.alpha;
  j["value"] = number(n.value);
  j["method"] = to_string(n.method);
  if (n.ci) j["ci"] = Json::array({number(n.ci->first), number(n.ci->second)});
  j["upper_bound"] = n.upper_bound;
  j["degenerate"] = n.degenerate;
  return j;
}

Json to_json(const TailBound& b) {
  Json j;
  j["name"] = b.name;
  j["V"] = number(b.V);
  j["S"] = number(b.S);
  j["c"] = number(b.c);
  j["provenance"] = to_string(b.provenance);
  j["switch_point"] = number(b.switch_point());
  return j;
}

Table to_table(const BoundReport& r) {
  Table t;
  t.columns = {"t", r.bound.name};
  if (r.partner) t.columns.push_back(r.partner->name);
  for (const auto& row : r.rows) {
    std::vector<Json> cells{number(row.t), number(row.bound)};
    if (r.partner) cells.push_back(row.partner ? number(*row.partner) : Json(nullptr));
    t.add(std::move(cells));
  }
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + path.string());
  out << text;
}

}  // namespace subgauss
