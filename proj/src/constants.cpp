#include "subgauss/constants.hpp"

#include <fstream>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "subgauss/error.hpp"

namespace subgauss {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Provenance parse_provenance(const std::string& word) {
  if (word == "proof-traced") return Provenance::ProofTraced;
  if (word == "fitted") return Provenance::Fitted;
  return Provenance::User;
}

std::shared_mutex& table_mutex() {
  static std::shared_mutex m;
  return m;
}

ConstantTable& table_storage() {
  static ConstantTable table = ConstantTable::defaults();
  return table;
}

}  // namespace

ConstantTable ConstantTable::defaults() {
  // Keep in sync with data/constants.txt (regenerate with subgauss_calibrate).
  ConstantTable t;
  t.entries_ = {
      {"hw_c", {0.468332, Provenance::Fitted, "Hanson-Wright tail exponent"}},
      {"jl_C", {0.677271, Provenance::Fitted, "JL dimension constant"}},
      {"sketch_c0", {0.0746691, Provenance::Fitted, "sketch dimension constant"}},
      {"nsp_C", {0.85517, Provenance::Fitted, "NSP dimension constant"}},
      {"increment_C", {1.36527, Provenance::Fitted, "increment psi_2 constant"}},
  };
  return t;
}

ConstantTable ConstantTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open constants file " + path.string());
  ConstantTable t = defaults();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string note;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      note = trim(line.substr(hash + 1));
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::Io,
            path.string() + ":" + std::to_string(lineno) + ": expected name=value");
    const std::string name = trim(line.substr(0, eq));
    require(t.entries_.count(name) > 0, ErrorKind::Io,
            path.string() + ":" + std::to_string(lineno) + ": unknown constant '" + name + "'");
    NamedConstant c;
    try {
      c.value = std::stod(trim(line.substr(eq + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Io,
                  path.string() + ":" + std::to_string(lineno) + ": bad value for " + name);
    }
    std::istringstream words(note);
    std::string first;
    words >> first;
    c.provenance = parse_provenance(first);
    c.note = note;
    t.entries_[name] = c;
  }
  return t;
}

double ConstantTable::value(const std::string& name) const { return at(name).value; }

const NamedConstant& ConstantTable::at(const std::string& name) const {
  const auto it = entries_.find(name);
  require(it != entries_.end(), ErrorKind::InvalidArgument, "unknown constant '" + name + "'");
  return it->second;
}

void ConstantTable::set(const std::string& name, NamedConstant c) { entries_[name] = std::move(c); }

std::string ConstantTable::serialize() const {
  std::ostringstream os;
  os.precision(10);
  for (const auto& [name, c] : entries_) {
    os << name << '=' << c.value << " # " << to_string(c.provenance);
    if (!c.note.empty() && c.note.rfind(to_string(c.provenance), 0) != 0) os << ' ' << c.note;
    else if (c.note.size() > to_string(c.provenance).size())
      os << c.note.substr(to_string(c.provenance).size());
    os << '\n';
  }
  return os.str();
}

const ConstantTable& active_constants() {
  std::shared_lock lock(table_mutex());
  return table_storage();
}

void set_active_constants(ConstantTable table) {
  std::unique_lock lock(table_mutex());
  table_storage() = std::move(table);
}

std::filesystem::path default_constants_path() {
  return std::filesystem::path(SUBGAUSS_DATA_DIR) / "constants.txt";
}

}  // namespace subgauss
