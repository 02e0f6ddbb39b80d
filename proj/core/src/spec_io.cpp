#include "swgame/spec_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace swgame {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw FormatError(where + " must be an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(where + " is missing \"" + key + "\"");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw FormatError(where + " must be a number");
  return v.get<double>();
}

int count(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw FormatError(where + " must be an integer");
  return v.get<int>();
}

ScalarField field(const json& v, const std::string& where) {
  if (v.is_number()) return ScalarField::constant(v.get<double>());
  if (!v.is_string()) throw FormatError(where + " must be an expression string or a number");
  try {
    return ScalarField::parse(v.get<std::string>());
  } catch (const ParseError& e) {
    throw FormatError(where + ": " + e.what());
  }
}

FieldMatrix matrix(const json& v, int rows, int cols, const std::string& where) {
  if (!v.is_array() || v.size() != static_cast<std::size_t>(rows)) {
    throw FormatError(where + " must have " + std::to_string(rows) + " rows");
  }
  FieldMatrix out;
  for (int r = 0; r < rows; ++r) {
    const json& row = v[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(cols)) {
      throw FormatError(where + " row " + std::to_string(r + 1) + " must have " + std::to_string(cols) + " entries");
    }
    out.emplace_back();
    for (int c = 0; c < cols; ++c) {
      out.back().push_back(
          field(row[static_cast<std::size_t>(c)], where + "[" + std::to_string(r + 1) + "][" + std::to_string(c + 1) + "]"));
    }
  }
  return out;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string matrix_text(const FieldMatrix& m) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.size(); ++r) {
    out += r ? ", [" : "[";
    for (std::size_t c = 0; c < m[r].size(); ++c) {
      if (c) out += ", ";
      out += quoted(m[r][c].to_string());
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace

GameSpec parse_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  const json& modes = member(doc, "modes", "document");
  const int m1 = count(member(modes, "m1", "modes"), "modes.m1");
  const int m2 = count(member(modes, "m2", "modes"), "modes.m2");
  if (m1 < 1 || m2 < 1) throw FormatError("mode counts must be at least 1");

  GameSpecData d;
  d.modes = ModeSpace(m1, m2);
  d.horizon = number(member(doc, "horizon", "document"), "horizon");
  const json& initial = member(doc, "initial", "document");
  d.start_time = number(member(initial, "s", "initial"), "initial.s");
  d.x0 = number(member(initial, "x0", "initial"), "initial.x0");
  d.reward = matrix(member(member(doc, "rewards", "document"), "f", "rewards"), m1, m2, "f");
  d.terminal = matrix(member(member(doc, "terminal", "document"), "h", "terminal"), m1, m2, "h");
  const json& costs = member(doc, "costs", "document");
  d.ghat = matrix(member(costs, "ghat", "costs"), m1, m1, "ghat");
  d.gcheck = matrix(member(costs, "gcheck", "costs"), m2, m2, "gcheck");
  const json& dyn = member(doc, "dynamics", "document");
  d.drift = field(member(dyn, "b", "dynamics"), "b");
  d.volatility = field(member(dyn, "sigma", "dynamics"), "sigma");
  return GameSpec(std::move(d));
}

GameSpec load_spec(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw FormatError("cannot read " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

std::string spec_to_json(const GameSpec& spec) {
  const GameSpecData& d = spec.data();
  std::string out = "{\n";
  out += "  \"costs\": {\"gcheck\": " + matrix_text(d.gcheck) + ", \"ghat\": " + matrix_text(d.ghat) + "},\n";
  out += "  \"dynamics\": {\"b\": " + quoted(d.drift.to_string()) + ", \"sigma\": " +
         quoted(d.volatility.to_string()) + "},\n";
  out += "  \"horizon\": " + format_double(d.horizon) + ",\n";
  out += "  \"initial\": {\"s\": " + format_double(d.start_time) + ", \"x0\": " + format_double(d.x0) + "},\n";
  out += "  \"modes\": {\"m1\": " + std::to_string(d.modes.m1()) + ", \"m2\": " + std::to_string(d.modes.m2()) + "},\n";
  out += "  \"rewards\": {\"f\": " + matrix_text(d.reward) + "},\n";
  out += "  \"terminal\": {\"h\": " + matrix_text(d.terminal) + "}\n";
  return out + "}\n";
}

void write_value_csv(std::ostream& out, const ValueField& field) {
  const Lattice& lat = *field.lattice;
  const auto pairs = field.modes().pairs();
  out << "n,t,node,x,i,j,Y,L,U,dKplus,dKminus\n";
  for (int n = 0; n <= lat.steps(); ++n) {
    const std::string t = format_double(lat.time(n));
    for (int k = 0; k < lat.nodes(); ++k) {
      const std::string x = format_double(lat.state(k));
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        const int p = static_cast<int>(q);
        out << n << ',' << t << ',' << k << ',' << x << ',' << pairs[q].i + 1 << ',' << pairs[q].j + 1 << ','
            << format_double(field.y.at(n, k, p)) << ',' << format_double(field.lower.at(n, k, p)) << ','
            << format_double(field.upper.at(n, k, p)) << ',' << format_double(field.dk_plus.at(n, k, p)) << ','
            << format_double(field.dk_minus.at(n, k, p)) << '\n';
      }
    }
  }
}

void write_path_csv(std::ostream& out, const Path& path) {
  out << "n,t,x\n";
  for (int n = 0; n <= path.steps(); ++n) {
    out << n << ',' << format_double(path.time(n)) << ',' << format_double(path.x[static_cast<std::size_t>(n)]) << '\n';
  }
}

}  // namespace swgame
