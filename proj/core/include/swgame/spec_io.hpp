#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "swgame/game.hpp"
#include "swgame/lattice.hpp"
#include "swgame/value_field.hpp"

namespace swgame {

// Malformed or incomplete specification document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Game specification document:
//   {"modes": {"m1": 2, "m2": 2}, "horizon": 1.0, "initial": {"s": 0.0, "x0": 0.0},
//    "rewards": {"f": [[...]]}, "terminal": {"h": [[...]]},
//    "costs": {"ghat": [[...]], "gcheck": [[...]]},
//    "dynamics": {"b": "...", "sigma": "..."}}
// Matrix entries are expression strings or numbers.
GameSpec parse_spec(std::string_view json_text);
GameSpec load_spec(const std::filesystem::path& file);

// Canonical document with expressions in printed form and numbers at 17
// significant digits. parse_spec(spec_to_json(s)) evaluates identically.
std::string spec_to_json(const GameSpec& spec);

// %.17g
std::string format_double(double v);

// Header n,t,node,x,i,j,Y,L,U,dKplus,dKminus; modes 1-based.
void write_value_csv(std::ostream& out, const ValueField& field);

// Header n,t,x.
void write_path_csv(std::ostream& out, const Path& path);

}  // namespace swgame
