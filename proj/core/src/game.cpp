#include "swgame/game.hpp"

#include <cmath>

namespace swgame {

ModeSpace::ModeSpace(int m1, int m2) : m1_(m1), m2_(m2) {
  if (m1 < 1 || m2 < 1) throw SpecError("mode counts must be at least 1");
}

std::vector<ModePair> ModeSpace::pairs() const {
  std::vector<ModePair> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (int i = 0; i < m1_; ++i) {
    for (int j = 0; j < m2_; ++j) out.push_back({i, j});
  }
  return out;
}

namespace {

void check_shape(const FieldMatrix& m, int rows, int cols, const char* name) {
  const auto bad = [&] {
    return SpecError(std::string(name) + " must be " + std::to_string(rows) + "x" + std::to_string(cols));
  };
  if (m.size() != static_cast<std::size_t>(rows)) throw bad();
  for (const auto& row : m) {
    if (row.size() != static_cast<std::size_t>(cols)) throw bad();
  }
}

void check_zero_diagonal(const FieldMatrix& m, const char* name) {
  for (std::size_t k = 0; k < m.size(); ++k) {
    const auto v = m[k][k].constant_value();
    if (!v || *v != 0.0) {
      throw SpecError(std::string(name) + " diagonal entry " + std::to_string(k + 1) + " must be identically 0");
    }
  }
}

}  // namespace

GameSpec::GameSpec(GameSpecData data) : data_(std::move(data)) {
  const int m1 = data_.modes.m1();
  const int m2 = data_.modes.m2();
  if (!std::isfinite(data_.horizon) || data_.horizon <= 0.0) throw SpecError("horizon must be positive");
  if (!std::isfinite(data_.start_time) || data_.start_time < 0.0 || data_.start_time >= data_.horizon) {
    throw SpecError("initial time must lie in [0, horizon)");
  }
  if (!std::isfinite(data_.x0)) throw SpecError("initial state must be finite");
  check_shape(data_.reward, m1, m2, "f");
  check_shape(data_.terminal, m1, m2, "h");
  check_shape(data_.ghat, m1, m1, "ghat");
  check_shape(data_.gcheck, m2, m2, "gcheck");
  check_zero_diagonal(data_.ghat, "ghat");
  check_zero_diagonal(data_.gcheck, "gcheck");
  for (const auto& row : data_.terminal) {
    for (const auto& h : row) {
      if (h.depends_on_t()) throw SpecError("terminal reward h must depend on x only");
    }
  }
}

CostTable evaluate_costs(const GameSpec& spec, double t, double x) {
  const int m1 = spec.modes().m1();
  const int m2 = spec.modes().m2();
  CostTable c{m1, m2, std::vector<double>(static_cast<std::size_t>(m1 * m1), 0.0),
              std::vector<double>(static_cast<std::size_t>(m2 * m2), 0.0)};
  for (int a = 0; a < m1; ++a) {
    for (int b = 0; b < m1; ++b) {
      if (a != b) c.ghat[static_cast<std::size_t>(a * m1 + b)] = spec.ghat(a, b)(t, x);
    }
  }
  for (int a = 0; a < m2; ++a) {
    for (int b = 0; b < m2; ++b) {
      if (a != b) c.gcheck[static_cast<std::size_t>(a * m2 + b)] = spec.gcheck(a, b)(t, x);
    }
  }
  return c;
}

FieldMatrix constant_cost_matrix(int size, double off_diagonal) {
  FieldMatrix m(static_cast<std::size_t>(size));
  for (int a = 0; a < size; ++a) {
    for (int b = 0; b < size; ++b) {
      m[static_cast<std::size_t>(a)].push_back(ScalarField::constant(a == b ? 0.0 : off_diagonal));
    }
  }
  return m;
}

FieldMatrix constant_matrix(int rows, int cols, double value) {
  return FieldMatrix(static_cast<std::size_t>(rows),
                     std::vector<ScalarField>(static_cast<std::size_t>(cols), ScalarField::constant(value)));
}

namespace {

FieldMatrix map_matrix(const FieldMatrix& m, bool skip_diagonal, auto&& fn) {
  FieldMatrix out = m;
  for (std::size_t a = 0; a < out.size(); ++a) {
    for (std::size_t b = 0; b < out[a].size(); ++b) {
      if (skip_diagonal && a == b) continue;
      out[a][b] = fn(out[a][b]);
    }
  }
  return out;
}

}  // namespace

GameSpec scaled(const GameSpec& spec, double lambda) {
  if (!(lambda > 0.0)) throw SpecError("scale factor must be positive");
  GameSpecData d = spec.data();
  const auto scale = [lambda](const ScalarField& f) { return lambda * f; };
  d.reward = map_matrix(d.reward, false, scale);
  d.terminal = map_matrix(d.terminal, false, scale);
  d.ghat = map_matrix(d.ghat, true, scale);
  d.gcheck = map_matrix(d.gcheck, true, scale);
  return GameSpec(std::move(d));
}

GameSpec with_reward_shift(const GameSpec& spec, double shift) {
  GameSpecData d = spec.data();
  const auto c = ScalarField::constant(shift);
  d.reward = map_matrix(d.reward, false, [&c](const ScalarField& f) { return f + c; });
  return GameSpec(std::move(d));
}

}  // namespace swgame
