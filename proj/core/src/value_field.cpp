#include "swgame/value_field.hpp"

#include <stdexcept>

namespace swgame {

ValueGrid::ValueGrid(int steps, int nodes, int pairs, double fill)
    : steps_(steps),
      nodes_(nodes),
      pairs_(pairs),
      data_((static_cast<std::size_t>(steps) + 1) * static_cast<std::size_t>(nodes) * static_cast<std::size_t>(pairs),
            fill) {
  if (steps < 0 || nodes < 1 || pairs < 1) throw std::invalid_argument("invalid value grid shape");
}

ValueField::ValueField(GameSpec spec_in, std::shared_ptr<const Lattice> lattice_in)
    : spec(std::move(spec_in)), lattice(std::move(lattice_in)) {
  if (!lattice) throw std::invalid_argument("value field needs a lattice");
  const int n = lattice->steps();
  const int m = lattice->nodes();
  const int p = spec.modes().size();
  y = ValueGrid(n, m, p);
  lower = ValueGrid(n, m, p);
  upper = ValueGrid(n, m, p);
  dk_plus = ValueGrid(n, m, p);
  dk_minus = ValueGrid(n, m, p);
  residual.assign(static_cast<std::size_t>(n) + 1, 0.0);
  sweeps.assign(static_cast<std::size_t>(n) + 1, 0);
}

}  // namespace swgame
