// Rothberger game on the discrete 2-point space: solve it for a few horizons,
// then carry I's winning strategy over to the point-open game.
#include <iostream>

#include "selgame/json_io.hpp"
#include "selgame/selgame.hpp"

using namespace selgame;

int main() {
  FiniteSpace x = discrete_space(2);
  x = with_basis(x, minimal_basis(x));
  for (std::size_t n = 1; n <= 3; ++n) {
    auto res = named_game(x, NamedGame::rothberger, n);
    auto v = solve_all(res.game);
    std::cout << "N=" << n << "  I_full=" << v.i_full << " I_pre=" << v.i_pre << " II_full=" << v.ii_full
              << " II_markov=" << v.ii_markov << "\n";
  }

  auto res = named_game(x, NamedGame::rothberger, 1);
  auto rep = solve(res.game, Relation::I_pre);
  auto tr = t1(res.duality, Direction::forward, *rep.witness);
  auto check = verify_strategy(res.duality.dual, tr.strategy);
  std::cout << "point-open strategy: " << io::to_json(tr.strategy, res.duality.dual).dump() << "\n"
            << "winning: " << (check.winning ? "yes" : "no") << "\n";
  return check.winning ? 0 : 1;
}
