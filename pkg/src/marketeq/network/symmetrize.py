import logging
from fractions import Fraction

from marketeq.errors import PreconditionError, VerificationError
from marketeq.game.analysis import is_submodular
from marketeq.game.game import CompetitionGame
from marketeq.game.subsets import full_mask
from marketeq.game.valuations import ExplicitValuation, tabulate

logger = logging.getLogger(__name__)


def symmetrize(game: CompetitionGame, z_prime, check: bool = True) -> CompetitionGame:
    """Two identical firms over the workers plus x and y, equivalent to a two-firm game.

    With Z = max(v_1(N), v_2(N)) and Z' > Z, the shared valuation is
    v(S) = v_1(S) + v_2(S), v(S + x) = v_1(S) + Z + Z', v(S + y) = v_2(S) + Z + Z'
    and v(S + x + y) = 2Z + Z'. The new game has an equilibrium exactly when
    the original does.
    """
    if game.k != 2:
        raise PreconditionError(f"Needs exactly two firms, got {game.k}")
    z_prime = Fraction(z_prime)
    n = game.n
    first, second = (tabulate(v, game.weights).table for v in game.valuations)
    z = max(first[full_mask(n)], second[full_mask(n)])
    if z_prime <= z:
        raise PreconditionError(f"Z' = {z_prime} must exceed Z = {z}")
    if check:
        for i, valuation in enumerate(game.valuations, start=1):
            if not is_submodular(valuation, game.weights):
                raise PreconditionError(f"Valuation of firm {i} is not submodular")

    x, y = 1 << n, 1 << (n + 1)
    base = full_mask(n)

    def value(mask: int) -> Fraction:
        s = mask & base
        if mask & x and mask & y:
            return 2 * z + z_prime
        if mask & x:
            return first[s] + z + z_prime
        if mask & y:
            return second[s] + z + z_prime
        return first[s] + second[s]

    valuation = ExplicitValuation.from_function(n + 2, value)
    names = tuple(game.label(j) for j in range(n)) + ("x", "y")
    symmetric = CompetitionGame(
        weights=(1,) * (n + 2),
        valuations=(valuation, valuation),
        names=names,
        metadata={
            "description": f"symmetrization with Z = {z}, Z' = {z_prime}",
            "equivalent_to": "has an equilibrium iff the two-firm source game has one",
        },
    )
    if check and not is_submodular(valuation, symmetric.weights):
        raise VerificationError("Symmetrized valuation is not submodular")
    logger.debug("Symmetrized %d workers with Z = %s, Z' = %s", n, z, z_prime)
    return symmetric
