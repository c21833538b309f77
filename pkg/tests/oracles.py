"""Brute-force reference computations, independent of the elimination engine.

Everything here is computed straight from `FiniteGame.payoff` lookups with
plain loops: best-response tables, fast-elimination replays, pure equilibrium
scans, and an exact vertex-enumeration feasibility oracle for cross-checking
the simplex.  Nothing imports the oracle or reduction machinery.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from nbrelim.games import FiniteGame


def best_response_set(game, player, opp_profile, candidates=None):
    """Own strategies maximizing the payoff against one opponent profile."""
    if candidates is None:
        candidates = range(game.sizes[player])
    candidates = list(candidates)

    def pay(s):
        profile = list(opp_profile)
        profile.insert(player, s)
        return game.payoff(tuple(profile), player)

    best = max(pay(s) for s in candidates)
    return {s for s in candidates if pay(s) == best}


def br_table(game: FiniteGame, player: int) -> dict:
    """opponent profile -> best responses over the full own strategy set."""
    opps = [range(game.sizes[j]) for j in range(game.players) if j != player]
    return {
        opp: best_response_set(game, player, opp)
        for opp in itertools.product(*opps)
    }


def replay_fast_pure(game: FiniteGame):
    """Replay all-at-once elimination of strategies that are never best
    responses (reference point: the full game; beliefs: kept pure opponent
    profiles).  Returns (list of kept-set tuples per round, final kept)."""
    tables = [br_table(game, i) for i in range(game.players)]
    kept = [set(range(s)) for s in game.sizes]
    history = []
    while True:
        new_kept = []
        for i in range(game.players):
            axes = [sorted(kept[j]) for j in range(game.players) if j != i]
            reachable = set()
            for opp in itertools.product(*axes):
                reachable |= tables[i][opp]
            new_kept.append(kept[i] & reachable)
        if new_kept == kept:
            break
        kept = new_kept
        history.append(tuple(tuple(sorted(k)) for k in kept))
    return history, tuple(tuple(sorted(k)) for k in kept)


def brute_pure_nash(game: FiniteGame, kept=None):
    """Pure equilibria by direct scan; `kept` optionally restricts the sets."""
    if kept is None:
        kept = [range(s) for s in game.sizes]
    kept = [list(k) for k in kept]
    out = set()
    for profile in itertools.product(*kept):
        ok = True
        for i in range(game.players):
            opp = tuple(s for j, s in enumerate(profile) if j != i)
            own = game.payoff(profile, i)
            for s in kept[i]:
                alt = list(profile)
                alt[i] = s
                if game.payoff(tuple(alt), i) > own:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.add(profile)
    return out


def is_pure_best_to_some(game, player, strategy, kept, candidates=None):
    """Is the strategy a best response (within candidates) to some pure
    opponent profile drawn from the kept sets?"""
    axes = [sorted(kept[j]) for j in range(game.players) if j != player]
    for opp in itertools.product(*axes):
        if strategy in best_response_set(game, player, opp, candidates):
            return True
    return False


# --- exact linear algebra for the LP cross-check ---------------------------


def solve_linear_system(rows, rhs):
    """Gaussian elimination over Fractions; None when singular/inconsistent."""
    n = len(rows)
    if n == 0:
        return []
    width = len(rows[0])
    a = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(rows, rhs)]
    col = 0
    pivots = []
    for col in range(width):
        piv = next((r for r in range(len(pivots), n) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[len(pivots)], a[piv] = a[piv], a[len(pivots)]
        r0 = len(pivots)
        inv = 1 / a[r0][col]
        a[r0] = [v * inv for v in a[r0]]
        for r in range(n):
            if r != r0 and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[r0])]
        pivots.append(col)
        if len(pivots) == width:
            break
    for r in range(len(pivots), n):
        if a[r][width] != 0:
            return None  # inconsistent
    if len(pivots) < width:
        return None  # underdetermined: no unique vertex
    x = [Fraction(0)] * width
    for r, col in enumerate(pivots):
        x[col] = a[r][width]
    return x


def feasible_by_vertex_enumeration(inequalities, equality, num_vars):
    """Feasibility of {x >= 0, A x >= b, e.x = f} by enumerating basic points.

    The equality is a probability-style normalization, so the region is
    bounded and, if non-empty, contains a vertex where `num_vars` constraints
    (the equality plus num_vars-1 others) are tight.
    """
    rows = [([Fraction(v) for v in c], Fraction(b)) for c, b in inequalities]
    eq_c = [Fraction(v) for v in equality[0]]
    eq_b = Fraction(equality[1])
    tight_pool = []
    for j in range(num_vars):
        coeffs = [Fraction(0)] * num_vars
        coeffs[j] = Fraction(1)
        tight_pool.append((coeffs, Fraction(0)))
    tight_pool.extend(rows)

    def satisfies(x):
        if any(v < 0 for v in x):
            return False
        if sum(c * v for c, v in zip(eq_c, x)) != eq_b:
            return False
        return all(
            sum(c * v for c, v in zip(coeffs, x)) >= b for coeffs, b in rows
        )

    if num_vars == 1:
        sol = solve_linear_system([eq_c], [eq_b])
        return sol is not None and satisfies(sol)
    for combo in itertools.combinations(range(len(tight_pool)), num_vars - 1):
        mat = [eq_c] + [tight_pool[k][0] for k in combo]
        rhs = [eq_b] + [tight_pool[k][1] for k in combo]
        sol = solve_linear_system(mat, rhs)
        if sol is not None and satisfies(sol):
            return True
    return False
