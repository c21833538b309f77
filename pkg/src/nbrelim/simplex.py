"""Exact rational LP feasibility via phase-1 simplex with Bland's rule.

The solver answers one question: does x >= 0 exist with a.x >= b for each
inequality row and e.x == f for the normalization row?  All arithmetic is over
`fractions.Fraction`; Bland's pivoting rule makes the run deterministic and
cycle-free.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .games import InputError, Rational

Row = tuple[Sequence[Rational], Rational]


def lp_feasible(
    inequalities: Sequence[Row],
    equality: Row | None = None,
    num_vars: int | None = None,
) -> list[Fraction] | None:
    """Feasible basic point of {x >= 0, A x >= b, e.x = f}, or None.

    `inequalities` are (coefficients, bound) rows meaning coeffs.x >= bound;
    `equality` is the single normalization row meaning coeffs.x == bound.
    Returns the structural variables of a basic feasible solution found by
    phase-1 simplex, or None when the system is infeasible.
    """
    rows: list[tuple[list[Fraction], Fraction, bool]] = []
    widths = set()
    for coeffs, bound in inequalities:
        rows.append(([Fraction(c) for c in coeffs], Fraction(bound), False))
        widths.add(len(coeffs))
    if equality is not None:
        coeffs, bound = equality
        rows.append(([Fraction(c) for c in coeffs], Fraction(bound), True))
        widths.add(len(coeffs))
    if num_vars is None:
        if len(widths) != 1:
            raise InputError("constraint rows have inconsistent dimensions")
        num_vars = widths.pop()
    elif widths and widths != {num_vars}:
        raise InputError("constraint rows have inconsistent dimensions")
    if num_vars == 0:
        ok = all(
            (bound == 0 if is_eq else bound <= 0) for _, bound, is_eq in rows
        )
        return [] if ok else None

    m = len(rows)
    num_surplus = sum(1 for _, _, is_eq in rows if not is_eq)
    # Column layout: structural | surplus | artificial.
    zero = Fraction(0)
    one = Fraction(1)

    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    art_cols: list[int] = []
    surplus_at = num_vars
    art_at = num_vars + num_surplus
    ncols = art_at + m  # worst case: one artificial per row; unused stay zero
    surplus_idx = 0
    art_idx = 0
    for coeffs, bound, is_eq in rows:
        row = [zero] * (ncols + 1)
        for j, c in enumerate(coeffs):
            row[j] = c
        if not is_eq:
            row[surplus_at + surplus_idx] = -one
            this_surplus = surplus_at + surplus_idx
            surplus_idx += 1
        row[ncols] = bound
        if row[ncols] < 0 or (row[ncols] == 0 and not is_eq):
            # Flipping a zero-bound inequality turns its surplus column into a
            # ready-made basic column, avoiding an artificial.
            row = [-v for v in row]
        if not is_eq and row[this_surplus] == one:
            # The flipped surplus column is already a unit column.
            basis.append(this_surplus)
        else:
            col = art_at + art_idx
            art_idx += 1
            row[col] = one
            basis.append(col)
            art_cols.append(col)
        tableau.append(row)

    art_set = set(art_cols)
    if not art_set:
        return _extract(tableau, basis, num_vars)

    # Objective: minimize the sum of artificials.  The reduced-cost row is the
    # sum of the rows whose basic variable is artificial.
    obj = [zero] * (ncols + 1)
    for r in range(m):
        if basis[r] in art_set:
            row = tableau[r]
            for j in range(ncols + 1):
                obj[j] += row[j]

    while True:
        # Bland: entering column = smallest index with positive reduced cost,
        # artificial columns excluded so they never re-enter.
        enter = -1
        for j in range(art_at):
            if obj[j] > 0:
                enter = j
                break
        if enter < 0:
            break
        # Ratio test; Bland tie-break on the smallest basic variable index.
        leave = -1
        best: Fraction | None = None
        for r in range(m):
            a = tableau[r][enter]
            if a > 0:
                ratio = tableau[r][ncols] / a
                if best is None or ratio < best or (
                    ratio == best and basis[r] < basis[leave]
                ):
                    best = ratio
                    leave = r
        if leave < 0:
            raise InputError("phase-1 objective unbounded; inconsistent tableau")
        _pivot(tableau, obj, basis, leave, enter, ncols)

    if obj[ncols] != 0:
        return None
    return _extract(tableau, basis, num_vars)


def _pivot(
    tableau: list[list[Fraction]],
    obj: list[Fraction],
    basis: list[int],
    leave: int,
    enter: int,
    ncols: int,
) -> None:
    piv_row = tableau[leave]
    piv = piv_row[enter]
    if piv != 1:
        inv = 1 / piv
        tableau[leave] = piv_row = [v * inv for v in piv_row]
    for r, row in enumerate(tableau):
        if r == leave:
            continue
        factor = row[enter]
        if factor:
            tableau[r] = [v - factor * p for v, p in zip(row, piv_row)]
    factor = obj[enter]
    if factor:
        for j in range(ncols + 1):
            obj[j] -= factor * piv_row[j]
    basis[leave] = enter


def _extract(
    tableau: list[list[Fraction]], basis: list[int], num_vars: int
) -> list[Fraction]:
    x = [Fraction(0)] * num_vars
    for r, b in enumerate(basis):
        if b < num_vars:
            x[b] = tableau[r][-1]
    return x
