"""Reduction relations over restrictions and the iteration engine.

Three relations remove never-best-response strategies; they differ only in
where better responses are drawn from:

* tilde  — the initial game's full strategy sets,
* arrow  — the kept sets of the restriction being reduced,
* darrow — the kept sets of the proposed target restriction.

`validate_step` certifies a single proposed reduction, `fast_step` removes the
entire never-best set at once (tilde and arrow only; no fast variant of darrow
exists), and `iterate` drives maximal sequences under several elimination
policies.  Traces record every removal with its certificate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence, Union

from .beliefs import BeliefKind
from .games import FiniteGame, InputError, Restriction, full_restriction
from .oracle import (
    DEFAULT_GRID_RESOLUTION,
    BestResponse,
    Certificate,
    ComparisonSet,
    EmptyBeliefSet,
    Inconclusive,
    NeverBest,
    OracleCache,
    Reference,
    candidate_certificates,
    find_witness,
    full_comparison,
    render_certificate,
)


class ReductionKind(Enum):
    TILDE = "tilde"  # better responses in the initial game
    ARROW = "arrow"  # better responses in the current restriction
    DARROW = "darrow"  # better responses in the reduced restriction

    @property
    def symbol(self) -> str:
        return {"tilde": "~", "arrow": "->", "darrow": "=>"}[self.value]


class Policy(Enum):
    FAST = "fast"
    RANDOM_PARTIAL = "random"
    SINGLE_RANDOM = "single"
    USER_SCRIPT = "script"


class UnsupportedOperationError(ValueError):
    """Requested a reduction variant that does not exist (fast darrow)."""


@dataclass(frozen=True)
class Step:
    source: Restriction
    target: Restriction
    removed: tuple[tuple[int, ...], ...]
    kind: ReductionKind
    belief_kind: BeliefKind
    certificates: tuple[tuple[tuple[int, int], Certificate], ...]

    def certificate_for(self, player: int, strategy: int) -> Certificate:
        for key, cert in self.certificates:
            if key == (player, strategy):
                return cert
        raise KeyError((player, strategy))


@dataclass(frozen=True)
class Rejection:
    """A proposed step is illegal: `strategy` holds the given certificate."""

    player: int
    strategy: int
    certificate: Certificate
    reason: str  # "witness" | "inconclusive"


class IllegalStepError(ValueError):
    def __init__(self, rejection: Rejection) -> None:
        super().__init__(
            f"illegal step: player {rejection.player + 1} strategy "
            f"{rejection.strategy} ({rejection.reason})"
        )
        self.rejection = rejection


@dataclass(frozen=True)
class Trace:
    initial: FiniteGame
    kind: ReductionKind
    belief_kind: BeliefKind
    policy: Policy
    seed: int
    steps: tuple[Step, ...]
    outcome: Restriction
    maximal: bool = True
    notes: tuple[str, ...] = ()

    def restriction_at(self, index: int) -> Restriction:
        """The restriction after `index` steps, clamped at the outcome."""
        if index <= 0:
            return full_restriction(self.initial)
        if index >= len(self.steps):
            return self.outcome
        return self.steps[index - 1].target

    def render(self) -> str:
        game = self.initial
        out = [
            f"game {game.digest()} kind={self.kind.symbol} "
            f"beliefs={self.belief_kind.value} policy={self.policy.value} "
            f"seed={self.seed}"
        ]
        for k, step in enumerate(self.steps, start=1):
            removed = _render_sets(game, step.removed)
            kept = _render_sets(game, step.target.kept)
            out.append(
                f"step {k} kind={step.kind.symbol} removed={removed} -> kept={kept}"
            )
        out.append(
            f"outcome kept={_render_sets(game, self.outcome.kept)} "
            f"steps={len(self.steps)} maximal={'yes' if self.maximal else 'no'}"
        )
        for note in self.notes:
            out.append(f"note {note}")
        for k, step in enumerate(self.steps, start=1):
            for (player, strategy), cert in step.certificates:
                label = game.label_of(player, strategy)
                out.append(
                    f"cert step={k} p{player + 1} {label} "
                    f"{render_certificate(cert, game, player)}"
                )
        return "\n".join(out) + "\n"


def _render_sets(game: FiniteGame, sets: Sequence[Sequence[int]]) -> str:
    parts = []
    for i, ks in enumerate(sets):
        labs = ",".join(game.label_of(i, s) for s in ks)
        parts.append(f"p{i + 1}:[{labs}]")
    return "{" + ",".join(parts) + "}"


def comparison_for(
    kind: ReductionKind,
    game: FiniteGame,
    source: Restriction,
    target: Restriction,
    player: int,
) -> ComparisonSet:
    if kind is ReductionKind.TILDE:
        return full_comparison(game, player)
    if kind is ReductionKind.ARROW:
        return ComparisonSet(player, source.kept[player])
    return ComparisonSet(player, target.kept[player])


def validate_step(
    game: FiniteGame,
    source: Restriction,
    target: Restriction,
    kind: ReductionKind,
    belief_kind: BeliefKind,
    resolution: int = DEFAULT_GRID_RESOLUTION,
    cache: OracleCache | None = None,
) -> Union[Step, Rejection]:
    """Certify `source -> target` as one reduction step, or reject it.

    Legal iff every removed strategy is certified never-best against the
    beliefs narrowed to `source`, with competitors drawn per `kind`.  An
    inconclusive oracle answer rejects (a step is never certified on faith).
    """
    if source.parent != game or target.parent != game:
        raise InputError("restrictions do not belong to the game")
    if not source.contains(target):
        raise InputError("target is not a restriction of source")
    if target.kept == source.kept:
        raise InputError("a reduction step must remove something")
    removed = target.removed_from(source)
    certs: list[tuple[tuple[int, int], Certificate]] = []
    for player in range(game.players):
        if not removed[player]:
            continue
        cmp = comparison_for(kind, game, source, target, player)
        for s in removed[player]:
            cert = find_witness(
                game, source, player, s, belief_kind, cmp, resolution, cache
            )
            if isinstance(cert, BestResponse):
                return Rejection(player, s, cert, "witness")
            if isinstance(cert, Inconclusive):
                return Rejection(player, s, cert, "inconclusive")
            certs.append(((player, s), cert))
    return Step(source, target, removed, kind, belief_kind, tuple(certs))


def fast_step(
    game: FiniteGame,
    source: Restriction,
    kind: ReductionKind,
    belief_kind: BeliefKind,
    resolution: int = DEFAULT_GRID_RESOLUTION,
    cache: OracleCache | None = None,
) -> Step | None:
    """Remove every certified never-best strategy at once; None at a fixed point."""
    step, _ = _fast_step_flagged(game, source, kind, belief_kind, resolution, cache)
    return step


def _fast_step_flagged(
    game: FiniteGame,
    source: Restriction,
    kind: ReductionKind,
    belief_kind: BeliefKind,
    resolution: int,
    cache: OracleCache | None,
) -> tuple[Step | None, bool]:
    if kind is ReductionKind.DARROW:
        raise UnsupportedOperationError(
            "the darrow relation has no fast variant: removing all candidates "
            "at once is not a legal darrow step in general"
        )
    reference = Reference.INITIAL if kind is ReductionKind.TILDE else Reference.CURRENT
    removable, certs, saw_inconclusive = candidate_certificates(
        game, source, belief_kind, reference, resolution, cache
    )
    if all(not gone for gone in removable):
        return None, saw_inconclusive
    target = source.remove({i: gone for i, gone in enumerate(removable) if gone})
    kept_certs = tuple(sorted(certs.items()))
    return Step(source, target, removable, kind, belief_kind, kept_certs), saw_inconclusive


def legal_removal_candidates(
    game: FiniteGame,
    source: Restriction,
    kind: ReductionKind,
    belief_kind: BeliefKind,
    resolution: int = DEFAULT_GRID_RESOLUTION,
    cache: OracleCache | None = None,
) -> tuple[tuple[int, ...], ...]:
    """Strategies whose individual removal is a legal step from `source`.

    For tilde and arrow any subset of the result is jointly removable; for
    darrow only singletons are guaranteed and joint removals must be
    re-validated (the comparison set shrinks with the removal).
    """
    sets, _, _ = _candidates(game, source, kind, belief_kind, resolution, cache)
    return sets


def _candidates(
    game: FiniteGame,
    source: Restriction,
    kind: ReductionKind,
    belief_kind: BeliefKind,
    resolution: int,
    cache: OracleCache | None,
):
    if kind is not ReductionKind.DARROW:
        reference = (
            Reference.INITIAL if kind is ReductionKind.TILDE else Reference.CURRENT
        )
        return candidate_certificates(
            game, source, belief_kind, reference, resolution, cache
        )
    sets: list[tuple[int, ...]] = []
    certs: dict[tuple[int, int], Certificate] = {}
    saw_inconclusive = False
    for player in range(game.players):
        gone = []
        for s in source.kept[player]:
            cmp = ComparisonSet(
                player, tuple(t for t in source.kept[player] if t != s)
            )
            cert = find_witness(
                game, source, player, s, belief_kind, cmp, resolution, cache
            )
            if isinstance(cert, (NeverBest, EmptyBeliefSet)):
                gone.append(s)
                certs[(player, s)] = cert
            elif isinstance(cert, Inconclusive):
                saw_inconclusive = True
        sets.append(tuple(gone))
    return tuple(sets), certs, saw_inconclusive


def iterate(
    game: FiniteGame,
    kind: ReductionKind,
    belief_kind: BeliefKind,
    policy: Policy = Policy.FAST,
    seed: int = 0,
    script: Sequence[Mapping[int, Sequence[int]]] | None = None,
    resolution: int = DEFAULT_GRID_RESOLUTION,
    cache: OracleCache | None = None,
) -> Trace:
    """Drive a maximal sequence of reductions from the full game.

    Policies: FAST removes the whole never-best set each round (tilde/arrow
    only); RANDOM_PARTIAL removes a uniformly random non-empty certified
    subset; SINGLE_RANDOM removes one random candidate; USER_SCRIPT applies an
    explicit removal schedule.  Identical seeds reproduce identical traces.
    """
    if policy is Policy.FAST and kind is ReductionKind.DARROW:
        raise UnsupportedOperationError("fast policy is undefined for darrow")
    if policy is Policy.USER_SCRIPT and script is None:
        raise InputError("user-script policy needs a schedule")
    if cache is None:
        cache = OracleCache(belief_kind)
    rng = random.Random(seed)
    current = full_restriction(game)
    steps: list[Step] = []
    notes: list[str] = []
    maximal = True

    if policy is Policy.USER_SCRIPT:
        for removal in script or ():
            result = validate_step(
                game,
                current,
                current.remove(removal),
                kind,
                belief_kind,
                resolution,
                cache,
            )
            if isinstance(result, Rejection):
                raise IllegalStepError(result)
            steps.append(result)
            current = result.target
        sets, _, saw_inconclusive = _candidates(
            game, current, kind, belief_kind, resolution, cache
        )
        maximal = all(not s for s in sets)
        if not maximal:
            notes.append("script ended before a fixed point")
        if saw_inconclusive:
            notes.append("inconclusive strategies kept; sound, possibly non-maximal")
        return Trace(
            game, kind, belief_kind, policy, seed, tuple(steps), current, maximal,
            tuple(notes),
        )

    while True:
        if policy is Policy.FAST:
            step, saw_inconclusive = _fast_step_flagged(
                game, current, kind, belief_kind, resolution, cache
            )
            if step is None:
                if saw_inconclusive:
                    notes.append(
                        "inconclusive strategies kept; sound, possibly non-maximal"
                    )
                    maximal = False
                break
            steps.append(step)
            current = step.target
            continue

        sets, certs, saw_inconclusive = _candidates(
            game, current, kind, belief_kind, resolution, cache
        )
        flat = [(i, s) for i, gone in enumerate(sets) for s in gone]
        if not flat:
            if saw_inconclusive:
                notes.append(
                    "inconclusive strategies kept; sound, possibly non-maximal"
                )
                maximal = False
            break
        if policy is Policy.SINGLE_RANDOM:
            chosen = [flat[rng.randrange(len(flat))]]
        else:
            chosen = []
            while not chosen:
                chosen = [pair for pair in flat if rng.getrandbits(1)]
        if kind is ReductionKind.DARROW:
            step = _joint_darrow_step(
                game, current, chosen, belief_kind, resolution, cache
            )
        else:
            removal: dict[int, list[int]] = {}
            for i, s in chosen:
                removal.setdefault(i, []).append(s)
            target = current.remove(removal)
            removed = target.removed_from(current)
            step_certs = tuple(sorted(((i, s), certs[(i, s)]) for i, s in chosen))
            step = Step(current, target, removed, kind, belief_kind, step_certs)
        steps.append(step)
        current = step.target

    return Trace(
        game, kind, belief_kind, policy, seed, tuple(steps), current, maximal,
        tuple(notes),
    )


def _joint_darrow_step(
    game: FiniteGame,
    current: Restriction,
    chosen: list[tuple[int, int]],
    belief_kind: BeliefKind,
    resolution: int,
    cache: OracleCache | None,
) -> Step:
    """Shrink a candidate set until it validates as one joint darrow step.

    Dropping a rejected strategy only grows the target's comparison sets, so
    previously certified removals stay certified; singletons from the
    candidate sweep are always legal, so the loop terminates non-empty.
    """
    picked = list(chosen)
    while True:
        removal: dict[int, list[int]] = {}
        for i, s in picked:
            removal.setdefault(i, []).append(s)
        result = validate_step(
            game,
            current,
            current.remove(removal),
            ReductionKind.DARROW,
            belief_kind,
            resolution,
            cache,
        )
        if isinstance(result, Step):
            return result
        picked = [p for p in picked if p != (result.player, result.strategy)]
        if not picked:
            raise InputError("darrow candidate set collapsed; sweep was unsound")
