"""Best-response oracle: certificates, LP routes, grids, caching, determinism."""

import random
from fractions import Fraction

import pytest

from nbrelim.beliefs import (
    BeliefKind,
    DistributionBelief,
    ProductBelief,
    PurePoint,
)
from nbrelim.catalog import bertrand_grid, gap_3x2, random_game
from nbrelim.games import FiniteGame, InputError, full_restriction, restrict
from nbrelim.oracle import (
    BestResponse,
    ComparisonSet,
    EmptyBeliefSet,
    Inconclusive,
    NeverBest,
    OracleCache,
    Reference,
    find_witness,
    full_comparison,
    is_best_response,
    never_best_set,
    render_certificate,
)

from oracles import is_pure_best_to_some, replay_fast_pure


@pytest.fixture(scope="module")
def g():
    return gap_3x2()


def matching_pennies():
    table = {
        (0, 0): (1, -1),
        (0, 1): (-1, 1),
        (1, 0): (-1, 1),
        (1, 1): (1, -1),
    }
    return FiniteGame([["H", "T"], ["h", "t"]], table)


def mixed_dominance_game():
    # C is beaten by the A/B coin flip but by neither pure strategy alone
    table = {
        (0, 0): (3, 0), (0, 1): (0, 0),
        (1, 0): (0, 0), (1, 1): (3, 0),
        (2, 0): (1, 0), (2, 1): (1, 0),
    }
    return FiniteGame([["A", "B", "C"], ["L", "R"]], table)


def pinched_window_3p():
    # X is best only against the opponent mix (1/3 H, 2/3 T): the Y row forces
    # q <= 1/3 and the Z row forces q >= 1/3.  Player 3 is a spectator.
    def pay(profile):
        s1, s2, _ = profile
        if s1 == 0:
            return (Fraction(2, 3), 0, 0)
        if s1 == 1:
            return (2 if s2 == 0 else 0, 0, 0)
        return (0 if s2 == 0 else 1, 0, 0)

    return FiniteGame.from_function([["X", "Y", "Z"], ["H", "T"], ["m"]], pay)


class TestIsBestResponse:
    def test_bottom_not_best_globally(self, g):
        # against L, the top row's 2 beats the bottom row's 1
        assert not is_best_response(g, 0, 2, PurePoint((0,)), full_comparison(g, 0))

    def test_bottom_best_locally(self, g):
        assert is_best_response(g, 0, 2, PurePoint((0,)), ComparisonSet(0, (1, 2)))

    def test_self_comparison(self, g):
        for s in range(3):
            assert is_best_response(g, 0, s, PurePoint((1,)), ComparisonSet(0, (s,)))

    def test_wrong_player_comparison(self, g):
        with pytest.raises(InputError):
            is_best_response(g, 0, 0, PurePoint((0,)), ComparisonSet(1, (0,)))


class TestFindWitness:
    def test_middle_never_best_pure(self, g):
        cert = find_witness(
            g, full_restriction(g), 0, 1, BeliefKind.PURE, full_comparison(g, 0)
        )
        assert cert == NeverBest("exhaustive")

    def test_top_has_pure_witness(self, g):
        cert = find_witness(
            g, full_restriction(g), 0, 0, BeliefKind.PURE, full_comparison(g, 0)
        )
        assert isinstance(cert, BestResponse)
        assert is_best_response(g, 0, 0, cert.witness, full_comparison(g, 0))

    def test_strict_pure_dominance_correlated(self):
        table = {(0, 0): (3, 0), (0, 1): (3, 0), (1, 0): (1, 0), (1, 1): (1, 0)}
        game = FiniteGame([["A", "B"], ["L", "R"]], table)
        cert = find_witness(
            game, full_restriction(game), 0, 1, BeliefKind.CORRELATED,
            full_comparison(game, 0),
        )
        assert isinstance(cert, NeverBest)
        assert cert.proof in ("lp", "dominated")

    def test_mixed_dominance_needs_the_lp(self):
        game = mixed_dominance_game()
        cert = find_witness(
            game, full_restriction(game), 0, 2, BeliefKind.CORRELATED,
            full_comparison(game, 0),
        )
        assert cert == NeverBest("lp")
        # ... but C survives under pure beliefs? no: (1,1) loses to 3s anywhere
        pure = find_witness(
            game, full_restriction(game), 0, 2, BeliefKind.PURE,
            full_comparison(game, 0),
        )
        assert pure == NeverBest("exhaustive")

    def test_matching_pennies_everyone_best(self):
        game = matching_pennies()
        cmp = full_comparison(game, 0)
        for s in (0, 1):
            cert = find_witness(
                game, full_restriction(game), 0, s, BeliefKind.CORRELATED, cmp
            )
            assert isinstance(cert, BestResponse)
            assert is_best_response(game, 0, s, cert.witness, cmp)
        # the uniform distribution is also a witness for either strategy,
        # and a denominator-4 grid enumeration agrees with the verdict
        uniform = DistributionBelief(
            (((0,), Fraction(1, 2)), ((1,), Fraction(1, 2)))
        )
        assert is_best_response(game, 0, 0, uniform, cmp)
        assert is_best_response(game, 0, 1, uniform, cmp)
        from nbrelim.verification import grid_distributions

        profiles = list(game.opponent_profiles(0))
        for s in (0, 1):
            assert any(
                is_best_response(game, 0, s, mu, cmp)
                for mu in grid_distributions(profiles, 4)
            )

    def test_two_player_mixed_delegates_to_correlated(self):
        game = mixed_dominance_game()
        cert = find_witness(
            game, full_restriction(game), 0, 2, BeliefKind.INDEPENDENT_MIXED,
            full_comparison(game, 0),
        )
        assert isinstance(cert, NeverBest)
        witness_cert = find_witness(
            game, full_restriction(game), 0, 0, BeliefKind.INDEPENDENT_MIXED,
            full_comparison(game, 0),
        )
        assert isinstance(witness_cert, BestResponse)
        assert isinstance(witness_cert.witness, ProductBelief)

    def test_empty_belief_set_flagged(self, g):
        degenerate = restrict(g, [(0, 1, 2), ()])
        cert = find_witness(
            g, degenerate, 0, 0, BeliefKind.PURE, full_comparison(g, 0)
        )
        assert cert == EmptyBeliefSet()

    def test_empty_comparison_set_always_best(self, g):
        cert = find_witness(
            g, full_restriction(g), 0, 1, BeliefKind.PURE, ComparisonSet(0, ())
        )
        assert isinstance(cert, BestResponse)


class TestGridSearch:
    def test_coarse_grid_is_inconclusive(self):
        game = pinched_window_3p()
        cert = find_witness(
            game, full_restriction(game), 0, 0, BeliefKind.INDEPENDENT_MIXED,
            full_comparison(game, 0), resolution=2,
        )
        assert cert == Inconclusive(2)

    def test_finer_grid_finds_the_pinched_witness(self):
        game = pinched_window_3p()
        cert = find_witness(
            game, full_restriction(game), 0, 0, BeliefKind.INDEPENDENT_MIXED,
            full_comparison(game, 0), resolution=3,
        )
        assert isinstance(cert, BestResponse)
        assert isinstance(cert.witness, ProductBelief)
        assert cert.witness.factors[0] == ((0, Fraction(1, 3)), (1, Fraction(2, 3)))
        assert is_best_response(game, 0, 0, cert.witness, full_comparison(game, 0))

    def test_correlated_shortcut_still_proves_never_best(self):
        # Y is never best even under correlated beliefs once X's constant is high
        def pay(profile):
            s1, s2, _ = profile
            if s1 == 0:
                return (3, 0, 0)
            return (2 if s2 == 0 else 0, 0, 0)

        game = FiniteGame.from_function([["X", "Y"], ["H", "T"], ["m"]], pay)
        cert = find_witness(
            game, full_restriction(game), 0, 1, BeliefKind.INDEPENDENT_MIXED,
            full_comparison(game, 0), resolution=2,
        )
        assert isinstance(cert, NeverBest)

    def test_inconclusive_excluded_from_never_best_set(self):
        game = pinched_window_3p()
        sets = never_best_set(
            game, full_restriction(game), BeliefKind.INDEPENDENT_MIXED,
            Reference.INITIAL, resolution=2,
        )
        assert 0 not in sets[0]  # X stays despite the inconclusive answer


class TestNeverBestSet:
    def test_gap_game_reference_initial(self, g):
        sets = never_best_set(
            g, full_restriction(g), BeliefKind.PURE, Reference.INITIAL
        )
        assert sets == ((1, 2), ())

    def test_fixed_point_game(self):
        # every strategy a best response to something: pure coordination
        table = {(0, 0): (1, 1), (0, 1): (0, 0), (1, 0): (0, 0), (1, 1): (1, 1)}
        game = FiniteGame([["a", "b"], ["x", "y"]], table)
        sets = never_best_set(
            game, full_restriction(game), BeliefKind.PURE, Reference.INITIAL
        )
        assert sets == ((), ())

    def test_bertrand_first_round_oracle(self):
        game = bertrand_grid(100)
        history, _ = replay_fast_pure(game)
        first_kept = history[0]
        expected_removed = tuple(
            tuple(s for s in range(100) if s not in set(kept))
            for kept in first_kept
        )
        sets = never_best_set(
            game, full_restriction(game), BeliefKind.PURE, Reference.INITIAL
        )
        assert sets == expected_removed
        assert sets[0] == tuple(range(50, 100))  # prices 51..100

    def test_reference_current_differs(self, g):
        sub = restrict(g, [(1, 2), (0, 1)])
        initial = never_best_set(g, sub, BeliefKind.PURE, Reference.INITIAL)
        current = never_best_set(g, sub, BeliefKind.PURE, Reference.CURRENT)
        assert initial == ((1, 2), ())
        assert current == ((), ())

    def test_degenerate_vacuous_removals(self, g):
        degenerate = restrict(g, [(0, 2), ()])
        sets = never_best_set(
            g, degenerate, BeliefKind.PURE, Reference.INITIAL
        )
        assert sets == ((0, 2), ())  # player 1 faces no beliefs at all


class TestSoundnessAndDeterminism:
    def test_witnesses_reverify_on_random_games(self):
        rng = random.Random(11)
        for trial in range(40):
            players = rng.choice((2, 2, 3))
            sizes = [rng.randint(1, 3) for _ in range(players)]
            game = random_game(players, sizes, 5, seed=100 + trial)
            full = full_restriction(game)
            for kind in BeliefKind:
                for player in range(players):
                    cmp = full_comparison(game, player)
                    for s in range(sizes[player]):
                        cert = find_witness(game, full, player, s, kind, cmp,
                                            resolution=3)
                        if isinstance(cert, BestResponse):
                            assert is_best_response(game, player, s, cert.witness, cmp)
                        elif isinstance(cert, NeverBest) and kind is BeliefKind.PURE:
                            assert not is_pure_best_to_some(
                                game, player, s, full.kept
                            )

    def test_kind_monotonicity_on_random_games(self):
        rng = random.Random(23)
        for trial in range(40):
            sizes = [rng.randint(1, 4), rng.randint(1, 4)]
            game = random_game(2, sizes, 5, seed=500 + trial)
            full = full_restriction(game)
            for player in (0, 1):
                cmp = full_comparison(game, player)
                for s in range(sizes[player]):
                    certs = {
                        kind: find_witness(game, full, player, s, kind, cmp)
                        for kind in BeliefKind
                    }
                    nbr = {k: isinstance(c, NeverBest) for k, c in certs.items()}
                    if nbr[BeliefKind.CORRELATED]:
                        assert nbr[BeliefKind.INDEPENDENT_MIXED]
                    if nbr[BeliefKind.INDEPENDENT_MIXED]:
                        assert nbr[BeliefKind.PURE]
                    # with one opponent the two mixed notions coincide
                    assert nbr[BeliefKind.CORRELATED] == nbr[BeliefKind.INDEPENDENT_MIXED]

    def test_identical_inputs_identical_certificates(self):
        game = mixed_dominance_game()
        full = full_restriction(game)
        cmp = full_comparison(game, 0)
        for kind in BeliefKind:
            a = find_witness(game, full, 0, 0, kind, cmp)
            b = find_witness(game, full, 0, 0, kind, cmp)
            assert a == b

    def test_cache_changes_nothing_observable(self):
        game = bertrand_grid(12)
        full = full_restriction(game)
        cache = OracleCache(BeliefKind.CORRELATED)
        for player in (0, 1):
            cmp = full_comparison(game, player)
            for s in range(12):
                fresh = find_witness(game, full, player, s, BeliefKind.CORRELATED, cmp)
                cached = find_witness(
                    game, full, player, s, BeliefKind.CORRELATED, cmp, cache=cache
                )
                assert isinstance(fresh, type(cached))
                if isinstance(cached, BestResponse):
                    assert is_best_response(game, player, s, cached.witness, cmp)

    def test_cache_kind_mismatch_rejected(self):
        game = matching_pennies()
        cache = OracleCache(BeliefKind.PURE)
        with pytest.raises(InputError):
            find_witness(
                game, full_restriction(game), 0, 0, BeliefKind.CORRELATED,
                full_comparison(game, 0), cache=cache,
            )


class TestRendering:
    def test_certificate_text(self, g):
        full = full_restriction(g)
        cmp = full_comparison(g, 0)
        nbr = find_witness(g, full, 0, 1, BeliefKind.PURE, cmp)
        assert render_certificate(nbr, g, 0) == "NBR(exhaustive)"
        br = find_witness(g, full, 0, 0, BeliefKind.PURE, cmp)
        assert render_certificate(br, g, 0).startswith("BR(witness=pure(")
        assert render_certificate(Inconclusive(8), g, 0) == "INCONCLUSIVE(res=8)"
        corr = find_witness(g, full, 0, 1, BeliefKind.CORRELATED, cmp)
        assert render_certificate(corr, g, 0) == "NBR(lp)"
