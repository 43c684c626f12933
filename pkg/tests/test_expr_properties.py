"""Randomized invariants of the expression core.

A fixed seed keeps every run identical; the tree generator and the
conditioning filter live in randexpr.py and are shared with the acceptance
suite.
"""

import random

from randexpr import conditioned_value, random_expr

from tricomi_forge.expr import (
    Var, antiderivative, differentiate, equivalence, evaluate, parse,
    render, simplify,
)

SEED = 1584
N_TREES = 200


def _trees(count, seed=SEED, depth=5):
    rng = random.Random(seed)
    return [random_expr(rng, depth) for _ in range(count)]


def _sample_points(rng, n=10):
    return [(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n)]


def test_simplify_idempotent():
    for tree in _trees(N_TREES, depth=6):
        once = simplify(tree)
        assert simplify(once) == once


def test_parse_render_round_trip():
    for tree in _trees(N_TREES):
        canonical = simplify(tree)
        assert parse(render(canonical)) == canonical
        # rendering the raw tree parses back to the same canonical form
        assert parse(render(tree)) == canonical


def test_evaluation_homomorphism():
    rng = random.Random(SEED + 1)
    compared = 0
    for tree in _trees(N_TREES):
        canonical = simplify(tree)
        for x, y in _sample_points(rng, 5):
            if conditioned_value(tree, x, y, cap=1e3) is None:
                continue
            if conditioned_value(canonical, x, y, cap=1e3) is None:
                continue
            raw = evaluate(tree, x, y)
            simp = evaluate(canonical, x, y)
            compared += 1
            assert abs(raw - simp) <= 1e-12 * (1.0 + max(abs(raw), abs(simp))) \
                + 1e-12, (render(canonical), x, y, raw, simp)
    assert compared >= 300


def test_derivative_matches_finite_differences():
    rng = random.Random(SEED + 2)
    h = 1e-5
    compared = 0
    for tree in _trees(N_TREES, depth=4):
        canonical = simplify(tree)
        for v, along_x in ((Var.X, True), (Var.Y, False)):
            deriv = differentiate(canonical, v)
            for x, y in _sample_points(rng, 3):
                # restrict to well-conditioned points: the curvature of wild
                # compositions swamps the O(h^2) stencil otherwise
                if conditioned_value(canonical, x, y, cap=30.0) is None:
                    continue
                if conditioned_value(deriv, x, y, cap=1e3) is None:
                    continue
                if along_x:
                    plus = conditioned_value(canonical, x + h, y, cap=1e3)
                    minus = conditioned_value(canonical, x - h, y, cap=1e3)
                else:
                    plus = conditioned_value(canonical, x, y + h, cap=1e3)
                    minus = conditioned_value(canonical, x, y - h, cap=1e3)
                if plus is None or minus is None:
                    continue
                exact = evaluate(deriv, x, y)
                fd = (plus - minus) / (2 * h)
                compared += 1
                assert abs(exact - fd) <= 1e-6 * (1.0 + abs(exact)), \
                    (render(canonical), v, x, y, exact, fd)
    assert compared >= 300


def test_antiderivative_inverts_differentiation_canonically():
    present = 0
    for tree in _trees(N_TREES):
        canonical = simplify(tree)
        for v in (Var.X, Var.Y):
            primitive = antiderivative(canonical, v)
            if primitive is None:
                continue
            present += 1
            result = equivalence(differentiate(primitive, v), canonical)
            assert result.equal and not result.probabilistic, render(canonical)
    assert present >= 40  # the generator must actually exercise the rules
