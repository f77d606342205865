from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings

from gpnd.errors import DepthOutOfRange
from gpnd.kernel import Context, check_node
from gpnd.proof_format import parse_formula
from gpnd.search import MAX_DEPTH, Goal, prove
from gpnd.syntax import And, Atom, Bottom, Implies, Or, predicates

from strategies import PROP_ATOMS, prop_formulas, random_prop

F = parse_formula

EXERCISES = [
    "A /\\ B -> B /\\ A",
    "((A /\\ B) -> C) -> A -> B -> C",
    "(A -> B -> C) -> (A /\\ B) -> C",
    "(A -> B -> C) -> (A -> B) -> A -> C",
    "A -> B -> A",
    "(A <-> (A -> B)) -> B",
    "((A \\/ (A -> C)) -> C) -> C",
    "~~A /\\ ~~B -> ~~(A /\\ B)",
    "~~(A /\\ B) -> ~~A /\\ ~~B",
]


def accepted(proof, goal, hyps=()):
    return proof.conclusion == goal and check_node(proof, Context(tuple(hyps)), None) == []


# --------------------------------------------------------------- Kripke oracle
# Rooted frames of up to three worlds, given as upward-closed successor sets.

FRAMES = [
    {0: {0}},
    {0: {0, 1}, 1: {1}},
    {0: {0, 1, 2}, 1: {1, 2}, 2: {2}},
    {0: {0, 1, 2}, 1: {1}, 2: {2}},
]


def forces(frame, val, w, f):
    if isinstance(f, Atom):
        return w in val[f.predicate]
    if isinstance(f, Bottom):
        return False
    if isinstance(f, And):
        return forces(frame, val, w, f.left) and forces(frame, val, w, f.right)
    if isinstance(f, Or):
        return forces(frame, val, w, f.left) or forces(frame, val, w, f.right)
    if isinstance(f, Implies):
        return all(not forces(frame, val, v, f.left) or forces(frame, val, v, f.right) for v in frame[w])
    raise TypeError(f)


def _up_sets(frame):
    worlds = sorted(frame)
    for bits in itertools.product((False, True), repeat=len(worlds)):
        s = {w for w, b in zip(worlds, bits) if b}
        if all(frame[w] <= s for w in s):
            yield frozenset(s)


def countermodel(goal, hyps=()):
    atoms = sorted({p for f in (goal,) + tuple(f for _, f in hyps) for p in predicates(f)})
    for frame in FRAMES:
        ups = list(_up_sets(frame))
        for choice in itertools.product(ups, repeat=len(atoms)):
            val = dict(zip(atoms, choice))
            if all(forces(frame, val, 0, h) for _, h in hyps) and not forces(frame, val, 0, goal):
                return frame, val
    return None


def test_oracle_on_known_cases():
    assert countermodel(F("A \\/ ~A")) is not None
    assert countermodel(F("((A -> B) -> A) -> A")) is not None
    assert countermodel(F("~~A -> A")) is not None
    for text in EXERCISES:
        assert countermodel(F(text)) is None


# ---------------------------------------------------------------- documented cases

@pytest.mark.parametrize("text", EXERCISES)
def test_exercises_are_found_and_accepted(text):
    goal = F(text)
    proof = prove(goal, (), 12)
    assert proof is not None
    assert accepted(proof, goal)


def test_swap_at_depth_eight():
    goal = F("A /\\ B -> B /\\ A")
    assert accepted(prove(goal, (), 8), goal)


@pytest.mark.parametrize("text", ["A \\/ ~A", "A \\/ (A -> _|_)", "((A -> B) -> A) -> A"])
def test_classical_principles_are_not_found(text):
    goal = F(text)
    assert prove(goal, (), 12) is None
    assert countermodel(goal) is not None


def test_hypothesis_closes_immediately():
    proof = prove(F("A"), (("h", F("A")),), 0)
    assert proof.rule == "Hyp" and proof.refs == ("h",)


def test_safe_rules_come_first():
    proof = prove(F("A -> A \\/ B"), (), 4)
    assert proof.rule == "ImpI"
    assert proof.children[0].rule == "OrI1"


def test_depth_bounds():
    with pytest.raises(DepthOutOfRange):
        prove(F("A"), (), MAX_DEPTH + 1)
    with pytest.raises(DepthOutOfRange):
        prove(F("A"), (), -1)
    with pytest.raises(DepthOutOfRange):
        Goal((), F("A"), -1)
    assert prove(F("A -> A"), (), MAX_DEPTH) is not None


def test_first_order_input_is_refused():
    with pytest.raises(ValueError):
        prove(F("forall x. P(x)"), (), 4)


def test_labels_avoid_hypothesis_names():
    proof = prove(F("A -> A"), (("h1", F("B")),), 4)
    assert proof.labels == ("h2",)


@pytest.mark.parametrize("depth", range(0, 13))
def test_no_proof_of_absurdity(depth):
    assert prove(Bottom(), (), depth) is None


def test_determinism():
    for text in EXERCISES:
        assert prove(F(text), (), 12) == prove(F(text), (), 12)


# ---------------------------------------------------------------- properties

def random_successes(count, seed=2024):
    rng = random.Random(seed)
    found = []
    tries = 0
    while len(found) < count:
        tries += 1
        atoms = PROP_ATOMS[:rng.randint(3, 5)]
        hyps = tuple((f"p{i}", random_prop(rng, atoms, 2)) for i in range(rng.randrange(3)))
        goal = random_prop(rng, atoms, 3)
        proof = prove(goal, hyps, 8)
        if proof is not None:
            found.append((goal, hyps, proof))
    return found, tries


def test_500_random_successes_are_accepted():
    found, tries = random_successes(500)
    assert len(found) == 500
    for goal, hyps, proof in found:
        assert accepted(proof, goal, hyps)
    nontrivial = sum(1 for _, _, p in found if p.size() > 3)
    assert nontrivial >= 100


@settings(max_examples=150, deadline=None)
@given(prop_formulas(max_leaves=6))
def test_search_agrees_with_countermodels(goal):
    proof = prove(goal, (), 8)
    if proof is not None:
        assert accepted(proof, goal)
        assert countermodel(goal) is None
