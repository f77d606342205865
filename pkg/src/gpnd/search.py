"""Bounded goal-directed proof search for intuitionistic propositional logic.

The strategy follows the classroom heuristics: close with a hypothesis when
possible, apply the safe rules first, exploit what the hypotheses contain,
and postpone the dangerous choices (picking a disjunct, proving absurdity)
to the very end.  Failure within the depth bound says nothing about
provability.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DepthOutOfRange
from .proof_format import ProofNode
from .syntax import And, Bottom, Formula, Implies, Or, is_propositional

MAX_DEPTH = 32


@dataclass(frozen=True)
class Goal:
    hypotheses: tuple
    target: Formula
    depth_budget: int

    def __post_init__(self):
        if self.depth_budget < 0:
            raise DepthOutOfRange(f"depth budget must be non-negative, got {self.depth_budget}")


def prove(goal: Formula, hyps=(), depth: int = 12) -> Optional[ProofNode]:
    """A proof of ``goal`` from the labelled ``hyps``, or None if none was found."""
    if not 0 <= depth <= MAX_DEPTH:
        raise DepthOutOfRange(f"depth must be between 0 and {MAX_DEPTH}, got {depth}")
    hyps = tuple(hyps)
    for label, f in hyps:
        if not is_propositional(f):
            raise ValueError(f"hypothesis {label} is not propositional")
    if not is_propositional(goal):
        raise ValueError("goal is not propositional")
    return _Search({label for label, _ in hyps}).run(Goal(hyps, goal, depth))


class _Search:
    def __init__(self, reserved: set):
        self.reserved = reserved
        self.failed: set = set()

    def run(self, goal: Goal) -> Optional[ProofNode]:
        facts = _saturate({}, [(f, ProofNode("Hyp", f, refs=(label,))) for label, f in goal.hypotheses])
        return self.solve(facts, goal.target, goal.depth_budget, frozenset(), frozenset(), 0)

    def label(self, n: int) -> str:
        while True:
            n += 1
            name = f"h{n}"
            if name not in self.reserved:
                return name

    def solve(self, facts: dict, goal: Formula, depth: int, split: frozenset,
              trail: frozenset, hyps_made: int) -> Optional[ProofNode]:
        if goal in facts:
            return facts[goal]
        if Bottom() in facts:
            return ProofNode("BotE", goal, (facts[Bottom()],))
        if depth == 0:
            return None
        key = (frozenset(facts), goal)
        if key in trail or (key, depth, split) in self.failed:
            return None
        trail = trail | {key}
        found = self._attempt(facts, goal, depth, split, trail, hyps_made)
        if found is None:
            self.failed.add((key, depth, split))
        return found

    def _attempt(self, facts, goal, depth, split, trail, n) -> Optional[ProofNode]:
        d = depth - 1
        if isinstance(goal, Implies):
            label = self.label(n)
            hyp = ProofNode("Hyp", goal.left, refs=(label,))
            sub = self.solve(_saturate(facts, [(goal.left, hyp)]), goal.right, d, split, trail,
                             int(label[1:]))
            return None if sub is None else ProofNode("ImpI", goal, (sub,), labels=(label,))
        if isinstance(goal, And):
            left = self.solve(facts, goal.left, d, split, trail, n)
            if left is None:
                return None
            right = self.solve(facts, goal.right, d, split, trail, n)
            return None if right is None else ProofNode("AndI", goal, (left, right))
        for f in facts:
            if isinstance(f, Or) and f not in split and f.left not in facts and f.right not in facts:
                return self._cases(facts, f, goal, d, split | {f}, trail, n)
        for f, proof in list(facts.items()):
            if isinstance(f, Implies) and f.right not in facts:
                arg = self.solve(facts, f.left, d, split, trail, n)
                if arg is None:
                    continue
                fact = ProofNode("ImpE", f.right, (proof, arg))
                # later discharges must not reuse labels bound inside the new fact
                found = self.solve(_saturate(facts, [(f.right, fact)]), goal, d, split, trail,
                                   max(n, _last_label(arg)))
                if found is not None:
                    return found
        if isinstance(goal, Or):
            for rule, part in (("OrI1", goal.left), ("OrI2", goal.right)):
                sub = self.solve(facts, part, d, split, trail, n)
                if sub is not None:
                    return ProofNode(rule, goal, (sub,))
        if not isinstance(goal, Bottom):
            absurd = self.solve(facts, Bottom(), d, split, trail, n)
            if absurd is not None:
                return ProofNode("BotE", goal, (absurd,))
        return None

    def _cases(self, facts, disj: Or, goal, d, split, trail, n) -> Optional[ProofNode]:
        l1 = self.label(n)
        n1 = int(l1[1:])
        left = self.solve(_saturate(facts, [(disj.left, ProofNode("Hyp", disj.left, refs=(l1,)))]),
                          goal, d, split, trail, n1)
        if left is None:
            return None
        l2 = self.label(n1)
        right = self.solve(_saturate(facts, [(disj.right, ProofNode("Hyp", disj.right, refs=(l2,)))]),
                           goal, d, split, trail, int(l2[1:]))
        if right is None:
            return None
        return ProofNode("OrE", goal, (facts[disj], left, right), labels=(l1, l2))


def _last_label(proof: ProofNode) -> int:
    numbers = [int(label[1:]) for _, node in proof.walk() for label in node.labels
               if label[1:].isdigit()]
    return max(numbers, default=0)


def _saturate(facts: dict, new: list) -> dict:
    """Close a fact base under conjunction elimination and modus ponens."""
    out = dict(facts)
    queue = list(new)
    while queue:
        f, proof = queue.pop(0)
        if f in out:
            continue
        out[f] = proof
        if isinstance(f, And):
            queue.append((f.left, ProofNode("AndE1", f.left, (proof,))))
            queue.append((f.right, ProofNode("AndE2", f.right, (proof,))))
        if isinstance(f, Implies) and f.left in out:
            queue.append((f.right, ProofNode("ImpE", f.right, (proof, out[f.left]))))
        for g, gp in list(out.items()):
            if isinstance(g, Implies) and g.left == f and g.right not in out:
                queue.append((g.right, ProofNode("ImpE", g.right, (gp, proof))))
    return out
