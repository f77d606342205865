"""The trusted checker.

Every node states its conclusion, so each inference is checked locally from
the stated conclusions of its children.  Checking never aborts: all violated
side conditions are collected as diagnostics addressed by node path.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .errors import CyclicDefinition, InvalidPath, UncheckedLemma
from .proof_format import (
    Axiom, Lemma, ProofDocument, ProofNode, format_formula, format_term, structural_problem,
)
from .syntax import (
    And, App, Atom, Bottom, Definition, Equal, Exists, Forall, Formula, Implies, Or, Var,
    alpha_eq, all_names, defeq, fresh_name, free_vars, instantiate, predicates, substitute,
    term_vars,
)


class Mode(Enum):
    INTUITIONISTIC = "intuitionistic"
    CLASSICAL = "classical"


WRONG_RULE = "WrongRuleApplication"
SCOPE = "ScopeViolation"
FRESHNESS = "FreshnessViolation"
UNPROVED = "UnprovedPremise"
UNKNOWN_HYP = "UnknownHypothesis"
DUPLICATE_LABEL = "DuplicateLabel"
CONVERSION = "ConversionFailure"
MODE = "ModeViolation"
CHAIN_BREAK = "ChainBreak"

CLASSICAL_RULES = ("PEM", "NNE")
DISCHARGING_RULES = ("ImpI", "OrE", "ExE")


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    path: tuple
    detail: tuple = ()
    message: str = ""
    lemma: str = ""

    @property
    def dotted_path(self) -> str:
        return ".".join(map(str, self.path)) or "root"


@dataclass(frozen=True)
class Context:
    entries: tuple = ()
    mode: Mode = Mode.INTUITIONISTIC

    def lookup(self, label: str) -> Optional[Formula]:
        for lab, f in reversed(self.entries):
            if lab == label:
                return f
        return None

    def __contains__(self, label: str) -> bool:
        return self.lookup(label) is not None

    def extend(self, label: str, f: Formula) -> "Context":
        kept = tuple(e for e in self.entries if e[0] != label)
        return Context(kept + ((label, f),), self.mode)

    def labels(self) -> tuple:
        return tuple(lab for lab, _ in self.entries)

    def formulas(self) -> tuple:
        return tuple(f for _, f in self.entries)


@dataclass(frozen=True)
class DerivedRule:
    """An accepted lemma usable as a one-step inference; its proof stays attached."""
    name: str
    hypotheses: tuple
    goal: Formula
    proof: ProofNode
    classical: bool = False

    def schematic_terms(self) -> frozenset:
        out = free_vars(self.goal)
        for _, f in self.hypotheses:
            out |= free_vars(f)
        return out

    def statement_predicates(self) -> dict:
        arities: dict = {}

        def visit(f):
            if isinstance(f, Atom):
                arities.setdefault(f.predicate, len(f.args))
            elif isinstance(f, (And, Or, Implies)):
                visit(f.left)
                visit(f.right)
            elif isinstance(f, (Forall, Exists)):
                visit(f.body)

        for _, f in self.hypotheses:
            visit(f)
        visit(self.goal)
        return arities


@dataclass
class Environment:
    """Everything a lemma may rely on: definitions, axioms and accepted lemmas."""
    definitions: dict = field(default_factory=dict)
    axioms: list = field(default_factory=list)
    rules: dict = field(default_factory=dict)
    rejected: set = field(default_factory=set)
    has_nat: bool = False

    def copy(self) -> "Environment":
        return Environment(dict(self.definitions), list(self.axioms), dict(self.rules),
                           set(self.rejected), self.has_nat)

    def interpreted_predicates(self) -> frozenset:
        out: set = set()
        for _, f in self.axioms:
            out |= predicates(f)
        for d in self.definitions.values():
            out |= predicates(d.head) | predicates(d.body)
        return frozenset(out)

    def initial_context(self, hypotheses=(), mode: Mode = Mode.INTUITIONISTIC) -> Context:
        ctx = Context((), mode)
        for name, f in self.axioms:
            ctx = ctx.extend(name, f)
        for label, f in hypotheses:
            ctx = ctx.extend(label, f)
        return ctx


@dataclass
class CheckReport:
    diagnostics: tuple
    statistics: dict
    environment: Environment = field(repr=False, default_factory=Environment)

    @property
    def accepted(self) -> bool:
        return not self.diagnostics

    @property
    def status(self) -> str:
        return "accepted" if self.accepted else "rejected"


# --------------------------------------------------------------- contexts

def child_context(node: ProofNode, index: int, ctx: Context) -> Context:
    """Hypotheses visible in child ``index`` of ``node``."""
    if node.rule == "ImpI" and node.labels and isinstance(node.conclusion, Implies):
        return ctx.extend(node.labels[0], node.conclusion.left)
    if node.rule == "OrE" and index in (1, 2) and len(node.labels) == 2 and node.children:
        major = node.children[0].conclusion
        if isinstance(major, Or):
            side = major.left if index == 1 else major.right
            return ctx.extend(node.labels[index - 1], side)
    if node.rule == "ExE" and index == 1 and node.labels and node.fresh and node.children:
        major = node.children[0].conclusion
        if isinstance(major, Exists):
            return ctx.extend(node.labels[0], substitute(major.body, major.bound, Var(node.fresh)))
    return ctx


def available_hypotheses(root: ProofNode, path, initial: Context) -> Context:
    ctx, node = initial, root
    for i in path:
        if not 0 <= i < len(node.children):
            raise InvalidPath(f"no child {i} at node {node.rule}")
        ctx = child_context(node, i, ctx)
        node = node.children[i]
    return ctx


def discharged_labels(root: ProofNode) -> set:
    out: set = set()
    for _, node in root.walk():
        if node.rule in DISCHARGING_RULES:
            out.update(node.labels)
    return out


def rewrites_to(p: Formula, c: Formula, a, b) -> bool:
    """True iff ``c`` is ``p`` with some (possibly no) occurrences of ``a`` replaced by ``b``."""
    if type(p) is not type(c):
        return False
    if isinstance(p, Atom):
        return (p.predicate == c.predicate and len(p.args) == len(c.args)
                and all(_term_rewrites(s, t, a, b) for s, t in zip(p.args, c.args)))
    if isinstance(p, Equal):
        return _term_rewrites(p.left, c.left, a, b) and _term_rewrites(p.right, c.right, a, b)
    if isinstance(p, (And, Or, Implies)):
        return rewrites_to(p.left, c.left, a, b) and rewrites_to(p.right, c.right, a, b)
    if isinstance(p, (Forall, Exists)):
        # a common fresh binder keeps free variables of a and b from being captured
        z = fresh_name(p.bound, all_names(p) | all_names(c) | term_vars(a) | term_vars(b))
        return rewrites_to(substitute(p.body, p.bound, Var(z)), substitute(c.body, c.bound, Var(z)), a, b)
    return True


def _term_rewrites(s, t, a, b) -> bool:
    if s == t or (s == a and t == b):
        return True
    return (isinstance(s, App) and isinstance(t, App) and s.symbol == t.symbol
            and len(s.args) == len(t.args)
            and all(_term_rewrites(x, y, a, b) for x, y in zip(s.args, t.args)))


def _zero():
    return App("0", ())


def _succ(t):
    return App("S", (t,))


# ------------------------------------------------------------- the checker

class _Checker:
    def __init__(self, env: Environment, lemma: str, mode: Mode, root: ProofNode):
        self.env = env
        self.lemma = lemma
        self.mode = mode
        self.discharged = discharged_labels(root)
        self.diags: list = []

    def report(self, kind: str, path, message: str, detail=()) -> None:
        self.diags.append(Diagnostic(kind, tuple(path), tuple(detail), message, self.lemma))

    def check(self, node: ProofNode, ctx: Context, path=()) -> None:
        for i, child in enumerate(node.children):
            self.check(child, child_context(node, i, ctx), path + (i,))
        problem = structural_problem(node)
        if problem:
            self.report(WRONG_RULE, path, problem)
            return
        getattr(self, "rule_" + node.rule)(node, ctx, path)

    # helpers
    def premises(self, node: ProofNode) -> list:
        return [c.conclusion for c in node.children]

    def same(self, got, want, path, what: str) -> bool:
        if alpha_eq(got, want):
            return True
        self.report(WRONG_RULE, path, f"{what}: expected {format_formula(want)}, found {format_formula(got)}")
        return False

    def shape(self, f, cls, path, what: str) -> bool:
        if isinstance(f, cls):
            return True
        self.report(WRONG_RULE, path, f"{what} must be {cls.__name__.lower()}, found {format_formula(f)}")
        return False

    def fresh_labels(self, node: ProofNode, ctx: Context, path) -> None:
        seen = set()
        for lab in node.labels:
            if lab in ctx or lab in seen:
                self.report(DUPLICATE_LABEL, path, f"label {lab} is already in scope", (lab,))
            seen.add(lab)

    def gate_classical(self, node: ProofNode, path) -> None:
        if self.mode is not Mode.CLASSICAL:
            self.report(MODE, path, f"{node.rule} is only available in classical mode", (node.rule,))

    # rules
    def rule_Hyp(self, node, ctx, path):
        label = node.refs[0] if node.refs else None
        f = ctx.lookup(label) if label is not None else None
        if f is None:
            if label in self.discharged:
                self.report(SCOPE, path, f"hypothesis {label} is not available here", (label,))
            else:
                self.report(UNKNOWN_HYP, path, f"unknown hypothesis {label}", (label,) if label else ())
            return
        self.same(node.conclusion, f, path, f"hypothesis {label}")

    def rule_AndI(self, node, ctx, path):
        c = node.conclusion
        if self.shape(c, And, path, "conclusion of AndI"):
            a, b = self.premises(node)
            self.same(a, c.left, path, "left premise")
            self.same(b, c.right, path, "right premise")

    def _and_elim(self, node, path, left: bool):
        (p,) = self.premises(node)
        if self.shape(p, And, path, f"premise of {node.rule}"):
            self.same(node.conclusion, p.left if left else p.right, path, "conclusion")

    def rule_AndE1(self, node, ctx, path):
        self._and_elim(node, path, True)

    def rule_AndE2(self, node, ctx, path):
        self._and_elim(node, path, False)

    def rule_ImpI(self, node, ctx, path):
        self.fresh_labels(node, ctx, path)
        c = node.conclusion
        if self.shape(c, Implies, path, "conclusion of ImpI"):
            self.same(self.premises(node)[0], c.right, path, "premise")

    def rule_ImpE(self, node, ctx, path):
        imp, arg = self.premises(node)
        if self.shape(imp, Implies, path, "major premise of ImpE"):
            self.same(arg, imp.left, path, "minor premise")
            self.same(node.conclusion, imp.right, path, "conclusion")

    def _or_intro(self, node, path, left: bool):
        c = node.conclusion
        if self.shape(c, Or, path, f"conclusion of {node.rule}"):
            self.same(self.premises(node)[0], c.left if left else c.right, path, "premise")

    def rule_OrI1(self, node, ctx, path):
        self._or_intro(node, path, True)

    def rule_OrI2(self, node, ctx, path):
        self._or_intro(node, path, False)

    def rule_OrE(self, node, ctx, path):
        self.fresh_labels(node, ctx, path)
        major, left, right = self.premises(node)
        self.shape(major, Or, path, "major premise of OrE")
        self.same(left, node.conclusion, path, "first case")
        self.same(right, node.conclusion, path, "second case")

    def rule_BotE(self, node, ctx, path):
        self.shape(self.premises(node)[0], Bottom, path, "premise of BotE")

    def rule_PEM(self, node, ctx, path):
        self.gate_classical(node, path)
        c = node.conclusion
        ok = (isinstance(c, Or) and isinstance(c.right, Implies) and isinstance(c.right.right, Bottom)
              and alpha_eq(c.left, c.right.left))
        if not ok:
            self.report(WRONG_RULE, path, f"PEM concludes A \\/ ~A, found {format_formula(c)}")

    def rule_NNE(self, node, ctx, path):
        self.gate_classical(node, path)
        p = self.premises(node)[0]
        want = Implies(Implies(node.conclusion, Bottom()), Bottom())
        self.same(p, want, path, "premise of NNE")

    def _freshness(self, node, ctx: Context, path, extra: dict) -> None:
        x0 = node.fresh
        bad = [lab for lab, f in ctx.entries if x0 in free_vars(f)]
        where = [f"hypothesis {lab}" for lab in bad]
        where += [what for what, f in extra.items() if x0 in free_vars(f)]
        if where:
            self.report(FRESHNESS, path, f"{x0} must be fresh but is free in " + ", ".join(where),
                        tuple(bad) + (x0,))

    def rule_AllI(self, node, ctx, path):
        c = node.conclusion
        if not self.shape(c, Forall, path, "conclusion of AllI"):
            return
        self.same(self.premises(node)[0], substitute(c.body, c.bound, Var(node.fresh)), path, "premise")
        self._freshness(node, ctx, path, {"the conclusion": c})

    def rule_AllE(self, node, ctx, path):
        p = self.premises(node)[0]
        if not self.shape(p, Forall, path, "premise of AllE"):
            return
        x, t = node.substs[0]
        if x != p.bound:
            self.report(WRONG_RULE, path, f"substitution names {x} but the premise quantifies {p.bound}", (x,))
            return
        self.same(node.conclusion, substitute(p.body, x, t), path, "conclusion")

    def rule_ExI(self, node, ctx, path):
        c = node.conclusion
        if not self.shape(c, Exists, path, "conclusion of ExI"):
            return
        x, t = node.substs[0]
        if x != c.bound:
            self.report(WRONG_RULE, path, f"substitution names {x} but the conclusion quantifies {c.bound}", (x,))
            return
        self.same(self.premises(node)[0], substitute(c.body, x, t), path, "premise")

    def rule_ExE(self, node, ctx, path):
        self.fresh_labels(node, ctx, path)
        major, minor = self.premises(node)
        self.same(minor, node.conclusion, path, "minor premise")
        if self.shape(major, Exists, path, "major premise of ExE"):
            self._freshness(node, ctx, path, {"the conclusion": node.conclusion, "the major premise": major})

    def rule_EqI(self, node, ctx, path):
        c = node.conclusion
        if not (isinstance(c, Equal) and c.left == c.right):
            self.report(WRONG_RULE, path, f"EqI concludes t = t, found {format_formula(c)}")

    def rule_EqE(self, node, ctx, path):
        eq, pa = self.premises(node)
        if not self.shape(eq, Equal, path, "first premise of EqE"):
            return
        if not rewrites_to(pa, node.conclusion, eq.left, eq.right):
            self.report(WRONG_RULE, path,
                        f"{format_formula(node.conclusion)} is not {format_formula(pa)} with "
                        f"{format_term(eq.left)} replaced by {format_term(eq.right)}")

    def rule_NatRec(self, node, ctx, path):
        if not self.env.has_nat:
            self.report(WRONG_RULE, path, "NatRec needs 0 and S in the signature")
            return
        c = node.conclusion
        if not self.shape(c, Forall, path, "conclusion of NatRec"):
            return
        n, body = c.bound, c.body
        base, step = self.premises(node)
        self.same(base, substitute(body, n, _zero()), path, "base case")
        want = Forall(n, Implies(body, substitute(body, n, _succ(Var(n)))))
        self.same(step, want, path, "induction step")

    def rule_Conv(self, node, ctx, path):
        defs = []
        for name in node.refs:
            d = self.env.definitions.get(name)
            if d is None:
                self.report(CONVERSION, path, f"unknown definition {name}", (name,))
                return
            defs.append(d)
        try:
            ok = defeq(node.conclusion, self.premises(node)[0], defs)
        except CyclicDefinition as e:
            self.report(CONVERSION, path, str(e), node.refs)
            return
        if not ok:
            self.report(CONVERSION, path,
                        f"{format_formula(node.conclusion)} and {format_formula(self.premises(node)[0])} "
                        f"are not convertible by {', '.join(node.refs)}", node.refs)

    def rule_Chain(self, node, ctx, path):
        try:
            tree = elaborate_chain(node, ctx, self.env)
        except ChainError as e:
            self.report(e.kind, path, str(e), e.detail)
            return
        sub = _Checker(self.env, self.lemma, self.mode, tree)
        sub.discharged |= self.discharged
        sub.check(tree, ctx, ())
        seen = set()
        for d in sub.diags:
            key = (d.kind, d.message)
            if key not in seen:
                seen.add(key)
                self.report(d.kind, path, "in equational step: " + d.message, d.detail)

    def rule_Lemma(self, node, ctx, path):
        name = node.refs[0] if node.refs else ""
        rule = self.env.rules.get(name)
        if rule is None:
            why = "was rejected" if name in self.env.rejected else "is not a checked lemma"
            self.report(UNPROVED, path, f"{name} {why}", (name,))
            return
        if rule.classical and self.mode is not Mode.CLASSICAL:
            self.report(MODE, path, f"lemma {name} uses classical reasoning", (name,))
        try:
            hyps, goal = instantiate_rule(rule, node, self.env)
        except ValueError as e:
            self.report(WRONG_RULE, path, str(e), (name,))
            return
        prem = self.premises(node)
        if len(prem) < len(hyps):
            missing = [format_formula(h) for h in hyps[len(prem):]]
            self.report(UNPROVED, path, f"{name} premises not proved: {'; '.join(missing)}", (name,))
        elif len(prem) > len(hyps):
            self.report(WRONG_RULE, path, f"{name} takes {len(hyps)} premises, got {len(prem)}", (name,))
        for i, (got, want) in enumerate(zip(prem, hyps)):
            self.same(got, want, path, f"premise {i + 1} of {name}")
        self.same(node.conclusion, goal, path, f"conclusion of {name}")


def instantiate_rule(rule: DerivedRule, node: ProofNode, env: Environment):
    """Instantiated (hypotheses, goal) of a derived rule for a Lemma node."""
    terms = rule.schematic_terms()
    term_map = {}
    for x, t in node.substs:
        if x not in terms:
            raise ValueError(f"{x} is not a variable of {rule.name}")
        term_map[x] = t
    arities = rule.statement_predicates()
    interpreted = env.interpreted_predicates()
    pred_map = {}
    for p, rep in node.pred_substs:
        if p not in arities:
            raise ValueError(f"{p} does not occur in {rule.name}")
        if p in interpreted:
            raise ValueError(f"{p} is fixed by axioms or definitions and cannot be instantiated")
        if arities[p] != len(rep.params):
            raise ValueError(f"{p} has arity {arities[p]}, substitution gives {len(rep.params)}")
        pred_map[p] = rep
    hyps = [instantiate(f, term_map, pred_map) for _, f in rule.hypotheses]
    return hyps, instantiate(rule.goal, term_map, pred_map)


# -------------------------------------------------------- equational blocks

class ChainError(Exception):
    def __init__(self, kind: str, message: str, detail=()):
        super().__init__(message)
        self.kind = kind
        self.detail = tuple(detail)


def _unfold_head(f: Formula, node: ProofNode, env: Environment):
    if isinstance(f, Atom):
        for d in env.definitions.values():
            body = d.expand(f)
            if body is not None:
                return body, ProofNode("Conv", body, (node,), refs=(d.name,))
    return f, node


def _resolve(step, ctx: Context, env: Environment) -> ProofNode:
    name = step.justification
    substs = list(step.substs)
    f = ctx.lookup(name)
    if f is not None:
        node = ProofNode("Hyp", f, refs=(name,))
    elif name in env.rules:
        rule = env.rules[name]
        schematic = rule.schematic_terms()
        mine = tuple((v, t) for v, t in substs if v in schematic)
        substs = [(v, t) for v, t in substs if v not in schematic]
        probe = ProofNode("Lemma", Bottom(), refs=(name,), substs=mine)
        hyps, f = instantiate_rule(rule, probe, env)
        kids = []
        for h in hyps:
            label = next((lab for lab, g in reversed(ctx.entries) if alpha_eq(g, h)), None)
            if label is None:
                raise ChainError(UNKNOWN_HYP, f"no available hypothesis proves {format_formula(h)} for {name}",
                                 (name,))
            kids.append(ProofNode("Hyp", h, refs=(label,)))
        node = ProofNode("Lemma", f, tuple(kids), refs=(name,), substs=mine)
    else:
        raise ChainError(UNKNOWN_HYP, f"unknown justification {name}", (name,))
    remaining = dict(substs)
    while remaining:
        f, node = _unfold_head(f, node, env)
        if not isinstance(f, Forall) or f.bound not in remaining:
            raise ChainError(WRONG_RULE, f"cannot instantiate {format_formula(f)} with "
                             + ", ".join(f"{v}:={format_term(t)}" for v, t in remaining.items()), (name,))
        t = remaining.pop(f.bound)
        bound = f.bound
        f = substitute(f.body, bound, t)
        node = ProofNode("AllE", f, (node,), substs=((bound, t),))
    f, node = _unfold_head(f, node, env)
    if not isinstance(f, Equal):
        raise ChainError(WRONG_RULE, f"justification {name} proves {format_formula(f)}, not an equation", (name,))
    return node


def _symmetric(proof: ProofNode) -> ProofNode:
    eq = proof.conclusion
    refl = ProofNode("EqI", Equal(eq.left, eq.left))
    return ProofNode("EqE", Equal(eq.right, eq.left), (proof, refl))


def elaborate_chain(chain: ProofNode, ctx: Context, env) -> ProofNode:
    """Expand ``t0 = t1 = ... = tn`` into EqI/EqE steps over resolved justifications.

    ``env`` is an ``Environment`` or a document whose items precede the chain.
    """
    if isinstance(env, ProofDocument):
        env = load_environment(env, ctx.mode)
    c = chain.conclusion
    if not isinstance(c, Equal):
        raise ChainError(CHAIN_BREAK, f"a chain concludes an equation, found {format_formula(c)}")
    steps = chain.steps
    if not steps:
        raise ChainError(CHAIN_BREAK, "empty chain")
    if steps[0].lhs != c.left:
        raise ChainError(CHAIN_BREAK, f"chain starts at {format_term(steps[0].lhs)}, not {format_term(c.left)}")
    if steps[-1].rhs != c.right:
        raise ChainError(CHAIN_BREAK, f"chain ends at {format_term(steps[-1].rhs)}, not {format_term(c.right)}")
    for i, (s, t) in enumerate(zip(steps, steps[1:])):
        if s.rhs != t.lhs:
            raise ChainError(CHAIN_BREAK, f"step {i + 1} ends at {format_term(s.rhs)} "
                             f"but step {i + 2} starts at {format_term(t.lhs)}")
    t0 = c.left
    acc = ProofNode("EqI", Equal(t0, t0))
    for i, step in enumerate(steps):
        if step.justification == "EqI":
            if step.lhs != step.rhs:
                raise ChainError(WRONG_RULE, f"step {i + 1}: EqI only justifies t = t")
            continue
        just = _resolve(step, ctx, env)
        a, b = just.conclusion.left, just.conclusion.right
        target = Equal(t0, step.rhs)
        if acc.rule == "EqI" and alpha_eq(just.conclusion, target):
            acc = just
        elif acc.rule == "EqI" and alpha_eq(just.conclusion, Equal(step.rhs, t0)):
            acc = _symmetric(just)
        elif rewrites_to(acc.conclusion, target, a, b):
            acc = ProofNode("EqE", target, (just, acc))
        elif rewrites_to(acc.conclusion, target, b, a):
            acc = ProofNode("EqE", target, (_symmetric(just), acc))
        else:
            raise ChainError(WRONG_RULE, f"step {i + 1}: {step.justification} proves "
                             f"{format_formula(just.conclusion)}, which does not rewrite "
                             f"{format_term(step.lhs)} into {format_term(step.rhs)}", (step.justification,))
    return acc


# ------------------------------------------------------------ documents

def uses_classical(root: ProofNode, env: Environment) -> bool:
    for _, node in root.walk():
        if node.rule in CLASSICAL_RULES:
            return True
        if node.rule == "Lemma" and node.refs:
            rule = env.rules.get(node.refs[0])
            if rule is not None and rule.classical:
                return True
        if node.rule == "Chain":
            for step in node.steps:
                rule = env.rules.get(step.justification)
                if rule is not None and rule.classical:
                    return True
    return False


def check_lemma(lemma: Lemma, env: Environment, mode: Mode = Mode.INTUITIONISTIC) -> list:
    checker = _Checker(env, lemma.name, mode, lemma.root)
    axiom_names = {name for name, _ in env.axioms}
    for label, _ in lemma.hypotheses:
        if label in axiom_names:
            checker.report(DUPLICATE_LABEL, (), f"hypothesis label {label} clashes with an axiom", (label,))
    ctx = env.initial_context(lemma.hypotheses, mode)
    if not alpha_eq(lemma.root.conclusion, lemma.goal):
        checker.report(WRONG_RULE, (), f"proof concludes {format_formula(lemma.root.conclusion)}, "
                       f"lemma states {format_formula(lemma.goal)}")
    checker.check(lemma.root, ctx, ())
    return sorted(checker.diags, key=lambda d: d.path)


def check_node(node: ProofNode, ctx: Context, env, lemma: str = "") -> list:
    """Diagnostics for ``node`` and its subtrees under ``ctx``."""
    if isinstance(env, ProofDocument):
        env = load_environment(env, ctx.mode)
    checker = _Checker(env, lemma, ctx.mode, node)
    checker.check(node, ctx, ())
    return sorted(checker.diags, key=lambda d: d.path)


def _lemma_deps(root: ProofNode) -> list:
    deps = set()
    for _, node in root.walk():
        if node.rule == "Lemma" and node.refs:
            deps.add(node.refs[0])
        for step in node.steps:
            deps.add(step.justification)
    return sorted(deps)


def _load(doc: ProofDocument, env: Environment, mode: Mode) -> tuple:
    env.has_nat = env.has_nat or doc.signature.has_nat
    diags: list = []
    stats = {"nodes": 0, "max_depth": 0, "lemmas": {}}
    for item in doc.items:
        if isinstance(item, Definition):
            env.definitions[item.name] = item
        elif isinstance(item, Axiom):
            env.axioms.append((item.name, item.formula))
        else:
            found = check_lemma(item, env, mode)
            diags.extend(found)
            stats["nodes"] += item.root.size()
            stats["max_depth"] = max(stats["max_depth"], item.root.depth())
            deps = [d for d in _lemma_deps(item.root) if d in env.rules or d in env.rejected]
            stats["lemmas"][item.name] = deps
            if found:
                env.rejected.add(item.name)
                env.rules.pop(item.name, None)
            else:
                env.rejected.discard(item.name)
                env.rules[item.name] = DerivedRule(item.name, item.hypotheses, item.goal, item.root,
                                                   uses_classical(item.root, env))
    return tuple(diags), stats


def load_environment(doc: ProofDocument, mode: Mode = Mode.INTUITIONISTIC, env: Optional[Environment] = None):
    env = env.copy() if env is not None else Environment()
    _load(doc, env, mode)
    return env


def check_document(doc: ProofDocument, mode: Mode = Mode.INTUITIONISTIC,
                   env: Optional[Environment] = None) -> CheckReport:
    """Check every lemma of ``doc`` in order; ``env`` supplies preloaded preludes."""
    env = env.copy() if env is not None else Environment()
    diags, stats = _load(doc, env, mode)
    return CheckReport(diags, stats, env)


def derive_rule(lemma: Lemma, env) -> DerivedRule:
    """The derived rule of an accepted lemma; ``env`` may also be a checked document."""
    if isinstance(env, ProofDocument):
        env = load_environment(env)
    rule = env.rules.get(lemma.name)
    if rule is None or rule.proof != lemma.root:
        raise UncheckedLemma(f"lemma {lemma.name} has not been accepted")
    return rule
