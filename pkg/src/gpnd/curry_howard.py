"""Propositional proofs as simply typed lambda terms.

Hypothesis labels double as term variables.  Extraction is defined on the
propositional, intuitionistic fragment; lemma references are inlined as
beta-redexes, which is exactly the cut that normalization removes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

from .errors import IllTyped, OutOfFragment, StepLimitExceeded
from .proof_format import ProofNode, format_formula
from .syntax import (
    And, Bottom, Formula, Implies, Or, alpha_eq, fresh_name, instantiate,
    is_propositional, subformulas,
)


@dataclass(frozen=True)
class Var:
    label: str


@dataclass(frozen=True)
class Lam:
    label: str
    type: Formula
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Pair:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Fst:
    pair: "Term"


@dataclass(frozen=True)
class Snd:
    pair: "Term"


@dataclass(frozen=True)
class Inl:
    """Left injection; ``other`` is the right disjunct."""
    term: "Term"
    other: Formula


@dataclass(frozen=True)
class Inr:
    """Right injection; ``other`` is the left disjunct."""
    term: "Term"
    other: Formula


@dataclass(frozen=True)
class Case:
    scrutinee: "Term"
    label1: str
    branch1: "Term"
    label2: str
    branch2: "Term"


@dataclass(frozen=True)
class Abort:
    term: "Term"
    type: Formula


Term = Union[Var, Lam, App, Pair, Fst, Snd, Inl, Inr, Case, Abort]


def _env(ctx) -> dict:
    if ctx is None:
        return {}
    if isinstance(ctx, Mapping):
        return dict(ctx)
    entries = getattr(ctx, "entries", ctx)
    return {label: f for label, f in entries}


# ---------------------------------------------------------------- printing

_BACKSLASH = "\\"


def format_lambda(t: Term, unicode: bool = False) -> str:
    return _show(t, 0, unicode)


def _show(t: Term, ctx: int, u: bool) -> str:
    ty = lambda f: format_formula(f, u)
    if isinstance(t, Var):
        return t.label
    if isinstance(t, Lam):
        s, level = f"{'λ' if u else _BACKSLASH}{t.label}:{ty(t.type)}. {_show(t.body, 0, u)}", 0
    elif isinstance(t, Case):
        s = (f"case {_show(t.scrutinee, 0, u)} of {t.label1} => {_show(t.branch1, 1, u)}"
             f" | {t.label2} => {_show(t.branch2, 0, u)}")
        level = 0
    elif isinstance(t, App):
        s, level = f"{_show(t.fun, 1, u)} {_show(t.arg, 2, u)}", 1
    elif isinstance(t, Pair):
        return f"<{_show(t.left, 0, u)}, {_show(t.right, 0, u)}>"
    elif isinstance(t, (Fst, Snd)):
        s, level = f"{'fst' if isinstance(t, Fst) else 'snd'} {_show(t.pair, 2, u)}", 1
    elif isinstance(t, (Inl, Inr)):
        tag = "inl" if isinstance(t, Inl) else "inr"
        s, level = f"{tag}[{ty(t.other)}] {_show(t.term, 2, u)}", 1
    elif isinstance(t, Abort):
        s, level = f"abort[{ty(t.type)}] {_show(t.term, 2, u)}", 1
    else:
        raise TypeError(f"not a lambda term: {t!r}")
    return f"({s})" if level < ctx else s


# -------------------------------------------------------------- extraction

_FRAGMENT = {"Hyp", "ImpI", "ImpE", "AndI", "AndE1", "AndE2", "OrI1", "OrI2", "OrE", "BotE",
             "Conv", "Lemma"}


def extract(proof: ProofNode, ctx=None, env=None) -> Term:
    """Lambda term of a propositional proof.

    ``env`` (a kernel ``Environment``) is needed only when the proof cites
    lemmas; each citation becomes the lemma's own term applied to the terms
    of the premises.
    """
    term = _extract(proof, env, ())
    return rename_apart(term, set(_env(ctx)))


def _extract(node: ProofNode, env, path) -> Term:
    if node.rule not in _FRAGMENT:
        raise OutOfFragment(f"{node.rule} at {_dotted(path)} is outside the propositional fragment")
    if not is_propositional(node.conclusion):
        raise OutOfFragment(f"conclusion {format_formula(node.conclusion)} at {_dotted(path)} "
                            "is not propositional")
    kids = [_extract(c, env, path + (i,)) for i, c in enumerate(node.children)]
    c = node.conclusion
    rule = node.rule
    if rule == "Hyp":
        return Var(node.refs[0])
    if rule == "ImpI":
        return Lam(node.labels[0], c.left, kids[0])
    if rule == "ImpE":
        return App(kids[0], kids[1])
    if rule == "AndI":
        return Pair(kids[0], kids[1])
    if rule == "AndE1":
        return Fst(kids[0])
    if rule == "AndE2":
        return Snd(kids[0])
    if rule == "OrI1":
        return Inl(kids[0], c.right)
    if rule == "OrI2":
        return Inr(kids[0], c.left)
    if rule == "OrE":
        return Case(kids[0], node.labels[0], kids[1], node.labels[1], kids[2])
    if rule == "BotE":
        return Abort(kids[0], c)
    if rule == "Conv":
        return kids[0]
    return _inline_lemma(node, kids, env, path)


def _inline_lemma(node: ProofNode, kids: list, env, path) -> Term:
    rule = None if env is None else env.rules.get(node.refs[0])
    if rule is None:
        raise OutOfFragment(f"lemma {node.refs[0]} at {_dotted(path)} is not available for extraction")
    if rule.classical:
        raise OutOfFragment(f"lemma {node.refs[0]} uses classical reasoning")
    terms = dict(node.substs)
    preds = {name: rep for name, rep in node.pred_substs}
    body = _map_types(_extract(rule.proof, env, path), lambda f: instantiate(f, terms, preds))
    labels = [label for label, _ in rule.hypotheses]
    types = [instantiate(f, terms, preds) for _, f in rule.hypotheses]
    for label, f in zip(reversed(labels), reversed(types)):
        body = Lam(label, f, body)
    for k in kids:
        body = App(body, k)
    return body


def _dotted(path) -> str:
    return ".".join(map(str, path)) or "root"


def _map_types(t: Term, fn) -> Term:
    if isinstance(t, Var):
        return t
    if isinstance(t, Lam):
        return Lam(t.label, fn(t.type), _map_types(t.body, fn))
    if isinstance(t, App):
        return App(_map_types(t.fun, fn), _map_types(t.arg, fn))
    if isinstance(t, Pair):
        return Pair(_map_types(t.left, fn), _map_types(t.right, fn))
    if isinstance(t, (Fst, Snd)):
        return type(t)(_map_types(t.pair, fn))
    if isinstance(t, (Inl, Inr)):
        return type(t)(_map_types(t.term, fn), fn(t.other))
    if isinstance(t, Case):
        return Case(_map_types(t.scrutinee, fn), t.label1, _map_types(t.branch1, fn),
                    t.label2, _map_types(t.branch2, fn))
    return Abort(_map_types(t.term, fn), fn(t.type))


# ------------------------------------------------------------------ typing

def typecheck_term(t: Term, ctx=None) -> Formula:
    """The type of ``t`` where ``ctx`` assigns formulas to free labels."""
    return _type(t, _env(ctx), ())


def _type(t: Term, env: dict, path) -> Formula:
    if isinstance(t, Var):
        if t.label not in env:
            raise IllTyped(path, "a bound or assumed label", t.label)
        return env[t.label]
    if isinstance(t, Lam):
        return Implies(t.type, _type(t.body, {**env, t.label: t.type}, path + (0,)))
    if isinstance(t, App):
        f = _type(t.fun, env, path + (0,))
        a = _type(t.arg, env, path + (1,))
        if not isinstance(f, Implies):
            raise IllTyped(path + (0,), "an implication", format_formula(f))
        if not alpha_eq(f.left, a):
            raise IllTyped(path + (1,), format_formula(f.left), format_formula(a))
        return f.right
    if isinstance(t, Pair):
        return And(_type(t.left, env, path + (0,)), _type(t.right, env, path + (1,)))
    if isinstance(t, (Fst, Snd)):
        p = _type(t.pair, env, path + (0,))
        if not isinstance(p, And):
            raise IllTyped(path + (0,), "a conjunction", format_formula(p))
        return p.left if isinstance(t, Fst) else p.right
    if isinstance(t, Inl):
        return Or(_type(t.term, env, path + (0,)), t.other)
    if isinstance(t, Inr):
        return Or(t.other, _type(t.term, env, path + (0,)))
    if isinstance(t, Case):
        s = _type(t.scrutinee, env, path + (0,))
        if not isinstance(s, Or):
            raise IllTyped(path + (0,), "a disjunction", format_formula(s))
        b1 = _type(t.branch1, {**env, t.label1: s.left}, path + (1,))
        b2 = _type(t.branch2, {**env, t.label2: s.right}, path + (2,))
        if not alpha_eq(b1, b2):
            raise IllTyped(path + (2,), format_formula(b1), format_formula(b2))
        return b1
    if isinstance(t, Abort):
        b = _type(t.term, env, path + (0,))
        if not isinstance(b, Bottom):
            raise IllTyped(path + (0,), format_formula(Bottom()), format_formula(b))
        return t.type
    raise TypeError(f"not a lambda term: {t!r}")


# ------------------------------------------------------------ substitution

def free_labels(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.label,))
    if isinstance(t, Lam):
        return free_labels(t.body) - {t.label}
    if isinstance(t, Case):
        return (free_labels(t.scrutinee) | (free_labels(t.branch1) - {t.label1})
                | (free_labels(t.branch2) - {t.label2}))
    return frozenset().union(*(free_labels(k) for k in _subterms(t)))


def _labels(t: Term) -> frozenset:
    """All labels, free or bound."""
    own = {t.label} if isinstance(t, (Var, Lam)) else set()
    if isinstance(t, Case):
        own = {t.label1, t.label2}
    return frozenset(own).union(*(_labels(k) for k in _subterms(t)))


def _subterms(t: Term) -> tuple:
    if isinstance(t, Var):
        return ()
    if isinstance(t, Lam):
        return (t.body,)
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, Pair):
        return (t.left, t.right)
    if isinstance(t, (Fst, Snd)):
        return (t.pair,)
    if isinstance(t, Case):
        return (t.scrutinee, t.branch1, t.branch2)
    return (t.term,)


def subst(t: Term, label: str, u: Term) -> Term:
    """Capture-avoiding replacement of free ``label`` in ``t`` by ``u``."""
    return _subst(t, label, u, free_labels(u))


def _binder(label: str, body: Term, target: str, u: Term, fv_u: frozenset):
    """Rename ``label`` in ``body`` if substituting ``u`` would be captured."""
    if label == target:
        return label, body, False
    if label in fv_u and target in free_labels(body):
        new = fresh_name(label, fv_u | _labels(body) | _labels(u) | {target})
        return new, _subst(body, label, Var(new), frozenset((new,))), True
    return label, body, True


def _subst(t: Term, x: str, u: Term, fv_u: frozenset) -> Term:
    if isinstance(t, Var):
        return u if t.label == x else t
    if isinstance(t, Lam):
        label, body, go = _binder(t.label, t.body, x, u, fv_u)
        return Lam(label, t.type, _subst(body, x, u, fv_u) if go else body)
    if isinstance(t, App):
        return App(_subst(t.fun, x, u, fv_u), _subst(t.arg, x, u, fv_u))
    if isinstance(t, Pair):
        return Pair(_subst(t.left, x, u, fv_u), _subst(t.right, x, u, fv_u))
    if isinstance(t, (Fst, Snd)):
        return type(t)(_subst(t.pair, x, u, fv_u))
    if isinstance(t, (Inl, Inr)):
        return type(t)(_subst(t.term, x, u, fv_u), t.other)
    if isinstance(t, Case):
        l1, b1, go1 = _binder(t.label1, t.branch1, x, u, fv_u)
        l2, b2, go2 = _binder(t.label2, t.branch2, x, u, fv_u)
        return Case(_subst(t.scrutinee, x, u, fv_u),
                    l1, _subst(b1, x, u, fv_u) if go1 else b1,
                    l2, _subst(b2, x, u, fv_u) if go2 else b2)
    return Abort(_subst(t.term, x, u, fv_u), t.type)


def rename_apart(t: Term, avoid=frozenset()) -> Term:
    """Alpha-rename binders so that no label is rebound along any path.

    ``avoid`` holds labels already in scope (the typing context).
    """
    return _rename(t, frozenset(avoid) | free_labels(t))


def _rename(t: Term, scope: frozenset) -> Term:
    if isinstance(t, Var):
        return t
    if isinstance(t, Lam):
        label, body = _fresh_binder(t.label, t.body, scope)
        return Lam(label, t.type, _rename(body, scope | {label}))
    if isinstance(t, Case):
        l1, b1 = _fresh_binder(t.label1, t.branch1, scope)
        l2, b2 = _fresh_binder(t.label2, t.branch2, scope)
        return Case(_rename(t.scrutinee, scope), l1, _rename(b1, scope | {l1}),
                    l2, _rename(b2, scope | {l2}))
    if isinstance(t, App):
        return App(_rename(t.fun, scope), _rename(t.arg, scope))
    if isinstance(t, Pair):
        return Pair(_rename(t.left, scope), _rename(t.right, scope))
    if isinstance(t, (Fst, Snd)):
        return type(t)(_rename(t.pair, scope))
    if isinstance(t, (Inl, Inr)):
        return type(t)(_rename(t.term, scope), t.other)
    return Abort(_rename(t.term, scope), t.type)


def _fresh_binder(label: str, body: Term, scope: frozenset):
    if label not in scope:
        return label, body
    new = fresh_name(label, scope | _labels(body))
    return new, subst(body, label, Var(new))


# --------------------------------------------------------------- reduction

def _contract(t: Term, env: dict) -> Optional[Term]:
    """One step at the root of ``t``, or None when the root is not a redex."""
    if isinstance(t, App):
        f = t.fun
        if isinstance(f, Lam):
            return subst(f.body, f.label, t.arg)
        if isinstance(f, Case):
            return _push_into(f, lambda b: App(b, t.arg), t.arg)
        if isinstance(f, Abort) and isinstance(f.type, Implies):
            return Abort(f.term, f.type.right)
    elif isinstance(t, (Fst, Snd)):
        p = t.pair
        if isinstance(p, Pair):
            return p.left if isinstance(t, Fst) else p.right
        if isinstance(p, Case):
            return _push_into(p, type(t), None)
        if isinstance(p, Abort) and isinstance(p.type, And):
            return Abort(p.term, p.type.left if isinstance(t, Fst) else p.type.right)
    elif isinstance(t, Case):
        s = t.scrutinee
        if isinstance(s, Inl):
            return subst(t.branch1, t.label1, s.term)
        if isinstance(s, Inr):
            return subst(t.branch2, t.label2, s.term)
        if isinstance(s, Case):
            outer = t
            return _push_into(s, lambda b: Case(b, outer.label1, outer.branch1, outer.label2, outer.branch2),
                              outer)
        if isinstance(s, Abort) and isinstance(s.type, Or):
            result = _type(t.branch1, {**env, t.label1: s.type.left}, ())
            return Abort(s.term, result)
    elif isinstance(t, Abort):
        inner = t.term
        if isinstance(inner, Abort):
            return Abort(inner.term, t.type)
        if isinstance(inner, Case):
            return _push_into(inner, lambda b: Abort(b, t.type), None)
        if isinstance(t.type, Bottom):
            return inner
    return None


def _push_into(case: Case, wrap, carried: Optional[Term]) -> Case:
    """Commuting conversion: move an eliminator into both branches of ``case``."""
    avoid = free_labels(carried) if carried is not None else frozenset()
    l1, b1 = case.label1, case.branch1
    l2, b2 = case.label2, case.branch2
    if l1 in avoid:
        new = fresh_name(l1, avoid | _labels(b1))
        l1, b1 = new, subst(b1, case.label1, Var(new))
    if l2 in avoid:
        new = fresh_name(l2, avoid | _labels(b2))
        l2, b2 = new, subst(b2, case.label2, Var(new))
    return Case(case.scrutinee, l1, wrap(b1), l2, wrap(b2))


def _step(t: Term, env: dict) -> Optional[Term]:
    """One leftmost-outermost reduction step, or None for a normal term."""
    out = _contract(t, env)
    if out is not None:
        return out
    if isinstance(t, Var):
        return None
    if isinstance(t, Lam):
        body = _step(t.body, {**env, t.label: t.type})
        return None if body is None else Lam(t.label, t.type, body)
    if isinstance(t, Case):
        s = _step(t.scrutinee, env)
        if s is not None:
            return Case(s, t.label1, t.branch1, t.label2, t.branch2)
        disj = _type(t.scrutinee, env, ())
        b1 = _step(t.branch1, {**env, t.label1: disj.left})
        if b1 is not None:
            return Case(t.scrutinee, t.label1, b1, t.label2, t.branch2)
        b2 = _step(t.branch2, {**env, t.label2: disj.right})
        return None if b2 is None else Case(t.scrutinee, t.label1, t.branch1, t.label2, b2)
    kids = _subterms(t)
    for i, k in enumerate(kids):
        new = _step(k, env)
        if new is not None:
            return _rebuild(t, i, new)
    return None


def _rebuild(t: Term, i: int, new: Term) -> Term:
    if isinstance(t, App):
        return App(new, t.arg) if i == 0 else App(t.fun, new)
    if isinstance(t, Pair):
        return Pair(new, t.right) if i == 0 else Pair(t.left, new)
    if isinstance(t, (Fst, Snd)):
        return type(t)(new)
    if isinstance(t, (Inl, Inr)):
        return type(t)(new, t.other)
    return Abort(new, t.type)


def reductions(t: Term, ctx=None, step_limit: int = 10_000) -> Iterator[Term]:
    """Successive reducts of ``t`` (excluding ``t`` itself) down to normal form."""
    env = _env(ctx)
    for _ in range(step_limit):
        t = _step(t, env)
        if t is None:
            return
        yield t
    if _step(t, env) is not None:
        raise StepLimitExceeded(f"no normal form within {step_limit} steps")


def normalize(t: Term, step_limit: int = 10_000, ctx=None) -> Term:
    """Normal form under detour reductions and commuting conversions."""
    for t in reductions(t, ctx, step_limit):
        pass
    return rename_apart(t, set(_env(ctx)))


def is_normal(t: Term, ctx=None) -> bool:
    return _step(t, _env(ctx)) is None


# ----------------------------------------------------------- back to trees

def to_proof(t: Term, ctx=None) -> ProofNode:
    """Proof tree whose extraction is ``t``; labels are renamed apart first."""
    env = _env(ctx)
    return _proof(rename_apart(t, set(env)), env)


def _proof(t: Term, env: dict) -> ProofNode:
    c = _type(t, env, ())
    if isinstance(t, Var):
        return ProofNode("Hyp", c, refs=(t.label,))
    if isinstance(t, Lam):
        return ProofNode("ImpI", c, (_proof(t.body, {**env, t.label: t.type}),), labels=(t.label,))
    if isinstance(t, Case):
        disj = _type(t.scrutinee, env, ())
        return ProofNode("OrE", c, (_proof(t.scrutinee, env),
                                    _proof(t.branch1, {**env, t.label1: disj.left}),
                                    _proof(t.branch2, {**env, t.label2: disj.right})),
                         labels=(t.label1, t.label2))
    rule = {App: "ImpE", Pair: "AndI", Fst: "AndE1", Snd: "AndE2", Inl: "OrI1", Inr: "OrI2",
            Abort: "BotE"}[type(t)]
    return ProofNode(rule, c, tuple(_proof(k, env) for k in _subterms(t)))


# --------------------------------------------------------- subformulas

def subformula_check(proof: ProofNode, hyps=None) -> bool:
    """Every conclusion and discharged assumption is a subformula of the
    hypotheses or of the final conclusion; ⊥ is always admitted."""
    allowed = {Bottom()} | subformulas(proof.conclusion)
    for f in _env(hyps).values():
        allowed |= subformulas(f)
    for _, node in proof.walk():
        used = [node.conclusion]
        if node.rule == "ImpI" and isinstance(node.conclusion, Implies):
            used.append(node.conclusion.left)
        if node.rule == "OrE" and node.children and isinstance(node.children[0].conclusion, Or):
            disj = node.children[0].conclusion
            used += [disj.left, disj.right]
        if any(f not in allowed for f in used):
            return False
    return True

