"""First-order terms and formulas with named binders.

Negation and equivalence are not primitive: ``~A`` is ``Implies(A, Bottom())``
and ``A <-> B`` is ``And(Implies(A, B), Implies(B, A))``.  The ``hint`` field
only affects printing and never takes part in equality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .errors import CyclicDefinition


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple = ()

    def __str__(self) -> str:
        from .proof_format import format_term
        return format_term(self)


Term = Union[Var, App]


class _FormulaStr:
    def __str__(self) -> str:
        from .proof_format import format_formula
        return format_formula(self)


@dataclass(frozen=True)
class Atom(_FormulaStr):
    predicate: str
    args: tuple = ()


@dataclass(frozen=True)
class And(_FormulaStr):
    left: "Formula"
    right: "Formula"
    hint: Optional[str] = field(default=None, compare=False)


@dataclass(frozen=True)
class Or(_FormulaStr):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies(_FormulaStr):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Bottom(_FormulaStr):
    pass


@dataclass(frozen=True)
class Forall(_FormulaStr):
    bound: str
    body: "Formula"


@dataclass(frozen=True)
class Exists(_FormulaStr):
    bound: str
    body: "Formula"


@dataclass(frozen=True)
class Equal(_FormulaStr):
    left: Term
    right: Term


Formula = Union[Atom, And, Or, Implies, Bottom, Forall, Exists, Equal]
Binary = (And, Or, Implies)
Quantifier = (Forall, Exists)


def Not(f: Formula) -> Implies:
    return Implies(f, Bottom())


def Iff(a: Formula, b: Formula) -> And:
    return And(Implies(a, b), Implies(b, a), hint="iff")


def is_negation(f: Formula) -> bool:
    return isinstance(f, Implies) and isinstance(f.right, Bottom)


def is_iff(f: Formula) -> bool:
    return (isinstance(f, And) and isinstance(f.left, Implies) and isinstance(f.right, Implies)
            and f.left.left == f.right.right and f.left.right == f.right.left)


# ---------------------------------------------------------------- variables

def term_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    out: set = set()
    for a in t.args:
        out |= term_vars(a)
    return frozenset(out)


def free_vars(e) -> frozenset:
    """Variables with at least one free occurrence in a term or formula."""
    if isinstance(e, (Var, App)):
        return term_vars(e)
    if isinstance(e, Atom):
        out: set = set()
        for a in e.args:
            out |= term_vars(a)
        return frozenset(out)
    if isinstance(e, Equal):
        return term_vars(e.left) | term_vars(e.right)
    if isinstance(e, Binary):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, Quantifier):
        return free_vars(e.body) - {e.bound}
    return frozenset()


def all_names(f: Formula) -> frozenset:
    """Every variable name occurring in f, free or bound."""
    if isinstance(f, Quantifier):
        return all_names(f.body) | {f.bound}
    if isinstance(f, Binary):
        return all_names(f.left) | all_names(f.right)
    return free_vars(f)


def fresh_name(base: str, avoid) -> str:
    """Smallest primed variant of ``base`` that is not in ``avoid``."""
    name = base
    while name in avoid:
        name += "'"
    return name


# ------------------------------------------------------------- substitution

def subst_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if not t.args:
        return t
    return App(t.symbol, tuple(subst_term(a, mapping) for a in t.args))


def subst_many(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneous capture-avoiding substitution of terms for free variables."""
    if not mapping:
        return f
    if isinstance(f, Atom):
        return Atom(f.predicate, tuple(subst_term(a, mapping) for a in f.args))
    if isinstance(f, Equal):
        return Equal(subst_term(f.left, mapping), subst_term(f.right, mapping))
    if isinstance(f, And):
        return And(subst_many(f.left, mapping), subst_many(f.right, mapping), hint=f.hint)
    if isinstance(f, Binary):
        return type(f)(subst_many(f.left, mapping), subst_many(f.right, mapping))
    if isinstance(f, Quantifier):
        body_fv = free_vars(f.body)
        inner = {k: v for k, v in mapping.items() if k != f.bound and k in body_fv}
        if not inner:
            return f
        incoming: set = set()
        for t in inner.values():
            incoming |= term_vars(t)
        bound = f.bound
        if bound in incoming:
            bound = fresh_name(f.bound, incoming | body_fv | set(inner))
            inner[f.bound] = Var(bound)
        return type(f)(bound, subst_many(f.body, inner))
    return f


def substitute(f: Formula, x: str, t: Term) -> Formula:
    return subst_many(f, {x: t})


@dataclass(frozen=True)
class PredicateSubst:
    """Replacement of atoms ``P(t1..tn)`` by ``body[params := t1..tn]``."""
    params: tuple
    body: Formula


def subst_pred(f: Formula, mapping: Mapping[str, PredicateSubst]) -> Formula:
    if not mapping:
        return f
    if isinstance(f, Atom):
        rep = mapping.get(f.predicate)
        if rep is None:
            return f
        return subst_many(rep.body, dict(zip(rep.params, f.args)))
    if isinstance(f, And):
        return And(subst_pred(f.left, mapping), subst_pred(f.right, mapping), hint=f.hint)
    if isinstance(f, Binary):
        return type(f)(subst_pred(f.left, mapping), subst_pred(f.right, mapping))
    if isinstance(f, Quantifier):
        used = predicates(f.body) & set(mapping)
        if not used:
            return f
        incoming: set = set()
        for p in used:
            incoming |= free_vars(mapping[p].body) - set(mapping[p].params)
        bound, body = f.bound, f.body
        if bound in incoming:
            bound = fresh_name(bound, incoming | all_names(body))
            body = substitute(body, f.bound, Var(bound))
        return type(f)(bound, subst_pred(body, mapping))
    return f


def instantiate(f: Formula, terms: Mapping[str, Term], preds: Mapping[str, PredicateSubst]) -> Formula:
    """Schema instantiation: term variables first, then predicate variables."""
    return subst_pred(subst_many(f, terms), preds)


# ------------------------------------------------------------------ queries

def predicates(f: Formula) -> frozenset:
    if isinstance(f, Atom):
        return frozenset((f.predicate,))
    if isinstance(f, Binary):
        return predicates(f.left) | predicates(f.right)
    if isinstance(f, Quantifier):
        return predicates(f.body)
    return frozenset()


def is_propositional(f: Formula) -> bool:
    if isinstance(f, Atom):
        return not f.args
    if isinstance(f, Bottom):
        return True
    if isinstance(f, Binary):
        return is_propositional(f.left) and is_propositional(f.right)
    return False


def subformulas(f: Formula) -> set:
    out = {f}
    if isinstance(f, Binary):
        out |= subformulas(f.left) | subformulas(f.right)
    elif isinstance(f, Quantifier):
        out |= subformulas(f.body)
    return out


# ------------------------------------------------------- alpha-equivalence

def _term_eq(s: Term, t: Term, env_s: dict, env_t: dict) -> bool:
    if isinstance(s, Var) and isinstance(t, Var):
        ls, lt = env_s.get(s.name), env_t.get(t.name)
        if ls is None and lt is None:
            return s.name == t.name
        return ls == lt
    if isinstance(s, App) and isinstance(t, App):
        return (s.symbol == t.symbol and len(s.args) == len(t.args)
                and all(_term_eq(a, b, env_s, env_t) for a, b in zip(s.args, t.args)))
    return False


def _alpha(f: Formula, g: Formula, env_f: dict, env_g: dict, depth: int) -> bool:
    if type(f) is not type(g):
        return False
    if isinstance(f, Atom):
        return (f.predicate == g.predicate and len(f.args) == len(g.args)
                and all(_term_eq(a, b, env_f, env_g) for a, b in zip(f.args, g.args)))
    if isinstance(f, Equal):
        return _term_eq(f.left, g.left, env_f, env_g) and _term_eq(f.right, g.right, env_f, env_g)
    if isinstance(f, Binary):
        return (_alpha(f.left, g.left, env_f, env_g, depth)
                and _alpha(f.right, g.right, env_f, env_g, depth))
    if isinstance(f, Quantifier):
        return _alpha(f.body, g.body, {**env_f, f.bound: depth}, {**env_g, g.bound: depth}, depth + 1)
    return True


def alpha_eq(f: Formula, g: Formula) -> bool:
    """Equality up to consistent renaming of bound variables."""
    if f is g:
        return True
    return _alpha(f, g, {}, {}, 0)


# ------------------------------------------------------------ signatures

@dataclass
class Signature:
    functions: dict = field(default_factory=dict)
    predicates: dict = field(default_factory=dict)

    @property
    def has_nat(self) -> bool:
        return self.functions.get("0") == 0 and self.functions.get("S") == 1


# ----------------------------------------------------------- definitions

def match_term(pattern: Term, t: Term, params: frozenset, binding: dict) -> bool:
    if isinstance(pattern, Var) and pattern.name in params:
        prev = binding.get(pattern.name)
        if prev is None:
            binding[pattern.name] = t
            return True
        return prev == t
    if isinstance(pattern, Var):
        return pattern == t
    return (isinstance(t, App) and t.symbol == pattern.symbol and len(t.args) == len(pattern.args)
            and all(match_term(p, a, params, binding) for p, a in zip(pattern.args, t.args)))


@dataclass(frozen=True)
class Definition:
    """``head ≜ body``; ``head`` is an atom whose arguments are built from ``params``."""
    name: str
    params: tuple
    head: Atom
    body: Formula

    def match(self, atom: Atom) -> Optional[dict]:
        if atom.predicate != self.head.predicate or len(atom.args) != len(self.head.args):
            return None
        binding: dict = {}
        params = frozenset(self.params)
        for p, a in zip(self.head.args, atom.args):
            if not match_term(p, a, params, binding):
                return None
        return binding

    def expand(self, atom: Atom) -> Optional[Formula]:
        binding = self.match(atom)
        if binding is None:
            return None
        return subst_many(self.body, binding)


def _atoms(f: Formula) -> Iterable[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Binary):
        yield from _atoms(f.left)
        yield from _atoms(f.right)
    elif isinstance(f, Quantifier):
        yield from _atoms(f.body)


def check_acyclic(defs: Iterable[Definition]) -> None:
    defs = list(defs)
    edges = {d.name: [e.name for e in defs if any(e.match(a) is not None for a in _atoms(d.body))]
             for d in defs}
    state: dict = {}

    def visit(name: str, trail: list) -> None:
        if state.get(name) == 2:
            return
        if state.get(name) == 1:
            cycle = trail[trail.index(name):] + [name]
            raise CyclicDefinition("cyclic definitions: " + " -> ".join(cycle))
        state[name] = 1
        for nxt in edges[name]:
            visit(nxt, trail + [name])
        state[name] = 2

    for d in defs:
        visit(d.name, [])


_UNFOLD_LIMIT = 200


def unfold(f: Formula, defs, _depth: int = 0) -> Formula:
    """Exhaustively replace every defined atom by its definiens."""
    if _depth > _UNFOLD_LIMIT:
        raise CyclicDefinition("definition unfolding does not terminate")
    if isinstance(f, Atom):
        for d in defs:
            body = d.expand(f)
            if body is not None:
                return unfold(body, defs, _depth + 1)
        return f
    if isinstance(f, Binary):
        return type(f)(unfold(f.left, defs, _depth), unfold(f.right, defs, _depth))
    if isinstance(f, Quantifier):
        return type(f)(f.bound, unfold(f.body, defs, _depth))
    return f


def defeq(f: Formula, g: Formula, defs=()) -> bool:
    """Alpha-equivalence after unfolding every definition in ``defs``."""
    defs = list(defs)
    if not defs:
        return alpha_eq(f, g)
    check_acyclic(defs)
    return alpha_eq(unfold(f, defs), unfold(g, defs))
