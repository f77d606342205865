"""Concrete syntax for formulas and ``.gpnd`` proof documents.

A document is a sequence of ``def``, ``axiom`` and ``lemma`` items.  Proofs are
parenthesized trees, one inference per node, every node stating its
conclusion::

    lemma k : A -> B -> A proof
      (ImpI [h1] : A -> B -> A
        (ImpI [h2] : B -> A
          (Hyp h1 : A)))
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import ArityConflict, DuplicateName, ParseError
from .syntax import (
    And, App, Atom, Bottom, Definition, Equal, Exists, Forall, Formula, Iff, Implies, Not, Or,
    PredicateSubst, Signature, Term, Var, free_vars, is_iff, is_negation,
)

RULE_ARITY = {
    "Hyp": 0, "PEM": 0, "EqI": 0,
    "AndE1": 1, "AndE2": 1, "ImpI": 1, "OrI1": 1, "OrI2": 1, "BotE": 1, "NNE": 1,
    "AllI": 1, "AllE": 1, "ExI": 1, "Conv": 1,
    "AndI": 2, "ImpE": 2, "NatRec": 2, "EqE": 2, "ExE": 2,
    "OrE": 3,
    "Chain": 0, "Lemma": None,
}
RULES = tuple(RULE_ARITY)

INFIX_PREDICATES = ("in", "subset", "<=", "<")
KEYWORDS = {"def", "axiom", "lemma", "proof", "by", "forall", "exists", "in", "subset", "cap", "cup"}


# ----------------------------------------------------------------- documents

@dataclass(frozen=True)
class ChainStep:
    lhs: Term
    rhs: Term
    justification: str
    substs: tuple = ()


@dataclass(frozen=True)
class ProofNode:
    rule: str
    conclusion: Formula
    children: tuple = ()
    labels: tuple = ()
    refs: tuple = ()
    substs: tuple = ()
    pred_substs: tuple = ()
    fresh: Optional[str] = None
    steps: tuple = ()
    pos: tuple = field(default=(0, 0), compare=False)

    def walk(self, path=()):
        """Pre-order traversal yielding ``(path, node)``."""
        yield path, self
        for i, child in enumerate(self.children):
            yield from child.walk(path + (i,))

    def at(self, path) -> "ProofNode":
        node = self
        for i in path:
            node = node.children[i]
        return node

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)


@dataclass(frozen=True)
class Axiom:
    name: str
    formula: Formula


@dataclass(frozen=True)
class Lemma:
    name: str
    hypotheses: tuple
    goal: Formula
    root: ProofNode
    pos: tuple = field(default=(0, 0), compare=False)


Item = Union[Definition, Axiom, Lemma]


@dataclass
class ProofDocument:
    items: tuple = ()
    signature: Signature = field(default_factory=Signature)
    source: str = field(default="", compare=False)

    @property
    def definitions(self) -> tuple:
        return tuple(i for i in self.items if isinstance(i, Definition))

    @property
    def axioms(self) -> tuple:
        return tuple(i for i in self.items if isinstance(i, Axiom))

    @property
    def lemmas(self) -> tuple:
        return tuple(i for i in self.items if isinstance(i, Lemma))

    def lemma(self, name: str) -> Lemma:
        for lem in self.lemmas:
            if lem.name == name:
                return lem
        raise KeyError(name)


# --------------------------------------------------------------------- lexer

_UNICODE = {
    "¬": "~", "∧": "/\\", "∨": "\\/", "→": "->", "⇒": "->", "↔": "<->", "≡": "<->",
    "⊥": "_|_", "∀": "forall", "∃": "exists", "≤": "<=", "∈": "in", "⊆": "subset",
    "∩": "cap", "∪": "cup", "∅": "∅", "≜": ":=",
}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<op>:=|=>|<->|->|<=|/\\|\\/|_\|_|[()\[\]{},:;.~=<+*])
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<uni>[¬∧∨→⇒↔≡⊥∀∃≤∈⊆∩∪∅≜])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str    # op, num, ident, kw, rule, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    tokens = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(line, i - line_start + 1, f"unexpected character {text[i]!r}")
        kind, value = m.lastgroup, m.group()
        col = i - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("ws", "comment"):
            pass
        elif kind == "uni":
            canon = _UNICODE[value]
            tokens.append(Token("kw" if canon in KEYWORDS else "op", canon, line, col))
        elif kind == "ident":
            if value in KEYWORDS:
                kind = "kw"
            elif value in RULE_ARITY:
                kind = "rule"
            tokens.append(Token(kind, value, line, col))
        else:
            tokens.append(Token(kind, value, line, col))
        i = m.end()
    tokens.append(Token("eof", "", line, i - line_start + 1))
    return tokens


class _Backtrack(Exception):
    pass


_RELATIONS = {"=", "in", "subset", "<=", "<"}


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.signature = Signature()

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text == text

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        return ParseError(tok.line, tok.col, f"{message} (found {found!r})")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        tok = self.tok
        self.i += 1
        return tok

    def name(self, what: str = "name", allow_keywords: bool = False) -> str:
        tok = self.tok
        if tok.kind == "ident" or tok.kind == "num" or (allow_keywords and tok.text in INFIX_PREDICATES):
            self.i += 1
            return tok.text
        raise self.error(f"expected {what}")

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "ident":
            raise self.error(f"expected {what}")
        tok = self.tok
        self.i += 1
        return tok.text

    # arities
    def record(self, f, tok: Token) -> None:
        def fun(t):
            if isinstance(t, App):
                self._arity(self.signature.functions, t.symbol, len(t.args), tok, "function")
                for a in t.args:
                    fun(a)

        def form(g):
            if isinstance(g, Atom):
                self._arity(self.signature.predicates, g.predicate, len(g.args), tok, "predicate")
                for a in g.args:
                    fun(a)
            elif isinstance(g, Equal):
                fun(g.left)
                fun(g.right)
            elif isinstance(g, (And, Or, Implies)):
                form(g.left)
                form(g.right)
            elif isinstance(g, (Forall, Exists)):
                form(g.body)

        if isinstance(f, (Var, App)):
            fun(f)
        else:
            form(f)

    @staticmethod
    def _arity(table: dict, symbol: str, n: int, tok: Token, what: str) -> None:
        prev = table.setdefault(symbol, n)
        if prev != n:
            raise ArityConflict(tok.line, tok.col, f"{what} {symbol} used with arity {n}, previously {prev}")

    # ---------------------------------------------------------------- terms
    def term(self) -> Term:
        left = self.term_mul()
        while self.at("+") or self.at("cup"):
            op = self.tok.text
            self.i += 1
            left = App(op, (left, self.term_mul()))
        return left

    def term_mul(self) -> Term:
        left = self.term_base()
        while self.at("*") or self.at("cap"):
            op = self.tok.text
            self.i += 1
            left = App(op, (left, self.term_base()))
        return left

    def _call_follows(self) -> bool:
        return self.peek().kind == "op" and self.peek().text == "(" and self.peek(2).kind != "rule"

    def term_base(self) -> Term:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return App(tok.text, ())
        if tok.kind == "op" and tok.text == "∅":
            self.i += 1
            return App("empty", ())
        if tok.kind == "ident":
            if self._call_follows():
                self.i += 2
                args = self.term_list(")")
                return App(tok.text, args)
            self.i += 1
            return Var(tok.text)
        if self.at("("):
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        if self.at("{"):
            self.i += 1
            t = self.term()
            self.expect("}")
            return App("single", (t,))
        raise self.error("expected a term")

    def term_list(self, close: str) -> tuple:
        args = []
        if not self.at(close):
            args.append(self.term())
            while self.at(","):
                self.i += 1
                args.append(self.term())
        self.expect(close)
        return tuple(args)

    # ------------------------------------------------------------- formulas
    def formula(self) -> Formula:
        start = self.tok
        f = self.f_iff()
        self.record(f, start)
        return f

    def f_iff(self) -> Formula:
        left = self.f_imp()
        if self.at("<->"):
            self.i += 1
            return Iff(left, self.f_iff())
        return left

    def f_imp(self) -> Formula:
        left = self.f_or()
        if self.at("->"):
            self.i += 1
            return Implies(left, self.f_imp())
        return left

    def f_or(self) -> Formula:
        left = self.f_and()
        if self.at("\\/"):
            self.i += 1
            return Or(left, self.f_or())
        return left

    def f_and(self) -> Formula:
        left = self.f_unary()
        if self.at("/\\"):
            self.i += 1
            return And(left, self.f_and())
        return left

    def f_unary(self) -> Formula:
        if self.at("~"):
            self.i += 1
            return Not(self.f_unary())
        if self.at("forall") or self.at("exists"):
            kind = Forall if self.tok.text == "forall" else Exists
            self.i += 1
            names = [self.ident("bound variable")]
            while self.tok.kind == "ident":
                names.append(self.ident())
            self.expect(".")
            body = self.f_iff()
            for n in reversed(names):
                body = kind(n, body)
            return body
        return self.f_primary()

    def f_primary(self) -> Formula:
        save = self.i
        try:
            left = self.term()
            if not (self.tok.kind in ("op", "kw") and self.tok.text in _RELATIONS):
                raise _Backtrack
        except (ParseError, _Backtrack):
            self.i = save
        else:
            op = self.tok.text
            self.i += 1
            right = self.term()
            return Equal(left, right) if op == "=" else Atom(op, (left, right))
        if self.at("("):
            self.i += 1
            f = self.f_iff()
            self.expect(")")
            return f
        if self.at("_|_"):
            self.i += 1
            return Bottom()
        if self.tok.kind == "ident":
            tok = self.tok
            if self._call_follows():
                self.i += 2
                return Atom(tok.text, self.term_list(")"))
            self.i += 1
            return Atom(tok.text, ())
        raise self.error("expected a formula")

    # ------------------------------------------------------------ documents
    def document(self) -> ProofDocument:
        items: list = []
        names: dict = {}
        lemmas: dict = {}
        while self.tok.kind != "eof":
            tok = self.tok
            if self.at("def"):
                item = self.definition()
            elif self.at("axiom"):
                self.i += 1
                name = self.name("axiom name")
                self.expect(":")
                item = Axiom(name, self.formula())
            elif self.at("lemma"):
                item = self.lemma(lemmas)
                lemmas[item.name] = item
            else:
                raise self.error("expected 'def', 'axiom' or 'lemma'")
            if item.name in names:
                raise DuplicateName(tok.line, tok.col, f"name {item.name} already declared")
            names[item.name] = item
            items.append(item)
        return ProofDocument(tuple(items), self.signature)

    def definition(self) -> Definition:
        tok = self.expect("def")
        name = self.name("definition name", allow_keywords=True)
        self.expect("(")
        params = []
        if not self.at(")"):
            params.append(self.ident("parameter"))
            while self.at(","):
                self.i += 1
                params.append(self.ident("parameter"))
        self.expect(")")
        if len(set(params)) != len(params):
            raise ParseError(tok.line, tok.col, f"definition {name} has repeated parameters")
        head = Atom(name, tuple(Var(p) for p in params))
        if self.at(":"):
            self.i += 1
            head_tok = self.tok
            head = self.formula()
            if not isinstance(head, Atom):
                raise ParseError(head_tok.line, head_tok.col, "definition head must be an atom")
        else:
            self.record(head, tok)
        self.expect(":=")
        body = self.formula()
        head_vars = free_vars(head)
        if head_vars != set(params):
            raise ParseError(tok.line, tok.col, f"definition {name}: head variables must be exactly the parameters")
        extra = free_vars(body) - set(params)
        if extra:
            raise ParseError(tok.line, tok.col,
                             f"definition {name}: free variables {', '.join(sorted(extra))} are not parameters")
        return Definition(name, tuple(params), head, body)

    def lemma(self, known: dict) -> Lemma:
        tok = self.expect("lemma")
        name = self.name("lemma name")
        hyps = []
        if self.at("["):
            self.i += 1
            while True:
                ltok = self.tok
                label = self.name("hypothesis label")
                if any(label == h for h, _ in hyps):
                    raise DuplicateName(ltok.line, ltok.col, f"hypothesis label {label} repeated")
                self.expect(":")
                hyps.append((label, self.formula()))
                if self.at(","):
                    self.i += 1
                    continue
                self.expect("]")
                break
        self.expect(":")
        goal = self.formula()
        self.expect("proof")
        root = self.node(known)
        return Lemma(name, tuple(hyps), goal, root, (tok.line, tok.col))

    def subst_annotation(self):
        """Parses the inside of ``{...}``; returns (kind, payload)."""
        var = self.ident("variable")
        if self.at("}"):
            return "fresh", var
        if self.at(":="):
            self.i += 1
            t = self.term()
            self.record(t, self.tok)
            return "term", (var, t)
        params: tuple = ()
        if self.at("("):
            self.i += 1
            ps = []
            if not self.at(")"):
                ps.append(self.ident("parameter"))
                while self.at(","):
                    self.i += 1
                    ps.append(self.ident("parameter"))
            self.expect(")")
            params = tuple(ps)
        if self.at("=>"):
            self.i += 1
            return "pred", (var, PredicateSubst(params, self.formula()))
        raise self.error("expected ':=', '=>' or '}'")

    def node(self, known: dict) -> ProofNode:
        start = self.expect("(")
        if self.tok.kind != "rule":
            raise self.error("expected a rule name")
        rule = self.tok.text
        self.i += 1
        labels, refs, substs, preds = [], [], [], []
        fresh = None
        while not self.at(":"):
            if self.at("["):
                self.i += 1
                labels.append(self.name("discharge label"))
                self.expect("]")
            elif self.at("{"):
                self.i += 1
                kind, payload = self.subst_annotation()
                self.expect("}")
                if kind == "fresh":
                    if fresh is not None:
                        raise self.error("only one fresh variable allowed")
                    fresh = payload
                elif kind == "term":
                    substs.append(payload)
                else:
                    preds.append(payload)
            elif self.tok.kind in ("ident", "num") or self.tok.text in INFIX_PREDICATES:
                refs.append(self.tok.text)
                self.i += 1
            else:
                raise self.error("expected an annotation or ':'")
        self.expect(":")
        conclusion = self.formula()
        steps: tuple = ()
        if rule == "Chain":
            steps = self.chain_steps()
        children = []
        while self.at("("):
            children.append(self.node(known))
        self.expect(")")
        node = ProofNode(rule, conclusion, tuple(children), tuple(labels), tuple(refs), tuple(substs),
                         tuple(preds), fresh, steps, (start.line, start.col))
        self.validate(node, known, start)
        return node

    def chain_steps(self) -> tuple:
        steps = []
        while True:
            tok = self.tok
            lhs = self.term()
            self.expect("=")
            rhs = self.term()
            self.record(lhs, tok)
            self.record(rhs, tok)
            self.expect("by")
            if self.tok.kind == "rule" and self.tok.text == "EqI":
                just = "EqI"
                self.i += 1
            else:
                just = self.name("justification")
            substs = []
            while self.at("{"):
                self.i += 1
                var = self.ident("variable")
                self.expect(":=")
                t = self.term()
                self.record(t, tok)
                self.expect("}")
                substs.append((var, t))
            steps.append(ChainStep(lhs, rhs, just, tuple(substs)))
            if self.at(";"):
                self.i += 1
                continue
            return tuple(steps)

    def validate(self, node: ProofNode, known: dict, tok: Token) -> None:
        arity = None
        if node.rule == "Lemma" and node.refs and node.refs[0] in known:
            arity = len(known[node.refs[0]].hypotheses)
        problem = structural_problem(node, arity)
        if problem:
            raise ParseError(tok.line, tok.col, problem)


def structural_problem(node: ProofNode, lemma_arity: Optional[int] = None) -> Optional[str]:
    """Why ``node`` is malformed (child count or annotations), or None."""
    rule = node.rule
    if rule not in RULE_ARITY:
        return f"unknown rule {rule}"
    arity = lemma_arity if rule == "Lemma" else RULE_ARITY[rule]
    n = len(node.children)
    if arity is not None and n != arity:
        return f"{rule} requires {arity} children, got {n}"
    want_labels = {"ImpI": 1, "OrE": 2, "ExE": 1}.get(rule, 0)
    if len(node.labels) != want_labels:
        return f"{rule} takes {want_labels} discharge label(s)"
    if rule in ("AllI", "ExE") and node.fresh is None:
        return f"{rule} requires a fresh variable {{x0}}"
    if rule not in ("AllI", "ExE") and node.fresh is not None:
        return f"{rule} takes no fresh variable"
    if rule in ("AllE", "ExI") and len(node.substs) != 1:
        return f"{rule} requires exactly one substitution {{x:=t}}"
    if rule not in ("AllE", "ExI", "Lemma") and node.substs:
        return f"{rule} takes no substitution"
    if node.pred_substs and rule != "Lemma":
        return f"{rule} takes no predicate substitution"
    if rule in ("Hyp", "Lemma") and len(node.refs) != 1:
        return f"{rule} requires exactly one name"
    if rule == "Conv" and not node.refs:
        return "Conv requires at least one definition name"
    if rule not in ("Hyp", "Lemma", "Conv") and node.refs:
        return f"{rule} takes no name"
    if bool(node.steps) != (rule == "Chain"):
        return "Chain requires equational steps" if rule == "Chain" else f"{rule} takes no steps"
    return None


def parse_formula(text: str, signature: Optional[Signature] = None) -> Formula:
    p = Parser(text)
    if signature is not None:
        p.signature = signature
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return f


def parse_term(text: str) -> Term:
    p = Parser(text)
    t = p.term()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return t


def parse_document(text: str) -> ProofDocument:
    doc = Parser(text).document()
    doc.source = text
    return doc


# ------------------------------------------------------------------ printing

_ASCII = {"not": "~", "and": "/\\", "or": "\\/", "imp": "->", "iff": "<->", "bot": "_|_",
          "forall": "forall", "exists": "exists", "in": "in", "subset": "subset", "<=": "<=",
          "<": "<", "cap": "cap", "cup": "cup", "empty": "empty()"}
_UNI = {"not": "¬", "and": "∧", "or": "∨", "imp": "→", "iff": "↔", "bot": "⊥",
        "forall": "∀", "exists": "∃", "in": "∈", "subset": "⊆", "<=": "≤",
        "<": "<", "cap": "∩", "cup": "∪", "empty": "∅"}

_LATEX = {"not": "\\neg ", "and": "\\land", "or": "\\lor", "imp": "\\to", "iff": "\\leftrightarrow",
          "bot": "\\bot", "forall": "\\forall ", "exists": "\\exists ", "in": "\\in",
          "subset": "\\subseteq", "<=": "\\leq", "<": "<", "cap": "\\cap", "cup": "\\cup",
          "empty": "\\emptyset", "+": "+", "*": "\\cdot", "sep": ""}
_ASCII["sep"] = " "
_UNI["sep"] = ""

_TERM_LEVEL = {"+": 1, "cup": 1, "*": 2, "cap": 2}


def format_term(t: Term, unicode: bool = False, _level: int = 0, _sym: Optional[dict] = None) -> str:
    sym = _sym or (_UNI if unicode else _ASCII)
    if isinstance(t, Var):
        return t.name
    if t.symbol in _TERM_LEVEL and len(t.args) == 2:
        lvl = _TERM_LEVEL[t.symbol]
        op = sym.get(t.symbol, t.symbol)
        s = f"{format_term(t.args[0], unicode, lvl, sym)} {op} {format_term(t.args[1], unicode, lvl + 1, sym)}"
        return f"({s})" if lvl < _level else s
    if t.symbol == "single" and len(t.args) == 1:
        inner = format_term(t.args[0], unicode, 0, sym)
        return "\\{" + inner + "\\}" if sym is _LATEX else "{" + inner + "}"
    if t.symbol == "empty" and not t.args:
        return sym["empty"]
    if t.symbol.isdigit():
        return t.symbol
    return f"{t.symbol}({', '.join(format_term(a, unicode, 0, sym) for a in t.args)})"


def _fmt(f: Formula, ctx: int, sym: dict) -> str:
    if isinstance(f, (Forall, Exists)):
        q = sym["forall"] if isinstance(f, Forall) else sym["exists"]
        body = f.body
        inner = _fmt(body, 0, sym)
        if isinstance(body, (And, Or, Implies)) and not is_negation(body):
            inner = f"({inner})"
        s, level = f"{q}{sym['sep']}{f.bound}. {inner}", 0
    elif is_negation(f):
        inner = _fmt(f.left, 5, sym)
        if isinstance(f.left, Equal) or (isinstance(f.left, Atom) and f.left.predicate in INFIX_PREDICATES):
            inner = f"({inner})"
        s, level = sym["not"] + inner, 5
    elif isinstance(f, And) and f.hint == "iff" and is_iff(f):
        s, level = f"{_fmt(f.left.left, 2, sym)} {sym['iff']} {_fmt(f.left.right, 1, sym)}", 1
    elif isinstance(f, (And, Or, Implies)):
        level, op = {And: (4, "and"), Or: (3, "or"), Implies: (2, "imp")}[type(f)]
        s = f"{_fmt(f.left, level + 1, sym)} {sym[op]} {_fmt(f.right, level, sym)}"
    elif isinstance(f, Bottom):
        return sym["bot"]
    elif isinstance(f, Equal):
        return f"{format_term(f.left, _sym=sym)} = {format_term(f.right, _sym=sym)}"
    elif isinstance(f, Atom):
        if f.predicate in INFIX_PREDICATES and len(f.args) == 2:
            a, b = (format_term(x, _sym=sym) for x in f.args)
            return f"{a} {sym[f.predicate]} {b}"
        if not f.args:
            return f.predicate
        return f"{f.predicate}({', '.join(format_term(a, _sym=sym) for a in f.args)})"
    else:
        raise TypeError(f"not a formula: {f!r}")
    return f"({s})" if level < ctx else s


def format_formula(f: Formula, unicode: bool = False) -> str:
    return _fmt(f, 0, _UNI if unicode else _ASCII)


def format_formula_latex(f: Formula) -> str:
    """Math-mode LaTeX source for ``f``."""
    return _fmt(f, 0, _LATEX)


def format_term_latex(t: Term) -> str:
    return format_term(t, _sym=_LATEX)


def format_subst(var: str, t: Term) -> str:
    return f"{{{var} := {format_term(t)}}}"


def format_pred_subst(name: str, rep: PredicateSubst) -> str:
    params = f"({', '.join(rep.params)})" if rep.params else ""
    return f"{{{name}{params} => {format_formula(rep.body)}}}"


def format_annotations(node: ProofNode) -> str:
    parts = [f"[{lab}]" for lab in node.labels]
    if node.fresh is not None:
        parts.append(f"{{{node.fresh}}}")
    parts.extend(node.refs)
    parts.extend(format_subst(v, t) for v, t in node.substs)
    parts.extend(format_pred_subst(n, r) for n, r in node.pred_substs)
    return " ".join(parts)


def format_step(step: ChainStep) -> str:
    s = f"{format_term(step.lhs)} = {format_term(step.rhs)} by {step.justification}"
    for v, t in step.substs:
        s += " " + format_subst(v, t)
    return s


def format_node(node: ProofNode, indent: int = 0) -> str:
    pad = " " * indent
    annots = format_annotations(node)
    head = f"{pad}({node.rule}{' ' + annots if annots else ''} : "
    concl = format_formula(node.conclusion)
    if node.rule == "Chain":
        if format_term(node.steps[0].lhs).startswith("("):
            concl = f"({concl})"
        steps = f" ;\n{pad}    ".join(format_step(s) for s in node.steps)
        return f"{head}{concl}\n{pad}    {steps})"
    if not node.children:
        return f"{head}{concl})"
    kids = "\n".join(format_node(c, indent + 2) for c in node.children)
    return f"{head}{concl}\n{kids})"


def format_definition(d: Definition) -> str:
    plain = Atom(d.name, tuple(Var(p) for p in d.params))
    head = "" if d.head == plain else f" : {format_formula(d.head)}"
    return f"def {d.name}({', '.join(d.params)}){head} := {format_formula(d.body)}"


def format_lemma(lem: Lemma) -> str:
    hyps = ""
    if lem.hypotheses:
        hyps = " [" + ", ".join(f"{h} : {format_formula(f)}" for h, f in lem.hypotheses) + "]"
    return f"lemma {lem.name}{hyps} : {format_formula(lem.goal)} proof\n{format_node(lem.root, 2)}"


def print_document(doc: ProofDocument) -> str:
    out = []
    for item in doc.items:
        if isinstance(item, Definition):
            out.append(format_definition(item))
        elif isinstance(item, Axiom):
            out.append(f"axiom {item.name} : {format_formula(item.formula)}")
        else:
            out.append(format_lemma(item))
    return "\n\n".join(out) + ("\n" if out else "")
