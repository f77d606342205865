"""Presentation of proof trees as ASCII art, LaTeX source, or prose."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import UncheckedLemma, WidthExceeded
from .kernel import CheckReport, Context, Environment, check_lemma, child_context
from .proof_format import (
    Lemma, ProofNode, format_annotations, format_formula, format_formula_latex, format_subst,
    format_term, format_term_latex,
)

FORMATS = ("ascii", "latex", "prose")


@dataclass(frozen=True)
class RenderOptions:
    format: str = "ascii"
    show_contexts: bool = False
    unicode: bool = False
    max_width: int = 120

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}; expected one of {', '.join(FORMATS)}")
        if self.max_width < 40:
            raise ValueError(f"max_width must be at least 40, got {self.max_width}")


def render(lemma: Lemma, opts: RenderOptions = RenderOptions(), checked=None) -> str:
    if opts.format == "prose":
        return render_prose(lemma, opts, checked)
    return render_tree(lemma, opts)


def _contexts(lemma: Lemma) -> dict:
    """Labels available at every node, keyed by path."""
    out = {}

    def visit(node: ProofNode, ctx: Context, path):
        out[path] = ctx.labels()
        for i, child in enumerate(node.children):
            visit(child, child_context(node, i, ctx), path + (i,))

    visit(lemma.root, Context(tuple(lemma.hypotheses)), ())
    return out


def render_tree(lemma: Lemma, opts: RenderOptions = RenderOptions()) -> str:
    if opts.format == "latex":
        return _latex(lemma, opts)
    ctxs = _contexts(lemma) if opts.show_contexts else None
    block = _ascii(lemma.root, (), opts, ctxs)
    lines = [line.rstrip() for line in block.lines]
    widest = max(len(line) for line in lines)
    if widest > opts.max_width:
        raise WidthExceeded(f"tree is {widest} columns wide, limit is {opts.max_width}; "
                            "consider proving a subtree as a separate lemma")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------- ASCII

@dataclass
class _Block:
    lines: list
    start: int
    end: int

    @property
    def width(self) -> int:
        return max(len(line) for line in self.lines)


_GAP = 3
_RULE_CHAR = {"Conv": ".", "Chain": "="}


def _statement(node: ProofNode, path, opts: RenderOptions, ctxs) -> str:
    text = format_formula(node.conclusion, opts.unicode)
    if ctxs is not None:
        turnstile = "⊢" if opts.unicode else "|-"
        labels = ", ".join(ctxs[path])
        text = f"{labels} {turnstile} {text}" if labels else f"{turnstile} {text}"
    return text


def _rule_label(node: ProofNode) -> str:
    annots = format_annotations(node)
    return f"{node.rule} {annots}" if annots else node.rule


def _ascii(node: ProofNode, path, opts: RenderOptions, ctxs) -> _Block:
    concl = _statement(node, path, opts, ctxs)
    if node.rule == "Hyp":
        return _Block([f"{concl}  ({_rule_label(node)})"], 0, len(concl))
    if node.rule == "Chain":
        above = [_chain_step_text(s, opts.unicode) for s in node.steps]
        premises = _Block(above, 0, max(len(s) for s in above))
    elif node.children:
        premises = _beside([_ascii(c, path + (i,), opts, ctxs) for i, c in enumerate(node.children)])
    else:
        premises = None
    p_start, p_end = (premises.start, premises.end) if premises else (0, 0)
    if premises is None:
        p_start = p_end = len(concl) // 2
    center = (p_start + p_end) // 2
    c_start = center - len(concl) // 2
    shift = max(0, -c_start)
    c_start += shift
    line_start = min(p_start + shift, c_start) if premises else c_start
    line_end = max(p_end + shift, c_start + len(concl))
    rule = " " * line_start + _RULE_CHAR.get(node.rule, "-") * (line_end - line_start) + " " + _rule_label(node)
    lines = [" " * shift + line for line in premises.lines] if premises else []
    lines += [rule, " " * c_start + concl]
    return _Block(lines, c_start, c_start + len(concl))


def _chain_step_text(step, unicode: bool) -> str:
    just = step.justification
    if step.substs:
        just += " " + " ".join(format_subst(v, t) for v, t in step.substs)
    return f"{format_term(step.lhs, unicode)} = {format_term(step.rhs, unicode)}  (by {just})"


def _beside(blocks: list) -> _Block:
    """Premises staggered so that no two rule lines share a row.

    Earlier premises sit higher and a ``|`` runs from each raised conclusion
    down to the parent's rule line.  Since rows never overlap, a later premise
    only has to clear the stems to its left, not whole blocks.
    """
    height = sum(len(b.lines) for b in blocks)
    rows = [""] * height
    placed = []
    col = top = 0
    for b in blocks:
        placed.append((col, top))
        top += len(b.lines)
        col = max(c + (x.start + x.end) // 2 for x, (c, _) in zip(blocks, placed)) + _GAP
    for b, (col, top) in zip(blocks, placed):
        stem = col + (b.start + b.end) // 2
        for r in range(top, height):
            if r < top + len(b.lines):
                rows[r] = _overlay(rows[r], col, b.lines[r - top])
            else:
                rows[r] = _overlay(rows[r], stem, "|")
    first, last = placed[0][0], placed[-1][0]
    return _Block(rows, first + blocks[0].start, last + blocks[-1].end)


def _overlay(row: str, at: int, text: str) -> str:
    row = row.ljust(at)
    return row[:at] + text + row[at + len(text):]


# ------------------------------------------------------------------- LaTeX

_INFERENCE = {1: "UnaryInfC", 2: "BinaryInfC", 3: "TrinaryInfC", 4: "QuaternaryInfC", 5: "QuinaryInfC"}


def _tex_text(s: str) -> str:
    return s.replace("\\", "\\textbackslash{}").replace("_", "\\_").replace("{", "\\{").replace("}", "\\}")


def _tex_label(node: ProofNode) -> str:
    parts = [node.rule]
    parts += [f"[{lab}]" for lab in node.labels]
    if node.fresh is not None:
        parts.append(f"{{{node.fresh}}}")
    parts += list(node.refs)
    label = _tex_text(" ".join(parts))
    for v, t in node.substs:
        label += f" ${v} := {format_term_latex(t)}$"
    return "{\\scriptsize " + label + "}"


def _latex(lemma: Lemma, opts: RenderOptions) -> str:
    out = ["\\begin{prooftree}"]
    _latex_node(lemma.root, out)
    out.append("\\end{prooftree}")
    return "\n".join(out) + "\n"


def _latex_node(node: ProofNode, out: list) -> None:
    concl = format_formula_latex(node.conclusion)
    if node.rule == "Chain":
        terms = [format_term_latex(node.steps[0].lhs)] + [format_term_latex(s.rhs) for s in node.steps]
        why = _tex_text(", ".join(s.justification for s in node.steps))
        out.append(f"\\AxiomC{{${' = '.join(terms)}$ \\;{{\\scriptsize Chain by {why}}}}}")
        return
    if not node.children:
        out.append(f"\\AxiomC{{${concl}$ \\;{_tex_label(node)}}}")
        return
    if len(node.children) not in _INFERENCE:
        raise ValueError(f"{node.rule} with {len(node.children)} premises cannot be typeset")
    for child in node.children:
        _latex_node(child, out)
    if node.rule == "Conv":
        out.append("\\dashedLine")
    elif node.rule == "Lemma":
        out.append("\\doubleLine")
    out.append(f"\\RightLabel{{{_tex_label(node)}}}")
    out.append(f"\\{_INFERENCE[len(node.children)]}{{${concl}$}}")


# ------------------------------------------------------------------- prose

def _ensure_checked(lemma: Lemma, checked) -> None:
    if isinstance(checked, CheckReport):
        env = checked.environment
    elif isinstance(checked, Environment):
        env = checked
    else:
        env = None
    if env is not None:
        rule = env.rules.get(lemma.name)
        if rule is None or rule.proof != lemma.root:
            raise UncheckedLemma(f"lemma {lemma.name} has not been accepted")
        return
    if check_lemma(lemma, Environment()):
        raise UncheckedLemma(f"lemma {lemma.name} does not check")


def render_prose(lemma: Lemma, opts: RenderOptions = RenderOptions(format="prose"), checked=None) -> str:
    """Numbered natural-language rendering, one paragraph per proof node.

    Steps are numbered ``[n]`` in pre-order; hypothesis labels appear in
    parentheses where they are introduced.

    ``checked`` is the report or environment in which ``lemma`` was accepted;
    without it the lemma is checked on its own.
    """
    _ensure_checked(lemma, checked)
    f = lambda x: format_formula(x, opts.unicode)
    lines = []
    if lemma.hypotheses:
        hyps = "; ".join(f"{f(h)} ({label})" for label, h in lemma.hypotheses)
        lines.append(f"Lemma {lemma.name}. Assume {hyps}. Then {f(lemma.goal)}.")
    else:
        lines.append(f"Lemma {lemma.name}. {f(lemma.goal)}.")
    lines.append("Proof.")
    walk = list(lemma.root.walk())
    numbers = {path: i + 1 for i, (path, _) in enumerate(walk)}
    for path, node in walk:
        indent = "  " * len(path)
        lines.append(f"{indent}[{numbers[path]}] {_sentence(node, path, opts, numbers)}")
    lines.append("Qed.")
    return "\n".join(lines) + "\n"


def _sentence(node: ProofNode, path, opts: RenderOptions, numbers: dict) -> str:
    f = lambda x: format_formula(x, opts.unicode)
    t = lambda x: format_term(x, opts.unicode)
    c = f(node.conclusion)
    kids = [ch.conclusion for ch in node.children]
    r = lambda i: f"[{numbers[path + (i,)]}]"
    rule = node.rule
    if rule == "Hyp":
        return f"By hypothesis {node.refs[0]}, {c} holds."
    if rule == "ImpI":
        a = node.conclusion.left
        return (f"Assume {f(a)} ({node.labels[0]}). Under this assumption {f(kids[0])} holds {r(0)}. "
                f"Therefore {c}, discharging {node.labels[0]}.")
    if rule == "ImpE":
        return f"From {f(kids[0])} {r(0)} and {f(kids[1])} {r(1)} we obtain {c} by modus ponens."
    if rule == "AndI":
        return f"Since {f(kids[0])} {r(0)} and {f(kids[1])} {r(1)}, we have {c}."
    if rule in ("AndE1", "AndE2"):
        return f"From {f(kids[0])} {r(0)} we keep the conjunct {c}."
    if rule in ("OrI1", "OrI2"):
        return f"From {f(kids[0])} {r(0)} we weaken to {c}."
    if rule == "OrE":
        disj = node.children[0].conclusion
        h1, h2 = node.labels
        return (f"We proceed by cases on {f(disj)} {r(0)}. "
                f"Case 1: assume {f(disj.left)} ({h1}); then {c} {r(1)}. "
                f"Case 2: assume {f(disj.right)} ({h2}); then {c} {r(2)}. "
                f"In both cases {c} holds, discharging {h1} and {h2}.")
    if rule == "BotE":
        return f"From the contradiction {r(0)} anything follows, in particular {c}."
    if rule == "PEM":
        return f"By the excluded middle, {c}."
    if rule == "NNE":
        return f"From {f(kids[0])} {r(0)} we conclude {c} by double negation elimination."
    if rule == "AllI":
        return (f"Let {node.fresh} be arbitrary. Then {f(kids[0])} {r(0)}. "
                f"Since {node.fresh} was arbitrary, {c}.")
    if rule == "AllE":
        v, term = node.substs[0]
        return f"Instantiating {f(kids[0])} {r(0)} with {v} := {t(term)} gives {c}."
    if rule == "ExI":
        v, term = node.substs[0]
        return f"Taking {t(term)} as witness for {v}, {f(kids[0])} {r(0)} gives {c}."
    if rule == "ExE":
        h = node.labels[0]
        return (f"From {f(kids[0])} {r(0)}, let {node.fresh} be a witness with its property ({h}). "
                f"Then {c} {r(1)}. Hence {c}, discharging {h}.")
    if rule == "EqI":
        return f"{c} by reflexivity."
    if rule == "EqE":
        return f"Rewriting {f(kids[1])} {r(1)} with {f(kids[0])} {r(0)} gives {c}."
    if rule == "NatRec":
        bound = getattr(node.conclusion, "bound", "n")
        return (f"We proceed by induction on {bound}. Base case: {f(kids[0])} {r(0)}. "
                f"Step case: {f(kids[1])} {r(1)}. By induction, {c}.")
    if rule == "Conv":
        names = ", ".join(node.refs)
        return f"Unfolding the definition of {names}, {f(kids[0])} {r(0)} is the same as {c}."
    if rule == "Chain":
        parts = [t(node.steps[0].lhs)]
        for step in node.steps:
            parts.append(f"= {t(step.rhs)} (by {step.justification})")
        return f"By the chain of equations {' '.join(parts)}, we get {c}."
    if rule == "Lemma":
        cites = " and ".join(f"{f(k)} {r(i)}" for i, k in enumerate(kids))
        prefix = f"From {cites}, lemma" if kids else "By lemma"
        return f"{prefix} {node.refs[0]} gives {c}."
    return f"{c} by {rule}."
