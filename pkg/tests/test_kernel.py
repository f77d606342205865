from __future__ import annotations

import pytest

from gpnd.errors import InvalidPath, UncheckedLemma
from gpnd.kernel import (
    ChainError, Context, Environment, Mode, available_hypotheses, check_document, check_node,
    derive_rule, elaborate_chain, load_environment,
)
from gpnd.proof_format import Lemma, ProofDocument, parse_document, parse_formula, print_document
from gpnd.syntax import free_vars

from conftest import CORPUS, NEGATIVE, PRELUDE, corpus_files, mode_for, prelude_files, read_doc


def diags(text, mode=Mode.INTUITIONISTIC, env=None):
    report = check_document(parse_document(text), mode, env)
    return [(d.kind, d.path) for d in report.diagnostics]


# ------------------------------------------------------------- documented cases

def test_trivial_lemma():
    assert diags("lemma triv [h:A] : A proof (Hyp h : A)") == []


def test_and_swap_node():
    node = parse_document(
        "lemma s [h : A /\\ B] : B /\\ A proof (AndI : B /\\ A (AndE2 : B (Hyp h : A /\\ B))"
        " (AndE1 : A (Hyp h : A /\\ B)))").lemmas[0].root
    ctx = Context((("h", parse_formula("A /\\ B")),))
    assert check_node(node, ctx, Environment()) == []


def test_exists_to_forall_pseudo_proof():
    report = check_document(read_doc(NEGATIVE / "exists_to_forall.gpnd"))
    assert [(d.kind, d.path) for d in report.diagnostics] == [("FreshnessViolation", (0, 1))]
    root = read_doc(NEGATIVE / "exists_to_forall.gpnd").lemmas[0].root
    assert root.at((0, 1)).rule == "AllI"


def test_or_elimination_cross_branch_scope():
    assert diags((NEGATIVE / "or_cross_branch.gpnd").read_text()) == [("ScopeViolation", (1, 0))]


def test_pem_mode_gate():
    text = (NEGATIVE / "pem_intuitionistic.gpnd").read_text()
    assert diags(text) == [("ModeViolation", ())]
    assert diags(text, Mode.CLASSICAL) == []


def test_ancestor_document_is_accepted():
    assert check_document(read_doc(CORPUS / "ancestor.gpnd")).accepted


# ----------------------------------------------------------------- rule contracts

@pytest.mark.parametrize("text, expected", [
    ("lemma a [h : A /\\ B] : B proof (AndE1 : B (Hyp h : A /\\ B))", "WrongRuleApplication"),
    ("lemma a [h : A] : B proof (Hyp h : B)", "WrongRuleApplication"),
    ("lemma a [h : A] : B proof (Hyp g : B)", "UnknownHypothesis"),
    ("lemma a [f : A -> B, a : B] : B proof (ImpE : B (Hyp f : A -> B) (Hyp a : B))", "WrongRuleApplication"),
    ("lemma a [h : A] : A \\/ B proof (OrI2 : A \\/ B (Hyp h : A))", "WrongRuleApplication"),
    ("lemma a [h : A] : A -> A proof (ImpI [h] : A -> A (Hyp h : A))", "DuplicateLabel"),
    ("lemma a [h : ~~A] : A proof (NNE : A (Hyp h : ~~A))", "ModeViolation"),
    ("lemma a : c() = d() proof (EqI : c() = d())", "WrongRuleApplication"),
    ("lemma a [h : A] : _|_ proof (BotE : _|_ (Hyp h : A))", "WrongRuleApplication"),
    ("lemma a [h : forall x. P(x)] : P(c()) proof (AllE {y := c()} : P(c()) (Hyp h : forall x. P(x)))",
     "WrongRuleApplication"),
    ("lemma a [h : P(y)] : forall x. P(x) proof (AllI {y} : forall x. P(x) (Hyp h : P(y)))",
     "FreshnessViolation"),
    ("lemma a : P(0) proof (Lemma nothing : P(0))", "UnprovedPremise"),
])
def test_rule_violations(text, expected):
    found = diags(text)
    assert found and found[0][0] == expected


def test_hypothesis_outside_its_discharge_is_a_scope_violation():
    text = ("lemma a [h : A] : (A -> A) /\\ A proof (AndI : (A -> A) /\\ A "
            "(ImpI [k] : A -> A (Hyp k : A)) (Hyp k : A))")
    assert diags(text) == [("ScopeViolation", (1,))]


def test_checking_continues_into_siblings():
    text = ("lemma a [h : A /\\ B] : B /\\ A proof (AndI : B /\\ A (AndE1 : B (Hyp h : A /\\ B))"
            " (AndE2 : A (Hyp h : A /\\ B)))")
    assert diags(text) == [("WrongRuleApplication", (0,)), ("WrongRuleApplication", (1,))]


def test_exists_elimination_freshness_in_major_premise():
    text = ("lemma a [h : exists x. R(x, w)] : exists y. R(y, w) proof\n"
            "(ExE [k] {w} : exists y. R(y, w) (Hyp h : exists x. R(x, w))"
            " (ExI {y := w} : exists y. R(y, w) (Hyp k : R(w, w))))")
    assert ("FreshnessViolation", ()) in diags(text)


def test_equality_elimination_replaces_a_subset_of_occurrences():
    ok = ("lemma a [e : a = b, p : R(a, a)] : R(a, b) proof "
          "(EqE : R(a, b) (Hyp e : a = b) (Hyp p : R(a, a)))")
    bad = ("lemma a [e : a = b, p : R(a, a)] : R(b, c) proof "
           "(EqE : R(b, c) (Hyp e : a = b) (Hyp p : R(a, a)))")
    assert diags(ok) == []
    assert diags(bad) == [("WrongRuleApplication", ())]


def test_natrec_requires_zero_and_successor():
    text = ("lemma a [b : P(0), s : forall n. P(n) -> P(S(n))] : forall n. P(n) proof "
            "(NatRec : forall n. P(n) (Hyp b : P(0)) (Hyp s : forall n. P(n) -> P(S(n))))")
    assert diags(text) == []


def test_conversion_only_unfolds_named_definitions():
    text = ("def T() := A /\\ B\ndef U() := T\n"
            "lemma a [h : A /\\ B] : U proof (Conv U : U (Hyp h : A /\\ B))")
    assert diags(text) == [("ConversionFailure", ())]
    fixed = text.replace("Conv U", "Conv U T")
    assert diags(fixed) == []


def test_classical_lemma_cited_in_intuitionistic_mode():
    text = ("lemma lem : A \\/ ~A proof (PEM : A \\/ ~A)\n"
            "lemma use : B \\/ ~B proof (Lemma lem {A => B} : B \\/ ~B)")
    assert diags(text, Mode.CLASSICAL) == []
    found = diags(text)
    assert ("ModeViolation", ()) in found


def test_interpreted_predicates_cannot_be_instantiated():
    text = ("axiom ax : P(0)\n"
            "lemma l [h : P(x)] : P(x) proof (Hyp h : P(x))\n"
            "lemma u [h : Q(0)] : Q(0) proof (Lemma l {P(v) => Q(v)} {x := 0} : Q(0) (Hyp h : Q(0)))")
    assert diags(text) == [("WrongRuleApplication", ())]


# ------------------------------------------------------------- contexts

def _ore_doc():
    return parse_document("lemma c [d : A \\/ B] : B \\/ A proof (OrE [h1] [h2] : B \\/ A (Hyp d : A \\/ B)"
                          " (OrI2 : B \\/ A (Hyp h1 : A)) (OrI1 : B \\/ A (Hyp h2 : B)))")


def test_available_hypotheses():
    lemma = _ore_doc().lemmas[0]
    initial = Context(lemma.hypotheses)
    assert available_hypotheses(lemma.root, (), initial).labels() == ("d",)
    assert available_hypotheses(lemma.root, (2,), initial).labels() == ("d", "h2")
    assert available_hypotheses(lemma.root, (1, 0), initial).labels() == ("d", "h1")
    with pytest.raises(InvalidPath):
        available_hypotheses(lemma.root, (5,), initial)


def test_available_hypotheses_under_implication():
    root = parse_document("lemma k : A -> B -> A proof (ImpI [h1] : A -> B -> A "
                          "(ImpI [h2] : B -> A (Hyp h1 : A)))").lemmas[0].root
    ctx = available_hypotheses(root, (0,), Context())
    assert ctx.entries == (("h1", parse_formula("A")),)


# ---------------------------------------------------------------- chains

def _ancestor_chain():
    return next((c, ctx, env) for name, c, ctx, env in _chains_in_context(CORPUS / "ancestor.gpnd", None)
                if name == "T1")


def test_ancestor_chain_elaborates():
    chain, ctx, env = _ancestor_chain()
    tree = elaborate_chain(chain, ctx, env)
    assert tree.conclusion == parse_formula("y2 = A(S(m0), x0)")
    rules = {n.rule for _, n in tree.walk()}
    assert "Chain" not in rules
    assert rules <= {"EqI", "EqE", "Hyp", "Conv", "AllE", "Lemma"}
    assert check_node(tree, ctx, env) == []


def test_reflexive_chain_is_a_single_equality_introduction():
    doc = parse_document("lemma r : a = a proof (Chain : a = a  a = a by EqI)")
    tree = elaborate_chain(doc.lemmas[0].root, Context(), Environment())
    assert tree.rule == "EqI" and not tree.children


def test_chain_break():
    doc = read_doc(NEGATIVE / "broken_chain.gpnd")
    lemma = doc.lemmas[0]
    with pytest.raises(ChainError) as info:
        elaborate_chain(lemma.root, Environment().initial_context(lemma.hypotheses), Environment())
    assert info.value.kind == "ChainBreak"


def test_chain_with_wrong_justification():
    text = "lemma w [h : a = b] : a = c proof (Chain : a = c  a = c by h)"
    assert diags(text) == [("WrongRuleApplication", ())]


# --------------------------------------------------------------- derived rules

def test_derive_rule_requires_acceptance():
    doc = parse_document("lemma bad [h : A] : B proof (Hyp h : B)")
    with pytest.raises(UncheckedLemma):
        derive_rule(doc.lemmas[0], check_document(doc).environment)


def test_derived_rules_tri_and_dli(checked_corpus):
    doc, report = checked_corpus[CORPUS / "propositional.gpnd"]
    for name in ("tri", "dli"):
        rule = derive_rule(doc.lemma(name), report.environment)
        assert rule.proof == doc.lemma(name).root
        assert len(rule.hypotheses) == 2
    assert report.accepted


def test_strong_induction_is_derived(prelude_env):
    rule = prelude_env.rules["strong_induction"]
    assert rule.goal == parse_formula("forall n. P(n)")
    assert rule.hypotheses[0][1] == parse_formula("forall n. (forall m. m < n -> P(m)) -> P(n)")
    assert any(n.rule == "NatRec" for _, n in rule.proof.walk())


def test_strong_induction_can_be_instantiated(prelude_env):
    text = ("lemma use [h : forall n. (forall m. m < n -> m = m) -> n = n] : forall n. n = n proof\n"
            "(Lemma strong_induction {P(v) => v = v} : forall n. n = n"
            " (Hyp h : forall n. (forall m. m < n -> m = m) -> n = n))")
    assert check_document(parse_document(text), Mode.INTUITIONISTIC, prelude_env).accepted


# --------------------------------------------------------------- invariants

ALL_DOCS = [(p, mode_for(p)) for p in prelude_files()] + [(p, Mode.INTUITIONISTIC) for p in corpus_files()]


@pytest.mark.parametrize("path, mode", ALL_DOCS, ids=lambda v: getattr(v, "name", str(v)))
def test_round_trip_rechecks(path, mode, prelude_env):
    doc = read_doc(path)
    env = None if path.parent == PRELUDE else prelude_env
    first = check_document(doc, mode, env)
    second = check_document(parse_document(print_document(doc)), mode, env)
    assert first.accepted and second.accepted


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
def test_mode_monotonicity(path, prelude_env):
    doc = read_doc(path)
    assert check_document(doc, Mode.INTUITIONISTIC, prelude_env).accepted
    assert check_document(doc, Mode.CLASSICAL, prelude_env).accepted


def _discharged(node, index):
    """Labels that ``node`` discharges in its child ``index``."""
    if node.rule == "ImpI":
        return set(node.labels)
    if node.rule == "OrE" and index in (1, 2):
        return {node.labels[index - 1]}
    if node.rule == "ExE" and index == 1:
        return {node.labels[0]}
    return set()


def _open_labels(node, scope):
    if node.rule == "Hyp":
        yield node.refs[0], scope
    for i, child in enumerate(node.children):
        yield from _open_labels(child, scope | _discharged(node, i))


@pytest.mark.parametrize("path, mode", ALL_DOCS, ids=lambda v: getattr(v, "name", str(v)))
def test_discharge_locality_and_freshness(path, mode, prelude_env):
    doc = read_doc(path)
    env = None if path.parent == PRELUDE else prelude_env
    report = check_document(doc, mode, env)
    assert report.accepted
    full = report.environment
    for lemma in doc.lemmas:
        globals_ = {label for label, _ in lemma.hypotheses} | {name for name, _ in full.axioms}
        for label, scope in _open_labels(lemma.root, frozenset()):
            assert label in scope or label in globals_
        initial = full.initial_context(lemma.hypotheses)
        for p, node in lemma.root.walk():
            if node.rule in ("AllI", "ExE"):
                ctx = available_hypotheses(lemma.root, p, initial)
                for _, f in ctx.entries:
                    assert node.fresh not in free_vars(f)
                if node.rule == "ExE":
                    assert node.fresh not in free_vars(node.conclusion)


def _chains_in_context(path, base):
    """Every Chain node of ``path`` with the context and environment it is checked under."""
    doc = read_doc(path)
    env = base.copy() if base is not None else Environment()
    for item in doc.items:
        if isinstance(item, Lemma):
            initial = env.initial_context(item.hypotheses)
            for p, node in item.root.walk():
                if node.rule == "Chain":
                    yield item.name, node, available_hypotheses(item.root, p, initial), env
        env = load_environment(ProofDocument((item,), doc.signature), env=env)


def test_elaborated_chains_contain_no_chains(prelude_env):
    count = 0
    for path in corpus_files() + [PRELUDE / "arith.gpnd"]:
        base = prelude_env if path.parent == CORPUS else None
        for _, chain, ctx, env in _chains_in_context(path, base):
            tree = elaborate_chain(chain, ctx, env)
            assert tree.conclusion == chain.conclusion
            assert all(n.rule != "Chain" for _, n in tree.walk())
            assert check_node(tree, ctx, env) == []
            count += 1
    assert count >= 8
