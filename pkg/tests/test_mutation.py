"""Single-point mutants of accepted proofs must be rejected by the kernel."""
from __future__ import annotations

from dataclasses import replace

from gpnd.kernel import Mode, available_hypotheses, check_document
from gpnd.proof_format import RULE_ARITY, Lemma, ProofDocument
from gpnd.syntax import Var

from conftest import CORPUS, read_doc

SOURCES = ("propositional.gpnd", "quantifiers.gpnd", "equality.gpnd")
SWAPS = {
    "AndE1": "AndE2", "AndE2": "AndE1", "OrI1": "OrI2", "OrI2": "OrI1",
    "ImpI": "AllI", "AllI": "ImpI", "AllE": "ExI", "ExI": "AllE", "BotE": "NNE",
    "AndI": "ImpE", "ImpE": "AndI", "EqE": "NatRec", "NatRec": "EqE", "ExE": "AndI",
    "Hyp": "EqI", "EqI": "PEM",
}


def _replace_at(root, path, new):
    if not path:
        return new
    kids = list(root.children)
    kids[path[0]] = _replace_at(kids[path[0]], path[1:], new)
    return replace(root, children=tuple(kids))


def _other_label(label, labels):
    for candidate in labels:
        if candidate != label:
            return candidate
    return label + "_x"


def _mutations(lemma, env):
    """``(operator, path, mutated node)`` triples for one lemma."""
    initial = env.initial_context(lemma.hypotheses)
    for path, node in lemma.root.walk():
        swap = SWAPS.get(node.rule)
        if swap is not None:
            assert RULE_ARITY[swap] == RULE_ARITY[node.rule]
            yield "rule", path, replace(node, rule=swap)
        if node.rule == "Hyp":
            labels = [lbl for lbl in available_hypotheses(lemma.root, path, initial).labels()]
            yield "hyp", path, replace(node, refs=(_other_label(node.refs[0], labels),))
        if node.labels:
            yield "discharge", path, replace(node, labels=(node.labels[0] + "_x",) + node.labels[1:])
        if node.fresh is not None:
            yield "fresh", path, replace(node, fresh=node.fresh + "_x")
        if node.substs:
            (name, term), *rest = node.substs
            yield "subst", path, replace(node, substs=((name, Var(name + "_x")),) + tuple(rest))


def _mutants(prelude_env):
    out = []
    for source in SOURCES:
        doc = read_doc(CORPUS / source)
        report = check_document(doc, Mode.INTUITIONISTIC, prelude_env)
        assert report.accepted
        for index, item in enumerate(doc.items):
            if not isinstance(item, Lemma):
                continue
            for op, path, node in _mutations(item, report.environment):
                lemma = replace(item, root=_replace_at(item.root, path, node))
                items = doc.items[:index] + (lemma,) + doc.items[index + 1:]
                out.append((source, item.name, op, path, ProofDocument(items, doc.signature)))
    return out


# Mutants that happen to remain valid proofs, each checked by hand.
WHITELIST = {
    # the inner ImpI of k discharges B vacuously, so its label is arbitrary
    ("propositional.gpnd", "k", "discharge", (0,)),
}


def test_enough_mutants(prelude_env):
    mutants = _mutants(prelude_env)
    assert len(mutants) >= 100
    assert {op for _, _, op, _, _ in mutants} == {"rule", "hyp", "discharge", "fresh", "subst"}


def test_every_mutant_is_rejected(prelude_env):
    survivors = []
    for source, name, op, path, doc in _mutants(prelude_env):
        report = check_document(doc, Mode.INTUITIONISTIC, prelude_env)
        key = (source, name, op, path)
        if report.accepted and key not in WHITELIST:
            survivors.append(key)
    assert survivors == []


def test_whitelisted_mutants_really_survive(prelude_env):
    found = {(s, n, op, p): doc for s, n, op, p, doc in _mutants(prelude_env)}
    for key in WHITELIST:
        assert check_document(found[key], Mode.INTUITIONISTIC, prelude_env).accepted
