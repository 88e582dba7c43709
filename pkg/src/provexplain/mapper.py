"""Fallback mapping of question words onto query variables.

Similarity blends character trigrams with schema knowledge: attribute
names (with relation prefixes stripped), declared aliases, and constants
the query compares against.  Candidate words are content words (nouns and
numbers); compound modifiers of a noun are skipped because the head noun
carries the phrase.  The final assignment is a maximum-weight bipartite
matching over edges at or above the threshold, with deterministic
tie-breaking (lower node id, then variable name).
"""

from __future__ import annotations

import re

import numpy as np
from scipy.optimize import linear_sum_assignment

from .model import (
    ConjunctiveQuery,
    Const,
    DependencyTree,
    Schema,
    StructureConfig,
    DEFAULT_STRUCTURE,
    UnionQuery,
    UnionWordMapping,
    WordMapping,
)

DEFAULT_BETA = 0.6

_NON_ALNUM = re.compile(r"[^a-z0-9]+")


def normalize(text: str) -> str:
    """Lowercase, strip punctuation and a plural trailing 's'."""
    text = _NON_ALNUM.sub("", text.lower())
    if len(text) > 3 and text.endswith("s") and not text.endswith("ss"):
        text = text[:-1]
    return text


def _trigrams(text: str) -> set:
    return {text[i : i + 3] for i in range(len(text) - 2)}


def similarity(a: str, b: str) -> float:
    """Symmetric string similarity in [0, 1]: 1.0 on equality after
    normalization, otherwise the Dice coefficient over character
    trigrams."""
    na, nb = normalize(a), normalize(b)
    if not na or not nb:
        return 0.0
    if na == nb:
        return 1.0
    ta, tb = _trigrams(na), _trigrams(nb)
    if not ta or not tb:
        return 0.0
    return 2 * len(ta & tb) / (len(ta) + len(tb))


def _variable_targets(cq: ConjunctiveQuery, schema: Schema) -> dict:
    """Per variable: the strings a question word may resemble."""
    targets: dict = {}
    for atom in cq.atoms:
        rel = schema.relation(atom.relation)
        for pos, term in enumerate(atom.terms):
            if not hasattr(term, "name"):
                continue
            attr = rel.attributes[pos]
            texts = targets.setdefault(term.name, set())
            texts.add(attr.name)
            for prefix in (rel.name, rel.name[0]):
                if attr.name.startswith(prefix) and len(attr.name) - len(prefix) >= 3:
                    texts.add(attr.name[len(prefix):])
            for alias in attr.aliases:
                texts.add(alias)
                texts.update(alias.split())
    for con in cq.constraints:
        if isinstance(con.right, Const) and con.left.name in targets:
            targets[con.left.name].add(con.right.value.text)
    return targets


def score_word_variable(word: str, var: str, targets: dict) -> float:
    texts = targets.get(var, ())
    best = 0.0
    for text in texts:
        best = max(best, similarity(word, text))
        if best == 1.0:
            break
    return best


def candidate_nodes(
    tree: DependencyTree, config: StructureConfig = DEFAULT_STRUCTURE
) -> list[int]:
    out = []
    for node_id in sorted(tree.nodes):
        node = tree.nodes[node_id]
        if not node.pos.startswith(config.noun_pos_prefixes):
            continue
        if node.rel in config.compound_rels:
            continue
        out.append(node_id)
    return out


def _optimal_weight(weights: dict, nodes: list, variables: list) -> float:
    if not nodes or not variables:
        return 0.0
    matrix = np.zeros((len(nodes), len(variables)))
    for i, n in enumerate(nodes):
        for j, v in enumerate(variables):
            matrix[i, j] = weights.get((n, v), 0.0)
    rows, cols = linear_sum_assignment(matrix, maximize=True)
    return float(matrix[rows, cols].sum())


def _match_one(
    tree: DependencyTree,
    cq: ConjunctiveQuery,
    schema: Schema,
    beta: float,
    config: StructureConfig,
) -> WordMapping:
    targets = _variable_targets(cq, schema)
    nodes = candidate_nodes(tree, config)
    variables = sorted(cq.variables())
    weights = {}
    for n in nodes:
        word = tree.node(n).word
        for v in variables:
            score = score_word_variable(word, v, targets)
            if score >= beta:
                weights[(n, v)] = score
    # Deterministic refinement: walk nodes in id order and keep the
    # lexicographically first variable that preserves the optimal total.
    chosen: dict = {}
    free_nodes = list(nodes)
    free_vars = list(variables)
    remaining = _optimal_weight(weights, free_nodes, free_vars)
    for n in list(free_nodes):
        others = [x for x in free_nodes if x != n]
        picked = None
        for v in free_vars:
            w = weights.get((n, v))
            if w is None:
                continue
            rest = _optimal_weight(weights, others, [x for x in free_vars if x != v])
            if abs(w + rest - remaining) < 1e-9:
                picked = v
                remaining = rest
                break
        free_nodes = others
        if picked is not None:
            chosen[n] = picked
            free_vars = [x for x in free_vars if x != picked]
        else:
            # Unmatched node: the optimum must survive without it.
            remaining = _optimal_weight(weights, free_nodes, free_vars)
    return WordMapping(chosen)


def map_words(
    tree: DependencyTree,
    query,
    schema: Schema,
    beta: float = DEFAULT_BETA,
    config: StructureConfig = DEFAULT_STRUCTURE,
) -> UnionWordMapping:
    """Map question words to variables of every union member.  An empty
    mapping is a legitimate outcome (nothing resembled anything)."""
    union = UnionQuery.wrap(query)
    return UnionWordMapping(
        [_match_one(tree, cq, schema, beta, config) for cq in union.cqs]
    )
