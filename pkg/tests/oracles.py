"""Independent reference implementations used to cross-check the package.

Everything here is deliberately naive: cross products instead of joins,
full distribution instead of structural recursion, exhaustive search
instead of greedy heuristics.  Slow but obviously correct.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter

from provexplain.circuit import Leaf, Prod, Sum, canonical_key, product, summation
from provexplain.model import (
    Atom,
    ConjunctiveQuery,
    Const,
    Constraint,
    DependencyNode,
    DependencyTree,
    NUMBER,
    STRING,
    UnionQuery,
    UnionWordMapping,
    Value,
    Var,
    WordMapping,
)

# --- evaluation oracle --------------------------------------------------


def _terms_match(atom: Atom, row, bound: dict) -> dict | None:
    new = dict(bound)
    for term, value in zip(atom.terms, row):
        if isinstance(term, Const):
            if term.value != value:
                return None
        else:
            if term.name in new:
                if new[term.name] != value:
                    return None
            else:
                new[term.name] = value
    return new


def _constraint_holds(con: Constraint, bound: dict) -> bool:
    left = bound[con.left.name]
    right = con.right.value if isinstance(con.right, Const) else bound[con.right.name]
    if con.op == "=":
        return left == right
    if con.op == "<":
        return left.sort_key() < right.sort_key()
    if con.op == ">":
        return left.sort_key() > right.sort_key()
    raise ValueError(con.op)


def cross_product_evaluate(query, db) -> set:
    """Every satisfying assignment, found by filtering the full cross
    product of candidate rows.  Returns (cq_index, atom_rows, bindings)
    triples in the package's own encoding for direct comparison."""
    union = UnionQuery.wrap(query)
    found = set()
    for cq_index, cq in enumerate(union.cqs):
        spaces = [range(len(db.rows(atom.relation))) for atom in cq.atoms]
        for combo in itertools.product(*spaces):
            bound: dict | None = {}
            for atom, row_id in zip(cq.atoms, combo):
                bound = _terms_match(atom, db.rows(atom.relation)[row_id], bound)
                if bound is None:
                    break
            if bound is None:
                continue
            if all(_constraint_holds(con, bound) for con in cq.constraints):
                found.add((cq_index, combo, tuple(sorted(bound.items()))))
    return found


# --- circuit oracles ----------------------------------------------------


def distribute(circuit) -> list:
    """Full distribution, carrying leaf objects: a list of leaf-object
    lists, one per expanded monomial."""
    if isinstance(circuit, Leaf):
        return [[circuit]]
    if isinstance(circuit, Sum):
        out = []
        for child in circuit.children:
            out.extend(distribute(child))
        return out
    combos = [[]]
    for child in circuit.children:
        combos = [
            got + extra for got in combos for extra in distribute(child)
        ]
    return combos


def expansion_multiset(circuit) -> Counter:
    out: Counter = Counter()
    for leaves in distribute(circuit):
        out[tuple(sorted((l.pair for l in leaves),
                         key=lambda p: (p[0], p[1].sort_key())))] += 1
    return out


def depth_of(circuit, target) -> int:
    """Edge distance of a leaf object from the root (identity match)."""

    def walk(node, depth):
        if node is target:
            return depth
        if isinstance(node, Leaf):
            return None
        for child in node.children:
            got = walk(child, depth + 1)
            if got is not None:
                return got
        return None

    found = walk(circuit, 0)
    if found is None:
        raise LookupError("leaf not in circuit")
    return found


def strict_word_pairs(tree: DependencyTree, mapping) -> list:
    """(below_wid, above_wid) for every strictly related mapped pair,
    derived by plain parent walking."""
    union_mapping = UnionWordMapping.wrap(mapping)
    wids = union_mapping.word_id_of_node
    out = []
    for node_id, wid in wids.items():
        walker = tree.parent(node_id)
        while walker is not None:
            if walker.id in wids:
                out.append((wid, wids[walker.id]))
            walker = tree.parent(walker.id)
    return out


def naive_compatible(circuit, tree, mapping, monomials) -> bool:
    """Definition-level compatibility: for every assignment monomial and
    every strictly related word pair, the lower word's leaf must sit at a
    level not above the higher word's leaf, for every way the monomial
    can be matched to an expansion."""
    pairs = strict_word_pairs(tree, mapping)
    expansions = distribute(circuit)
    for monomial in monomials:
        wanted = Counter(monomial)
        matches = [
            leaves
            for leaves in expansions
            if Counter(l.pair for l in leaves) == wanted
        ]
        if not matches:
            return False
        for leaves in matches:
            by_wid = {}
            for leaf in leaves:
                by_wid.setdefault(leaf.word_id, []).append(leaf)
            for below, above in pairs:
                if below not in by_wid or above not in by_wid:
                    continue
                for leaf_below in by_wid[below]:
                    for leaf_above in by_wid[above]:
                        level_below = -depth_of(circuit, leaf_below)
                        level_above = -depth_of(circuit, leaf_above)
                        if level_below > level_above:
                            return False
    return True


# --- exhaustive factorization search ------------------------------------


def _set_partitions(items: list):
    """All partitions of a list into nonempty groups."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
        yield [[first]] + partition


def _monomial_product(monomial) -> object:
    return product(Leaf(w, v) for w, v in monomial)


def _group_forms(group: list, seen_keys: set) -> list:
    """Circuits for one summand group: a lone monomial stays a product;
    larger groups must pull out a shared nonempty pair set."""
    if len(group) == 1:
        return [_monomial_product(group[0])]
    common = set(group[0])
    for monomial in group[1:]:
        common &= set(monomial)
    forms = []
    for size in range(1, len(common) + 1):
        for subset in itertools.combinations(sorted(common), size):
            residues = [
                tuple(p for p in monomial if p not in subset)
                for monomial in group
            ]
            if any(residue == () for residue in residues):
                continue
            for inner in all_circuits(residues, seen_keys):
                forms.append(
                    product([_monomial_product(subset), inner])
                )
    return forms


def all_circuits(monomials: list, seen_keys: set | None = None) -> list:
    """Every canonical circuit whose expansion equals the monomial
    multiset, deduplicated structurally.  Exponential; keep inputs tiny."""
    if seen_keys is None:
        seen_keys = set()
    if len(monomials) == 1:
        return [_monomial_product(monomials[0])]
    out = []
    out_keys = set()
    for partition in _set_partitions(list(monomials)):
        options = [_group_forms(group, seen_keys) for group in partition]
        if any(not opts for opts in options):
            continue
        for combo in itertools.product(*options):
            if len(combo) == 1:
                candidate = combo[0]
            else:
                candidate = summation(combo)
            key = canonical_key(candidate)
            if key not in out_keys:
                out_keys.add(key)
                out.append(candidate)
    return out


def minimal_compatible_length(monomials, tree, mapping) -> int:
    """Smallest leaf count over every compatible bracketing."""
    from provexplain.circuit import length

    best = None
    for candidate in all_circuits(list(monomials)):
        if not naive_compatible(candidate, tree, mapping, monomials):
            continue
        size = length(candidate)
        if best is None or size < best:
            best = size
    if best is None:
        raise LookupError("no compatible circuit found")
    return best


# --- random instance generators -----------------------------------------


def random_question(rng: random.Random, num_words: int):
    """A synthetic mapped question: `num_words` mapped nodes in a random
    tree shape (mix of chains and branches), mapping word i to variable
    v{i}.  Returns (tree, mapping)."""
    nodes = [DependencyNode(1, "Return", "VB", "root")]
    for node_id in range(2, num_words + 2):
        parent = nodes[0] if node_id == 2 else rng.choice(nodes[1:])
        node = DependencyNode(
            node_id,
            f"word{node_id}",
            "NN",
            "dobj" if parent.id == 1 else "prep",
        )
        parent.children.append(node)
        nodes.append(node)
    tree = DependencyTree(nodes[0])
    mapping = WordMapping(
        {node.id: f"v{node.id}" for node in nodes[1:]}
    )
    return tree, mapping


def random_polynomial(rng: random.Random, tree, mapping, max_monomials=6):
    """Distinct-by-construction random monomials over the mapped words,
    at most 4 values per word."""
    union_mapping = UnionWordMapping.wrap(mapping)
    wids = sorted(union_mapping.word_id_of_node.values())
    pools = {}
    for wid in wids:
        if rng.random() < 0.4:
            pools[wid] = [Value(NUMBER, 2000 + k) for k in range(rng.randint(1, 4))]
        else:
            pools[wid] = [
                Value(STRING, f"w{wid}x{k}") for k in range(rng.randint(1, 4))
            ]
    count = rng.randint(1, max_monomials)
    monomials = []
    for _ in range(count):
        monomial = tuple(
            sorted(
                ((wid, rng.choice(pools[wid])) for wid in wids),
                key=lambda p: (p[0], p[1].sort_key()),
            )
        )
        monomials.append(monomial)
    return monomials


_ORACLE_RELATIONS = (
    ("r1", (STRING,)),
    ("r2", (STRING, NUMBER)),
    ("r3", (NUMBER, STRING)),
    ("r4", (STRING, NUMBER, STRING)),
)


def random_database(rng: random.Random, max_rows=30):
    """A toy schema instance with at most `max_rows` tuples overall.
    Small value pools force joins to actually connect."""
    from provexplain.io import parse_schema
    from provexplain.model import Database

    schema = parse_schema(
        "\n".join(
            f"{name}({', '.join(f'a{i}:{kind}' for i, kind in enumerate(kinds))})"
            for name, kinds in _ORACLE_RELATIONS
        )
    )
    db = Database(schema)
    strings = [f"s{i}" for i in range(6)]
    numbers = list(range(1, 7))
    budget = rng.randint(len(_ORACLE_RELATIONS), max_rows)
    for _ in range(budget):
        name, kinds = _ORACLE_RELATIONS[rng.randrange(len(_ORACLE_RELATIONS))]
        row = [
            Value(STRING, rng.choice(strings))
            if kind == STRING
            else Value(NUMBER, rng.choice(numbers))
            for kind in kinds
        ]
        db.insert(name, row)
    return schema, db


def random_cq(rng: random.Random, schema, min_atoms=2, max_atoms=4):
    """A random conjunctive query over the toy schema: shared variables
    make joins, occasional constants and comparison constraints."""
    atom_count = rng.randint(min_atoms, max_atoms)
    var_names = [f"x{i}" for i in range(8)]
    atoms = []
    used_vars: list[str] = []
    numeric_vars: list[str] = []
    for _ in range(atom_count):
        name, kinds = _ORACLE_RELATIONS[rng.randrange(len(_ORACLE_RELATIONS))]
        terms = []
        for kind in kinds:
            roll = rng.random()
            if roll < 0.15:
                const = (
                    Value(STRING, f"s{rng.randrange(6)}")
                    if kind == STRING
                    else Value(NUMBER, rng.randint(1, 6))
                )
                terms.append(Const(const))
            elif roll < 0.55 and used_vars:
                terms.append(Var(rng.choice(used_vars)))
            else:
                fresh = var_names[len(used_vars) % len(var_names)]
                if fresh not in used_vars:
                    used_vars.append(fresh)
                terms.append(Var(fresh))
            if isinstance(terms[-1], Var) and kind == NUMBER:
                if terms[-1].name not in numeric_vars:
                    numeric_vars.append(terms[-1].name)
        atoms.append(Atom(name, tuple(terms)))
    if not used_vars:
        # every roll came up constant; the head needs a variable, so
        # reopen the first position of the first atom
        used_vars.append("x0")
        first = atoms[0]
        atoms[0] = Atom(first.relation, (Var("x0"),) + first.terms[1:])
        if dict(_ORACLE_RELATIONS)[first.relation][0] == NUMBER:
            numeric_vars.append("x0")
    constraints = []
    for _ in range(rng.randint(0, 2)):
        if not numeric_vars:
            break
        left = Var(rng.choice(numeric_vars))
        op = rng.choice("<>=")
        if rng.random() < 0.7 or len(numeric_vars) < 2:
            right = Const(Value(NUMBER, rng.randint(1, 6)))
        else:
            right = Var(rng.choice(numeric_vars))
        constraints.append(Constraint(left, op, right))
    head = [rng.choice(used_vars)]
    return ConjunctiveQuery(head, atoms, constraints)
