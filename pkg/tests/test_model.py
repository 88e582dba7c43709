"""Core value, schema and tree types."""

import pytest

from provexplain.errors import (
    ArityMismatchError,
    InvalidMappingError,
    MalformedTreeError,
    TypeMismatchError,
)
from provexplain.io import parse_schema, parse_tree_rows
from provexplain.model import (
    NUMBER,
    STRING,
    Atom,
    ConjunctiveQuery,
    Const,
    Constraint,
    Database,
    DependencyNode,
    DependencyTree,
    UnionQuery,
    UnionWordMapping,
    Value,
    Var,
    WordMapping,
)


class TestValue:
    def test_equality_and_hash(self):
        assert Value.string("TAU") == Value.string("TAU")
        assert Value.number(2014) == Value.number(2014.0)
        assert Value.string("2014") != Value.number(2014)
        assert hash(Value.string("x")) == hash(Value(STRING, "x"))

    def test_numbers_sort_before_strings(self):
        values = [Value.string("abc"), Value.number(5), Value.number(-1)]
        ordered = sorted(values, key=Value.sort_key)
        assert [v.text for v in ordered] == ["-1", "5", "abc"]

    def test_text_drops_integral_decimal(self):
        assert Value.number(2014.0).text == "2014"
        assert Value.number(3.5).text == "3.5"
        assert Value.string(" padded ").text == "padded"

    def test_parse_number_rejects_text(self):
        with pytest.raises(TypeMismatchError):
            Value.parse("twenty", NUMBER)

    def test_comparison_uses_sort_key(self):
        assert Value.number(2006) < Value.number(2014)
        assert Value.number(2014) < Value.string("ABBA")
        assert Value.string("SIGMOD") < Value.string("VLDB")


class TestDatabase:
    def test_insert_and_rows(self):
        schema = parse_schema("conf(cname:string, cyear:number)")
        db = Database(schema)
        db.insert("conf", [Value.string("VLDB"), Value.number(2006)])
        assert db.rows("conf") == [(Value.string("VLDB"), Value.number(2006))]
        assert db.counts() == {"conf": 1}

    def test_insert_arity_checked(self):
        schema = parse_schema("conf(cname:string, cyear:number)")
        db = Database(schema)
        with pytest.raises(ArityMismatchError):
            db.insert("conf", [Value.string("VLDB")])

    def test_insert_kind_checked(self):
        schema = parse_schema("conf(cname:string, cyear:number)")
        db = Database(schema)
        with pytest.raises(TypeMismatchError):
            db.insert("conf", [Value.string("VLDB"), Value.string("old")])


def small_tree() -> DependencyTree:
    return parse_tree_rows(
        """
        1 Return VB 0 root
        2 the DT 3 det
        3 authors NNS 1 dobj
        4 from IN 3 prep
        5 TAU NNP 4 pobj
        """
    )


class TestDependencyTree:
    def test_indexing_and_parents(self):
        tree = small_tree()
        assert tree.root.id == 1
        assert tree.parent(1) is None
        assert tree.parent(5).id == 4
        assert tree.node(3).word == "authors"

    def test_walk_is_preorder(self):
        tree = small_tree()
        # the determiner (2) and preposition (4) are children of "authors"
        assert [n.id for n in tree.walk()] == [1, 3, 2, 4, 5]

    def test_subtree_and_ancestry(self):
        tree = small_tree()
        assert tree.subtree_ids(3) == {2, 3, 4, 5}
        assert tree.is_ancestor(3, 5)
        assert tree.is_ancestor(5, 5)
        assert not tree.is_ancestor(5, 3)

    def test_sentence_follows_word_positions(self):
        tree = small_tree()
        assert tree.sentence() == "Return the authors from TAU"

    def test_duplicate_node_id_rejected(self):
        dup = DependencyNode(1, "again", "NN", "dobj")
        root = DependencyNode(1, "Return", "VB", "root", children=[dup])
        with pytest.raises(MalformedTreeError):
            DependencyTree(root)


class TestQueries:
    def test_head_must_occur_in_body(self):
        with pytest.raises(InvalidMappingError):
            ConjunctiveQuery(["missing"], [Atom("r", (Var("x"),))])

    def test_constraint_vars_must_be_bound(self):
        with pytest.raises(InvalidMappingError):
            ConjunctiveQuery(
                ["x"],
                [Atom("r", (Var("x"),))],
                [Constraint(Var("y"), ">", Const(Value.number(3)))],
            )

    def test_wrap_idempotent(self):
        cq = ConjunctiveQuery(["x"], [Atom("r", (Var("x"),))])
        union = UnionQuery.wrap(cq)
        assert UnionQuery.wrap(union) is union
        assert union.cqs == (cq,)


class TestWordMappings:
    def test_injective_per_member(self):
        with pytest.raises(InvalidMappingError):
            WordMapping({3: "x", 5: "x"})

    def test_compact_ids_follow_node_order(self):
        union = UnionWordMapping(
            [WordMapping({8: "a", 3: "b"}), WordMapping({3: "b", 11: "c"})]
        )
        assert union.word_id_of_node == {3: 1, 8: 2, 11: 3}
        assert union.node_of_word_id[2] == 8
        assert union.word_pairs(0) == [(1, "b"), (2, "a")]
        assert union.word_pairs(1) == [(1, "b"), (3, "c")]

    def test_validate_needs_one_mapping_per_member(self):
        cq = ConjunctiveQuery(["x"], [Atom("r", (Var("x"),))])
        union = UnionQuery([cq, cq])
        mapping = UnionWordMapping([WordMapping({3: "x"})])
        with pytest.raises(InvalidMappingError):
            mapping.validate(small_tree(), union)

    def test_validate_rejects_unknown_nodes_and_vars(self):
        cq = ConjunctiveQuery(["x"], [Atom("r", (Var("x"),))])
        with pytest.raises(InvalidMappingError):
            UnionWordMapping([WordMapping({99: "x"})]).validate(
                small_tree(), UnionQuery.wrap(cq)
            )
        with pytest.raises(InvalidMappingError):
            UnionWordMapping([WordMapping({3: "nope"})]).validate(
                small_tree(), UnionQuery.wrap(cq)
            )
