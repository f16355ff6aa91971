import pytest
from pydantic import ValidationError

from src.access import (
    AccessStructure,
    is_plus_submodular_pair,
    is_qualified,
    load_structure,
    make_gamma,
    make_named,
    maximal_unqualified,
    minimal_sets_ordered,
    parse_structure,
    pawn_index,
)
from src.errors import InvalidParameter


class TestGamma:
    """Test the king-and-pawns structure."""

    def test_participants(self):
        """Test participant order: king first, then pawns."""
        assert make_gamma(3).participants == ("k", "p1", "p2", "p3")

    def test_minimal_sets(self):
        """Test minimal qualified sets for n=3."""
        groups = minimal_sets_ordered(make_gamma(3))
        assert groups == [
            frozenset({"k", "p1"}),
            frozenset({"k", "p2"}),
            frozenset({"k", "p3"}),
            frozenset({"p1", "p2", "p3"}),
        ]

    def test_qualification(self):
        """Test membership for typical coalitions."""
        gamma = make_gamma(3)
        assert is_qualified(gamma, ["k", "p2"])
        assert is_qualified(gamma, ["p1", "p2", "p3"])
        assert is_qualified(gamma, ["k", "p1", "p2"])
        assert not is_qualified(gamma, ["k"])
        assert not is_qualified(gamma, ["p1", "p2"])
        assert not is_qualified(gamma, [])

    def test_maximal_unqualified(self):
        """Test the boundary of Gamma_3."""
        found = set(maximal_unqualified(make_gamma(3)))
        assert found == {
            frozenset({"k"}),
            frozenset({"p1", "p2"}),
            frozenset({"p1", "p3"}),
            frozenset({"p2", "p3"}),
        }

    def test_n_too_small(self):
        """Test that Gamma_n needs at least two pawns."""
        with pytest.raises(InvalidParameter):
            make_gamma(1)

    def test_unknown_participant(self):
        """Test that unknown names are rejected."""
        with pytest.raises(InvalidParameter):
            is_qualified(make_gamma(2), ["k", "p9"])

    def test_pawn_index(self):
        """Test pawn name parsing."""
        assert pawn_index("k") == 0
        assert pawn_index("p12") == 12
        with pytest.raises(InvalidParameter):
            pawn_index("q1")


class TestNamedStructures:
    """Test the four-participant structures used by the bound tooling."""

    def test_path4_boundary(self):
        """Test maximal unqualified sets of the path a-b-c-d."""
        found = set(maximal_unqualified(make_named("path4")))
        assert found == {frozenset("ac"), frozenset("ad"), frozenset("bd")}

    def test_parse_labels(self):
        """Test the label parser for every family."""
        assert parse_structure("gamma_4").participants[-1] == "p4"
        for label in ("path4", "fan", "triangle-d"):
            assert parse_structure(label).participants == ("a", "b", "c", "d")

    def test_unknown_label(self):
        """Test that unknown labels are rejected."""
        with pytest.raises(InvalidParameter):
            parse_structure("square")


class TestValidation:
    """Test AccessStructure construction rules."""

    def test_not_antichain(self):
        """Test that nested minimal sets are rejected."""
        with pytest.raises(ValidationError):
            AccessStructure(
                participants=("a", "b"),
                minimal_qualified=(frozenset("a"), frozenset("ab")),
            )

    def test_uncovered_participant(self):
        """Test that every participant must matter."""
        with pytest.raises(ValidationError):
            AccessStructure(participants=("a", "b", "c"), minimal_qualified=(frozenset("ab"),))

    def test_duplicate_names(self):
        """Test that participant names are unique."""
        with pytest.raises(ValidationError):
            AccessStructure(participants=("a", "a"), minimal_qualified=(frozenset("a"),))

    def test_unknown_member(self):
        """Test that minimal sets only use known participants."""
        with pytest.raises(ValidationError):
            AccessStructure(participants=("a",), minimal_qualified=(frozenset({"a", "z"}),))

    def test_canonical_order(self):
        """Test that minimal sets are stored lexicographically by index."""
        structure = AccessStructure(
            participants=("a", "b", "c"),
            minimal_qualified=(frozenset("bc"), frozenset("ab")),
        )
        assert structure.minimal_qualified == (frozenset("ab"), frozenset("bc"))


class TestJson:
    """Test JSON load and dump."""

    def test_dump(self):
        """Test the serialized form lists sets in participant order."""
        data = make_gamma(2).to_json_dict()
        assert data == {
            "participants": ["k", "p1", "p2"],
            "minimal_qualified": [["k", "p1"], ["k", "p2"], ["p1", "p2"]],
        }

    def test_load_round_trip(self):
        """Test that dumped structures load back to the same sets."""
        original = make_named("fan")
        loaded = load_structure(original.to_json_dict())
        assert loaded.participants == original.participants
        assert loaded.minimal_qualified == original.minimal_qualified


class TestPlusSubmodularPairs:
    """Test the pair predicate for +-submodularity."""

    def test_pairs(self):
        """Test qualified pairs with qualified and unqualified meets."""
        gamma = make_gamma(3)
        kp1, kp2 = gamma.mask(["k", "p1"]), gamma.mask(["k", "p2"])
        pawns = gamma.mask(["p1", "p2", "p3"])
        assert is_plus_submodular_pair(gamma, kp1, kp2)
        assert is_plus_submodular_pair(gamma, pawns, kp1)
        assert not is_plus_submodular_pair(gamma, kp1, kp1 | kp2)
        assert not is_plus_submodular_pair(gamma, kp1, gamma.mask(["p2"]))


SEVEN = AccessStructure(
    participants=tuple("abcdefg"),
    minimal_qualified=tuple(frozenset(g) for g in ("ab", "cde", "afg", "bdf")),
)
STRUCTURES = (
    [make_gamma(n) for n in range(2, 7)]
    + [make_named(label) for label in ("path4", "fan", "triangle-d")]
    + [SEVEN]
)


class TestMonotoneFamilies:
    """Test set-family properties on every structure with at most seven participants."""

    @pytest.mark.parametrize("structure", STRUCTURES, ids=lambda s: "-".join(s.participants))
    def test_qualification_is_monotone(self, structure):
        """Test that every superset of a qualified set is qualified."""
        for y in range(structure.full_mask + 1):
            big = structure.names(y)
            sub = y
            while True:
                if is_qualified(structure, structure.names(sub)):
                    assert is_qualified(structure, big)
                if sub == 0:
                    break
                sub = (sub - 1) & y

    @pytest.mark.parametrize("structure", STRUCTURES, ids=lambda s: "-".join(s.participants))
    def test_maximal_unqualified_boundary(self, structure):
        """Test unqualified sets whose one-element extensions are all qualified."""
        found = maximal_unqualified(structure)
        assert found
        for group in found:
            assert not is_qualified(structure, group)
            for name in set(structure.participants) - group:
                assert is_qualified(structure, group | {name})
        for mask in range(structure.full_mask + 1):
            names = frozenset(structure.names(mask))
            if not is_qualified(structure, names):
                assert any(names <= group for group in found)
