from fractions import Fraction

import pytest

from src.access import is_plus_submodular_pair, make_gamma, make_named
from src.bound import inequalities as ineq
from src.bound.certificates import (
    CertificateItem,
    Lemma,
    derive_plus_submodular,
    implied_kappa_bound,
    lemma_certificate,
    submodular_chain,
    to_report,
    verify_certificate,
)
from src.bound.lp import kappa
from src.errors import InvalidParameter


class TestLemmaCertificates:
    """Test the king-and-pawns share-size certificates."""

    @pytest.mark.parametrize("lemma", list(Lemma))
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 9])
    def test_verifies(self, lemma, n):
        """Test that each certificate derives its target."""
        assert verify_certificate(lemma_certificate(lemma, n))

    def test_down_target(self):
        """Test the first derivation's goal for n=4."""
        cert = lemma_certificate("down", 4)
        assert ineq.format_inequality(cert.structure, cert.target) == "h(kp1p2p3) - h(p1) >= 3"

    def test_up_target(self):
        """Test the second derivation's goal for n=4."""
        cert = lemma_certificate("up", 4)
        text = ineq.format_inequality(cert.structure, cert.target)
        assert text == "h(kp1) + h(p2) + h(p3) - h(kp1p2p3) >= 2"

    def test_up_is_empty_for_two_pawns(self):
        """Test that n=2 needs no second-stage items."""
        cert = lemma_certificate("up", 2)
        assert cert.items == []
        assert cert.target.coeffs == {}
        assert cert.target.constant == 0

    def test_combined_target(self):
        """Test h(k) + h(p2) >= 3 for n=3."""
        cert = lemma_certificate(Lemma.COMBINED, 3)
        assert ineq.format_inequality(cert.structure, cert.target) == "h(k) + h(p2) >= 3"

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 10])
    def test_implied_bound(self, n):
        """Test the averaged bound (2n-3)/(n-1)."""
        cert = lemma_certificate(Lemma.COMBINED, n)
        assert implied_kappa_bound(cert) == Fraction(2 * n - 3, n - 1)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_matches_lp(self, n):
        """Test that the certificate bound equals the LP optimum."""
        cert = lemma_certificate(Lemma.COMBINED, n)
        assert implied_kappa_bound(cert) == kappa(make_gamma(n))

    def test_implied_bound_needs_singletons(self):
        """Test that mixed targets give no share-size bound."""
        with pytest.raises(InvalidParameter):
            implied_kappa_bound(lemma_certificate(Lemma.DOWN, 3))

    def test_unknown_lemma(self):
        """Test lemma name validation."""
        with pytest.raises(InvalidParameter):
            lemma_certificate("sideways", 3)
        with pytest.raises(InvalidParameter):
            lemma_certificate(Lemma.DOWN, 1)


class TestTampering:
    """Test that the verifier rejects broken certificates."""

    def test_negative_multiplier(self):
        """Test that multipliers must be nonnegative."""
        cert = lemma_certificate(Lemma.COMBINED, 3)
        items = list(cert.items)
        items[0] = CertificateItem(inequality=items[0].inequality, multiplier=Fraction(-1))
        assert not verify_certificate(cert.model_copy(update={"items": items}))

    def test_dropped_item(self):
        """Test that the sum no longer matches without one item."""
        cert = lemma_certificate(Lemma.COMBINED, 3)
        assert not verify_certificate(cert.model_copy(update={"items": cert.items[1:]}))

    def test_each_monotone_is_needed(self):
        """Test that dropping any monotonicity item from Down(3) breaks the sum."""
        cert = lemma_certificate(Lemma.DOWN, 3)
        positions = [
            i
            for i, item in enumerate(cert.items)
            if item.inequality.provenance == ineq.Provenance.MONOTONE
        ]
        assert positions
        for i in positions:
            items = cert.items[:i] + cert.items[i + 1 :]
            assert not verify_certificate(cert.model_copy(update={"items": items}))

    def test_forged_constant(self):
        """Test that an instance must match its provenance."""
        cert = lemma_certificate(Lemma.DOWN, 3)
        items = list(cert.items)
        forged = items[1].inequality.model_copy(update={"constant": Fraction(5)})
        items[1] = CertificateItem(inequality=forged)
        assert not verify_certificate(cert.model_copy(update={"items": items}))

    def test_wrong_structure(self):
        """Test that instances must be valid for the stated structure."""
        cert = lemma_certificate(Lemma.DOWN, 3)
        other = make_named("path4")
        assert not verify_certificate(cert.model_copy(update={"structure": other}))

    def test_stronger_target(self):
        """Test that the target constant cannot exceed the derived one."""
        cert = lemma_certificate(Lemma.COMBINED, 3)
        goal = ineq.target([(1, 1), (4, 1)], 4)
        assert not verify_certificate(cert.model_copy(update={"target": goal}))

    def test_weaker_target(self):
        """Test that a weaker constant is still implied."""
        cert = lemma_certificate(Lemma.COMBINED, 3)
        goal = ineq.target([(1, 1), (4, 1)], 2)
        assert verify_certificate(cert.model_copy(update={"target": goal}))


class TestDerivations:
    """Test derived instances from elemental ones."""

    def test_every_submodular_pair(self):
        """Test the telescoping chain over all subset pairs of P+{S} for Gamma_2."""
        gamma = make_gamma(2)
        for x in range(16):
            for y in range(16):
                assert verify_certificate(submodular_chain(gamma, x, y))

    def test_chain_size(self):
        """Test that |X-Y| * |Y-X| elemental instances are used."""
        gamma = make_gamma(3)
        cert = submodular_chain(gamma, 0b00011, 0b01100)
        assert len(cert.items) == 4

    def test_every_plus_submodular_pair(self):
        """Test that +-submodularity follows from Shannon and secret equalities."""
        gamma = make_gamma(3)
        checked = 0
        for x in range(16):
            for y in range(16):
                if is_plus_submodular_pair(gamma, x, y):
                    assert verify_certificate(derive_plus_submodular(gamma, x, y))
                    checked += 1
        assert checked > 0

    def test_named_structure(self):
        """Test derivations on a non-threshold structure."""
        path = make_named("path4")
        ab, bc = path.mask(["a", "b"]), path.mask(["b", "c"])
        assert verify_certificate(derive_plus_submodular(path, ab, bc))


class TestSerialization:
    """Test certificate reports."""

    def test_report(self):
        """Test the entry list for the combined certificate at n=3."""
        cert = lemma_certificate(Lemma.COMBINED, 3)
        report = to_report(cert, 3)
        assert report.verified
        assert report.lemma == "combined"
        assert report.constant == "3/1"
        assert len(report.items) == len(cert.items)
        first = report.items[0]
        assert first.provenance == "plus_submodular"
        assert first.X == ["p1", "p2", "p3"]
        assert first.Y == ["k", "p1", "p3"]
        assert first.multiplier == "1/1"
