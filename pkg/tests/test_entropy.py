import math
from fractions import Fraction

import numpy as np
import pytest

from src.access import make_gamma
from src.bound.inequalities import T_VAR
from src.bound.lp import build_lp, check_point
from src.entropy import (
    CountTable,
    check_axioms,
    check_perfect,
    check_secret_conditioning,
    check_uniform_shares,
    conditional_entropy,
    entropy,
    entropy_report,
    enumerate_joint,
    enumeration_size,
)
from src.errors import EnumerationTooLarge, InvalidParameter
from src.schemes import SchemeSpec


def _rows(table: CountTable) -> list:
    return sorted(map(tuple, np.column_stack([table.outcomes, table.counts]).tolist()))


class TestEnumeration:
    """Test exhaustive enumeration of the joint law."""

    def test_totals(self, sigma1_table, sigma2_table):
        """Test that every (secret, transcript) pair is counted once."""
        assert sigma1_table.total == 5**2
        assert sigma2_table.total == 7**4

    def test_budget(self):
        """Test that oversize enumerations are refused before any work."""
        spec = SchemeSpec.create("composite", 3, 7)
        assert enumeration_size(spec) == 7**7
        with pytest.raises(EnumerationTooLarge) as info:
            enumerate_joint(spec, budget=1000)
        assert info.value.details == {"size": 7**7, "budget": 1000}

    def test_budget_from_env(self, monkeypatch):
        """Test that the settings budget applies without an override."""
        from src import config

        monkeypatch.setattr(config.settings, "budget", 10)
        with pytest.raises(EnumerationTooLarge):
            enumerate_joint(SchemeSpec.create("sigma1", 2, 5))

    def test_workers_match_single_process(self, sigma2_table):
        """Test that partitioned enumeration merges to the same table."""
        parallel = enumerate_joint(SchemeSpec.create("sigma2", 3, 7), workers=2)
        assert parallel.total == sigma2_table.total
        full = (1 << 5) - 1
        assert sorted(parallel.marginal(full)) == sorted(sigma2_table.marginal(full))
        assert len(parallel.outcomes) == len(sigma2_table.outcomes)

    def test_merge_is_order_independent(self, leaky_table, blind_table):
        """Test merging partial tables in either order."""
        ab = leaky_table.merge(blind_table)
        ba = blind_table.merge(leaky_table)
        assert ab.total == ba.total == 50
        assert _rows(ab) == _rows(ba)

    def test_merge_rejects_mismatch(self, sigma1_table, sigma2_table):
        """Test that tables over different spaces do not merge."""
        with pytest.raises(InvalidParameter):
            sigma1_table.merge(sigma2_table)

    def test_assignment_decoding(self, sigma2_table):
        """Test that share vectors decode to residues of the right length."""
        row = sigma2_table.assignment(sigma2_table.mask(["k", "p1", "S"]), 0)
        assert set(row) == {"k", "p1", "S"}
        assert len(row["k"]) == 1 and len(row["p1"]) == 2
        assert all(0 <= v < 7 for vec in row.values() for v in vec)


class TestPerfectness:
    """Test the exact perfectness decision."""

    def test_sigma1(self, sigma1_table):
        """Test Sigma1 at n=2 is perfect."""
        report = check_perfect(sigma1_table, make_gamma(2))
        assert report.perfect
        assert report.violation_count == 0
        assert report.checked_qualified == 3
        assert report.checked_unqualified == 3

    def test_sigma1_n3(self, sigma1_n3_table):
        """Test Sigma1 at n=3 is perfect."""
        assert check_perfect(sigma1_n3_table, make_gamma(3)).perfect

    def test_sigma2(self, sigma2_table):
        """Test Sigma2 at n=3 is perfect."""
        report = check_perfect(sigma2_table, make_gamma(3))
        assert report.perfect
        assert report.scheme == "sigma2"

    def test_leaky_unqualified(self, leaky_table):
        """Test that a king who sees the secret is flagged."""
        report = check_perfect(leaky_table, make_gamma(2))
        assert not report.perfect
        assert report.violation_count == 5
        assert {v.kind for v in report.violations} == {"unqualified"}
        assert all(v.subset == ["k"] for v in report.violations)

    def test_blind_qualified(self, blind_table):
        """Test that qualified sets which learn nothing are flagged."""
        report = check_perfect(blind_table, make_gamma(2))
        assert not report.perfect
        assert report.violation_count == 15
        assert {v.kind for v in report.violations} == {"qualified"}
        assert "5 secrets" in report.violations[0].detail

    def test_report_limit(self, leaky_table):
        """Test that only a bounded number of violations is listed."""
        report = check_perfect(leaky_table, make_gamma(2), max_reported=2)
        assert len(report.violations) == 2
        assert report.violation_count == 5

    def test_structure_mismatch(self, sigma1_table):
        """Test that the table and structure must share participants."""
        with pytest.raises(InvalidParameter):
            check_perfect(sigma1_table, make_gamma(3))


class TestEntropies:
    """Test Shannon entropies and rates from the counts."""

    def test_uniform_shares(self, sigma2_table):
        """Test that every Sigma2 share is uniform."""
        assert all(check_uniform_shares(sigma2_table).values())

    def test_blind_shares_marginally_uniform(self, blind_table):
        """Test per-participant uniformity despite identical shares."""
        assert all(check_uniform_shares(blind_table).values())
        assert entropy(blind_table, blind_table.mask(["k", "p1"])) == pytest.approx(
            math.log2(5)
        )

    def test_sigma2_entropies(self, sigma2_table):
        """Test H(S) = log q and pawn shares of two symbols."""
        log7 = math.log2(7)
        assert entropy(sigma2_table, sigma2_table.mask(["S"])) == pytest.approx(log7)
        assert entropy(sigma2_table, sigma2_table.mask(["p1"])) == pytest.approx(2 * log7)
        assert conditional_entropy(
            sigma2_table, sigma2_table.mask(["S"]), sigma2_table.mask(["k", "p2"])
        ) == pytest.approx(0.0, abs=1e-9)

    def test_sigma2_rates(self, sigma2_table):
        """Test exact rates: 1 for the king, 1/2 for the pawns."""
        report = entropy_report(sigma2_table, subsets=[])
        assert report.rates["k"] == Fraction(1)
        assert report.rates["p1"] == Fraction(1, 2)
        assert report.min_rate == Fraction(1, 2)
        assert report.h(report.secret_bit) == pytest.approx(1.0)

    def test_sigma1_rates(self, sigma1_table):
        """Test Sigma1 at n=2 is ideal."""
        report = entropy_report(sigma1_table, subsets=[])
        assert report.min_rate == Fraction(1)

    def test_report_subsets(self, sigma2_table):
        """Test that named subsets are added to the defaults."""
        report = entropy_report(sigma2_table, subsets=[["k", "p1"]])
        assert sigma2_table.mask(["k", "p1"]) in report.entropies
        assert 0 in report.entropies

    def test_constant_share_rate(self):
        """Test that a constant share gets an infinite rate."""
        rows = np.array(
            [[0, r, (r + s) % 3, s] for s in range(3) for r in range(3)], dtype=np.int64
        )
        table = CountTable.from_rows(("k", "p1", "p2"), (1, 1, 1), 1, 3, rows)
        report = entropy_report(table, subsets=[])
        assert report.rates["k"] == math.inf
        assert report.rates["p1"] == Fraction(1)


class TestAxiomChecks:
    """Test that oracle entropies satisfy the axioms the LP assumes."""

    def test_sigma2_axioms(self, sigma2_table):
        """Test monotonicity, submodularity and +-submodularity on Sigma2."""
        report = entropy_report(sigma2_table)
        assert check_axioms(report, make_gamma(3)) == []
        assert check_secret_conditioning(report, make_gamma(3)) == []

    def test_sigma1_axioms(self, sigma1_n3_table):
        """Test the axioms on Sigma1 at n=3."""
        report = entropy_report(sigma1_n3_table)
        assert check_axioms(report, make_gamma(3)) == []
        assert check_secret_conditioning(report, make_gamma(3)) == []

    def test_leaky_conditioning(self, leaky_table):
        """Test that the leaky table breaks H(S|k) = H(S)."""
        report = entropy_report(leaky_table)
        found = check_secret_conditioning(report, make_gamma(2))
        assert any("H(S|k)" in line for line in found)

    def test_needs_full_report(self, sigma2_table):
        """Test that axiom checks need every subset."""
        with pytest.raises(InvalidParameter):
            check_axioms(entropy_report(sigma2_table, subsets=[]), make_gamma(3))

    def test_lp_feasibility(self, sigma2_table):
        """Test that normalized oracle entropies are a feasible LP point."""
        report = entropy_report(sigma2_table)
        point = dict(report.normalized)
        point[T_VAR] = max(report.h(1 << i) for i in range(4))
        problem = build_lp(make_gamma(3))
        assert check_point(problem, point, tol=1e-9) == []
        assert point[T_VAR] == pytest.approx(2.0)
