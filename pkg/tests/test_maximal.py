"""Unit tests for the maximal-clone witness families and the completeness
deciders built on them."""

from collections import Counter

import pytest

from cloneforge import (
    builtin,
    gen_all_maximal,
    gen_type,
    is_complete,
    is_functionally_complete,
    is_sheffer,
    make_operation,
    projection,
    slupecki_criterion,
)
from cloneforge.errors import DomainTooLarge, PreconditionFailed


def breakdown(witnesses):
    return Counter(w.rtype for w in witnesses)


class TestEnumeration:
    def test_k2_is_the_post_list(self):
        ws = gen_all_maximal(2)
        assert len(ws) == 5
        assert breakdown(ws) == {
            "bounded_order": 1,
            "fpf_prime_perm": 1,
            "affine": 1,
            "central": 2,
        }

    def test_k3_count_and_breakdown(self):
        ws = gen_all_maximal(3)
        assert len(ws) == 18
        assert breakdown(ws) == {
            "bounded_order": 3,
            "fpf_prime_perm": 1,
            "affine": 1,
            "equivalence": 3,
            "central": 9,
            "h_regular": 1,
        }

    def test_k4_count_and_breakdown(self):
        ws = gen_all_maximal(4)
        assert len(ws) == 82
        assert breakdown(ws) == {
            "bounded_order": 18,
            "fpf_prime_perm": 3,
            "affine": 1,
            "equivalence": 13,
            "central": 40,
            "h_regular": 7,
        }

    def test_domain_too_large(self):
        with pytest.raises(DomainTooLarge):
            gen_all_maximal(5)

    def test_central_by_center_size(self):
        assert len(gen_type(3, "central", m=1)) == 6
        assert len(gen_type(3, "central", m=2)) == 3

    def test_deterministic_order(self):
        a = [w.relation.tuples for w in gen_all_maximal(3)]
        b = [w.relation.tuples for w in gen_all_maximal(3)]
        assert a == b


class TestIsComplete:
    def test_webb_is_complete(self, webb3):
        report = is_complete([webb3])
        assert report.complete
        assert len(report.per_witness) == 18
        assert all(v is not None for _, v in report.per_witness)

    def test_max_is_incomplete_with_blockers(self):
        report = is_complete([builtin("max", k=3)])
        assert not report.complete
        blockers = report.blocking()
        assert blockers
        assert any(w.rtype == "bounded_order" for w in blockers)

    def test_projections_alone(self):
        report = is_complete([projection(2, 2, 1)])
        assert not report.complete


class TestSheffer:
    def test_boolean_sheffer_ops(self, nand, nor):
        assert is_sheffer(nand).is_yes
        assert is_sheffer(nor).is_yes

    def test_and_is_not_sheffer(self):
        assert is_sheffer(builtin("and")).is_no

    def test_webb_is_sheffer(self, webb3):
        assert is_sheffer(webb3).is_yes

    def test_idempotent_is_never_sheffer(self, dual_discriminator3):
        assert is_sheffer(dual_discriminator3).is_no


class TestFunctionalCompleteness:
    def test_discriminator(self):
        assert is_functionally_complete([builtin("discriminator", k=3)]).is_yes

    def test_nand(self, nand):
        assert is_functionally_complete([nand]).is_yes

    def test_affine_maltsev_is_not(self):
        assert is_functionally_complete([builtin("affine_maltsev", p=3)]).is_no


class TestSlupeckiCriterion:
    @staticmethod
    def all_unary(k):
        import itertools

        return [
            make_operation(k, 1, t)
            for t in itertools.product(range(k), repeat=k)
        ]

    def test_requires_all_unary_operations(self):
        with pytest.raises(PreconditionFailed):
            slupecki_criterion([builtin("max", k=3)])

    def test_all_unary_plus_max_is_complete(self):
        F = self.all_unary(3) + [builtin("max", k=3)]
        assert slupecki_criterion(F).is_yes

    def test_all_unary_alone_is_incomplete(self):
        assert slupecki_criterion(self.all_unary(3)).is_no
