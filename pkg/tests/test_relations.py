"""Unit tests for relations, preservation, and polymorphism helpers."""

import pytest

from cloneforge import (
    Relation,
    affine_relation,
    bp_membership,
    builtin,
    center,
    conjugate,
    in_affine_clone,
    is_rigid,
    make_operation,
    make_relation,
    pol_part,
    preserves,
    profile,
    slupecki,
    slupecki_membership,
)
from cloneforge.errors import (
    CapExceeded,
    DomainMismatch,
    IncompleteList,
    ValueOutOfRange,
)
from cloneforge.relations import generate_subpower, nontrivial_equivalences

from conftest import random_operation, seeded_rng

LEQ2 = ((0, 0), (0, 1), (1, 1))
LEQ3 = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
EQUIV_01 = ((0, 0), (0, 1), (1, 0), (1, 1), (2, 2))
CYCLE3 = ((0, 1), (1, 2), (2, 0))


class TestConstruction:
    def test_tuples_are_sorted_and_deduplicated(self):
        r = make_relation(2, 2, [(1, 1), (0, 0), (1, 1)])
        assert r.tuples == ((0, 0), (1, 1))

    def test_value_out_of_range(self):
        with pytest.raises(ValueOutOfRange):
            make_relation(2, 2, [(0, 2)])

    def test_conjugate_relation(self):
        r = make_relation(2, 2, LEQ2)
        flipped = conjugate(r, (1, 0))
        assert flipped.tuples == ((0, 0), (1, 0), (1, 1))


class TestProfile:
    def test_bounded_order(self):
        p = profile(make_relation(3, 2, LEQ3))
        assert p.is_bounded_order
        assert not p.is_equivalence
        assert p.is_fpf_prime_permutation_graph is None

    def test_equivalence(self):
        p = profile(make_relation(3, 2, EQUIV_01))
        assert p.is_equivalence
        assert not p.is_bounded_order

    def test_fpf_prime_permutation(self):
        p = profile(make_relation(3, 2, CYCLE3))
        assert p.is_fpf_prime_permutation_graph == 3

    def test_center(self):
        # all pairs through 0, plus the diagonal: a central relation
        tuples = {(0, x) for x in range(3)} | {(x, 0) for x in range(3)}
        tuples |= {(x, x) for x in range(3)}
        rho = make_relation(3, 2, sorted(tuples))
        assert center(rho) == frozenset({0})
        assert profile(rho).totally_symmetric

    def test_bitransitive(self):
        assert profile(make_relation(2, 2, LEQ2)).is_bitransitive
        # an equivalence with one two-element block is bitransitive
        assert profile(make_relation(3, 2, EQUIV_01)).is_bitransitive
        # a three-element chain has no automorphism moving (0,1) to (0,2)
        assert not profile(make_relation(3, 2, LEQ3)).is_bitransitive


class TestPreserves:
    def test_monotone_ops_preserve_order(self):
        leq = make_relation(3, 2, LEQ3)
        assert preserves(builtin("max", k=3), leq)
        assert preserves(builtin("min", k=3), leq)
        assert not preserves(builtin("cycle", k=3), leq)

    def test_cycle_preserves_its_graph(self):
        graph = make_relation(3, 2, CYCLE3)
        assert preserves(builtin("cycle", k=3), graph)
        assert not preserves(builtin("max", k=3), graph)

    def test_unary_relation_as_subset(self):
        zero = make_relation(2, 1, [(0,)])
        assert preserves(builtin("and"), zero)
        assert not preserves(builtin("not"), zero)

    def test_domain_mismatch(self):
        with pytest.raises(DomainMismatch):
            preserves(builtin("and"), make_relation(3, 2, LEQ3))


class TestPolPart:
    def test_monotone_binary_boolean_ops(self):
        part = pol_part([make_relation(2, 2, LEQ2)], 2)
        # both constants, both projections, min, max
        assert len(part.ops) == 6

    def test_cap_refusal(self):
        with pytest.raises(CapExceeded):
            pol_part([make_relation(3, 2, LEQ3)], 3, cap=10**4)


class TestSlupecki:
    def test_relation_size(self):
        rho = slupecki(3)
        assert rho.arity == 3
        assert len(rho.tuples) == 27 - 6  # all triples minus the bijections

    def test_membership_matches_preservation_on_binaries(self):
        rho = slupecki(3)
        rng = seeded_rng(5)
        for _ in range(60):
            f = random_operation(rng, 3, 2)
            assert slupecki_membership(f) == preserves(f, rho)

    def test_webb_is_outside(self, webb3):
        assert not slupecki_membership(webb3)


class TestAffine:
    def test_affine_relation_contents(self):
        rho = affine_relation(3)
        assert rho.arity == 4 and len(rho.tuples) == 27
        assert (1, 2, 2, 1) in rho.tuples  # 1 - 2 + 2 = 1

    def test_maltsev_preserves_and_is_affine(self):
        m = builtin("affine_maltsev", p=3)
        assert preserves(m, affine_relation(3))
        assert in_affine_clone(m, 3)

    def test_max_is_not_affine(self):
        assert not in_affine_clone(builtin("max", k=3), 3)

    def test_prime_power_domain(self):
        s = builtin("ternary_sum", d=2)
        assert in_affine_clone(s, 2, d=2)


class TestSubpowers:
    def test_generate_subpower_closure(self):
        sigma = generate_subpower([builtin("and"), builtin("or")], 2,
                                  [(0, 1), (1, 0)])
        assert sigma.tuples == ((0, 0), (0, 1), (1, 0), (1, 1))

    def test_bp_membership_yes(self, median2):
        v = bp_membership(median2, [median2], 2)
        assert v.is_yes

    def test_bp_membership_no(self, median2):
        xor = make_operation(2, 2, [0, 1, 1, 0])
        v = bp_membership(xor, [median2], 2)
        assert v.is_no
        assert "subpower" in v.certificate


class TestRigidity:
    def test_empty_generator_list_rejected(self):
        with pytest.raises(IncompleteList):
            is_rigid(make_relation(2, 2, LEQ2), [])

    def test_domain_mismatch(self):
        with pytest.raises(DomainMismatch):
            is_rigid(make_relation(2, 2, LEQ2), [builtin("max", k=3)])

    def test_order_is_not_rigid(self, median2):
        assert not is_rigid(make_relation(2, 2, LEQ2), [median2])


def test_nontrivial_equivalences_count():
    # Bell(3) - 2 = 3, Bell(4) - 2 = 13
    assert len(nontrivial_equivalences(3)) == 3
    assert len(nontrivial_equivalences(4)) == 13
