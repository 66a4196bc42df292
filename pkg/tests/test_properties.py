"""Property-based tests for the structural invariants the deciders rely on."""

import itertools

from hypothesis import given, settings, strategies as st

from cloneforge import (
    Operation,
    builtin,
    canonical_key,
    classify_minimal_type,
    clone_part,
    complete_bruteforce,
    conjugate,
    generates,
    is_complete,
    is_minimal_clone,
    is_sheffer,
    make_operation,
    preserves,
    slupecki,
    slupecki_membership,
)
from cloneforge.core import tuple_to_index

SETTINGS = settings(max_examples=40, deadline=None, derandomize=True)


def op_strategy(k, arity):
    return st.lists(
        st.integers(0, k - 1), min_size=k**arity, max_size=k**arity
    ).map(lambda t: make_operation(k, arity, t))


def perm_strategy(k):
    return st.permutations(list(range(k))).map(tuple)


def minors_trivial_strategy(k):
    """Ternary minors-trivial operations: fix a pattern on the repeated
    tuples, choose the injective tuples freely."""

    def build(choice):
        tag, frees = choice
        table = []
        free = iter(frees)
        for args in itertools.product(range(k), repeat=3):
            x, y, z = args
            if len(set(args)) == 3:
                table.append(next(free))
            elif tag == "majority":
                table.append(x if x in (y, z) else y)
            elif tag == "minority":
                table.append(z if x == y else (y if x == z else x))
            else:  # first-variable semiprojection
                table.append(x)
        return make_operation(k, 3, table)

    n_free = k * (k - 1) * (k - 2)
    return st.tuples(
        st.sampled_from(["majority", "minority", "semiprojection"]),
        st.lists(st.integers(0, k - 1), min_size=n_free, max_size=n_free),
    ).map(build)


class TestConjugationInvariance:
    @SETTINGS
    @given(
        ops=st.lists(op_strategy(2, 2), min_size=1, max_size=3),
        pi=perm_strategy(2),
    )
    def test_is_complete(self, ops, pi):
        before = is_complete(ops).complete
        after = is_complete([conjugate(f, pi) for f in ops]).complete
        assert before == after

    @SETTINGS
    @given(f=op_strategy(3, 2), pi=perm_strategy(3))
    def test_is_sheffer(self, f, pi):
        assert is_sheffer(f).answer == is_sheffer(conjugate(f, pi)).answer

    @SETTINGS
    @given(g=minors_trivial_strategy(3), pi=perm_strategy(3))
    def test_classify_tag(self, g, pi):
        assert (
            classify_minimal_type(g).tag
            == classify_minimal_type(conjugate(g, pi)).tag
        )

    @SETTINGS
    @given(f=op_strategy(3, 1), pi=perm_strategy(3))
    def test_canonical_key(self, f, pi):
        assert canonical_key(f) == canonical_key(conjugate(f, pi))


class TestOracleAgreement:
    @SETTINGS
    @given(ops=st.lists(op_strategy(2, 2), min_size=1, max_size=3))
    def test_is_complete_matches_bruteforce_k2(self, ops):
        assert is_complete(ops).complete == complete_bruteforce(ops)

    @settings(max_examples=60, deadline=None, derandomize=True)
    @given(f=op_strategy(3, 3))
    def test_slupecki_membership_is_preservation(self, f):
        assert slupecki_membership(f) == preserves(f, slupecki(3))


class TestClosureInvariants:
    @SETTINGS
    @given(f=op_strategy(2, 2))
    def test_part_members_are_generated(self, f):
        part = clone_part([f], 2)
        for op in part.operations():
            assert generates([f], op).is_yes

    @SETTINGS
    @given(f=op_strategy(2, 2))
    def test_identification_minor_stays_in_clone(self, f):
        diag = make_operation(
            2, 1, [f.table[tuple_to_index((x, x), 2)] for x in range(2)]
        )
        assert diag.table in set(clone_part([f], 1).ops)

    @SETTINGS
    @given(f=op_strategy(2, 2))
    def test_closure_is_idempotent(self, f):
        part = clone_part([f], 2)
        again = clone_part(part.operations(), 2)
        assert set(part.ops) == set(again.ops)


class TestMinimalityInvariants:
    @SETTINGS
    @given(g=minors_trivial_strategy(3), pi=perm_strategy(3))
    def test_minimality_is_conjugation_invariant(self, g, pi):
        a = is_minimal_clone(g).verdict.answer
        b = is_minimal_clone(conjugate(g, pi)).verdict.answer
        assert a == b

    @settings(max_examples=15, deadline=None, derandomize=True)
    @given(g=minors_trivial_strategy(3))
    def test_auto_path_matches_bounded_search(self, g):
        auto = is_minimal_clone(g)
        search = is_minimal_clone(g, method="search")
        assert auto.verdict.answer == search.verdict.answer

    def test_affine_fast_path_confirmed_by_search(self):
        g = make_operation(3, 2, [(2 * x + 2 * y) % 3
                                  for x in range(3) for y in range(3)])
        fast = is_minimal_clone(g)
        assert fast.verdict.is_yes and fast.path == "theorem-fast-path"
        search = is_minimal_clone(g, method="search")
        assert search.verdict.is_yes and search.exact

    def test_majority_path_matches_search(self):
        for name in ("median", "dual_discriminator"):
            g = builtin(name, k=3)
            assert (
                is_minimal_clone(g).verdict.answer
                == is_minimal_clone(g, method="search").verdict.answer
            )


class TestStability:
    def test_semiprojection_clone_has_trivial_lower_parts(self, ell3):
        # no non-projection of arity < 3 in Clo(ell)
        assert len(clone_part([ell3], 1).non_projections()) == 0
        assert len(clone_part([ell3], 2).non_projections()) == 0

    def test_majority_clone_ternary_part_is_all_majority(
        self, median2, dual_discriminator3
    ):
        from cloneforge import check_identities

        for g in (median2, dual_discriminator3):
            for op in clone_part([g], 3).non_projections():
                assert check_identities(op, "majority")
