"""Unit tests for minimal-clone classification, decision, census, and the
conservative / essential-minimality criteria."""

import pytest

from cloneforge import (
    builtin,
    check_identities,
    classify_minimal_type,
    clones_equal,
    clones_similar,
    compose,
    conservative_minimal_check,
    detect_boolean_group_sum,
    enumerate_minimal_clones,
    essential_minimality_typeA,
    has_taylor_witness,
    is_minimal_clone,
    make_operation,
    make_relation,
    minimal_arity_witness,
    projection,
)
from cloneforge.errors import (
    DomainTooLarge,
    IdempotentInput,
    NotConservative,
    NotMinority,
    NotMinorsTrivial,
    PreconditionFailed,
    WrongShape,
    WrongType,
)
from cloneforge.minimal import semiprojection_target


class TestIdentities:
    def test_maltsev(self):
        assert check_identities(builtin("affine_maltsev", p=3), "maltsev")
        assert not check_identities(builtin("median", k=3), "maltsev")

    def test_majority(self, median2, dual_discriminator3, xor3):
        assert check_identities(median2, "majority")
        assert check_identities(dual_discriminator3, "majority")
        assert not check_identities(xor3, "majority")

    def test_minority(self, xor3):
        assert check_identities(xor3, "minority")
        assert check_identities(builtin("switching", k=3), "minority")

    def test_arithmetical(self):
        assert check_identities(builtin("pixley", k=3), "arithmetical")
        assert not check_identities(builtin("median", k=3), "arithmetical")

    def test_near_unanimity(self, median2):
        assert check_identities(median2, "nu")
        assert check_identities(median2, "wnu")
        assert check_identities(builtin("affine_maltsev", p=2), "wnu")

    def test_conservative(self, dual_discriminator3, webb3):
        assert check_identities(dual_discriminator3, "conservative")
        assert not check_identities(webb3, "conservative")

    def test_semiprojection_family(self, ell3):
        assert check_identities(ell3, "semiprojection(1)")
        assert check_identities(ell3, ("semiprojection", 1))
        assert not check_identities(ell3, "semiprojection(2)")

    def test_entropic(self):
        assert check_identities(builtin("affine_maltsev", p=3), "entropic")
        assert not check_identities(builtin("dual_discriminator", k=2),
                                    "entropic")


class TestClassify:
    def test_tags(self, median2, xor3, ell3, dual_discriminator3):
        assert classify_minimal_type(make_operation(2, 1, [1, 0])).tag == "unary"
        assert classify_minimal_type(builtin("and")).tag == "binary_idempotent"
        assert classify_minimal_type(median2).tag == "majority"
        assert classify_minimal_type(dual_discriminator3).tag == "majority"
        assert classify_minimal_type(xor3).tag == "minority"
        assert classify_minimal_type(builtin("pixley", k=3)).tag == "pixley_case"
        t = classify_minimal_type(ell3)
        assert (t.tag, t.index, t.arity) == ("semiprojection", 1, 3)

    def test_arity_four_semiprojection(self):
        # first-variable semiprojection, cycling on injective 4-tuples
        table = []
        for idx in range(4**4):
            args = []
            rest = idx
            for _ in range(4):
                args.append(rest % 4)
                rest //= 4
            args.reverse()
            table.append(args[0] if len(set(args)) < 4 else (args[0] + 1) % 4)
        t = classify_minimal_type(make_operation(4, 4, table))
        assert (t.tag, t.index, t.arity) == ("semiprojection", 1, 4)

    def test_rejections(self, nand, webb3):
        with pytest.raises(NotMinorsTrivial):
            classify_minimal_type(nand)  # binary but not idempotent
        max3 = make_operation(3, 3, [max(x, y, z) for x in range(3)
                                     for y in range(3) for z in range(3)])
        with pytest.raises(NotMinorsTrivial):
            classify_minimal_type(max3)

    def test_semiprojection_target(self, ell3, median2):
        assert semiprojection_target(ell3) == 1
        assert semiprojection_target(median2) is None


class TestMinorityTheorem:
    def test_xor3_is_the_z2_sum(self, xor3):
        assert detect_boolean_group_sum(xor3) == ((0, 1), (1, 0))

    def test_klein_group_sum(self):
        group = detect_boolean_group_sum(builtin("ternary_sum", d=2))
        assert group is not None
        assert group[1][2] == 3 and group[3][3] == 0

    def test_switching_is_not_a_group_sum(self):
        assert detect_boolean_group_sum(builtin("switching", k=3)) is None

    def test_requires_minority(self, median2):
        with pytest.raises(NotMinority):
            detect_boolean_group_sum(median2)


class TestMinimalArityWitness:
    def test_maltsev_drops_to_binary(self):
        v = minimal_arity_witness(builtin("affine_maltsev", p=3))
        assert v.is_yes and v.certificate["arity"] == 2
        assert v.certificate["table"] == [(2 * x + 2 * y) % 3
                                          for x in range(3) for y in range(3)]

    def test_minors_trivial_ops_are_their_own_witness(self, median2):
        v = minimal_arity_witness(median2)
        assert v.certificate["arity"] == 3
        assert tuple(v.certificate["table"]) == median2.table

    def test_projection_rejected(self):
        with pytest.raises(PreconditionFailed):
            minimal_arity_witness(projection(2, 2, 1))


class TestIsMinimalClone:
    def test_projection_rejected(self):
        with pytest.raises(PreconditionFailed):
            is_minimal_clone(projection(3, 2, 1))

    def test_unary(self):
        assert is_minimal_clone(builtin("cycle", k=3)).verdict.is_yes
        assert is_minimal_clone(builtin("const", k=2, value=0)).verdict.is_yes
        rep = is_minimal_clone(make_operation(3, 1, [2, 0, 0]))
        assert rep.verdict.is_no and rep.path == "unary-monoid"

    def test_minority(self, xor3):
        rep = is_minimal_clone(xor3)
        assert rep.verdict.is_yes and rep.path == "minority-theorem"
        rep = is_minimal_clone(builtin("switching", k=3))
        assert rep.verdict.is_no and rep.path == "minority-theorem"

    def test_majority(self, median2, dual_discriminator3):
        assert is_minimal_clone(median2).verdict.is_yes
        rep = is_minimal_clone(dual_discriminator3)
        assert rep.verdict.is_yes and rep.path == "majority-3-minimal"

    def test_binary_fast_paths(self):
        rep = is_minimal_clone(builtin("rect_band_z6"))
        assert rep.verdict.is_yes
        assert rep.verdict.certificate["law"] == "rectangular_band"
        rep = is_minimal_clone(builtin("p_cyclic", p=2))
        assert rep.verdict.certificate["law"] == "p_cyclic_groupoid"
        rep = is_minimal_clone(builtin("and"))
        assert rep.verdict.is_yes

    def test_semiprojection_jq_path(self, ell3):
        rep = is_minimal_clone(ell3)
        assert rep.verdict.is_yes and rep.path == "theorem-fast-path"

    def test_non_idempotent_binary_is_rejected_via_witness(self):
        implies = make_operation(2, 2, [1, 1, 0, 1])
        rep = is_minimal_clone(implies)
        assert rep.verdict.is_no

    def test_switching_search_witness_is_recorded(self):
        rep = is_minimal_clone(builtin("switching", k=3), method="search")
        assert rep.verdict.is_no
        assert rep.witness is not None
        assert semiprojection_target(rep.witness) is not None

    def test_low_nmax_gives_unknown(self, dual_discriminator3):
        rep = is_minimal_clone(dual_discriminator3, n_max=2, method="search")
        assert rep.verdict.is_unknown and not rep.exact


class TestCensus:
    def test_two_element_census(self):
        rep = enumerate_minimal_clones(2)
        assert rep.total_clones == 7
        assert rep.similarity_classes == 5
        assert rep.breakdown == {
            "unary": 2, "binary": 1, "majority": 1, "minority": 1,
        }
        tags = sorted(c.tag for c in rep.classes)
        assert tags == ["binary", "majority", "minority", "unary", "unary"]

    def test_census_domain_limit(self):
        with pytest.raises(DomainTooLarge):
            enumerate_minimal_clones(4)


class TestConservative:
    def test_not_conservative(self, webb3):
        with pytest.raises(NotConservative):
            conservative_minimal_check(webb3)

    def test_wrong_shape(self):
        max3 = make_operation(3, 3, [max(x, y, z) for x in range(3)
                                     for y in range(3) for z in range(3)])
        with pytest.raises(WrongShape):
            conservative_minimal_check(max3)

    def test_binary_semilattice_yes(self):
        assert conservative_minimal_check(builtin("min", k=3)).is_yes

    def test_binary_mixed_projections_no(self):
        table = [0] * 9
        for x in range(3):
            table[x * 3 + x] = x
        # {0,1} and {0,2} restrict to pr1, {1,2} to pr2
        table[0 * 3 + 1], table[1 * 3 + 0] = 0, 1
        table[0 * 3 + 2], table[2 * 3 + 0] = 0, 2
        table[1 * 3 + 2], table[2 * 3 + 1] = 2, 1
        assert conservative_minimal_check(make_operation(3, 2, table)).is_no

    def test_majority_yes(self, dual_discriminator3):
        assert conservative_minimal_check(dual_discriminator3).is_yes

    def test_semiprojection_s_rho(self):
        rho = make_relation(3, 2, [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)])
        s = builtin("s_rho", rho=rho)
        assert conservative_minimal_check(s).is_yes
        assert conservative_minimal_check(builtin("ell", k=3)).is_yes


class TestTaylor:
    def test_median_has_a_taylor_witness(self, median2):
        assert has_taylor_witness([median2]).is_yes

    def test_semiprojection_clone_has_none(self, ell3):
        v = has_taylor_witness([ell3])
        assert v.is_no


class TestEssentialMinimality:
    def test_retraction_meet_is_minimal(self):
        r = (0, 1, 0)
        table = [min(r[x], r[y]) for x in range(3) for y in range(3)]
        v = essential_minimality_typeA(make_operation(3, 2, table))
        assert v.is_yes
        assert v.certificate["branch"] == "restriction_minimal"

    def test_xor_is_type_b(self):
        xor = make_operation(2, 2, [0, 1, 1, 0])
        with pytest.raises(WrongType):
            essential_minimality_typeA(xor)

    def test_nand_is_not_essentially_minimal(self, nand):
        assert essential_minimality_typeA(nand).is_no

    def test_idempotent_rejected(self, dual_discriminator3):
        with pytest.raises(IdempotentInput):
            essential_minimality_typeA(dual_discriminator3)


class TestCloneComparison:
    def test_meet_join_not_equal_but_similar(self):
        a, o = builtin("and"), builtin("or")
        assert clones_equal(a, o).is_no
        v = clones_similar(a, o)
        assert v.is_yes and v.certificate["bijection"] == [1, 0]

    def test_variable_permutation_stays_inside(self, median2):
        permuted = compose(
            median2,
            [projection(2, 3, 2), projection(2, 3, 3), projection(2, 3, 1)],
        )
        assert clones_equal(median2, permuted).is_yes

    def test_constant_not_similar_to_negation(self):
        v = clones_similar(builtin("const", k=2, value=0), builtin("not"))
        assert v.is_no
