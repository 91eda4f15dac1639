import math

import pytest

from bmwgroups.errors import ResourceError
from bmwgroups.perm import Permutation
from bmwgroups.permgroup import (
    PermutationGroup,
    contains_alternating,
    group_order,
    is_primitive,
    is_transitive,
    is_two_transitive,
    schreier_analysis,
)
from bmwgroups.rng import RngState

from .oracles import (
    closure_order,
    is_primitive_by_partition_scan,
    is_two_transitive_by_closure,
)


def cyc(n, *cycles):
    return Permutation.from_cycles(n, cycles)


def group(n, *perms):
    return PermutationGroup(n, perms)


def _random_perm(degree, rng):
    images = list(range(1, degree + 1))
    for i in range(degree - 1, 0, -1):
        j = rng.randbelow(i + 1)
        images[i], images[j] = images[j], images[i]
    return Permutation(images)


SYM5 = group(5, cyc(5, (1, 2)), cyc(5, (1, 2, 3, 4, 5)))
KLEIN = group(4, cyc(4, (1, 2), (3, 4)), cyc(4, (1, 3), (2, 4)))
DIHEDRAL4 = group(4, cyc(4, (1, 2, 3, 4)), cyc(4, (1, 3)))


class TestOrder:
    def test_sym5(self):
        assert group_order(SYM5) == 120 == closure_order(SYM5.generators)

    def test_klein(self):
        assert group_order(KLEIN) == 4 == closure_order(KLEIN.generators)

    def test_trivial(self):
        assert group_order(group(3, Permutation.identity(3))) == 1

    def test_guard(self):
        gen = Permutation.transposition(3000, 1, 2)
        with pytest.raises(ResourceError):
            PermutationGroup(3000, [gen]).order()

    def test_random_groups_match_closure(self):
        rng = RngState(31)
        for degree in (4, 5, 6, 7):
            for _ in range(10):
                gens = [_random_perm(degree, rng) for _ in range(2)]
                g = PermutationGroup(degree, gens)
                assert group_order(g) == closure_order(gens)

    def test_order_divides_factorial_and_gen_orders_divide(self):
        rng = RngState(77)
        for _ in range(25):
            degree = 4 + rng.randbelow(4)
            gens = [_random_perm(degree, rng) for _ in range(2)]
            g = PermutationGroup(degree, gens)
            order = group_order(g)
            assert math.factorial(degree) % order == 0
            for gen in gens:
                k = 1
                power = gen
                while not power.is_identity():
                    power = power * gen
                    k += 1
                assert order % k == 0


class TestTransitivity:
    def test_examples(self):
        assert is_transitive(SYM5)
        assert is_transitive(KLEIN)
        assert not is_transitive(group(4, cyc(4, (1, 2))))

    def test_two_transitive_examples(self):
        assert is_two_transitive(group(3, cyc(3, (1, 2)), cyc(3, (1, 2, 3))))
        assert not is_two_transitive(group(3, cyc(3, (1, 2, 3))))
        assert not is_two_transitive(DIHEDRAL4)

    def test_two_transitive_matches_closure_oracle(self):
        rng = RngState(13)
        for _ in range(20):
            degree = 4 + rng.randbelow(3)
            gens = [_random_perm(degree, rng) for _ in range(2)]
            got = is_two_transitive(PermutationGroup(degree, gens))
            assert got == is_two_transitive_by_closure(gens, degree)


class TestPrimitivity:
    def test_examples(self):
        assert not is_primitive(KLEIN)
        assert is_primitive(group(4, cyc(4, (1, 2)), cyc(4, (1, 2, 3, 4))))
        assert not is_primitive(DIHEDRAL4)

    def test_block_witnesses(self):
        assert KLEIN.minimal_block_with(2) == frozenset({1, 2})
        assert DIHEDRAL4.minimal_block_with(3) == frozenset({1, 3})

    def test_intransitive_is_false(self):
        assert not is_primitive(group(4, cyc(4, (1, 2))))

    def test_matches_partition_scan_oracle(self):
        rng = RngState(29)
        for _ in range(20):
            degree = 4 + rng.randbelow(3)
            gens = [_random_perm(degree, rng) for _ in range(2)]
            g = PermutationGroup(degree, gens)
            if not is_transitive(g):
                assert not is_primitive(g)
                continue
            assert is_primitive(g) == is_primitive_by_partition_scan(gens, degree)

    def test_implication_chain(self):
        rng = RngState(41)
        for _ in range(40):
            degree = 3 + rng.randbelow(5)
            g = PermutationGroup(degree, [_random_perm(degree, rng), cyc(degree, (1, 2))])
            two_t = is_two_transitive(g)
            prim = is_primitive(g)
            trans = is_transitive(g)
            if two_t:
                assert prim
            if prim:
                assert trans


class TestAlternatingRecognition:
    def test_sym7_exact(self):
        g = group(7, cyc(7, (1, 2)), cyc(7, (1, 2, 3, 4, 5, 6, 7)))
        assert contains_alternating(g, "exact") is True
        assert group_order(g) == math.factorial(7)

    def test_klein_exact_false(self):
        assert contains_alternating(KLEIN, "exact") is False

    def test_small_degree_brute(self):
        assert contains_alternating(group(3, cyc(3, (1, 2, 3))), "exact") is True
        assert contains_alternating(group(4, cyc(4, (1, 2))), "exact") is False
        assert (
            contains_alternating(group(4, cyc(4, (1, 2, 3)), cyc(4, (2, 3, 4))), "exact")
            is True
        )

    def test_alt_itself(self):
        alt5 = group(5, cyc(5, (1, 2, 3)), cyc(5, (3, 4, 5)))
        assert contains_alternating(alt5, "exact") is True
        assert group_order(alt5) == 60

    def test_jordan_intransitive_false(self):
        assert contains_alternating(group(6, cyc(6, (1, 2))), "jordan") is False

    def test_jordan_on_symmetric_groups(self):
        for degree in (8, 24, 60, 150):
            g = group(
                degree,
                Permutation.transposition(degree, 1, 2),
                Permutation.from_cycles(degree, [tuple(range(1, degree + 1))]),
            )
            assert contains_alternating(g, "jordan", rng=RngState(4)) is True

    def test_jordan_implies_exact(self):
        # agreement whenever both strategies run, sampled across degrees
        rng = RngState(55)
        for degree in (8, 12, 30, 60):
            gens = [_random_perm(degree, rng) for _ in range(2)]
            g = PermutationGroup(degree, gens)
            verdict = contains_alternating(g, "jordan", rng=RngState(degree))
            if verdict is True:
                g2 = PermutationGroup(degree, gens)
                assert contains_alternating(g2, "exact") is True

    def test_jordan_never_false_positive_on_imprimitive(self):
        # wreath-like imprimitive transitive group on 8 points
        g = group(
            8,
            cyc(8, (1, 2, 3, 4)),
            cyc(8, (5, 6, 7, 8)),
            cyc(8, (1, 5), (2, 6), (3, 7), (4, 8)),
        )
        assert contains_alternating(g, "jordan", rng=RngState(9)) in (None, False)
        assert contains_alternating(g, "exact") is False


class TestClassify:
    def test_exact_classification(self):
        cls = SYM5.classify("exact")
        assert cls.method == "exact"
        assert cls.order == 120
        assert cls.equals_symmetric is True
        assert cls.contains_alternating is True
        assert cls.is_two_transitive is True
        d = cls.to_dict()
        assert d["order"] == 120 and d["equals_symmetric"] is True

    def test_jordan_classification_parity_refinement(self):
        # generated by odd permutations; alternating containment implies full Sym
        degree = 150
        g = group(
            degree,
            Permutation.transposition(degree, 1, 2),
            Permutation.from_cycles(degree, [tuple(range(1, degree + 1))]),
        )
        cls = g.classify("jordan", rng=RngState(8))
        assert cls.method == "jordan"
        assert cls.contains_alternating is True
        assert cls.equals_symmetric is True
        assert cls.is_two_transitive is True and cls.is_primitive is True
        assert cls.order is None
        assert g.classify("jordan").to_dict()["order"] == "unknown"

    def test_all_even_generators_rule_out_symmetric(self):
        alt6 = group(6, cyc(6, (1, 2, 3)), cyc(6, (2, 3, 4, 5, 6)))
        cls = alt6.classify("jordan", rng=RngState(3))
        assert cls.equals_symmetric is False

    def test_invariant_two_transitive_implies_primitive_implies_transitive(self):
        for g in (SYM5, KLEIN, DIHEDRAL4):
            cls = g.classify("exact")
            if cls.is_two_transitive:
                assert cls.is_primitive
            if cls.is_primitive:
                assert cls.is_transitive


class TestSchreierAnalysis:
    def test_single_edge(self):
        res = schreier_analysis([cyc(2, (1, 2))], [1, 2])
        assert res.connected and res.bipartite
        assert res.loops == ()

    def test_two_components(self):
        res = schreier_analysis([cyc(4, (1, 2)), cyc(4, (3, 4))], [1, 2, 3, 4])
        assert not res.connected
        assert res.bipartite  # loops are tracked separately, not as coloring obstructions
        assert len(res.loops) == 4

    def test_triangle_not_bipartite_with_witness(self):
        res = schreier_analysis([cyc(3, (1, 2)), cyc(3, (2, 3)), cyc(3, (1, 3))], [1, 2, 3])
        assert res.connected and not res.bipartite
        walk = res.odd_cycle
        assert walk[0] == walk[-1]
        assert (len(walk) - 1) % 2 == 1
        edges = set(res.edges)
        for u, v in zip(walk, walk[1:]):
            assert (min(u, v), max(u, v)) in edges

    def test_domain_invariance_required(self):
        from bmwgroups.errors import RangeError

        with pytest.raises(RangeError):
            schreier_analysis([cyc(4, (2, 3))], [1, 2])
