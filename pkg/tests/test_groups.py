import random

import pytest

from grouplab import (
    InputError,
    Perm,
    PreconditionError,
    ResourceLimitError,
    build_group,
    center,
    centralizer,
    commutator_subgroup,
    conjugacy_classes,
    contains,
    derived_subgroup,
    enumerate_elements,
    intersection,
    join,
    normal_closure,
    parse_cycles,
    quotient,
    trivial_group,
)
from grouplab.caps import Caps
from grouplab.groups import (
    _intersection_backtrack,
    coset_representative,
    is_normal_in,
    same_subgroup,
)

from bruteforce import closure, conjugation_classes, set_product_size


def sym(n):
    cyc = parse_cycles("(" + " ".join(map(str, range(n))) + ")", n)
    return build_group([cyc, parse_cycles("(0 1)", n)], label=f"S{n}")


def s4():
    return sym(4)


def q8():
    # regular image of the quaternion group; i -> a, j -> b
    a = parse_cycles("(0 1 2 3)(4 7 6 5)", 8)
    b = parse_cycles("(0 4 2 6)(1 5 3 7)", 8)
    return build_group([a, b], label="Q8")


def test_build_s4_order():
    assert s4().order == 24


def test_empty_generators_give_trivial_group():
    G = trivial_group(5)
    assert G.order == 1
    assert list(enumerate_elements(G)) == [Perm.identity(5)]


def test_mixed_degree_rejected():
    with pytest.raises(InputError):
        build_group([parse_cycles("(0 1)", 3), parse_cycles("(0 1)", 4)])


def test_build_is_deterministic():
    gens = [parse_cycles("(0 1 2 3)", 4), parse_cycles("(0 1)", 4)]
    G1, G2 = build_group(gens), build_group(gens)
    assert G1.order == G2.order
    assert G1.chain.base() == G2.chain.base()
    assert list(G1.element_list()) == list(G2.element_list())


def test_membership_matches_exhaustive_closure():
    G = s4()
    brute = closure(list(G.generators), 4)
    assert G.order == len(brute)
    odd = parse_cycles("(0 1)", 4)
    A4 = derived_subgroup(G)
    assert contains(G, odd)
    assert not contains(A4, odd)
    for g in brute:
        assert contains(G, g)


def test_contains_checks_degree():
    with pytest.raises(InputError):
        contains(s4(), parse_cycles("(0 1)", 5))


def test_enumerate_exactly_once():
    G = s4()
    elements = list(enumerate_elements(G))
    assert len(elements) == 24
    assert len(set(elements)) == 24


def test_enumeration_cap():
    G = sym(8)
    with pytest.raises(ResourceLimitError) as exc:
        enumerate_elements(G, caps=Caps(enumeration=1000))
    assert "enumeration" in str(exc.value)


def test_conjugacy_classes_s4():
    cc = conjugacy_classes(s4())
    assert sorted(cc.sizes) == [1, 3, 6, 6, 8]
    assert sum(cc.sizes) == 24


def test_conjugacy_classes_q8():
    cc = conjugacy_classes(q8())
    assert len(cc.sizes) == 5
    assert sum(cc.sizes) == 8


def test_conjugacy_classes_match_bruteforce():
    G = s4()
    mine = sorted(cc_size for cc_size in conjugacy_classes(G).sizes)
    brute = sorted(len(c) for c in conjugation_classes(set(G.element_list())))
    assert mine == brute


def test_abelian_group_classes_are_singletons():
    G = build_group([parse_cycles("(0 1 2 3 4)", 5)])
    cc = conjugacy_classes(G)
    assert cc.sizes == [1] * 5


def test_center_s4_trivial_and_q8_order_2():
    assert center(s4()).order == 1
    assert center(q8()).order == 2


def test_centralizer_of_empty_set_is_group():
    G = s4()
    C = centralizer(G, [])
    assert same_subgroup(C, G)


def test_centralizer_requires_membership():
    A4 = derived_subgroup(s4())
    with pytest.raises(InputError):
        centralizer(A4, [Perm([1, 0, 2, 3])])  # a transposition is not in A4


def test_normal_closure_cases():
    G = s4()
    assert normal_closure(G, [parse_cycles("(0 1)", 4)]).order == 24
    V4 = normal_closure(G, [parse_cycles("(0 1)(2 3)", 4)])
    assert V4.order == 4
    assert is_normal_in(V4, G)
    Z = center(q8())
    closure_of_central = normal_closure(q8(), list(Z.generators))
    assert closure_of_central.order == 2


def test_derived_series_s4():
    G = s4()
    A4 = derived_subgroup(G)
    assert A4.order == 12
    V4 = derived_subgroup(A4)
    assert V4.order == 4
    assert derived_subgroup(V4).order == 1


def test_derived_of_abelian_is_trivial():
    G = build_group([parse_cycles("(0 1 2)", 6), parse_cycles("(3 4)", 6)])
    assert derived_subgroup(G).order == 1


def test_commutator_subgroup_of_disjoint_supports():
    A = build_group([parse_cycles("(0 1)", 4)])
    B = build_group([parse_cycles("(2 3)", 4)])
    assert commutator_subgroup(A, B).order == 1


def test_intersection_and_join():
    G = s4()
    A = build_group([parse_cycles("(0 1)", 4)], parent=G)
    B = build_group([parse_cycles("(2 3)", 4)], parent=G)
    assert intersection(A, B).order == 1
    assert join(A, B).order == 4
    A4 = derived_subgroup(G)
    assert same_subgroup(intersection(A4, A4), A4)
    assert same_subgroup(join(A4, A4), A4)


def test_product_formula_on_random_pairs():
    G = s4()
    rng = random.Random(42)
    elements = list(G.element_list())
    for _ in range(25):
        A = build_group(rng.sample(elements, 2), degree=4)
        B = build_group(rng.sample(elements, 2), degree=4)
        inter = intersection(A, B)
        size = set_product_size(set(A.element_list()), set(B.element_list()))
        assert size == A.order * B.order // inter.order


def test_backtrack_intersection_agrees_with_filtering():
    G = sym(6)
    rng = random.Random(3)
    elements = list(G.element_list())
    for _ in range(15):
        A = build_group(rng.sample(elements, 2), degree=6)
        B = build_group(rng.sample(elements, 2), degree=6)
        small, big = (A, B) if A.order <= B.order else (B, A)
        assert _intersection_backtrack(small, big).order == intersection(A, B).order


def test_quotient_s4_by_v4():
    G = s4()
    V4 = normal_closure(G, [parse_cycles("(0 1)(2 3)", 4)])
    qm = quotient(G, V4)
    assert qm.image.order == 6
    assert qm.image.degree == 6
    assert center(qm.image).order == 1  # the image is S3
    # homomorphism on generator pairs
    for a in G.generators:
        for b in G.generators:
            assert qm.apply(a * b) == qm.apply(a) * qm.apply(b)
    # kernel maps to the identity
    for n in V4.generators:
        assert qm.apply(n).is_identity()


def test_quotient_by_self_is_trivial():
    G = s4()
    qm = quotient(G, G)
    assert qm.image.order == 1


def test_quotient_by_trivial_subgroup_is_identity_map():
    G = s4()
    qm = quotient(G, trivial_group(4))
    assert qm.image is G
    g = parse_cycles("(0 1 2)", 4)
    assert qm.apply(g) == g


def test_quotient_requires_normality():
    G = s4()
    H = build_group([parse_cycles("(0 1)", 4)], parent=G)
    with pytest.raises(PreconditionError):
        quotient(G, H)


def test_quotient_degree_cap():
    G = sym(7)
    with pytest.raises(ResourceLimitError):
        quotient(G, trivial_group(7), caps=Caps(quotient_degree=100, enumeration=10))


def test_coset_representative_constant_on_cosets():
    G = s4()
    V4 = normal_closure(G, [parse_cycles("(0 1)(2 3)", 4)])
    for g in G.element_list():
        rep = coset_representative(V4, g)
        for n in V4.element_list():
            assert coset_representative(V4, n * g) == rep


def test_lagrange_for_subgroup_handles():
    G = s4()
    for gens in [["(0 1)"], ["(0 1 2)"], ["(0 1 2 3)"], ["(0 1)(2 3)", "(0 2)(1 3)"]]:
        H = build_group([parse_cycles(t, 4) for t in gens], parent=G)
        assert G.order % H.order == 0
