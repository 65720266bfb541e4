"""Declarative group construction: named families, presented groups, matrix
groups, semidirect products of a vector group by a matrix group, and the
bounded subgroup search used to locate catalog subgroups.

Every GroupSpec constructs deterministically; rebuilding the same spec gives
the same handle data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .arith import is_prime
from .caps import Caps, DEFAULT_CAPS
from .errors import InputError, NotFoundError
from .gfmatrix import (
    Matrix,
    affine_perm,
    linear_group_generators,
    mat_det,
    matrix_to_perm,
    normalize_matrix,
    perm_to_matrix,
    validate_action_parameters,
)
from .groups import GroupHandle, build_group, center, trivial_group
from .perms import Perm, parse_cycles

SPEC_KINDS = (
    "cyclic",
    "elementary_abelian",
    "symmetric",
    "alternating",
    "dihedral",
    "quaternion8",
    "permutations",
    "presentation",
    "matrix_group",
    "vector_semidirect",
    "subgroup_search",
    "direct_product",
)


@dataclass(frozen=True)
class GroupSpec:
    """A construction recipe; `params` are kind-specific and JSON-friendly."""

    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in SPEC_KINDS:
            raise InputError(f"unknown spec kind {self.kind!r}")

    def describe(self) -> str:
        inner = ", ".join(f"{k}={v!r}" for k, v in sorted(self.params.items()))
        return f"{self.kind}({inner})"


def spec_from_dict(data: dict) -> GroupSpec:
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError("spec must be an object with a 'kind' field")
    params = {k: v for k, v in data.items() if k != "kind"}
    for nested in ("action", "inside"):
        if nested in params:
            params[nested] = spec_from_dict(params[nested])
    if "factors" in params:
        params["factors"] = tuple(spec_from_dict(f) for f in params["factors"])
    return GroupSpec(data["kind"], params)


def spec_to_dict(spec: GroupSpec) -> dict:
    out: dict[str, Any] = {"kind": spec.kind}
    for key, value in spec.params.items():
        if isinstance(value, GroupSpec):
            out[key] = spec_to_dict(value)
        elif key == "factors":
            out[key] = [spec_to_dict(f) for f in value]
        else:
            out[key] = value
    return out


def _need(params: dict, key: str, kind: str):
    if key not in params:
        raise InputError(f"{kind}: missing parameter {key!r}")
    return params[key]


def _int_param(params: dict, key: str, kind: str, minimum: int = 1) -> int:
    value = _need(params, key, kind)
    if not isinstance(value, int) or value < minimum:
        raise InputError(f"{kind}: parameter {key!r} must be an integer >= {minimum}")
    return value


def cyclic(n: int) -> GroupHandle:
    if n == 1:
        return trivial_group(1)
    gen = Perm([(i + 1) % n for i in range(n)])
    return build_group([gen], label=f"Z{n}")


def elementary_abelian(p: int, k: int) -> GroupHandle:
    if not is_prime(p):
        raise InputError(f"elementary_abelian: p={p} is not prime")
    gens = []
    degree = p * k
    for block in range(k):
        images = list(range(degree))
        for i in range(p):
            images[block * p + i] = block * p + (i + 1) % p
        gens.append(Perm(images))
    if not gens:
        return trivial_group(1)
    return build_group(gens, degree=degree, label=f"E{p ** k}")


def symmetric(n: int) -> GroupHandle:
    if n <= 1:
        return trivial_group(max(n, 1))
    gens = [Perm([(i + 1) % n for i in range(n)])]
    if n > 2:
        gens.append(parse_cycles("(0 1)", n))
    return build_group(gens, degree=n, label=f"S{n}")


def alternating(n: int) -> GroupHandle:
    if n <= 2:
        return trivial_group(max(n, 1))
    if n == 3:
        return build_group([parse_cycles("(0 1 2)", 3)], label="A3")
    three = parse_cycles("(0 1 2)", n)
    if n % 2 == 1:
        big = Perm([(i + 1) % n for i in range(n)])
    else:
        big = Perm([0] + [1 + (i + 1) % (n - 1) for i in range(n - 1)])
    return build_group([three, big], degree=n, label=f"A{n}")


def dihedral(order: int) -> GroupHandle:
    if order % 2 != 0 or order < 2:
        raise InputError(f"dihedral: order must be even and >= 2, got {order}")
    m = order // 2
    if m == 1:
        return cyclic(2)
    if m == 2:
        return build_group(
            [parse_cycles("(0 1)", 4), parse_cycles("(2 3)", 4)], label="Z2xZ2"
        )
    rot = Perm([(i + 1) % m for i in range(m)])
    flip = Perm([(m - i) % m for i in range(m)])
    return build_group([rot, flip], degree=m, label=f"D{order}")


def quaternion8() -> GroupHandle:
    # regular image with elements ordered 1, i, -1, -i, j, ij, -j, -ij
    a = parse_cycles("(0 1 2 3)(4 7 6 5)", 8)
    b = parse_cycles("(0 4 2 6)(1 5 3 7)", 8)
    return build_group([a, b], label="Q8")


def direct_product(factors: list[GroupHandle], label: str | None = None) -> GroupHandle:
    if not factors:
        return trivial_group(1)
    degree = sum(f.degree for f in factors)
    gens = []
    offset = 0
    for f in factors:
        for g in f.generators:
            images = list(range(degree))
            for i, j in enumerate(g.images):
                images[offset + i] = offset + j
            gens.append(Perm(images))
        offset += f.degree
    label = label or " x ".join(f.label or "?" for f in factors)
    handle = build_group(gens, degree=degree, label=label)
    return handle


def matrix_group(
    n: int,
    p: int,
    generators: list[Matrix] | str,
    caps: Caps = DEFAULT_CAPS,
) -> GroupHandle:
    """Faithful permutation image on the nonzero vectors of GF(p)^n.

    `generators` is either the literal matrix list or one of the family
    names 'GL' / 'SL'.
    """
    validate_action_parameters(n, p)
    if isinstance(generators, str):
        family = generators
        mats = linear_group_generators(family, n, p)
        label = f"{family}({n},{p})"
    else:
        mats = [normalize_matrix(m, p) for m in generators]
        for m in mats:
            if len(m) != n:
                raise InputError(f"matrix_group: generator has size {len(m)}, expected {n}")
            if mat_det(m, p) == 0:
                raise InputError(f"matrix_group: singular generator {m!r}")
        label = f"mat({n},{p})"
    perms = [matrix_to_perm(m, p) for m in mats]
    return build_group(
        perms,
        degree=p**n - 1,
        label=label,
        meta={"action": "gf-vectors", "p": p, "n": n},
    )


def _matrix_action_parameters(M: GroupHandle) -> tuple[int, int]:
    probe = M
    while probe is not None:
        if probe.meta.get("action") == "gf-vectors":
            return probe.meta["p"], probe.meta["n"]
        probe = probe.parent
    raise InputError(
        "vector_semidirect: matrix part does not descend from matrix_group"
    )


def vector_semidirect(
    p: int, n: int, M: GroupHandle, label: str | None = None
) -> GroupHandle:
    """[E_{p^n}] M as the affine action on the p^n vectors of GF(p)^n."""
    mp, mn = _matrix_action_parameters(M)
    if (mp, mn) != (p, n):
        raise InputError(
            f"vector_semidirect: matrix part acts on GF({mp})^{mn}, expected GF({p})^{n}"
        )
    gens = []
    zero = tuple(0 for _ in range(n))
    for g in M.generators:
        m = perm_to_matrix(g, p, n)
        if matrix_to_perm(m, p) != g:
            raise InputError("vector_semidirect: matrix part is not a linear action")
        gens.append(affine_perm(m, zero, p))
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    for i in range(n):
        shift = tuple(1 if j == i else 0 for j in range(n))
        gens.append(affine_perm(ident, shift, p))
    handle = build_group(
        gens,
        degree=p**n,
        label=label or f"[E{p ** n}]{M.label or 'M'}",
        meta={"affine": True, "p": p, "n": n},
    )
    if handle.order != p**n * M.order:
        raise InputError(
            f"vector_semidirect: order {handle.order} != {p ** n} * {M.order}"
        )
    return handle


def find_subgroup_by_order_and_quotient(
    A: GroupHandle,
    target_order: int,
    center_sub_order: int,
    quotient_recognizer: str,
    caps: Caps = DEFAULT_CAPS,
) -> GroupHandle:
    """Find S <= A with |S| = target_order, containing the designated central
    subgroup C of the stated order, such that S/C matches the recognizer.

    The search runs a bounded cyclic-extension walk seeded at C and restricted
    to subgroups whose order divides the target, so the ambient lattice is
    never needed.  Deterministic: candidates are processed in (order,
    element-list) order and the first match wins.
    """
    from .lattice import _extension_candidates, _SubgroupOrbits  # no cycle: lattice is handle-only
    from .invariants import recognize_small
    from .groups import quotient as quotient_map

    if target_order <= 0 or A.order % target_order != 0:
        raise NotFoundError(
            f"no subgroup of order {target_order}: it does not divide {A.order}"
        )
    Z = center(A, caps)
    if center_sub_order == 1:
        C = trivial_group(A.degree, parent=A)
    else:
        if Z.order % center_sub_order != 0:
            raise NotFoundError(
                f"center has order {Z.order}; no central subgroup of order {center_sub_order}"
            )
        C = None
        for z in Z.element_list(caps):
            if z.order() == center_sub_order:
                C = build_group([z], degree=A.degree, parent=A, label="C")
                break
        if C is None:
            raise NotFoundError(
                f"no cyclic central subgroup of order {center_sub_order}"
            )
    if target_order % C.order != 0:
        raise NotFoundError(
            f"central subgroup order {C.order} does not divide target {target_order}"
        )

    orbits = _SubgroupOrbits(A, caps)
    seed = orbits.class_of(C)
    worklist = [seed]
    matches: list[GroupHandle] = []
    seen_orders_done = False
    while worklist:
        worklist.sort(key=lambda cls: (cls.order, cls.rep_key))
        cls = worklist.pop(0)
        if cls.order == target_order:
            matches.append(cls.representative)
            continue
        for K in _extension_candidates(A, cls.representative, orbits, caps):
            if target_order % K.order != 0:
                continue
            new_cls = orbits.register(K)
            if new_cls is not None:
                worklist.append(new_cls)
    matches.sort(key=lambda H: sorted(g.images for g in H.element_list(caps)))
    for S in matches:
        qm = quotient_map(S, C, caps)
        if recognize_small(qm.image, caps) == quotient_recognizer:
            S.label = f"S{target_order}"
            return S
    raise NotFoundError(
        f"no subgroup of order {target_order} over C with quotient {quotient_recognizer!r}"
    )


def construct(spec: GroupSpec, caps: Caps = DEFAULT_CAPS) -> GroupHandle:
    """Build the group a spec describes; errors name the offending field."""
    kind, params = spec.kind, spec.params
    if kind == "cyclic":
        return cyclic(_int_param(params, "n", kind))
    if kind == "elementary_abelian":
        p = _int_param(params, "p", kind, 2)
        k = _int_param(params, "k", kind)
        return elementary_abelian(p, k)
    if kind == "symmetric":
        return symmetric(_int_param(params, "n", kind))
    if kind == "alternating":
        return alternating(_int_param(params, "n", kind))
    if kind == "dihedral":
        return dihedral(_int_param(params, "order", kind, 2))
    if kind == "quaternion8":
        return quaternion8()
    if kind == "permutations":
        degree = _int_param(params, "degree", kind)
        raw = _need(params, "gens", kind)
        gens = []
        for item in raw:
            if isinstance(item, str):
                gens.append(parse_cycles(item, degree))
            else:
                gens.append(Perm(item))
        label = params.get("label") or "perm-group"
        return build_group(gens, degree=degree, label=label)
    if kind == "presentation":
        from .presentations import coset_enumerate, parse_presentation

        pres = parse_presentation(_need(params, "text", kind))
        subgroup = [pres.parse_word(w) for w in params.get("subgroup", [])]
        table = coset_enumerate(pres, subgroup, caps)
        return table.group(params.get("label") or "presented")
    if kind == "matrix_group":
        n = _int_param(params, "n", kind)
        p = _int_param(params, "p", kind, 2)
        gens = params.get("family") or _need(params, "generators", kind)
        return matrix_group(n, p, gens, caps)
    if kind == "vector_semidirect":
        p = _int_param(params, "p", kind, 2)
        n = _int_param(params, "n", kind)
        M = construct(_need(params, "action", kind), caps)
        return vector_semidirect(p, n, M, params.get("label"))
    if kind == "subgroup_search":
        A = construct(_need(params, "inside", kind), caps)
        return find_subgroup_by_order_and_quotient(
            A,
            _int_param(params, "order", kind),
            _int_param(params, "central_order", kind),
            _need(params, "quotient", kind),
            caps,
        )
    if kind == "direct_product":
        factors = [construct(f, caps) for f in _need(params, "factors", kind)]
        return direct_product(factors, params.get("label"))
    raise InputError(f"unknown spec kind {kind!r}")
