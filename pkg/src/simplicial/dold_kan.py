"""Truncated simplicial modules, the Dold-Kan functors and derived exterior powers.

K(C)_n is the direct sum of one copy of C_k per monotone surjection
σ : [n] -> [k]. For a monotone θ : [m] -> [n], write σθ = μτ with τ
surjective and μ injective. On the summand σ, θ* is

    the identity C_k -> (summand τ)   when μ is the identity,
    d_k : C_k -> C_{k-1} -> (summand τ) when μ = δ_0 (image {1..k}),
    zero                               otherwise.

Two normalizations are provided. normalize() is the kernel form
N_n = ∩_{i>=1} ker d_i with differential d_0, and derived_exterior_power()
uses it. When the degeneracies send basis vectors to signed basis vectors
(true for K(C) and for every levelwise exterior power of it), X_n = N_n ⊕ D_n
with D_n spanned by the degenerate basis vectors, so N_n stays free over the
base ring with one basis vector per nondegenerate one.
normalize_modulo_degeneracies() reads the isomorphic quotient X_n / D_n off
the nondegenerate basis, with differential Σ (-1)^i d_i, and serves as a
cross-check.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from src.errors import SimplicialIdentityError, TruncationError
from src.linalg.integer import integer_kernel, lattice_coordinates
from src.linalg.matrix import Mat
from src.simplicial.complexes import ChainComplex, homology
from src.simplicial.rings import BaseRing, Element, FreeModuleMap

logger = logging.getLogger(__name__)

DEFAULT_TRUNCATION_GUARD = 2

Monotone = tuple[int, ...]


@dataclass(frozen=True)
class SimplicialModule:
    ring: BaseRing
    truncation_degree: int
    level_ranks: tuple[int, ...]
    # faces[n] = (d_0, ..., d_n) : X_n -> X_{n-1}; faces[0] is empty
    faces: tuple[tuple[FreeModuleMap, ...], ...]
    # degeneracies[n] = (s_0, ..., s_n) : X_n -> X_{n+1}, n < truncation_degree
    degeneracies: tuple[tuple[FreeModuleMap, ...], ...]


# --- the simplex category ---


def surjections(n: int, k: int) -> list[Monotone]:
    """Monotone surjections [n] -> [k] as value tuples, ordered by their jump positions."""
    result = []
    for jumps in combinations(range(n), k):
        values = []
        level = 0
        for i in range(n + 1):
            if i > 0 and (i - 1) in jumps:
                level += 1
            values.append(level)
        result.append(tuple(values))
    return result


def coface(n: int, i: int) -> Monotone:
    """δ_i : [n-1] -> [n], skipping i."""
    return tuple(j if j < i else j + 1 for j in range(n))


def codegeneracy(n: int, i: int) -> Monotone:
    """σ_i : [n+1] -> [n], hitting i twice."""
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


def _epi_mono(composite: Monotone) -> tuple[Monotone, list[int]]:
    image = sorted(set(composite))
    tau = tuple(image.index(c) for c in composite)
    return tau, image


# --- K ---


class _Level:
    """Summand bookkeeping of K(C)_n."""

    def __init__(self, complex_: ChainComplex, n: int) -> None:
        self.summands: list[tuple[Monotone, int]] = []
        self.offset: dict[Monotone, int] = {}
        position = 0
        for k in range(min(n, complex_.top_degree) + 1):
            for sigma in surjections(n, k):
                self.summands.append((sigma, k))
                self.offset[sigma] = position
                position += complex_.ranks[k]
        self.rank = position


def _operator(complex_: ChainComplex, source: _Level, target: _Level, theta: Monotone) -> FreeModuleMap:
    """θ* : K(C)_n -> K(C)_m for θ : [m] -> [n]."""
    ring = complex_.ring
    rows = [[ring.zero] * source.rank for _ in range(target.rank)]
    for sigma, k in source.summands:
        tau, image = _epi_mono(tuple(sigma[t] for t in theta))
        col0 = source.offset[sigma]
        row0 = target.offset[tau]
        if image == list(range(k + 1)):
            for a in range(complex_.ranks[k]):
                rows[row0 + a][col0 + a] = ring.one
        elif k >= 1 and image == list(range(1, k + 1)):
            d = complex_.differential(k)
            for a in range(d.codomain_rank):
                for b in range(d.domain_rank):
                    rows[row0 + a][col0 + b] = d[a, b]
    return FreeModuleMap(ring, source.rank, target.rank, tuple(tuple(r) for r in rows))


def dold_kan_K(complex_: ChainComplex, truncation: int) -> SimplicialModule:
    """K(C) in levels 0..truncation."""
    levels = [_Level(complex_, n) for n in range(truncation + 1)]
    faces = [()]
    for n in range(1, truncation + 1):
        faces.append(tuple(_operator(complex_, levels[n], levels[n - 1], coface(n, i)) for i in range(n + 1)))
    degeneracies = [
        tuple(_operator(complex_, levels[n], levels[n + 1], codegeneracy(n, i)) for i in range(n + 1))
        for n in range(truncation)
    ]
    logger.debug("K(C) level ranks: %s", [lv.rank for lv in levels])
    return SimplicialModule(
        complex_.ring,
        truncation,
        tuple(lv.rank for lv in levels),
        tuple(faces),
        tuple(degeneracies),
    )


# --- simplicial identities ---


def simplicial_identity_defects(module: SimplicialModule) -> list[str]:
    """Every violated simplicial identity among the stored maps (empty when all hold)."""
    N = module.truncation_degree
    d, s = module.faces, module.degeneracies
    defects = []
    for n in range(2, N + 1):
        for j in range(n + 1):
            for i in range(j):
                if d[n - 1][i] @ d[n][j] != d[n - 1][j - 1] @ d[n][i]:
                    defects.append(f"d_{i} d_{j} != d_{j - 1} d_{i} on level {n}")
    for n in range(N - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                if s[n + 1][i] @ s[n][j] != s[n + 1][j + 1] @ s[n][i]:
                    defects.append(f"s_{i} s_{j} != s_{j + 1} s_{i} on level {n}")
    for n in range(N):
        identity = FreeModuleMap.identity(module.ring, module.level_ranks[n])
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = d[n + 1][i] @ s[n][j]
                if i in (j, j + 1):
                    rhs = identity
                elif i < j:
                    rhs = s[n - 1][j - 1] @ d[n][i]
                else:
                    rhs = s[n - 1][j] @ d[n][i - 1]
                if lhs != rhs:
                    defects.append(f"d_{i} s_{j} identity fails on level {n}")
    return defects


def verify_simplicial_identities(module: SimplicialModule) -> None:
    defects = simplicial_identity_defects(module)
    if defects:
        raise SimplicialIdentityError("; ".join(defects[:5]))


# --- N and the Moore complex ---


def has_basis_degeneracies(module: SimplicialModule) -> bool:
    """True when every degeneracy sends basis vectors to signed basis vectors."""
    return all(s.basis_permutation() is not None for level in module.degeneracies for s in level)


def normalize(module: SimplicialModule, check: bool = True) -> ChainComplex:
    """The kernel-form normalized complex N_n = ∩_{i>=1} ker d_i with differential d_0.

    With basis degeneracies the result stays over module.ring: N_n has one
    basis vector per nondegenerate basis vector e_c, namely its unique lift
    e_c + (degenerate part) into the kernel, and an element of N_n has the
    same coordinates in the lifts as in the nondegenerate basis. Otherwise
    the kernels are taken over ℤ after restriction of scalars.

    Trustworthy in degrees <= truncation_degree - 1.
    """
    if check:
        verify_simplicial_identities(module)
    if has_basis_degeneracies(module):
        return _normalize_by_lifts(module)
    return _normalize_over_integers(module)


def _apply(f: FreeModuleMap, vector: dict[int, Element]) -> dict[int, Element]:
    ring = f.ring
    image: dict[int, Element] = {}
    for j, coefficient in vector.items():
        for row, entry in f.column_support(j):
            image[row] = ring.add(image.get(row, ring.zero), ring.mul(entry, coefficient))
    return {row: value for row, value in image.items() if not ring.is_zero(value)}


def _kernel_lifts(module: SimplicialModule, n: int, kept: list[int]) -> list[dict[int, Element]]:
    """e_c + Σ y_d e_d in ∩_{i>=1} ker d_i for each nondegenerate c, with y_d in the ring.

    Solved over ℚ on the restriction of scalars: the degenerate columns of the
    stacked faces d_1..d_n against minus the columns of 1·e_c.
    """
    ring = module.ring
    r = ring.rank
    position = {c: i for i, c in enumerate(kept)}
    degenerate = [j for j in range(module.level_ranks[n]) if j not in position]
    unknown = {d: i * r for i, d in enumerate(degenerate)}
    width = len(degenerate) * r
    target_rank = module.level_ranks[n - 1]
    system: dict[int, dict[int, object]] = {}
    for i, face in enumerate(module.faces[n][1:]):
        for column in range(face.domain_rank):
            for row, entry in face.column_support(column):
                block = ring.multiplication_matrix(entry)
                for bi in range(r):
                    line = system.setdefault((i * target_rank + row) * r + bi, {})
                    if column in unknown:
                        for bj in range(r):
                            if block[bi][bj]:
                                line[unknown[column] + bj] = QQ(block[bi][bj])
                    elif block[bi][0]:
                        line[width + position[column]] = QQ(-block[bi][0])
    system = {i: line for i, line in system.items() if line}

    if not width:
        if system:
            raise SimplicialIdentityError(f"nondegenerate vectors of level {n} are not killed by d_1..d_{n}")
        return [{c: ring.one} for c in kept]

    shape = (n * target_rank * r, width + len(kept))
    reduced, pivots = DomainMatrix(system, shape, QQ).rref()
    if list(pivots) != list(range(width)):
        raise SimplicialIdentityError(f"degenerate part of level {n} is not a complement of the normalized part")
    solved = reduced.to_dod()
    lifts = []
    for column, c in enumerate(kept):
        vector: dict[int, Element] = {c: ring.one}
        for d, start in unknown.items():
            coordinates = []
            for b in range(r):
                value = solved.get(start + b, {}).get(width + column, QQ(0))
                if value.denominator != 1:
                    raise SimplicialIdentityError(f"lift of basis vector {c} on level {n} is not integral")
                coordinates.append(int(value.numerator))
            if any(coordinates):
                vector[d] = tuple(coordinates)
        lifts.append(vector)
    return lifts


def _normalize_by_lifts(module: SimplicialModule) -> ChainComplex:
    ring = module.ring
    kept = [nondegenerate_basis(module, n) for n in range(module.truncation_degree + 1)]
    maps = []
    for n in range(1, module.truncation_degree + 1):
        position = {c: i for i, c in enumerate(kept[n - 1])}
        rows = [[ring.zero] * len(kept[n]) for _ in kept[n - 1]]
        for column, lift in enumerate(_kernel_lifts(module, n, kept[n])):
            for row, value in _apply(module.faces[n][0], lift).items():
                if row in position:
                    rows[position[row]][column] = value
        maps.append(FreeModuleMap(ring, len(kept[n]), len(kept[n - 1]), tuple(tuple(r) for r in rows)))
    logger.debug("normalized ranks over the base ring: %s", [len(k) for k in kept])
    return ChainComplex(ring, tuple(len(k) for k in kept), tuple(maps))


def _normalize_over_integers(module: SimplicialModule) -> ChainComplex:
    faces = [[f.to_integer_matrix() for f in level] for level in module.faces]
    scale = module.ring.rank
    bases: list[Mat] = [Mat.identity(module.level_ranks[0] * scale)]
    differentials: list[Mat] = []
    for n in range(1, module.truncation_degree + 1):
        dim = module.level_ranks[n] * scale
        stacked = Mat.zeros(0, dim)
        for face in faces[n][1:]:
            stacked = stacked.vstack(face)
        basis = integer_kernel(stacked)
        columns = []
        for vector in basis.columns():
            image = faces[n][0] @ Mat.from_columns([vector], dim)
            coords = lattice_coordinates(bases[n - 1], image.column(0))
            if coords is None:
                raise SimplicialIdentityError(f"d_0 does not map N_{n} into N_{n - 1}")
            columns.append(coords)
        differentials.append(Mat.from_columns(columns, bases[n - 1].ncols))
        bases.append(basis)
    return ChainComplex.from_integer_matrices([b.ncols for b in bases], differentials)


def moore_complex(module: SimplicialModule) -> ChainComplex:
    """The unnormalized complex: X_n with differential Σ (-1)^i d_i."""
    maps = []
    for n in range(1, module.truncation_degree + 1):
        total = FreeModuleMap.zero(module.ring, module.level_ranks[n], module.level_ranks[n - 1])
        for i, face in enumerate(module.faces[n]):
            total = total + (face if i % 2 == 0 else -face)
        maps.append(total)
    return ChainComplex(module.ring, module.level_ranks, tuple(maps))


def nondegenerate_basis(module: SimplicialModule, n: int) -> list[int]:
    """Basis vectors of X_n outside the images of s_0..s_{n-1}."""
    if n == 0:
        return list(range(module.level_ranks[0]))
    covered: set[int] = set()
    for s in module.degeneracies[n - 1]:
        permutation = s.basis_permutation()
        if permutation is None:
            raise ValueError("degeneracies must send basis vectors to signed basis vectors")
        covered.update(row for row, _ in permutation)
    return [j for j in range(module.level_ranks[n]) if j not in covered]


def normalize_modulo_degeneracies(module: SimplicialModule) -> ChainComplex:
    """X / D on the nondegenerate basis, over module.ring."""
    ring = module.ring
    kept = [nondegenerate_basis(module, n) for n in range(module.truncation_degree + 1)]
    maps = []
    for n in range(1, module.truncation_degree + 1):
        rows = []
        for r in kept[n - 1]:
            row = []
            for c in kept[n]:
                total = ring.zero
                for i, face in enumerate(module.faces[n]):
                    entry = face.entries[r][c]
                    if not ring.is_zero(entry):
                        total = ring.add(total, entry if i % 2 == 0 else ring.neg(entry))
                row.append(total)
            rows.append(tuple(row))
        maps.append(FreeModuleMap(ring, len(kept[n]), len(kept[n - 1]), tuple(rows)))
    return ChainComplex(ring, tuple(len(k) for k in kept), tuple(maps))


# --- exterior powers ---


def levelwise_exterior_power(module: SimplicialModule, k: int) -> SimplicialModule:
    """Λ^k applied to every level and every structure map."""
    if k < 0:
        raise ValueError(f"exterior power degree must be >= 0, got {k}")
    return SimplicialModule(
        module.ring,
        module.truncation_degree,
        tuple(comb(r, k) for r in module.level_ranks),
        tuple(tuple(f.exterior_power(k) for f in level) for level in module.faces),
        tuple(tuple(s.exterior_power(k) for s in level) for level in module.degeneracies),
    )


def default_truncation(complex_: ChainComplex, k: int, guard: int = DEFAULT_TRUNCATION_GUARD) -> int:
    return k * complex_.length + guard


def exterior_power_module(
    complex_: ChainComplex,
    k: int,
    truncation: Optional[int] = None,
    guard: int = DEFAULT_TRUNCATION_GUARD,
) -> SimplicialModule:
    """Λ^k K(C) in levels 0..truncation, after checking the truncation is high enough."""
    minimum = k * complex_.length + 1
    if truncation is None:
        truncation = default_truncation(complex_, k, guard)
    if truncation < minimum:
        raise TruncationError(
            f"λ^{k} of a complex of length {complex_.length} needs truncation >= {minimum}, got {truncation}"
        )
    return levelwise_exterior_power(dold_kan_K(complex_, truncation), k)


def derived_exterior_power(
    complex_: ChainComplex,
    k: int,
    truncation: Optional[int] = None,
    guard: int = DEFAULT_TRUNCATION_GUARD,
) -> ChainComplex:
    """λ^k(C) = N Λ^k K(C), degrees 0..truncation.

    The result is zero above k·length(C) and trustworthy in degrees
    <= truncation - 1.
    """
    result = normalize(exterior_power_module(complex_, k, truncation, guard), check=False)
    logger.debug("λ^%d ranks over the base ring: %s", k, result.ranks)
    return result


def normalization_mismatches(module: SimplicialModule) -> list[str]:
    """Degrees below the truncation where the kernel form and X / D differ in homology."""
    kernel_form = homology(normalize(module, check=False))
    quotient_form = homology(normalize_modulo_degeneracies(module))
    return [
        f"H_{n} is {kernel_form[n]} in kernel form but {quotient_form[n]} modulo degeneracies"
        for n in range(module.truncation_degree)
        if kernel_form[n] != quotient_form[n]
    ]


def derived_exterior_defects(
    complex_: ChainComplex,
    max_k: int = 3,
    guard: int = DEFAULT_TRUNCATION_GUARD,
) -> list[str]:
    """Checks λ^0 = A in degree 0, λ^1 ≃ C, and λ^k = 0 above k·length(C).

    λ^2 is also normalized both ways and the two homologies compared.
    """
    defects = []
    ring_rank = complex_.ring.rank
    length = complex_.length

    zeroth = homology(derived_exterior_power(complex_, 0, guard=guard))
    if zeroth[0].free_rank != ring_rank or zeroth[0].elementary_divisors or zeroth.nonzero_degrees() != [0]:
        defects.append(f"λ^0 homology is not the base ring in degree 0: {[str(g) for g in zeroth.groups]}")

    first_complex = derived_exterior_power(complex_, 1, guard=guard)
    first = homology(first_complex)
    original = homology(complex_)
    window = first_complex.top_degree - 1
    for n in range(window + 1):
        if first[n] != original[n]:
            defects.append(f"H_{n}(λ^1 C) = {first[n]} but H_{n}(C) = {original[n]}")

    for k in range(max_k + 1):
        lam = first_complex if k == 1 else derived_exterior_power(complex_, k, guard=guard)
        above = [n for n, r in enumerate(lam.ranks) if n > k * length and r]
        if above:
            defects.append(f"λ^{k} has nonzero modules in degrees {above} above {k * length}")

    defects.extend(f"λ^2: {m}" for m in normalization_mismatches(exterior_power_module(complex_, 2, guard=guard)))
    return defects


def differential_mismatches(expected: ChainComplex, candidate: ChainComplex, name: str) -> list[str]:
    """Differences between two complexes compared map by map over the same ring."""
    if candidate.ring.rank != expected.ring.rank or candidate.ranks != expected.ranks:
        return [
            f"{name} has ranks {list(candidate.ranks)} over a rank-{candidate.ring.rank} ring, "
            f"expected {list(expected.ranks)} over a rank-{expected.ring.rank} ring"
        ]
    return [
        f"d_{n} of {name} differs from d_{n} of C"
        for n in range(1, expected.top_degree + 1)
        if candidate.differential(n) != expected.differential(n)
    ]


def round_trip_defects(complex_: ChainComplex, guard: int = DEFAULT_TRUNCATION_GUARD) -> list[str]:
    """N K(C) = C on the nose: the nondegenerate summand of K(C)_n is C_n and d_0 on it is d_n.

    The simplicial identities of K(C) are checked, and the Moore complex of
    K(C) is compared with C on homology below the truncation.
    """
    truncation = complex_.top_degree + guard
    module = dold_kan_K(complex_, truncation)
    defects = simplicial_identity_defects(module)
    defects += differential_mismatches(complex_.padded(truncation), normalize(module, check=False), "N K(C)")
    original = homology(complex_)
    moore = homology(moore_complex(module))
    for n in range(truncation):
        if moore[n] != original[n]:
            defects.append(f"H_{n}(Moore K(C)) = {moore[n]} but H_{n}(C) = {original[n]}")
    return defects
