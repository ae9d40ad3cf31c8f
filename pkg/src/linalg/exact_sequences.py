"""Determinants of based exact sequences and Euler characteristics.

A based exact sequence 0 -> V_0 -> V_1 -> ... -> V_n -> 0 carries a
distinguished basis on every V_i. Its determinant is defined inductively:

    n = 1   det of the isomorphism V_0 -> V_1 in the two bases
    n = 2   det of the identity of V_1 from the basis (T(B_0), B'_2) to B_1,
            where B'_2 lifts B_2 through the surjection V_1 -> V_2
    n >= 3  det(0 -> V_0 -> ... -> V_{n-2} -> I -> 0)
              · det(0 -> I -> V_{n-1} -> V_n -> 0)^((-1)^n),
            I the image of V_{n-2} in V_{n-1} with any basis

The value does not depend on the lifts or on the basis of I. With V_0 = 0 and
n = 2 the value is 1/det of the isomorphism V_1 -> V_2.

The Euler characteristic of an acyclic complex of finitely generated abelian
groups with isomorphisms θ_i after complexification is

    prod_i |H^i_tor|^((-1)^i) / det(H^*_C, θ_*)

and is only defined up to sign; results are reported as absolute values.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from mpmath import mp, mpf

from src.errors import NotExactError
from src.linalg.matrix import (
    Mat,
    convert,
    determinant,
    image_basis,
    inverse,
    random_invertible,
    rank,
    solve,
)
from src.linalg.scalars import EXACT_RATIONAL, ScalarField, get_scalar_field

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BasedSpace:
    dimension: int
    scalar_kind: str = EXACT_RATIONAL
    # Columns express the distinguished basis in ambient coordinates.
    # None means the standard basis.
    lattice_basis: Optional[Mat] = None


@dataclass
class BasedExactSequence:
    spaces: list[BasedSpace]
    # maps[k] sends spaces[k] -> spaces[k+1], in ambient coordinates
    maps: list[Mat]
    precision_bits: int = 256

    @property
    def length(self) -> int:
        return len(self.spaces) - 1

    @property
    def dims(self) -> list[int]:
        return [s.dimension for s in self.spaces]

    def scalar_field(self) -> ScalarField:
        kinds = {s.scalar_kind for s in self.spaces}
        kind = EXACT_RATIONAL if kinds <= {EXACT_RATIONAL} else kinds.pop()
        return get_scalar_field(kind, self.precision_bits)

    def distinguished_maps(self, fld: ScalarField) -> list[Mat]:
        """Maps rewritten in the distinguished bases: L_{k+1}^-1 · M_k · L_k."""
        result = []
        for k, m in enumerate(self.maps):
            m = convert(fld, m)
            source = self.spaces[k].lattice_basis
            target = self.spaces[k + 1].lattice_basis
            if source is not None:
                m = m @ convert(fld, source)
            if target is not None:
                m = inverse(fld, convert(fld, target)) @ m
            result.append(m)
        return result


@dataclass
class AcyclicComplexData:
    # (rank, torsion order) of H^i for i = start_degree, start_degree + 1, ...
    groups: list[tuple[int, int]]
    # theta_maps[i] : H^i_C -> H^{i+1}_C, ranks[i+1] x ranks[i]
    theta_maps: list[Mat] = field(default_factory=list)
    start_degree: int = 0
    scalar_kind: str = EXACT_RATIONAL
    precision_bits: int = 256

    def complexified(self) -> BasedExactSequence:
        spaces = [BasedSpace(rank, self.scalar_kind) for rank, _ in self.groups]
        return BasedExactSequence(spaces, list(self.theta_maps), self.precision_bits)


@dataclass(frozen=True)
class EulerCharacteristic:
    value: Any             # |chi|, a Fraction when every input is exact
    sign_reliable: bool    # always False: the invariant is defined up to sign
    determinant: Any       # the determinant that was divided out


def _shape_errors(seq: BasedExactSequence) -> list[str]:
    errors = []
    if len(seq.maps) != max(len(seq.spaces) - 1, 0):
        errors.append(f"{len(seq.spaces)} spaces need {len(seq.spaces) - 1} maps, got {len(seq.maps)}")
        return errors
    for k, m in enumerate(seq.maps):
        expected = (seq.spaces[k + 1].dimension, seq.spaces[k].dimension)
        if m.shape != expected:
            errors.append(f"map {k} has shape {m.shape}, expected {expected}")
    return errors


def exactness_defects(seq: BasedExactSequence) -> list[str]:
    """Human-readable list of every exactness violation (empty when exact)."""
    defects = _shape_errors(seq)
    if defects:
        return defects
    fld = seq.scalar_field()
    dims = seq.dims
    with mp.workprec(seq.precision_bits):
        maps = [convert(fld, m) for m in seq.maps]
        if not maps:
            if dims and dims[0] != 0:
                defects.append("a single nonzero space is not exact")
            return defects
        ranks = [rank(fld, m) for m in maps]
        for k in range(len(maps) - 1):
            if not (maps[k + 1] @ maps[k]).is_zero(fld):
                defects.append(f"maps {k + 1} o {k} is not zero")
        if ranks[0] != dims[0]:
            defects.append("first map is not injective")
        if ranks[-1] != dims[-1]:
            defects.append("last map is not surjective")
        for k in range(1, len(maps)):
            if dims[k] - ranks[k] != ranks[k - 1]:
                defects.append(f"kernel of map {k} differs from image of map {k - 1}")
    return defects


def check_exactness(seq: BasedExactSequence) -> bool:
    return not exactness_defects(seq)


def _determinant(
    fld: ScalarField,
    dims: list[int],
    maps: list[Mat],
    rng: Optional[random.Random],
) -> Any:
    n = len(dims) - 1
    if n == 0:
        return fld.one
    if n == 1:
        return determinant(fld, maps[0]) if dims[0] else fld.one
    if n == 2:
        t, u = maps
        lifts = solve(fld, u, convert(fld, Mat.identity(dims[2])))
        if rng is not None and dims[0] and dims[2]:
            shift = Mat.from_rows(
                [[rng.randint(-3, 3) for _ in range(dims[2])] for _ in range(dims[0])], ncols=dims[2]
            )
            lifts = lifts + t @ convert(fld, shift)
        return determinant(fld, t.hstack(lifts))
    image = image_basis(fld, maps[n - 2])
    if rng is not None and image.ncols:
        image = image @ random_invertible(fld, rng, image.ncols)
    into_image = solve(fld, image, maps[n - 2])
    first = _determinant(fld, dims[: n - 1] + [image.ncols], maps[: n - 2] + [into_image], rng)
    second = _determinant(fld, [image.ncols, dims[n - 1], dims[n]], [image, maps[n - 1]], rng)
    return first * second if n % 2 == 0 else first / second


def determinant_of_exact_sequence(
    seq: BasedExactSequence,
    choices: Optional[random.Random] = None,
) -> Any:
    """The determinant of a based exact sequence.

    `choices` randomizes the auxiliary lifts and intermediate bases; the
    result must not change. Exact inputs give a Fraction, numeric inputs an mpc.
    """
    defects = exactness_defects(seq)
    if defects:
        raise NotExactError("; ".join(defects))
    fld = seq.scalar_field()
    with mp.workprec(seq.precision_bits):
        maps = seq.distinguished_maps(fld)
        value = _determinant(fld, seq.dims, maps, choices)
    logger.debug("determinant of sequence with dims %s = %s", seq.dims, value)
    return value


def splice(seq: BasedExactSequence, point: int) -> tuple[BasedExactSequence, BasedExactSequence]:
    """Split at I = image(V_{point-1} -> V_point), 1 <= point <= n-1.

    det(seq) = det(first) · det(second)^((-1)^(point-1)).
    """
    n = seq.length
    if not 1 <= point <= n - 1:
        raise ValueError(f"splice point must lie in [1, {n - 1}], got {point}")
    fld = seq.scalar_field()
    with mp.workprec(seq.precision_bits):
        maps = seq.distinguished_maps(fld)
        image = image_basis(fld, maps[point - 1])
        into_image = solve(fld, image, maps[point - 1])
    kind = seq.spaces[0].scalar_kind
    plain = [BasedSpace(d, kind) for d in seq.dims]
    i_space = BasedSpace(image.ncols, kind)
    first = BasedExactSequence(
        plain[:point] + [i_space], maps[: point - 1] + [into_image], seq.precision_bits
    )
    second = BasedExactSequence(
        [i_space] + plain[point:], [image] + maps[point:], seq.precision_bits
    )
    return first, second


def euler_characteristic(data: AcyclicComplexData) -> EulerCharacteristic:
    """|prod |H^i_tor|^((-1)^i) / det(H_C, θ)|, i counted from data.start_degree."""
    torsion = Fraction(1)
    for offset, (_, order) in enumerate(data.groups):
        degree = data.start_degree + offset
        torsion *= Fraction(order) if degree % 2 == 0 else Fraction(1, order)
    det = determinant_of_exact_sequence(data.complexified())
    if isinstance(det, Fraction):
        value: Any = abs(torsion / det)
    else:
        with mp.workprec(data.precision_bits):
            value = abs(mpf(torsion.numerator) / torsion.denominator / det)
    return EulerCharacteristic(value=value, sign_reliable=False, determinant=det)


def derived_rank(data: AcyclicComplexData) -> int:
    """sum_j (-1)^j · j · rank H^j."""
    total = 0
    for offset, (rk, _) in enumerate(data.groups):
        j = data.start_degree + offset
        total += (-1) ** j * j * rk
    return total


def rank_euler_characteristic(data: AcyclicComplexData) -> int:
    """sum_j (-1)^j · rank H^j (zero for an acyclic complex)."""
    return sum((-1) ** (data.start_degree + i) * rk for i, (rk, _) in enumerate(data.groups))


def sequence_from_integer_maps(dims: Sequence[int], maps: Sequence[Sequence[Sequence[int]]]) -> BasedExactSequence:
    """Convenience constructor for exact-rational sequences given as nested int lists."""
    spaces = [BasedSpace(d) for d in dims]
    mats = [
        Mat.from_rows(rows, ncols=dims[k]) if dims[k + 1] else Mat.zeros(0, dims[k])
        for k, rows in enumerate(maps)
    ]
    return BasedExactSequence(spaces, mats)
