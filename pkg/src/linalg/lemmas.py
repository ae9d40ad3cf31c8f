"""Seeded instance generators and the two linear-algebra lemmas.

check_torsion_determinant_lemma
    For exact sequences 0 -> A_1 -> A_2 -> A_3 -> 0 of finitely generated
    abelian groups and 0 -> B_1 -> B_2 -> B_3 -> 0 of free ones, with
    isomorphisms φ_i : A_i ⊗ C -> B_i ⊗ C commuting with the maps,
    w_2 / (w_1 w_3) = ± z_2 / (z_1 z_3), where w_i = |(A_i)_tor| and
    z_i = det φ_i in bases coming from A_i / tor and B_i.

check_kernel_cokernel_lemma
    For two short exact sequences of free modules and an isomorphism
    ρ : A_2 -> A'_2, with θ = j_2 ρ i_1 and ψ = i_2 ρ^-1 j_1,
    tilde_det(θ) = ± det(ρ) · tilde_det(ψ), where tilde_det is the classical
    determinant of 0 -> Ker -> source -> target -> Coker -> 0 with kernel and
    cokernel bases matched through ρ. tilde_det is the reciprocal of the
    sequence determinant for these four-term sequences.

All arithmetic is exact (Fraction).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction

from src.errors import DiagramError, NotExactError
from src.linalg.exact_sequences import BasedExactSequence, BasedSpace, check_exactness, determinant_of_exact_sequence
from src.linalg.integer import smith_normal_form
from src.linalg.matrix import (
    Mat,
    complement_basis,
    convert,
    determinant,
    image_basis,
    inverse,
    kernel_basis,
    random_invertible,
    random_unimodular,
    rank,
    solve,
)
from src.linalg.scalars import RationalField

logger = logging.getLogger(__name__)

QQ = RationalField()


def block(top_left: Mat, top_right: Mat, bottom_left: Mat, bottom_right: Mat) -> Mat:
    top = top_left.hstack(top_right)
    bottom = bottom_left.hstack(bottom_right)
    return top.vstack(bottom)


def _zeros(r: int, c: int) -> Mat:
    return Mat.zeros(r, c, Fraction(0))


def _rational_inverse(m: Mat) -> Mat:
    return inverse(QQ, m)


# --- random exact sequences ---


def random_exact_sequence(
    rng: random.Random,
    length: int,
    max_rank: int = 3,
    with_lattices: bool = True,
) -> BasedExactSequence:
    """An exact sequence 0 -> V_0 -> ... -> V_length -> 0 over Q.

    Built from split pieces V_k = Q^(r_{k-1}) ⊕ Q^(r_k), twisted by random
    unimodular changes of coordinates, optionally with random lattice bases.
    """
    ranks = [rng.randint(1, max_rank) for _ in range(length)]
    dims = [(ranks[k - 1] if k > 0 else 0) + (ranks[k] if k < length else 0) for k in range(length + 1)]
    twists = [convert(QQ, random_unimodular(rng, d)) for d in dims]
    maps = []
    for k in range(length):
        incoming = ranks[k - 1] if k > 0 else 0
        outgoing_next = ranks[k + 1] if k + 1 < length else 0
        # kill the first block, send the second block identically onto the first block of V_{k+1}
        split = block(
            _zeros(ranks[k], incoming),
            convert(QQ, Mat.identity(ranks[k])),
            _zeros(outgoing_next, incoming),
            _zeros(outgoing_next, ranks[k]),
        )
        maps.append(twists[k + 1] @ split @ _rational_inverse(twists[k]))
    spaces = []
    for d in dims:
        lattice = None
        if with_lattices and d and rng.random() < 0.5:
            lattice = random_invertible(QQ, rng, d, bound=3)
        spaces.append(BasedSpace(d, lattice_basis=lattice))
    return BasedExactSequence(spaces, maps)


# --- torsion orders against determinants ---


@dataclass
class TorsionDeterminantInstance:
    a_torsion: tuple[int, int, int]     # w_1, w_2, w_3
    i_maps: tuple[Mat, Mat]             # A_1 -> A_2 -> A_3 on free quotients, over Q
    j_maps: tuple[Mat, Mat]             # B_1 -> B_2 -> B_3, integer
    phi: tuple[Mat, Mat, Mat]           # φ_i : A_i ⊗ Q -> B_i ⊗ Q


def _full_column_rank_matrix(rng: random.Random, rows: int, cols: int) -> Mat:
    while True:
        m = Mat.from_rows([[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rows)], ncols=cols)
        if rank(QQ, m) == cols:
            return m


def _quotient_coordinates(presentation: Mat) -> tuple[int, Mat, Mat]:
    """Torsion order of ℤ^p / image, plus the free-quotient projection and a section."""
    p = presentation.nrows
    snf = smith_normal_form(presentation)
    k = snf.rank
    torsion = 1
    for d in snf.diagonal:
        torsion *= d
    left = convert(QQ, snf.left)
    projection = left.select_rows(list(range(k, p)))
    section = _rational_inverse(left).select_columns(list(range(k, p))) if p else _zeros(0, 0)
    return torsion, projection, section


def random_torsion_determinant_instance(rng: random.Random) -> TorsionDeterminantInstance:
    """A_i = P_i / Q_i for a horseshoe of free presentations, B twisted and split."""
    p1, p3 = rng.randint(1, 3), rng.randint(1, 3)
    q1, q3 = rng.randint(0, p1), rng.randint(0, p3)
    m1 = _full_column_rank_matrix(rng, p1, q1) if q1 else Mat.zeros(p1, 0)
    m3 = _full_column_rank_matrix(rng, p3, q3) if q3 else Mat.zeros(p3, 0)
    x = Mat.from_rows([[rng.randint(-3, 3) for _ in range(q3)] for _ in range(p1)], ncols=q3)
    m2 = block(m1, x, Mat.zeros(p3, q1), m3)

    twist = random_unimodular(rng, p1 + p3)
    twist_inv = _rational_inverse(convert(QQ, twist))
    m2 = twist @ m2
    f = convert(QQ, twist) @ convert(QQ, Mat.identity(p1 + p3).select_columns(list(range(p1))))
    g = convert(QQ, Mat.identity(p1 + p3).select_rows(list(range(p1, p1 + p3)))) @ twist_inv

    w1, proj1, sec1 = _quotient_coordinates(m1)
    w2, proj2, sec2 = _quotient_coordinates(m2)
    w3, proj3, _ = _quotient_coordinates(m3)
    i1 = proj2 @ f @ sec1
    i2 = proj3 @ g @ sec2
    r1, r2, r3 = i1.ncols, i1.nrows, i2.nrows

    g_b = random_unimodular(rng, r2)
    g_b_inv = _rational_inverse(convert(QQ, g_b))
    j1 = g_b.select_columns(list(range(r1)))
    j2 = g_b_inv.select_rows(list(range(r1, r2))).map(int)

    phi1 = random_invertible(QQ, rng, r1)
    phi3_block = random_invertible(QQ, rng, r3)
    corner = convert(QQ, Mat.from_rows([[rng.randint(-2, 2) for _ in range(r3)] for _ in range(r1)], ncols=r3))
    complement = complement_basis(QQ, i1)
    h = i1.hstack(complement)
    phi2 = convert(QQ, g_b) @ block(phi1, corner, _zeros(r3, r1), phi3_block) @ _rational_inverse(h)
    phi3 = phi3_block @ _rational_inverse(i2 @ complement)
    return TorsionDeterminantInstance((w1, w2, w3), (i1, i2), (j1, j2), (phi1, phi2, phi3))


def _short_sequence(first: Mat, second: Mat) -> BasedExactSequence:
    dims = [first.ncols, first.nrows, second.nrows]
    return BasedExactSequence([BasedSpace(d) for d in dims], [first, second])


def check_torsion_determinant_lemma(instance: TorsionDeterminantInstance) -> bool:
    i1, i2 = (convert(QQ, m) for m in instance.i_maps)
    j1, j2 = (convert(QQ, m) for m in instance.j_maps)
    phi1, phi2, phi3 = (convert(QQ, m) for m in instance.phi)
    if not (j1 @ phi1 - phi2 @ i1).is_zero(QQ) or not (j2 @ phi2 - phi3 @ i2).is_zero(QQ):
        raise DiagramError("φ does not commute with the sequence maps")
    if not check_exactness(_short_sequence(i1, i2)) or not check_exactness(_short_sequence(j1, j2)):
        raise NotExactError("both rows must be short exact sequences")
    w1, w2, w3 = instance.a_torsion
    z1, z2, z3 = (determinant(QQ, m) for m in (phi1, phi2, phi3))
    lhs = Fraction(w2, w1 * w3)
    rhs = z2 / (z1 * z3)
    logger.debug("torsion ratio %s, z-ratio %s", lhs, rhs)
    return abs(lhs) == abs(rhs)


# --- kernel and cokernel orientation ---


@dataclass
class KernelCokernelInstance:
    i_maps: tuple[Mat, Mat]    # A_1 -> A_2 -> A_3
    j_maps: tuple[Mat, Mat]    # A'_1 -> A'_2 -> A'_3
    rho: Mat                   # A_2 -> A'_2


def _split_sequence(rng: random.Random, sub: int, total: int) -> tuple[Mat, Mat]:
    twist = random_unimodular(rng, total)
    twist_inv = _rational_inverse(convert(QQ, twist))
    return (
        convert(QQ, twist.select_columns(list(range(sub)))),
        twist_inv.select_rows(list(range(sub, total))),
    )


def random_kernel_cokernel_instance(rng: random.Random) -> KernelCokernelInstance:
    total = rng.randint(1, 4)
    i_maps = _split_sequence(rng, rng.randint(0, total), total)
    j_maps = _split_sequence(rng, rng.randint(0, total), total)
    if rng.random() < 0.5:
        rho = random_invertible(QQ, rng, total, bound=3)
    else:
        # a scaled permutation leaves θ and ψ with kernels and cokernels
        order = list(range(total))
        rng.shuffle(order)
        scales = [Fraction(rng.choice([1, 2, 3, -1, -2, 5]), rng.choice([1, 1, 2, 3])) for _ in range(total)]
        rows = [[scales[i] if j == order[i] else Fraction(0) for j in range(total)] for i in range(total)]
        rho = Mat.from_rows(rows, ncols=total)
    return KernelCokernelInstance(i_maps, j_maps, rho)


def _quotient_map(image: Mat, complement: Mat) -> Mat:
    """Coordinates on `complement` of the projection target -> target / image."""
    basis = image.hstack(complement)
    coords = _rational_inverse(basis)
    return coords.select_rows(list(range(image.ncols, basis.ncols)))


def four_term_sequence(f: Mat, kernel: Mat, complement: Mat) -> BasedExactSequence:
    """0 -> Ker f -> source -> target -> Coker f -> 0 with the given bases."""
    image = image_basis(QQ, f)
    quotient = _quotient_map(image, complement)
    dims = [kernel.ncols, f.ncols, f.nrows, complement.ncols]
    return BasedExactSequence([BasedSpace(d) for d in dims], [kernel, f, quotient])


def tilde_determinant(f: Mat, kernel: Mat, complement: Mat) -> Fraction:
    """Classical-orientation determinant of f relative to kernel and cokernel bases."""
    return 1 / determinant_of_exact_sequence(four_term_sequence(f, kernel, complement))


def check_kernel_cokernel_lemma(instance: KernelCokernelInstance) -> bool:
    i1, i2 = (convert(QQ, m) for m in instance.i_maps)
    j1, j2 = (convert(QQ, m) for m in instance.j_maps)
    rho = convert(QQ, instance.rho)
    if not check_exactness(_short_sequence(i1, i2)) or not check_exactness(_short_sequence(j1, j2)):
        raise NotExactError("both rows must be short exact sequences")
    if rho.nrows != rho.ncols or rho.nrows != i1.nrows or rho.nrows != j1.nrows:
        raise DiagramError("ρ must be an isomorphism between the middle terms")
    rho_inv = _rational_inverse(rho)
    theta = j2 @ rho @ i1
    psi = i2 @ rho_inv @ j1

    kernel_theta = kernel_basis(QQ, theta)
    kernel_psi = solve(QQ, j1, rho @ i1 @ kernel_theta)
    if not (psi @ kernel_psi).is_zero(QQ):
        raise DiagramError("ρ does not carry Ker θ into Ker ψ")

    complement_theta = complement_basis(QQ, theta)
    lifts = solve(QQ, j2, complement_theta)
    complement_psi = i2 @ rho_inv @ lifts
    if rank(QQ, image_basis(QQ, psi).hstack(complement_psi)) != psi.nrows:
        raise DiagramError("ρ does not carry Coker θ onto Coker ψ")

    lhs = tilde_determinant(theta, kernel_theta, complement_theta)
    rhs = determinant(QQ, rho) * tilde_determinant(psi, kernel_psi, complement_psi)
    logger.debug("kernel/cokernel orientation: %s vs %s", lhs, rhs)
    return abs(lhs) == abs(rhs)
