"""Tests for exact linear algebra, determinants of exact sequences and integer normal forms."""

import random
from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_smith_normal_form

from src.errors import NotExactError
from src.linalg.exact_sequences import (
    AcyclicComplexData,
    check_exactness,
    derived_rank,
    determinant_of_exact_sequence,
    euler_characteristic,
    rank_euler_characteristic,
    sequence_from_integer_maps,
    splice,
)
from src.linalg.integer import (
    integer_kernel,
    lattice_basis,
    lattice_coordinates,
    smith_diagonal,
    smith_normal_form,
)
from src.linalg.lemmas import (
    check_kernel_cokernel_lemma,
    check_torsion_determinant_lemma,
    random_exact_sequence,
    random_kernel_cokernel_instance,
    random_torsion_determinant_instance,
)
from src.linalg.matrix import Mat, determinant, inverse, random_unimodular, rank, rref, solve
from src.linalg.scalars import EXACT_RATIONAL, HIGH_PRECISION_COMPLEX, RationalField, get_scalar_field


def _random_int_matrix(rng: random.Random, rows: int, cols: int, bound: int = 6) -> Mat:
    return Mat.from_rows([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], ncols=cols)


# --- scalar fields ---


def test_scalar_field_factory():
    """The factory dispatches on the scalar kind."""
    assert get_scalar_field(EXACT_RATIONAL).kind == EXACT_RATIONAL
    assert get_scalar_field(HIGH_PRECISION_COMPLEX, 128).kind == HIGH_PRECISION_COMPLEX


def test_scalar_field_factory_rejects_unknown_kind():
    """Unknown kinds raise ValueError."""
    with pytest.raises(ValueError, match="Unknown scalar kind"):
        get_scalar_field("p-adic")


def test_complex_determinant_matches_rational():
    """The sympy and mpmath engines give the same determinant."""
    m = Mat.from_rows([[2, 1], [0, 3]])
    assert determinant(RationalField(), m) == 6
    with mp.workprec(128):
        assert abs(determinant(get_scalar_field(HIGH_PRECISION_COMPLEX, 128), m) - 6) < 1e-30


def test_rank_agrees_with_sympy():
    """Rank over Q matches sympy on random integer matrices."""
    rng = random.Random(5)
    for _ in range(20):
        m = _random_int_matrix(rng, rng.randint(1, 4), rng.randint(1, 4), bound=2)
        assert rank(RationalField(), m) == Matrix([list(r) for r in m.rows]).rank()


def test_rational_rref_matches_sympy():
    """Exact rref and pivots agree with sympy's Matrix.rref on rectangular matrices."""
    rng = random.Random(44)
    for _ in range(10):
        m = _random_int_matrix(rng, 3, 5, bound=4)
        reduced, pivots = rref(RationalField(), m)
        oracle, oracle_pivots = Matrix([list(r) for r in m.rows]).rref()
        assert pivots == list(oracle_pivots)
        for i in range(3):
            for j in range(5):
                assert reduced[i, j] == Fraction(int(oracle[i, j].p), int(oracle[i, j].q))


def test_rational_solve_on_singular_consistent_system():
    """A singular but consistent system still has a particular solution."""
    a = Mat.from_rows([[1, 2], [2, 4]])
    x = solve(RationalField(), a, Mat.from_rows([[3], [6]]))
    assert a @ x == Mat.from_rows([[3], [6]])
    with pytest.raises(NotExactError):
        solve(RationalField(), a, Mat.from_rows([[3], [7]]))
    with pytest.raises(NotExactError, match="singular"):
        inverse(RationalField(), a)


def test_empty_determinant_is_one():
    """The determinant of the 0x0 matrix is 1 over both fields."""
    assert determinant(RationalField(), Mat.zeros(0, 0)) == 1
    with mp.workprec(128):
        assert determinant(get_scalar_field(HIGH_PRECISION_COMPLEX, 128), Mat.zeros(0, 0)) == 1


def test_complex_solve_and_inverse():
    """Square complex systems are solved by LU: a·x reproduces b and a·a⁻¹ is the identity."""
    with mp.workprec(200):
        field = get_scalar_field(HIGH_PRECISION_COMPLEX, 200)
        a = Mat.from_rows([[mpc(2, 1), 1, 0], [0, 3, mpc(0, -1)], [1, 0, 1]])
        b = Mat.from_rows([[1], [mpc(0, 2)], [-1]])
        x = solve(field, a, b)
        residual = a @ x - b
        assert all(abs(v) < mpf(2) ** -150 for row in residual.rows for v in row)
        product = a @ inverse(field, a)
        for i in range(3):
            for j in range(3):
                assert abs(product[i, j] - (1 if i == j else 0)) < mpf(2) ** -150
        with pytest.raises(NotExactError, match="singular"):
            inverse(field, Mat.from_rows([[1, 2], [2, 4]]))


# --- determinants of exact sequences ---


def test_determinant_of_isomorphism():
    """n = 1: the determinant of the isomorphism."""
    seq = sequence_from_integer_maps([2, 2], [[[2, 1], [0, 3]]])
    assert determinant_of_exact_sequence(seq) == 6


def test_determinant_with_zero_start_is_inverse():
    """0 -> 0 -> V1 -> V2 -> 0 gives 1 / det of V1 -> V2."""
    seq = sequence_from_integer_maps([0, 2, 2], [[[], []], [[2, 1], [0, 3]]])
    assert determinant_of_exact_sequence(seq) == Fraction(1, 6)


def test_non_exact_sequence_raises():
    """A zero map between lines is not exact."""
    seq = sequence_from_integer_maps([1, 1], [[[0]]])
    assert not check_exactness(seq)
    with pytest.raises(NotExactError):
        determinant_of_exact_sequence(seq)


def test_determinant_is_independent_of_choices():
    """Random lifts and intermediate bases leave the determinant unchanged."""
    rng = random.Random(20)
    for _ in range(15):
        seq = random_exact_sequence(rng, rng.randint(2, 5))
        base = determinant_of_exact_sequence(seq)
        assert isinstance(base, Fraction)
        for seed in range(3):
            assert determinant_of_exact_sequence(seq, random.Random(seed)) == base


def test_splicing_is_multiplicative():
    """det(seq) = det(first) · det(second)^((-1)^(point-1))."""
    rng = random.Random(21)
    for _ in range(15):
        seq = random_exact_sequence(rng, rng.randint(3, 5))
        point = rng.randint(1, seq.length - 1)
        first, second = splice(seq, point)
        expected = determinant_of_exact_sequence(first) * determinant_of_exact_sequence(second) ** ((-1) ** (point - 1))
        assert determinant_of_exact_sequence(seq) == expected


def test_splice_rejects_endpoints():
    """Splicing needs an interior point."""
    seq = random_exact_sequence(random.Random(1), 3)
    with pytest.raises(ValueError):
        splice(seq, 0)


# --- Euler characteristics ---


def test_euler_characteristic_of_finite_groups():
    """Only torsion: |H^0| / |H^1|."""
    data = AcyclicComplexData(groups=[(0, 2), (0, 3)], theta_maps=[Mat.zeros(0, 0)])
    assert euler_characteristic(data).value == Fraction(2, 3)


def test_euler_characteristic_divides_by_theta_determinant():
    """ℤ -> ℤ with θ = multiplication by 5 gives 1/5."""
    data = AcyclicComplexData(groups=[(1, 1), (1, 1)], theta_maps=[Mat.from_rows([[5]])])
    chi = euler_characteristic(data)
    assert chi.value == Fraction(1, 5)
    assert chi.sign_reliable is False


def test_rank_invariants():
    """Alternating rank vanishes; the derived rank weights by degree."""
    data = AcyclicComplexData(groups=[(1, 1), (1, 1)], theta_maps=[Mat.from_rows([[1]])])
    assert rank_euler_characteristic(data) == 0
    assert derived_rank(data) == -1


# --- lemmas ---


def test_torsion_determinant_lemma_on_seeded_instances():
    """Torsion orders and determinants of the two sequences agree up to sign."""
    rng = random.Random(30)
    for _ in range(25):
        assert check_torsion_determinant_lemma(random_torsion_determinant_instance(rng))


def test_kernel_cokernel_lemma_on_seeded_instances():
    """The kernel-cokernel determinant identity holds exactly."""
    rng = random.Random(31)
    for _ in range(25):
        assert check_kernel_cokernel_lemma(random_kernel_cokernel_instance(rng))


# --- Smith normal form ---


def test_smith_form_matches_sympy():
    """Diagonal entries agree with sympy's Smith normal form."""
    rng = random.Random(40)
    for _ in range(20):
        n = rng.randint(1, 4)
        m = _random_int_matrix(rng, n, n)
        ours = smith_normal_form(m).diagonal
        oracle = sympy_smith_normal_form(Matrix([list(r) for r in m.rows]), domain=ZZ)
        expected = [abs(int(oracle[i, i])) for i in range(n) if oracle[i, i] != 0]
        assert ours == expected


def test_smith_form_transforms_are_unimodular():
    """left · A · right is the diagonal and both transforms have determinant ±1."""
    rng = random.Random(41)
    for _ in range(10):
        m = _random_int_matrix(rng, 3, 4)
        snf = smith_normal_form(m)
        product = snf.left @ m @ snf.right
        for i in range(3):
            for j in range(4):
                expected = snf.diagonal[i] if i == j and i < snf.rank else 0
                assert product[i, j] == expected
        assert abs(Matrix([list(r) for r in snf.left.rows]).det()) == 1
        assert abs(Matrix([list(r) for r in snf.right.rows]).det()) == 1


def test_smith_form_divisibility_chain():
    """diag(2, 3) has invariant factors [6] after the unit."""
    snf = smith_normal_form(Mat.from_rows([[2, 0], [0, 3]]))
    assert snf.diagonal == [1, 6]
    assert snf.invariant_factors == [6]


def test_smith_form_of_rank_deficient_matrix():
    """Zero diagonal entries come last, so the transforms still give diag(1) padded with zeros."""
    m = Mat.from_rows([[2, 4], [1, 2], [0, 0]])
    snf = smith_normal_form(m)
    assert snf.diagonal == [1]
    product = snf.left @ m @ snf.right
    assert product == Mat.from_rows([[1, 0], [0, 0], [0, 0]])


def test_smith_diagonal_agrees_with_transformed_form():
    """The transform-free diagonal equals the diagonal of the full decomposition."""
    rng = random.Random(46)
    for rows, cols in [(1, 4), (4, 1), (3, 3), (2, 5), (5, 2)]:
        m = _random_int_matrix(rng, rows, cols)
        assert smith_diagonal(m) == smith_normal_form(m).diagonal
    assert smith_diagonal(Mat.zeros(0, 3)) == []


# --- Hermite bases ---


def test_lattice_basis_is_canonical():
    """Two spanning sets of one lattice give the same basis with positive last-entry pivots."""
    rng = random.Random(45)
    for _ in range(10):
        generators = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(3)]
        basis = lattice_basis(generators, 4)
        mixed = Mat.from_columns(generators, 4) @ random_unimodular(rng, 3)
        assert lattice_basis(mixed.columns(), 4) == basis
        pivots = [max(i for i, x in enumerate(col) if x) for col in basis.columns()]
        assert pivots == sorted(set(pivots))
        assert all(col[p] > 0 for col, p in zip(basis.columns(), pivots))


def test_lattice_coordinates_recover_combinations():
    """Coordinates of an integer combination of basis columns are its coefficients."""
    rng = random.Random(47)
    for _ in range(10):
        basis = lattice_basis([[rng.randint(-5, 5) for _ in range(4)] for _ in range(3)], 4)
        combo = [rng.randint(-3, 3) for _ in range(basis.ncols)]
        v = [sum(c * col[i] for c, col in zip(combo, basis.columns())) for i in range(4)]
        assert lattice_coordinates(basis, v) == combo


def test_integer_kernel_spans_solutions():
    """Kernel columns are integer solutions of full rank."""
    a = Mat.from_rows([[1, 2, 3], [2, 4, 6]])
    kernel = integer_kernel(a)
    assert kernel.ncols == 2
    for col in kernel.columns():
        assert all(sum(x * y for x, y in zip(row, col)) == 0 for row in a.rows)
    assert lattice_coordinates(kernel, [-2, 1, 0]) is not None
    assert lattice_coordinates(kernel, [1, 0, 0]) is None
