__all__ = [
    'IntMatrix',
    'adjugate',
    'determinant',
    'hermite_normal_form',
    'identity_matrix',
    'is_prime',
    'mat_mod',
    'mat_mul',
    'mat_vec',
    'matrix',
    'modular_kernel',
    'p_adic_digits',
    'scalar_matrix',
    'solve_lower',
    'transpose',
    'valuation',
]

from typing import (
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
)

import sympy

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form as _sympy_hnf


IntMatrix = Tuple[Tuple[int, ...], ...]


def matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    """
    Returns the canonical immutable form (a tuple of row tuples) of an
    integer matrix given as any iterable of rows.
    """
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity_matrix(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def scalar_matrix(n: int, c: int) -> IntMatrix:
    return tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a: IntMatrix) -> IntMatrix:
    return tuple(zip(*a)) if a else ()


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    bt = transpose(b)
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt)
        for row in a
    )


def mat_vec(a: IntMatrix, v: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_mod(a: IntMatrix, q: int) -> IntMatrix:
    return tuple(tuple(x % q for x in row) for row in a)


def determinant(a: IntMatrix) -> int:
    if len(a) == 1:
        return a[0][0]
    if len(a) == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    return int(sympy.Matrix(a).det())


def adjugate(a: IntMatrix) -> IntMatrix:
    return matrix(sympy.Matrix(a).adjugate().tolist())


def is_prime(p: int) -> bool:
    return bool(sympy.isprime(p))


def valuation(x: int, p: int) -> Optional[int]:
    """
    The ``p``-adic valuation of a nonzero integer, or ``None`` for zero.
    """
    if x == 0:
        return None
    return int(sympy.multiplicity(p, abs(x)))


def p_adic_digits(m: int, p: int) -> List[int]:
    """
    Returns the base-``p`` digits of ``m``, least significant first.

    :param m: A non-negative integer
    :type m: int

    :param p: The base
    :type p: int

    :return: The digits ``a_0, a_1, ...`` with ``m = sum(a_j * p**j)``
    :rtype: list
    """
    digits = []
    while m:
        m, r = divmod(m, p)
        digits.append(r)
    return digits


def hermite_normal_form(
    generators: Iterable[Sequence[int]],
    n: int,
    modulus: Optional[int] = None
) -> IntMatrix:
    """
    Returns the lower-triangular column Hermite normal form of the lattice
    spanned by the given generator columns in ``Z^n``.

    The result ``B`` has a positive diagonal, ``B[i][j] = 0`` for ``j > i`` and
    ``0 <= B[i][j] < B[i][i]`` for ``j < i``; its columns span the same
    lattice as the generators. The generators must span a full-rank lattice.

    SymPy's HNF is upper triangular with entries reduced to the right of the
    diagonal, so it is computed on the coordinate-reversed generators and
    reversed back.

    :param generators: The generating columns
    :type generators: Iterable

    :param n: The ambient rank
    :type n: int

    :param modulus: Optional ``q`` with ``q Z^n`` inside the lattice; the HNF
                    is then computed modulo ``q^n``
    :type modulus: int

    :return: The HNF basis, as a tuple of rows
    :rtype: tuple
    """
    cols = [tuple(int(x) for x in c) for c in generators if any(c)]
    rows = [[c[i] for c in cols] for i in reversed(range(n))]
    if not cols or sympy.Matrix(rows).rank() < n:
        raise ValueError('The generators do not span a lattice of full rank {}'.format(n))

    dm = DomainMatrix([[ZZ(x) for x in row] for row in rows], (n, len(cols)), ZZ)
    if modulus is None:
        w = _sympy_hnf(dm)
    else:
        w = _sympy_hnf(dm, D=ZZ(modulus ** n))
    w = w.to_Matrix().tolist()

    return tuple(tuple(int(w[n - 1 - i][n - 1 - j]) for j in range(n)) for i in range(n))


def solve_lower(b: IntMatrix, x: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """
    Solves ``b @ c = x`` over the integers for a lower-triangular ``b`` with
    nonzero diagonal; returns ``None`` if ``x`` is not in the column lattice.
    """
    c: List[int] = []
    for i, row in enumerate(b):
        s = x[i] - sum(row[j] * c[j] for j in range(i))
        if s % row[i]:
            return None
        c.append(s // row[i])
    return tuple(c)


def modular_kernel(rows: Sequence[Sequence[int]], ncols: int, p: int, e: int) -> List[Tuple[int, ...]]:
    """
    Returns generators of the lattice ``{x in Z^ncols : M x = 0 mod p^e}``.

    The matrix is diagonalized over ``Z/p^e`` by row and column operations,
    pivoting on entries of least ``p``-adic valuation; the recorded column
    operations carry the diagonal solution lattice back. The multiples
    ``p^e * e_i`` are always included.
    """
    q = p ** e
    a = [[x % q for x in row] for row in rows]
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    exps: List[int] = []

    for t in range(min(len(a), ncols)):
        best = None
        for i in range(t, len(a)):
            for j in range(t, ncols):
                if a[i][j]:
                    val = valuation(a[i][j], p)
                    if best is None or val < best[0]:
                        best = (val, i, j)
        if best is None:
            break
        val, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a + v:
            row[t], row[j] = row[j], row[t]

        pv = p ** val
        unit_inv = pow(a[t][t] // pv, -1, q)
        for i in range(t + 1, len(a)):
            c = (a[i][t] // pv) * unit_inv % q
            if c:
                a[i] = [(x - c * y) % q for x, y in zip(a[i], a[t])]
        for j in range(t + 1, ncols):
            c = (a[t][j] // pv) * unit_inv % q
            if c:
                for row in a + v:
                    row[j] = (row[j] - c * row[t]) % q
        exps.append(val)

    gens = []
    for j in range(ncols):
        scale = p ** (e - exps[j]) if j < len(exps) else 1
        gens.append(tuple(v[i][j] * scale for i in range(ncols)))
    gens.extend(tuple(q if i == j else 0 for i in range(ncols)) for j in range(ncols))
    return gens
