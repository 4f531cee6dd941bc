"""Small exact linear-algebra helpers over the integers and rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def int_det(M: Matrix) -> int:
    """Determinant of a square integer matrix (Bareiss fraction-free elimination)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(map(int, row)) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if A[r][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def transpose(M: Matrix) -> list[list[int]]:
    return [list(col) for col in zip(*M)] if M else []


def is_symmetric(M: Matrix) -> bool:
    n = len(M)
    return all(len(row) == n for row in M) and all(
        M[i][j] == M[j][i] for i in range(n) for j in range(i + 1, n)
    )


def symmetric_inertia(M: Matrix) -> tuple[int, int, int]:
    """Return ``(n_plus, n_minus, nullity)`` of a rational symmetric matrix.

    Congruence diagonalisation with symmetric pivoting; a zero diagonal with a
    nonzero off-diagonal entry is handled as a hyperbolic 2x2 block.
    """
    n = len(M)
    H = [[Fraction(x) for x in row] for row in M]
    active = list(range(n))
    pos = neg = 0
    while active:
        k = max(active, key=lambda i: abs(H[i][i]))
        if H[k][k] != 0:
            p = H[k][k]
            if p > 0:
                pos += 1
            else:
                neg += 1
            active.remove(k)
            for i in active:
                f = H[i][k] / p
                if f:
                    for j in active:
                        H[i][j] -= f * H[k][j]
            continue
        pair = next(
            ((i, j) for i in active for j in active if i < j and H[i][j] != 0), None
        )
        if pair is None:
            return pos, neg, len(active)
        i, j = pair
        # hyperbolic block [[0, b], [b, 0]] has inertia (1, 1)
        b = H[i][j]
        pos += 1
        neg += 1
        active.remove(i)
        active.remove(j)
        rows = {u: (H[u][i], H[u][j]) for u in active}
        for u in active:
            ui, uj = rows[u]
            for v in active:
                vi, vj = rows[v]
                H[u][v] -= (ui * vj + uj * vi) / b
    return pos, neg, 0


def symmetric_signature(M: Matrix) -> int:
    pos, neg, _ = symmetric_inertia(M)
    return pos - neg


def block_sum(A: Matrix, B: Matrix) -> tuple[tuple[int, ...], ...]:
    a, b = len(A), len(B)
    rows = [tuple(A[i]) + (0,) * b for i in range(a)]
    rows += [(0,) * a + tuple(B[i]) for i in range(b)]
    return tuple(rows)


def mat_vec(M: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in M]


def bilinear(M: Matrix, u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, mat_vec(M, v)))
