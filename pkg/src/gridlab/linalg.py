"""Dense real linear algebra for grid-graph states.

Matrices are plain ``numpy`` arrays.  Vertex ``(i, j)`` of an ``a x b`` grid
sits at index ``(i-1)*b + (j-1)``, i.e. the ordering of ``|i> (x) |j>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, EmptyGraph, NotSymmetric
from .graph import GridGraph

SYM_TOL = 1e-12
PSD_TOL = 1e-9
SV_CLAMP = 1e-10
JACOBI_TOL = 1e-12
MAX_SWEEPS = 100


def vertex_index(i: int, j: int, b: int) -> int:
    return (i - 1) * b + (j - 1)


def laplacian(g: GridGraph) -> np.ndarray:
    """Integer combinatorial Laplacian L = D - A."""
    n = g.a * g.b
    L = np.zeros((n, n), dtype=np.int64)
    for (i, j), (k, l) in g.edges:
        u, v = vertex_index(i, j, g.b), vertex_index(k, l, g.b)
        L[u, u] += 1
        L[v, v] += 1
        L[u, v] -= 1
        L[v, u] -= 1
    return L


@dataclass(frozen=True)
class DensityMatrix:
    dim_a: int
    dim_b: int
    matrix: np.ndarray
    # L = 2m * matrix exactly; kept so exports can be rational
    denominator: int = 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def density(g: GridGraph) -> DensityMatrix:
    if g.m == 0:
        raise EmptyGraph("density matrix undefined for a graph without edges")
    return DensityMatrix(g.a, g.b, laplacian(g) / (2 * g.m), 2 * g.m)


def partial_transpose_matrix(rho, a: int | None = None, b: int | None = None) -> np.ndarray:
    """Transpose over the first (row) factor: <i,j|X|k,l> = <k,j|rho|i,l>."""
    if isinstance(rho, DensityMatrix):
        a, b, M = rho.dim_a, rho.dim_b, rho.matrix
    else:
        M = np.asarray(rho)
    if a is None or b is None or M.shape != (a * b, a * b):
        raise DimensionMismatch(f"matrix of shape {M.shape} is not ({a}*{b})x({a}*{b})")
    return M.reshape(a, b, a, b).transpose(2, 1, 0, 3).reshape(a * b, a * b)


def _off_norm(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.sqrt(np.sum(off * off)))


def _rotation(app: float, aqq: float, apq: float) -> tuple[float, float]:
    """(c, s) of the Jacobi rotation annihilating apq."""
    tau = (aqq - app) / (2.0 * apq)
    if abs(tau) > 1e150:
        t = 0.5 / tau
    else:
        t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return c, t * c


def sym_eigenvalues(M, tol: float = JACOBI_TOL) -> list[float]:
    """Eigenvalues of a real symmetric matrix, ascending, by cyclic Jacobi rotations.

    Sweeps continue until the off-diagonal Frobenius norm falls below
    ``tol * max(1, ||M||_F)``.
    """
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSymmetric(f"matrix of shape {A.shape} is not square")
    n = A.shape[0]
    if n == 0:
        return []
    scale = max(1.0, float(np.linalg.norm(A)))
    if np.max(np.abs(A - A.T)) > SYM_TOL * scale:
        raise NotSymmetric("matrix is not symmetric")
    A = (A + A.T) / 2
    target = tol * scale
    for _ in range(MAX_SWEEPS):
        if _off_norm(A) < target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                c, s = _rotation(A[p, p], A[q, q], apq)
                col_p = A[:, p].copy()
                col_q = A[:, q]
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :]
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0
    else:
        raise ArithmeticError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
    return sorted(float(x) for x in np.diag(A))


def min_eigenvalue(M) -> float:
    return sym_eigenvalues(M)[0]


def realign(M, n: int) -> np.ndarray:
    """Realignment R_n(M) of an (m*n)x(m*n) matrix.

    Row ``(q-1)*m + (p-1)`` is vec(M_pq) of block (p, q), so blocks are taken
    column by column: M_11, ..., M_m1, ..., M_1m, ..., M_mm.  vec is row-major.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or n < 1 or M.shape[0] % n:
        raise DimensionMismatch(f"cannot realign shape {M.shape} into {n}x{n} blocks")
    m = M.shape[0] // n
    return M.reshape(m, n, m, n).transpose(2, 0, 1, 3).reshape(m * m, n * n)


def singular_values(M, tol: float = 1e-15) -> list[float]:
    """Singular values, descending, by one-sided Jacobi on the columns of M.

    Each rotation is the Jacobi rotation of the Gram matrix M^T M applied
    without forming it, so small singular values keep absolute accuracy
    instead of inheriting the square root of a rounding error.
    """
    U = np.array(M, dtype=float)
    if U.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {U.shape}")
    if U.shape[0] < U.shape[1]:
        U = U.T.copy()
    n = U.shape[1]
    if U.size == 0:
        return []
    # columns this small are rounding noise of an exactly dependent column
    negligible = (n * np.finfo(float).eps * float(np.linalg.norm(U))) ** 2
    for _ in range(MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                up, uq = U[:, p], U[:, q]
                alpha, beta, gamma = float(up @ up), float(uq @ uq), float(up @ uq)
                if min(alpha, beta) <= negligible or abs(gamma) <= tol * math.sqrt(alpha * beta):
                    continue
                rotated = True
                c, s = _rotation(alpha, beta, gamma)
                new_p = c * up - s * uq
                U[:, q] = s * up + c * uq
                U[:, p] = new_p
        if not rotated:
            break
    else:
        raise ArithmeticError(f"one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps")
    return sorted((float(np.linalg.norm(U[:, j])) for j in range(n)), reverse=True)


def ky_fan_norm(M) -> float:
    """Sum of singular values (the square roots of the eigenvalues of M^T M)."""
    return math.fsum(singular_values(M))


def realignment_norm(rho: DensityMatrix) -> float:
    return ky_fan_norm(realign(rho.matrix, rho.dim_b))


# --- text export ------------------------------------------------------------

def format_matrix(M) -> str:
    M = np.asarray(M, dtype=float)
    lines = [f"{M.shape[0]} {M.shape[1]}"]
    lines += [" ".join(f"{x:.17g}" for x in row) for row in M]
    return "\n".join(lines) + "\n"


def format_matrix_exact(numerators, denominator: int = 1) -> str:
    """Rational export: each entry written as ``p/q`` in lowest terms."""
    N = np.asarray(numerators)
    lines = [f"{N.shape[0]} {N.shape[1]}"]
    for row in N:
        toks = []
        for x in row:
            f = Fraction(int(x), denominator)
            toks.append(f"{f.numerator}/{f.denominator}")
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    """Inverse of both export formats."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    r, c = (int(x) for x in lines[0].split())
    rows = [[float(Fraction(tok)) for tok in ln.split()] for ln in lines[1:]]
    M = np.array(rows, dtype=float).reshape(r, c)
    return M
