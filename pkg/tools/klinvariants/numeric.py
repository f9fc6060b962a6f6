"""
Double-precision u_q(sl2), independent of the exact pipeline.

Elements are complex numpy vectors over the PBW basis ``E^a F^b K^c``.
Left multiplication by the generators is assembled directly from

    K E^a F^b K^c = q^{2(a-b)} E^a F^b K^{c+1}
    F E^a = E^a F - [a] E^{a-1} (q^{a-1} K - q^{1-a} K^{-1}) / (q - q^{-1})

and every derived quantity (Drinfeld element, ribbon elements, integral)
is recomputed from these matrices in floating point.  The scalars are used
to cross-check :func:`~.cyclo.embed_numeric` of the exact results.
"""

from __future__ import annotations

import logging
import math
from functools import cache
from typing import TYPE_CHECKING

import numpy as np

from .cyclo import embed_numeric

if TYPE_CHECKING:
    from .cyclo import CycloScalar

_logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9


class NumericUq:
    """u_q(sl2) at ``q = e^{2 pi i / r}`` in complex128."""

    def __init__(self, r: int) -> None:
        if r < 3:
            msg = f"root-of-unity order r must be at least 3, got {r}"
            raise ValueError(msg)
        self.r = r
        self.n = r // math.gcd(r, 2)
        self.rsecond = r // math.gcd(r, 4)
        self.q = np.exp(2j * np.pi / r)
        self.dim = self.n**3
        self.top = self.index(self.n - 1, self.n - 1, self.n - 1)
        self.left_E, self.left_F, self.left_K, self.left_Kinv = self._generator_matrices()

    # ── basis ──

    def index(self, a: int, b: int, c: int) -> int:
        n = self.n
        return (a * n + b) * n + c % n

    def basis_vector(self, a: int, b: int, c: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.complex128)
        if a < self.n and b < self.n:
            v[self.index(a, b, c)] = 1.0
        return v

    def unit(self) -> np.ndarray:
        return self.basis_vector(0, 0, 0)

    def qn(self, k: int) -> complex:
        return self.q**k

    def brace(self, k: int) -> complex:
        return self.q**k - self.q ** (-k)

    def qint(self, k: int) -> complex:
        return self.brace(k) / self.brace(1)

    def qfact(self, k: int) -> complex:
        out = 1.0 + 0j
        for j in range(1, k + 1):
            out *= self.qint(j)
        return out

    def _generator_matrices(self) -> tuple[np.ndarray, ...]:
        n, dim = self.n, self.dim
        E = np.zeros((dim, dim), dtype=np.complex128)
        F = np.zeros((dim, dim), dtype=np.complex128)
        K = np.zeros((dim, dim), dtype=np.complex128)
        Kinv = np.zeros((dim, dim), dtype=np.complex128)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    col = self.index(a, b, c)
                    K[self.index(a, b, c + 1), col] = self.qn(2 * (a - b))
                    Kinv[self.index(a, b, c - 1), col] = self.qn(-2 * (a - b))
                    if a + 1 < n:
                        E[self.index(a + 1, b, c), col] = 1.0
                    if b + 1 < n:
                        F[self.index(a, b + 1, c), col] += 1.0
                    if a >= 1:
                        scale = self.qint(a) / self.brace(1)
                        F[self.index(a - 1, b, c + 1), col] -= (
                            scale * self.qn(a - 1) * self.qn(-2 * b)
                        )
                        F[self.index(a - 1, b, c - 1), col] += (
                            scale * self.qn(1 - a) * self.qn(2 * b)
                        )
        return E, F, K, Kinv

    # ── structure ──

    def integral_normalization(self) -> complex:
        n = self.n
        return math.sqrt(self.rsecond) * self.qfact(n - 1) / self.brace(1) ** (n - 1)

    def integral(self, x: np.ndarray) -> complex:
        return complex(self.integral_normalization() * x[self.top])

    def counit(self, x: np.ndarray) -> complex:
        return complex(sum(x[self.index(0, 0, c)] for c in range(self.n)))

    def cointegral(self) -> np.ndarray:
        n = self.n
        v = np.zeros(self.dim, dtype=np.complex128)
        for c in range(n):
            v[self.index(n - 1, n - 1, c)] = 1.0
        return v / self.integral_normalization()

    def _alpha(self, a: int, sign: int) -> complex:
        return self.brace(sign) ** a / self.qfact(a)

    def drinfeld_u(self) -> np.ndarray:
        """``u = S(R'') R'`` with ``R' = E^a K^b``, ``S(F^a K^c) = K^{-c} (-K F)^a``."""
        n = self.n
        minus_KF = -self.left_K @ self.left_F
        out = np.zeros(self.dim, dtype=np.complex128)
        for a in range(n):
            alpha = self._alpha(a, 1) / n
            for c in range(n):
                w = np.zeros(self.dim, dtype=np.complex128)
                for b in range(n):
                    exp = a * (a - 1) // 2 - 2 * b * c + 2 * a * b - 2 * a * c
                    w += alpha * self.qn(exp) * self.basis_vector(a, 0, b)
                for _ in range(a):
                    w = minus_KF @ w
                for _ in range(c):
                    w = self.left_Kinv @ w
                out += w
        return out

    def drinfeld_u_inv(self) -> np.ndarray:
        """``u^{-1} = Rbar'' S(Rbar')`` with ``S(E^a K^b) = K^{-b} (-E K^{-1})^a``."""
        n = self.n
        minus_EKinv = -self.left_E @ self.left_Kinv
        out = np.zeros(self.dim, dtype=np.complex128)
        for a in range(n):
            alpha = self._alpha(a, -1) / n
            for b in range(n):
                s = self.unit()
                for _ in range(a):
                    s = minus_EKinv @ s
                for _ in range(b):
                    s = self.left_Kinv @ s
                for c in range(n):
                    exp = -(a * (a - 1) // 2) + 2 * b * c
                    w = s.copy()
                    for _ in range(c):
                        w = self.left_K @ w
                    for _ in range(a):
                        w = self.left_F @ w
                    out += alpha * self.qn(exp) * w
        return out

    def ribbon(self) -> np.ndarray:
        return self.left_Kinv @ self.drinfeld_u()

    def ribbon_inv(self) -> np.ndarray:
        return self.left_K @ self.drinfeld_u_inv()

    def _top_row(self, a: int, b: int, c: int) -> np.ndarray:
        """``e_top^T L(E^a F^b K^c)``, so that ``lambda(x y)`` is a dot product."""
        row = np.zeros(self.dim, dtype=np.complex128)
        row[self.top] = 1.0
        for _ in range(a):
            row = row @ self.left_E
        for _ in range(b):
            row = row @ self.left_F
        for _ in range(c):
            row = row @ self.left_K
        return row

    def hopf_coefficient(self) -> complex:
        """``(lambda (x) lambda)(R_21 R)``."""
        n = self.n
        terms = []
        for a in range(n):
            alpha = self._alpha(a, 1) / n
            for b in range(n):
                for c in range(n):
                    exp = a * (a - 1) // 2 - 2 * b * c + 2 * a * b - 2 * a * c
                    terms.append((a, b, c, alpha * self.qn(exp)))
        coef = np.array([t[3] for t in terms])
        rows_F = np.array([self._top_row(0, a, c) for a, _, c, _ in terms])
        rows_E = np.array([self._top_row(a, 0, b) for a, b, _, _ in terms])
        cols_E = [self.index(a, 0, b) for a, b, _, _ in terms]
        cols_F = [self.index(0, a, c) for a, _, c, _ in terms]
        # A[i, j] = lambda(R''_i R'_j), B[i, j] = lambda(R'_i R''_j) (without xi)
        A = rows_F[:, cols_E]
        B = rows_E[:, cols_F]
        xi = self.integral_normalization()
        return complex(xi * xi * np.einsum("i,j,ij,ij->", coef, coef, A, B))

    def stabilization(self) -> complex:
        return self.integral(self.ribbon())


@cache
def numeric_uq(r: int) -> NumericUq:
    return NumericUq(r)


def float_value(name: str, r: int) -> complex:
    """Named scalar from the float pipeline.

    Raises:
        KeyError: For an unknown name.
    """
    nu = numeric_uq(r)
    builders = {
        "stabilization": nu.stabilization,
        "unknot+1": nu.stabilization,
        "unknot-1": lambda: nu.integral(nu.ribbon_inv()),
        "unknot0": lambda: nu.integral(nu.unit()),
        "clasp0": lambda: nu.counit(nu.cointegral()),
        "hopf": nu.hopf_coefficient,
    }
    if name not in builders:
        msg = f"no float pipeline for {name!r}; expected one of {sorted(builders)}"
        raise KeyError(msg)
    return builders[name]()


def agrees(exact: CycloScalar, value: complex, tol: float = DEFAULT_TOLERANCE) -> bool:
    re, im = embed_numeric(exact)
    return abs(complex(re, im) - value) < tol
