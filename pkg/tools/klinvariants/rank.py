"""
Exact rank of sparse matrices over Q(zeta_L).

The matrix is split into independent blocks (connected components of the
row/column incidence graph).  Each block first gets a cheap certificate:
reduce modulo a prime ``p = 1 mod L`` where zeta_L maps to a primitive L-th
root of unity in F_p.  Rank can only drop under reduction, so a block that
is full rank mod p is full rank over the field.  Blocks that fail the
certificate are eliminated exactly.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from typing import TYPE_CHECKING

from .cyclo import CycloScalar

if TYPE_CHECKING:
    from collections.abc import Iterator, Mapping

_logger = logging.getLogger(__name__)

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_PRIME_FLOOR = 1 << 31


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with the first twelve prime bases (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out: list[int] = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def split_primes(L: int, start: int = _PRIME_FLOOR) -> Iterator[tuple[int, int]]:
    """Yield ``(p, omega)`` with ``p = 1 mod L`` and omega of order exactly L mod p."""
    k = start // L + 1
    factors = _prime_factors(L)
    while True:
        p = k * L + 1
        k += 1
        if not is_probable_prime(p):
            continue
        for h in range(2, p):
            omega = pow(h, (p - 1) // L, p)
            if all(pow(omega, L // f, p) != 1 for f in factors):
                yield p, omega
                break


def _reduce_mod_p(x: CycloScalar, p: int, omega_powers: list[int]) -> int | None:
    den = x.denominator % p
    if den == 0:
        return None
    total = sum(c * w for c, w in zip(x.numerators, omega_powers, strict=False)) % p
    return total * pow(den, -1, p) % p


def _rank_mod_p(rows: list[dict[int, int]], p: int) -> int:
    rows = [dict(r) for r in rows if r]
    rank = 0
    while rows:
        rows.sort(key=len)
        pivot = rows.pop(0)
        col, val = next(iter(pivot.items()))
        inv = pow(val, -1, p)
        rank += 1
        remaining: list[dict[int, int]] = []
        for row in rows:
            factor = row.get(col)
            if factor:
                scale = factor * inv % p
                for c, v in pivot.items():
                    nv = (row.get(c, 0) - scale * v) % p
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
            if row:
                remaining.append(row)
        rows = remaining
    return rank


def _rank_exact(rows: list[dict[int, CycloScalar]]) -> int:
    rows = [dict(r) for r in rows if r]
    rank = 0
    while rows:
        rows.sort(key=len)
        pivot = rows.pop(0)
        col, val = next(iter(pivot.items()))
        inv = val.inv()
        pivot = {c: v * inv for c, v in pivot.items()}
        rank += 1
        remaining: list[dict[int, CycloScalar]] = []
        for row in rows:
            factor = row.get(col)
            if factor is not None:
                for c, v in pivot.items():
                    nv = row.get(c, None)
                    nv = -(factor * v) if nv is None else nv - factor * v
                    if nv.is_zero():
                        row.pop(c, None)
                    else:
                        row[c] = nv
            if row:
                remaining.append(row)
        rows = remaining
    return rank


def blocks(entries: Mapping[tuple[int, int], CycloScalar]) -> list[list[int]]:
    """Row index sets of the connected components of the nonzero pattern."""
    parent: dict[tuple[str, int], tuple[str, int]] = {}

    def find(x: tuple[str, int]) -> tuple[str, int]:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j), v in entries.items():
        if v.is_zero():
            continue
        a, b = find(("r", i)), find(("c", j))
        if a != b:
            parent[a] = b

    groups: dict[tuple[str, int], list[int]] = defaultdict(list)
    for node in list(parent):
        if node[0] == "r":
            groups[find(node)].append(node[1])
    return [sorted(g) for g in groups.values()]


def exact_rank(
    entries: Mapping[tuple[int, int], CycloScalar], nrows: int, ncols: int,
) -> int:
    """Rank over Q(zeta_L) of the sparse matrix with the given nonzero entries."""
    if not entries:
        return 0
    by_row: dict[int, dict[int, CycloScalar]] = defaultdict(dict)
    for (i, j), v in entries.items():
        if not (0 <= i < nrows and 0 <= j < ncols):
            msg = f"entry ({i}, {j}) outside a {nrows}x{ncols} matrix"
            raise IndexError(msg)
        if not v.is_zero():
            by_row[i][j] = v

    sample = next(iter(entries.values()))
    L = sample.ctx.L
    primes = split_primes(L)
    p, omega = next(primes)
    omega_powers = [pow(omega, k, p) for k in range(sample.ctx.degree)]

    total = 0
    for block_rows in blocks(entries):
        rows = [by_row[i] for i in block_rows]
        ncols_block = len({j for row in rows for j in row})
        full = min(len(rows), ncols_block)

        reduced: list[dict[int, int]] | None = []
        for row in rows:
            rrow: dict[int, int] = {}
            for j, v in row.items():
                rv = _reduce_mod_p(v, p, omega_powers)
                if rv is None:
                    reduced = None
                    break
                if rv:
                    rrow[j] = rv
            if reduced is None:
                break
            reduced.append(rrow)

        if reduced is not None and _rank_mod_p(reduced, p) == full:
            total += full
            continue
        block_rank = _rank_exact(rows)
        _logger.debug(
            "block of %d rows needed exact elimination: rank %d of %d",
            len(rows), block_rank, full,
        )
        total += block_rank
    return total
