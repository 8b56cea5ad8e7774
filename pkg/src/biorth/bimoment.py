"""Moment arrays of the boundary functional.

``B[i][j]`` is the value of the linear functional on the normal monomial
``d^i e^j``.  Entries are generated from B[0][0] = 1 by three exact
recurrences:

* a second-order recurrence down the boundary column B[i][0],
* its mirror along the boundary row B[0][j],
* a bulk step that produces column j from column j-1 (the "column" fill,
  which consumes one e), or symmetrically row i from row i-1 (the "row"
  fill, which consumes one d).

The bulk step that fills column j at row i reads the three entries
(i-1, j-1), (i, j-1), (i+1, j-1), so producing a square block of order n
needs the boundary column to depth 2n and a trapezoid of intermediate
entries above the diagonal of the fill direction: column j is filled down
to row 2n - j.

Tables are cached per parameter set and grown in place; growth and lookup
are serialized by a lock so concurrent checkers can share one table.
"""

from __future__ import annotations

import csv
import io
import threading
from dataclasses import dataclass
from fractions import Fraction

from .core import AWParams, InvalidParams, SingularParams, format_rational

_FILLS = ("columns", "rows")


def boundary_column(p: AWParams, depth: int) -> list[Fraction]:
    """Moments of pure d-powers: [B[0][0], B[1][0], ..., B[depth][0]].

    B[i][0] = ((b + d - bd (a+c) q^(i-1)) B[i-1][0] - bd (1 - q^(i-1)) B[i-2][0])
              / (1 - abcd q^(i-1))

    seeded by B[0][0] = 1; the i = 1 step has no two-back term because its
    coefficient bd (1 - q^0) vanishes.
    """
    if depth < 0:
        raise InvalidParams(f"boundary depth must be >= 0, got {depth}")
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    bd = b * d
    abcd = p.abcd
    out = [Fraction(1)]
    for i in range(1, depth + 1):
        qi = q ** (i - 1)
        den = 1 - abcd * qi
        if den == 0:
            raise SingularParams(f"boundary column denominator vanishes at depth {i}")
        prev2 = out[i - 2] if i >= 2 else Fraction(0)
        out.append((((b + d) - bd * (a + c) * qi) * out[i - 1] - bd * (1 - qi) * prev2) / den)
    return out


def boundary_row(p: AWParams, depth: int) -> list[Fraction]:
    """Moments of pure e-powers: mirror of :func:`boundary_column` under
    a<->b, c<->d (swap (b+d, bd) for (a+c, ac))."""
    if depth < 0:
        raise InvalidParams(f"boundary depth must be >= 0, got {depth}")
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    ac = a * c
    abcd = p.abcd
    out = [Fraction(1)]
    for j in range(1, depth + 1):
        qj = q ** (j - 1)
        den = 1 - abcd * qj
        if den == 0:
            raise SingularParams(f"boundary row denominator vanishes at depth {j}")
        prev2 = out[j - 2] if j >= 2 else Fraction(0)
        out.append((((a + c) - ac * (b + d) * qj) * out[j - 1] - ac * (1 - qj) * prev2) / den)
    return out


class BimomentTable:
    """Growable trapezoidal store of exact bimoment values for one p."""

    def __init__(self, params: AWParams):
        self.params = params
        self._entries: dict[tuple[int, int], Fraction] = {(0, 0): Fraction(1)}
        self._order = 0
        self._col_depth = {0: 0}
        self._lock = threading.RLock()

    @property
    def order(self) -> int:
        return self._order

    def ensure(self, n: int) -> None:
        """Grow the stored trapezoid to cover the square block of order n."""
        if n < 0:
            raise InvalidParams(f"block order must be >= 0, got {n}")
        with self._lock:
            if n <= self._order:
                return
            p = self.params
            a, c, q = p.a, p.c, p.q
            ac = a * c
            entries = self._entries

            col0 = boundary_column(p, 2 * n)
            for i, value in enumerate(col0):
                entries[(i, 0)] = value
            self._col_depth[0] = 2 * n

            row0 = boundary_row(p, n)
            for j in range(1, n + 1):
                entries[(0, j)] = row0[j]
                depth = 2 * n - j
                start = self._col_depth.get(j, 0) + 1
                qi = q**start
                for i in range(start, depth + 1):
                    entries[(i, j)] = (
                        (1 - qi) * entries[(i - 1, j - 1)]
                        + (a + c) * qi * entries[(i, j - 1)]
                        - ac * qi * entries[(i + 1, j - 1)]
                    )
                    qi *= q
                self._col_depth[j] = depth
            self._order = n

    def entry(self, i: int, j: int) -> Fraction:
        if i < 0 or j < 0:
            raise InvalidParams(f"indices must be >= 0, got ({i}, {j})")
        key = (i, j)
        with self._lock:
            value = self._entries.get(key)
            if value is None:
                self.ensure(max(j, (i + j + 1) // 2))
                value = self._entries[key]
            return value

    def block(self, n: int) -> list[list[Fraction]]:
        self.ensure(n)
        with self._lock:
            return [[self._entries[(i, j)] for j in range(n + 1)] for i in range(n + 1)]

    def stored_items(self):
        with self._lock:
            return dict(self._entries)


_TABLES: dict[AWParams, BimomentTable] = {}
_TABLES_LOCK = threading.Lock()


def bimoment_table(p: AWParams) -> BimomentTable:
    """Shared cached table for p (grown on demand, never shrunk)."""
    with _TABLES_LOCK:
        table = _TABLES.get(p)
        if table is None:
            table = BimomentTable(p)
            _TABLES[p] = table
        return table


@dataclass(frozen=True)
class BimomentMatrix:
    """A square block B[i][j], 0 <= i, j <= order, for one parameter set."""

    params: AWParams
    order: int
    entries: tuple[tuple[Fraction, ...], ...]

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def rows(self) -> list[list[Fraction]]:
        return [list(row) for row in self.entries]

    def to_json_dict(self) -> dict:
        return {
            "params": self.params.to_map(),
            "n": self.order,
            "entries": [[format_rational(v) for v in row] for row in self.entries],
        }

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        for row in self.entries:
            writer.writerow([format_rational(v) for v in row])
        return buffer.getvalue()


def _block_by_columns(p: AWParams, n: int) -> list[list[Fraction]]:
    a, c, q = p.a, p.c, p.q
    ac = a * c
    col = boundary_column(p, 2 * n)
    row0 = boundary_row(p, n)
    block = [col[: n + 1]]  # temporarily column-major
    prev = col
    for j in range(1, n + 1):
        depth = 2 * n - j
        cur = [row0[j]]
        qi = q
        for i in range(1, depth + 1):
            cur.append((1 - qi) * prev[i - 1] + (a + c) * qi * prev[i] - ac * qi * prev[i + 1])
            qi *= q
        block.append(cur[: n + 1])
        prev = cur
    return [[block[j][i] for j in range(n + 1)] for i in range(n + 1)]


def _block_by_rows(p: AWParams, n: int) -> list[list[Fraction]]:
    b, d, q = p.b, p.d, p.q
    bd = b * d
    row = boundary_row(p, 2 * n)
    col0 = boundary_column(p, n)
    rows = [row[: n + 1]]
    prev = row
    for i in range(1, n + 1):
        depth = 2 * n - i
        cur = [col0[i]]
        qj = q
        for j in range(1, depth + 1):
            cur.append((1 - qj) * prev[j - 1] + (b + d) * qj * prev[j] - bd * qj * prev[j + 1])
            qj *= q
        rows.append(cur[: n + 1])
        prev = cur
    return rows


def bimoment_block(p: AWParams, n: int, fill: str = "columns") -> BimomentMatrix:
    """Build the order-n block with the chosen fill direction.

    fill="columns" consumes the recurrence that removes one e per step
    (column j from column j-1); fill="rows" consumes the d-removing mirror
    (row i from row i-1).  Both must produce identical blocks; computing
    each independently is what makes the agreement a real check.
    """
    if n < 0:
        raise InvalidParams(f"block order must be >= 0, got {n}")
    if fill not in _FILLS:
        raise InvalidParams(f"fill must be one of {_FILLS}, got {fill!r}")
    data = _block_by_columns(p, n) if fill == "columns" else _block_by_rows(p, n)
    return BimomentMatrix(params=p, order=n, entries=tuple(tuple(r) for r in data))


def check_transpose_symmetry(p: AWParams, n: int) -> bool:
    """True iff transposing the block matches both parameter swaps.

    The block for (a, b, c, d, q) transposed must equal the block for
    (b, a, d, c, q) and also the block for (d, c, b, a, q).
    """
    base = bimoment_table(p)
    base.ensure(n)
    for swapped_params in (p.swap_ab_cd(), p.swap_ad_bc()):
        swapped = bimoment_table(swapped_params)
        swapped.ensure(n)
        for i in range(n + 1):
            for j in range(n + 1):
                if base.entry(i, j) != swapped.entry(j, i):
                    return False
    return True


def check_recurrences(p: AWParams, n: int) -> bool:
    """Verify both bulk recurrences on every stored entry of the order-n
    trapezoid whose referenced neighbours are all present."""
    table = bimoment_table(p)
    table.ensure(n)
    entries = table.stored_items()
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    ac, bd = a * c, b * d
    for (i, j), value in entries.items():
        if i >= 1 and j >= 1:
            qi = q**i
            left = entries.get((i - 1, j - 1))
            mid = entries.get((i, j - 1))
            down = entries.get((i + 1, j - 1))
            if left is not None and mid is not None and down is not None:
                if value != (1 - qi) * left + (a + c) * qi * mid - ac * qi * down:
                    return False
            qj = q**j
            up = entries.get((i - 1, j))
            right = entries.get((i - 1, j + 1))
            if left is not None and up is not None and right is not None:
                if value != (1 - qj) * left + (b + d) * qj * up - bd * qj * right:
                    return False
    return True
