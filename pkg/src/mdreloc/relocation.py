"""Relocation maps and the multi-copy (MD) parity-check construction.

A relocation map attaches a value in [0, M) to every nonzero entry of a
host matrix.  The MD matrix is an M x M grid of blocks over the host
shape: entries with value 0 stay on the diagonal blocks, and an entry
with value L is moved so that variable-node copy j is checked in
check-node copy (j + L) mod M.  Equivalently block (i, j) of the MD
matrix holds exactly the host entries whose value is (i - j) mod M.

A cycle of the host survives inside a single copy structure iff its
alternating entry-value sum vanishes mod M; such cycles (and absorbing
sets all of whose cycles satisfy this) are called *active* here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cycles import Cycle
from .tanner import BinaryMatrix, ParseError, QcMatrix, expand_qc

GRANULARITIES = ("circulant", "entry")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class RelocationMap:
    """Mutable assignment of relocation values to units of a host matrix.

    Units are either single entries or whole circulants (the latter needs
    the quasi-cyclic structure).  Each unit may be assigned once; entries
    not covered by any assignment have value 0.
    """

    def __init__(
        self,
        m_copies: int,
        matrix: BinaryMatrix,
        qc: QcMatrix | None = None,
        granularity: str = "entry",
    ):
        if not is_prime(m_copies):
            raise ValueError(f"number of copies {m_copies} is not prime")
        if granularity not in GRANULARITIES:
            raise ValueError(f"granularity must be one of {GRANULARITIES}")
        if granularity == "circulant" and qc is None:
            raise ValueError("circulant granularity needs the circulant table")
        if qc is not None and expand_qc(qc).entries != matrix.entries:
            raise ValueError("matrix does not match the expanded circulant table")
        self.m_copies = m_copies
        self.matrix = matrix
        self.qc = qc
        self.granularity = granularity
        self._entry_values: dict[int, int] = {}
        self._units: list[tuple] = []

    def _check_value(self, ell: int):
        if not (0 <= ell < self.m_copies):
            raise ValueError(f"relocation value {ell} out of range [0, {self.m_copies})")

    def assign_entry(self, row: int, col: int, ell: int):
        """Assign one entry, identified by its matrix position."""
        self._check_value(ell)
        eid = self.matrix.entry_index.get((row, col))
        if eid is None:
            raise ValueError(f"({row}, {col}) is not a nonzero position of the host")
        if eid in self._entry_values:
            raise ValueError(f"entry ({row}, {col}) already assigned")
        self._entry_values[eid] = ell
        self._units.append(("e", row, col, ell))

    def assign_circulant(self, bi: int, bj: int, ell: int):
        """Assign all p entries of one circulant block."""
        self._check_value(ell)
        if self.qc is None:
            raise ValueError("no circulant table attached to this map")
        if (bi, bj) not in self.qc.shift_of_block:
            raise ValueError(f"block ({bi}, {bj}) is a zero circulant")
        k = self.qc.shift_of_block[(bi, bj)]
        p = self.qc.p
        eids = []
        for r in range(p):
            pos = (bi * p + r, bj * p + (r + k) % p)
            eid = self.matrix.entry_index[pos]
            if eid in self._entry_values:
                raise ValueError(f"block ({bi}, {bj}) overlaps an assigned entry")
            eids.append(eid)
        for eid in eids:
            self._entry_values[eid] = ell
        self._units.append(("c", bi, bj, ell))

    def value(self, entry_id: int) -> int:
        """Relocation value of an entry-id (0 when unassigned)."""
        return self._entry_values.get(entry_id, 0)

    def value_at(self, row: int, col: int) -> int:
        eid = self.matrix.entry_index.get((row, col))
        if eid is None:
            raise ValueError(f"({row}, {col}) is not a nonzero position of the host")
        return self._entry_values.get(eid, 0)

    @property
    def assigned_units(self) -> tuple[tuple, ...]:
        """Assignments in order, as ('c', bi, bj, ell) / ('e', row, col, ell)."""
        return tuple(self._units)

    @property
    def assigned_entry_ids(self) -> frozenset[int]:
        return frozenset(self._entry_values)

    def copy(self) -> "RelocationMap":
        dup = RelocationMap(self.m_copies, self.matrix, self.qc, self.granularity)
        dup._entry_values = dict(self._entry_values)
        dup._units = list(self._units)
        return dup

    def to_text(self) -> str:
        out = [f"reloc M={self.m_copies} granularity={self.granularity}"]
        for unit in self._units:
            out.append(" ".join(str(t) for t in unit))
        return "\n".join(out) + "\n"


def parse_reloc(text, matrix: BinaryMatrix, qc: QcMatrix | None = None) -> RelocationMap:
    """Parse the text produced by ``RelocationMap.to_text``."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [(i + 1, ln) for i, ln in enumerate(lines) if ln]
    if not lines:
        raise ParseError("empty relocation file", 1)
    ln0, header = lines[0]
    toks = header.split()
    if len(toks) != 3 or toks[0] != "reloc":
        raise ParseError("expected header 'reloc M=<M> granularity=<g>'", ln0)
    try:
        fields = dict(t.split("=", 1) for t in toks[1:])
        m_copies = int(fields["M"])
        granularity = fields["granularity"]
    except (ValueError, KeyError):
        raise ParseError(f"malformed header {header!r}", ln0) from None
    try:
        reloc = RelocationMap(m_copies, matrix, qc=qc, granularity=granularity)
    except ValueError as exc:
        raise ParseError(str(exc), ln0) from None
    for ln, raw in lines[1:]:
        toks = raw.split()
        try:
            if toks[0] == "c" and len(toks) == 4:
                reloc.assign_circulant(int(toks[1]), int(toks[2]), int(toks[3]))
            elif toks[0] == "e" and len(toks) == 4:
                reloc.assign_entry(int(toks[1]), int(toks[2]), int(toks[3]))
            else:
                raise ValueError(f"expected 'c bi bj ell' or 'e row col ell', got {raw!r}")
        except ValueError as exc:
            raise ParseError(str(exc), ln) from None
    return reloc


# ---------------------------------------------------------------------------
# Activity of cycles and absorbing sets


def alternating_value_sum(cycle: Cycle, value) -> int:
    """Signed sum of per-entry values along the cycle traversal.

    ``value`` maps entry-id -> int.  Signs alternate -, +, -, ... along
    the canonical step order.  Which entry takes which sign depends on
    the traversal's starting point and direction, but divisibility by M
    does not, and that is the only property read off this value.
    """
    total = 0
    for i, (_, _, eid) in enumerate(cycle.steps):
        v = value(eid)
        total += v if i % 2 else -v
    return total


def alternating_sum(cycle: Cycle, reloc: RelocationMap) -> int:
    """Signed relocation-value sum along the cycle (see alternating_value_sum)."""
    return alternating_value_sum(cycle, reloc.value)


def is_cycle_active(cycle: Cycle, reloc: RelocationMap) -> bool:
    """A cycle stays a within-copy cycle iff its alternating sum is 0 mod M."""
    return alternating_sum(cycle, reloc) % reloc.m_copies == 0


def is_uas_active(basis, reloc: RelocationMap) -> bool:
    """An absorbing set reappears per copy iff all its basic cycles are active.

    ``basis`` is a CycleBasis of the degree-2 subgraph; activity of the
    basic cycles forces activity of every cycle in the span.
    """
    return all(is_cycle_active(c, reloc) for c in basis.cycles)


# ---------------------------------------------------------------------------
# MD assembly


@dataclass(frozen=True)
class MdParts:
    """The host split by relocation value: parts[0] keeps value-0 entries."""

    m_copies: int
    parts: tuple[BinaryMatrix, ...]


def split_matrices(matrix: BinaryMatrix, reloc: RelocationMap) -> MdParts:
    """Split the host into M same-shape matrices by relocation value."""
    buckets: list[list[tuple[int, int]]] = [[] for _ in range(reloc.m_copies)]
    for eid, (r, c) in enumerate(matrix.entries):
        buckets[reloc.value(eid)].append((r, c))
    parts = tuple(
        BinaryMatrix.from_entries(matrix.n_rows, matrix.n_cols, b) for b in buckets
    )
    return MdParts(reloc.m_copies, parts)


def md_edge_copies(ell: int, m_copies: int) -> tuple[tuple[int, int], ...]:
    """(check copy, variable copy) pairs an entry of value ell induces."""
    return tuple(((j + ell) % m_copies, j) for j in range(m_copies))


def assemble_md(matrix: BinaryMatrix, reloc: RelocationMap) -> BinaryMatrix:
    """The M-copy MD matrix: block (i, j) holds entries of value (i - j) mod M.

    Row/column copy j occupies the j-th block of rows/columns, so MD
    position (i * n_rows + r, j * n_cols + c) is nonzero iff the host has
    an entry at (r, c) with relocation value (i - j) mod M.
    """
    if reloc.matrix.entries != matrix.entries:
        raise ValueError("relocation map was built for a different host")
    m = reloc.m_copies
    out = []
    for eid, (r, c) in enumerate(matrix.entries):
        for ci, cj in md_edge_copies(reloc.value(eid), m):
            out.append((ci * matrix.n_rows + r, cj * matrix.n_cols + c))
    return BinaryMatrix.from_entries(m * matrix.n_rows, m * matrix.n_cols, out)
