"""Unlabeled elementary absorbing sets (UASs) in Tanner graphs.

An (a, d1) UAS over a column-weight-gamma code is a set of a variable
nodes whose neighbouring check nodes split into d1 checks of induced
degree 1 and d2 checks of induced degree 2, with no check of higher
induced degree, where every VN touches strictly more degree-2 than
degree-1 checks and the degree-2 part of the induced subgraph is
connected.

The structural identities used throughout:

    d2 = (a * gamma - d1) / 2
    basis size = d2 - a + 1          (cycle rank of the degree-2 part)

Two canonical fixtures, ``4_2_g3`` and ``4_4_g4``, are shipped for tests
and command-line experiments; they are the smallest problematic objects
for column weights 3 and 4 respectively.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tanner import BinaryMatrix, QcMatrix, TannerGraph, build_graph


@dataclass(frozen=True)
class UasConfig:
    """The (a, d1) class of an absorbing set in a gamma-regular code."""

    a: int
    d1: int
    gamma: int

    def __post_init__(self):
        if self.a < 1:
            raise ValueError("a must be positive")
        if self.gamma < 1:
            raise ValueError("gamma must be positive")
        if self.d1 < 0:
            raise ValueError("d1 must be nonnegative")
        if (self.a * self.gamma - self.d1) % 2:
            raise ValueError(
                f"a*gamma - d1 = {self.a * self.gamma - self.d1} is odd;"
                " every degree-2 check consumes two edges"
            )
        if self.d1 > self.a * ((self.gamma - 1) // 2):
            raise ValueError(
                "d1 too large: some VN would have at least as many degree-1"
                " as degree-2 check neighbours"
            )
        if (self.a * self.gamma - self.d1) // 2 < self.a - 1:
            raise ValueError(
                "too few degree-2 checks to connect all variable nodes"
            )

    @property
    def name(self) -> str:
        return f"{self.a}_{self.d1}_g{self.gamma}"


def degree2_check_count(c: UasConfig) -> int:
    """Number of degree-2 checks, d2 = (a*gamma - d1) / 2."""
    return (c.a * c.gamma - c.d1) // 2


def basic_cycle_count(c: UasConfig) -> int:
    """Cycle rank of the degree-2 part, d2 - a + 1; nonnegative by construction."""
    return degree2_check_count(c) - c.a + 1


def cycle_count_bounds(c: UasConfig) -> tuple[int, int]:
    """Inclusive bounds on the total number of cycles in the UAS subgraph.

    With n basic cycles the total lies between n(n+1)/2 (every consecutive
    run of basis cycles combines into one cycle) and 2^n - 1 (every
    nonempty combination is a cycle).
    """
    n = basic_cycle_count(c)
    return (n * (n + 1) // 2, 2**n - 1)


@dataclass(frozen=True)
class ConfigClass:
    """Structural classification; None means not decidable from (a, d1, gamma)."""

    non_regenerable: bool | None
    stand_alone: bool | None


def classify_config(c: UasConfig) -> ConfigClass:
    """Sufficient-condition classification of a config.

    d1 = 0 cannot lose any degree-1 checks to become a smaller-d1 object,
    and has all its edges internal, so it is both non-regenerable and
    stand-alone.  A config whose degree-2 checks saturate all C(a, 2) VN
    pairs is non-regenerable as well.  Anything else is left undecided.
    """
    if c.d1 == 0:
        return ConfigClass(non_regenerable=True, stand_alone=True)
    if degree2_check_count(c) == c.a * (c.a - 1) // 2:
        return ConfigClass(non_regenerable=True, stand_alone=None)
    return ConfigClass(non_regenerable=None, stand_alone=None)


@dataclass(frozen=True)
class UasInstance:
    """A concrete placement of a UAS inside a host Tanner graph.

    Node and entry ids are the host's.  Hash/equality ignore the graph
    reference so instances can be collected in sets.
    """

    vns: tuple[int, ...]
    deg1_cns: tuple[int, ...]
    deg2_cns: tuple[int, ...]
    entry_ids: tuple[int, ...]
    deg2_entry_ids: tuple[int, ...]
    graph: TannerGraph

    def __eq__(self, other):
        if not isinstance(other, UasInstance):
            return NotImplemented
        return (self.vns, self.deg1_cns, self.deg2_cns) == (
            other.vns,
            other.deg1_cns,
            other.deg2_cns,
        )

    def __hash__(self):
        return hash((self.vns, self.deg1_cns, self.deg2_cns))

    @property
    def a(self) -> int:
        return len(self.vns)

    @property
    def d1(self) -> int:
        return len(self.deg1_cns)

    def deg2_subgraph(self) -> TannerGraph:
        """The induced subgraph restricted to degree-2 checks."""
        return self.graph.subgraph(self.vns, self.deg2_cns)


def classify_vn_set(g: TannerGraph, vns) -> tuple[list[int], list[int], list[int]]:
    """Split the checks neighbouring ``vns`` by induced degree: (deg1, deg2, higher)."""
    counts: dict[int, int] = {}
    for vn in vns:
        for cn, _ in g.vn_adj[vn]:
            counts[cn] = counts.get(cn, 0) + 1
    deg1 = sorted(cn for cn, k in counts.items() if k == 1)
    deg2 = sorted(cn for cn, k in counts.items() if k == 2)
    higher = sorted(cn for cn, k in counts.items() if k > 2)
    return deg1, deg2, higher


def _deg2_connected(g: TannerGraph, vns, deg2_cns) -> bool:
    vlist = sorted(vns)
    if len(vlist) <= 1:
        return True
    cset = set(deg2_cns)
    adj: dict[int, set[int]] = {v: set() for v in vlist}
    for cn in cset:
        members = [vn for vn, _ in g.cn_adj[cn] if vn in adj]
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                adj[members[i]].add(members[j])
                adj[members[j]].add(members[i])
    seen = {vlist[0]}
    stack = [vlist[0]]
    while stack:
        for nxt in adj[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == len(vlist)


def _build_instance(g: TannerGraph, vns, deg1, deg2) -> UasInstance:
    d2set = set(deg2)
    all_entries = []
    deg2_entries = []
    for vn in vns:
        for cn, eid in g.vn_adj[vn]:
            all_entries.append(eid)
            if cn in d2set:
                deg2_entries.append(eid)
    return UasInstance(
        vns=tuple(sorted(vns)),
        deg1_cns=tuple(sorted(deg1)),
        deg2_cns=tuple(sorted(deg2)),
        entry_ids=tuple(sorted(all_entries)),
        deg2_entry_ids=tuple(sorted(deg2_entries)),
        graph=g,
    )


def is_valid_instance(g: TannerGraph, vns, c: UasConfig) -> bool:
    """Check a VN set against the (a, d1) definition, including connectivity."""
    vns = sorted(set(vns))
    if len(vns) != c.a:
        return False
    if any(g.vn_degree(v) != c.gamma for v in vns):
        return False
    deg1, deg2, higher = classify_vn_set(g, vns)
    if higher or len(deg1) != c.d1:
        return False
    d1set, d2set = set(deg1), set(deg2)
    for vn in vns:
        n1 = sum(1 for cn, _ in g.vn_adj[vn] if cn in d1set)
        n2 = sum(1 for cn, _ in g.vn_adj[vn] if cn in d2set)
        if not n2 > n1:
            return False
    return _deg2_connected(g, vns, deg2)


def enumerate_uas(g: TannerGraph, c: UasConfig) -> list[UasInstance]:
    """All (a, d1) instances in the graph, sorted by VN tuple.

    Searches connected VN sets only (connectivity through shared checks),
    growing each set from its smallest VN so every candidate is visited
    once, and pruning as soon as any check reaches induced degree 3.
    """
    eligible = {v for v in g.vns if g.vn_degree(v) == c.gamma}

    # VN adjacency via shared checks, restricted to eligible VNs.
    nbrs: dict[int, set[int]] = {v: set() for v in eligible}
    for cn in g.cns:
        members = [vn for vn, _ in g.cn_adj[cn] if vn in eligible]
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                nbrs[members[i]].add(members[j])
                nbrs[members[j]].add(members[i])

    results: list[UasInstance] = []
    if c.a == 1:
        # Degenerate size-1 sets: gamma degree-1 checks, so only d1 == gamma
        # could match, and the strict majority condition always fails.
        return results

    cn_count: dict[int, int] = {}

    def add_vn(vn: int) -> bool:
        """Bump induced check degrees; undo and refuse if any reaches 3."""
        touched = []
        for cn, _ in g.vn_adj[vn]:
            cn_count[cn] = cn_count.get(cn, 0) + 1
            touched.append(cn)
            if cn_count[cn] > 2:
                for t in touched:
                    cn_count[t] -= 1
                return False
        return True

    def remove_vn(vn: int):
        for cn, _ in g.vn_adj[vn]:
            cn_count[cn] -= 1

    def emit(sub: list[int]):
        deg1 = sorted(cn for cn, k in cn_count.items() if k == 1)
        deg2 = sorted(cn for cn, k in cn_count.items() if k == 2)
        if len(deg1) != c.d1:
            return
        d1set, d2set = set(deg1), set(deg2)
        for vn in sub:
            n1 = sum(1 for cn, _ in g.vn_adj[vn] if cn in d1set)
            n2 = sum(1 for cn, _ in g.vn_adj[vn] if cn in d2set)
            if not n2 > n1:
                return
        if _deg2_connected(g, sub, deg2):
            results.append(_build_instance(g, sub, deg1, deg2))

    def extend(sub: list[int], ext: list[int], root: int, closed: set[int]):
        if len(sub) == c.a:
            emit(sub)
            return
        ext = list(ext)
        while ext:
            w = ext.pop(0)
            closed.add(w)
            if add_vn(w):
                # Exclusive new neighbours keep every connected set reachable
                # by exactly one insertion order.
                new_ext = ext + sorted(
                    u for u in nbrs[w] if u > root and u not in closed
                )
                closed_new = closed | set(new_ext)
                sub.append(w)
                extend(sub, new_ext, root, closed_new)
                sub.pop()
                remove_vn(w)

    for root in sorted(eligible):
        cn_count.clear()
        if not add_vn(root):
            continue
        ext0 = sorted(u for u in nbrs[root] if u > root)
        extend([root], ext0, root, {root} | set(ext0))
        remove_vn(root)

    results.sort(key=lambda inst: inst.vns)
    return results


def involvement_counts(
    instances, q: QcMatrix, active=None
) -> dict[tuple[int, int], int]:
    """Per-circulant count of instances whose degree-2 edges touch it.

    ``active`` is an optional boolean sequence aligned with ``instances``;
    instances flagged False are skipped.  The result covers every nonzero
    circulant of the base matrix, including zero counts.
    """
    counts = {(bi, bj): 0 for bi, bj, _ in q.circulants}
    for idx, inst in enumerate(instances):
        if active is not None and not active[idx]:
            continue
        blocks = set()
        for eid in inst.deg2_entry_ids:
            cn, vn = inst.graph.edge_by_id[eid]
            block = q.block_of_entry(cn, vn)
            if block not in counts:
                raise ValueError(f"entry ({cn}, {vn}) falls in a zero circulant {block}")
            blocks.add(block)
        for block in blocks:
            counts[block] += 1
    return counts


# ---------------------------------------------------------------------------
# Canonical fixtures


@dataclass(frozen=True)
class CanonicalUas:
    """A named reference UAS with its incidence matrix."""

    name: str
    config: UasConfig
    incidence: BinaryMatrix

    def graph(self) -> TannerGraph:
        return build_graph(self.incidence)

    def instance(self) -> UasInstance:
        found = enumerate_uas(self.graph(), self.config)
        if len(found) != 1:
            raise AssertionError(f"fixture {self.name} yields {len(found)} instances")
        return found[0]


def _canonical_4_2() -> CanonicalUas:
    # VNs v1..v4 are columns 0..3.  Degree-2 checks: the 4-ring plus one
    # diagonal; degree-1 checks hang off v1 and v3.
    pairs = [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)]
    entries = [(r, c) for r, (u, v) in enumerate(pairs) for c in (u, v)]
    entries += [(5, 0), (6, 2)]
    m = BinaryMatrix.from_entries(7, 4, entries)
    return CanonicalUas("4_2_g3", UasConfig(4, 2, 3), m)


def _canonical_4_4() -> CanonicalUas:
    # Both diagonals present (degree-2 part is K4); one degree-1 check per VN.
    pairs = [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3), (0, 2)]
    entries = [(r, c) for r, (u, v) in enumerate(pairs) for c in (u, v)]
    entries += [(6 + v, v) for v in range(4)]
    m = BinaryMatrix.from_entries(10, 4, entries)
    return CanonicalUas("4_4_g4", UasConfig(4, 4, 4), m)


CANONICAL_UAS: dict[str, CanonicalUas] = {
    f.name: f for f in (_canonical_4_2(), _canonical_4_4())
}


def canonical_uas(name: str) -> CanonicalUas:
    """Look up a canonical fixture by name ('4_2_g3' or '4_4_g4')."""
    try:
        return CANONICAL_UAS[name]
    except KeyError:
        options = ", ".join(sorted(CANONICAL_UAS))
        raise KeyError(f"unknown canonical UAS {name!r}; options: {options}") from None
