"""Greedy relocation design that removes a target absorbing set from an MD code.

The loop works on *units*: whole circulants for quasi-cyclic hosts,
single entries otherwise (or when forced).  Each round counts how many
still-active target instances involve each unassigned unit through a
degree-2 edge, picks the most involved unit, lets every instance
involving it vote for the relocation values that would break at least
one of its basic cycles, and permanently assigns the winning value,
preferring the auxiliary matrix that currently holds the fewest units.
The loop stops when no active instance remains, or when no unit can
attract a vote (the design is then reported incomplete rather than
forced).
"""

from __future__ import annotations

import warnings as _warnings
from dataclasses import dataclass
from fractions import Fraction

from .absorbing import UasConfig, enumerate_uas
from .cycles import CycleBasis, minimum_cycle_basis
from .relocation import (
    RelocationMap,
    alternating_value_sum,
    assemble_md,
    is_prime,
    is_uas_active,
)
from .tanner import (
    BinaryMatrix,
    QcMatrix,
    build_graph,
    check_no_4cycles,
    check_regular_gamma,
    expand_qc,
)

Unit = tuple


@dataclass(frozen=True)
class StepRecord:
    """One round of the design loop."""

    unit: Unit
    involvement: int
    votes: tuple[tuple[int, int], ...]
    chosen: int | None
    active_before: int
    active_after: int


@dataclass(frozen=True)
class DesignReport:
    """Outcome summary of a design run.

    ``final_active`` scales the per-copy count by M: an instance still
    active at the end reappears in each of the M copies of the MD
    matrix, so this is the expected instance count on the emitted
    matrix (exact for stand-alone targets).
    """

    m_copies: int
    config: UasConfig
    od_instances: int
    baseline_md_instances: int
    od_active_final: int
    final_active: int
    total_units: int
    relocated_units: int
    relocated_fraction: Fraction
    aux_counts: tuple[int, ...]
    steps: tuple[StepRecord, ...]
    warnings: tuple[str, ...]


@dataclass(frozen=True)
class DesignResult:
    h_md: BinaryMatrix
    relocation: RelocationMap
    report: DesignReport


def vote(basis: CycleBasis, unit_entries, reloc: RelocationMap) -> frozenset[int]:
    """Relocation values that would break at least one basic cycle.

    Candidate values overlay all entries of the unit at once, holding
    every other entry at its current value (unassigned entries count
    as 0); a value gets the vote when some basic cycle's alternating sum
    stops being divisible by M under the overlay.
    """
    unit = frozenset(unit_entries)
    m = reloc.m_copies
    votes = set()
    for xi in range(1, m):
        def overlaid(eid, _xi=xi):
            return _xi if eid in unit else reloc.value(eid)

        if any(alternating_value_sum(c, overlaid) % m for c in basis.cycles):
            votes.add(xi)
    return frozenset(votes)


def select_unit(counts: dict) -> Unit | None:
    """Unit with the highest count, smallest unit id on ties; None if all zero."""
    best: tuple[int, Unit] | None = None
    for unit, cnt in counts.items():
        if cnt <= 0:
            continue
        if best is None or cnt > best[0] or (cnt == best[0] and unit < best[1]):
            best = (cnt, unit)
    return None if best is None else best[1]


def _unit_table(
    matrix: BinaryMatrix, qc: QcMatrix | None, use_circulants: bool
) -> dict[Unit, tuple[int, ...]]:
    """unit id -> entry ids it covers, in a stable order."""
    if use_circulants:
        assert qc is not None
        table: dict[Unit, tuple[int, ...]] = {}
        for bi, bj, k in sorted(qc.circulants):
            eids = []
            for r in range(qc.p):
                pos = (bi * qc.p + r, bj * qc.p + (r + k) % qc.p)
                eids.append(matrix.entry_index[pos])
            table[("c", bi, bj)] = tuple(eids)
        return table
    return {
        ("e", r, c): (eid,) for eid, (r, c) in enumerate(matrix.entries)
    }


def _precondition_warnings(matrix, graph, config) -> list[str]:
    notes = []
    if not check_no_4cycles(graph):
        notes.append("host has 4-cycles; cycle-length guarantees do not apply")
    d1 = config.d1 - 2
    while d1 >= 0:
        smaller = UasConfig(config.a, d1, config.gamma)
        if enumerate_uas(graph, smaller):
            notes.append(
                f"host contains ({smaller.a}, {smaller.d1}) instances; relocated"
                f" ({config.a}, {config.d1}) sets may degrade into them"
            )
        d1 -= 2
    return notes


def design_md(
    host,
    m_copies: int,
    config: UasConfig,
    *,
    entry_granularity: bool = False,
) -> DesignResult:
    """Run the full design loop and assemble the MD matrix.

    ``host`` is a QcMatrix (relocating circulants unless
    ``entry_granularity``) or a BinaryMatrix (always entries).  M must be
    an odd prime and the host column weight must match the target's.
    Structural preconditions (no 4-cycles, no smaller-d1 siblings) are
    checked and reported as warnings, not errors.
    """
    if m_copies <= 2 or not is_prime(m_copies):
        raise ValueError(f"number of copies {m_copies} must be an odd prime")
    if isinstance(host, QcMatrix):
        matrix, qc = expand_qc(host), host
    else:
        matrix, qc = host, None
    gamma = check_regular_gamma(matrix)
    if gamma != config.gamma:
        raise ValueError(
            f"host column weight {gamma} does not match target gamma {config.gamma}"
        )
    use_circulants = qc is not None and not entry_granularity
    granularity = "circulant" if use_circulants else "entry"
    graph = build_graph(matrix)

    notes = _precondition_warnings(matrix, graph, config)
    for note in notes:
        _warnings.warn(note, stacklevel=2)

    units = _unit_table(matrix, qc, use_circulants)
    unit_of_entry: dict[int, Unit] = {}
    for unit, eids in units.items():
        for eid in eids:
            unit_of_entry[eid] = unit

    instances = enumerate_uas(graph, config)
    bases = [minimum_cycle_basis(inst.deg2_subgraph()) for inst in instances]
    instance_units = [
        frozenset(unit_of_entry[eid] for eid in inst.deg2_entry_ids)
        for inst in instances
    ]

    reloc = RelocationMap(m_copies, matrix, qc=qc, granularity=granularity)
    active = [is_uas_active(b, reloc) for b in bases]
    aux_units = {xi: 0 for xi in range(1, m_copies)}
    assigned: set[Unit] = set()
    steps: list[StepRecord] = []

    # Each non-final pass assigns one unit, so len(units) + 1 passes always
    # suffice; running out anyway means the bookkeeping is corrupted.
    for _ in range(len(units) + 1):
        active_count = sum(active)
        if active_count == 0:
            break
        counts = {u: 0 for u in units if u not in assigned}
        for i, is_active in enumerate(active):
            if not is_active:
                continue
            for unit in instance_units[i]:
                if unit in counts:
                    counts[unit] += 1
        unit = select_unit(counts)
        if unit is None:
            break
        involved = [i for i in range(len(instances)) if unit in instance_units[i]]
        tally = {xi: 0 for xi in range(1, m_copies)}
        for i in involved:
            for xi in vote(bases[i], units[unit], reloc):
                tally[xi] += 1
        top = max(tally.values())
        if top == 0:
            steps.append(
                StepRecord(
                    unit=unit,
                    involvement=counts[unit],
                    votes=tuple(sorted(tally.items())),
                    chosen=None,
                    active_before=active_count,
                    active_after=active_count,
                )
            )
            break
        winners = [xi for xi, t in tally.items() if t == top]
        chosen = min(winners, key=lambda xi: (aux_units[xi], xi))
        if unit[0] == "c":
            reloc.assign_circulant(unit[1], unit[2], chosen)
        else:
            reloc.assign_entry(unit[1], unit[2], chosen)
        assigned.add(unit)
        aux_units[chosen] += 1
        active = [is_uas_active(b, reloc) for b in bases]
        steps.append(
            StepRecord(
                unit=unit,
                involvement=counts[unit],
                votes=tuple(sorted(tally.items())),
                chosen=chosen,
                active_before=active_count,
                active_after=sum(active),
            )
        )
    else:
        if any(active):
            raise RuntimeError(
                "design loop exhausted the unit budget with active instances left"
            )

    od_active = sum(active)
    report = DesignReport(
        m_copies=m_copies,
        config=config,
        od_instances=len(instances),
        baseline_md_instances=m_copies * len(instances),
        od_active_final=od_active,
        final_active=m_copies * od_active,
        total_units=len(units),
        relocated_units=len(assigned),
        relocated_fraction=Fraction(len(assigned), len(units)) if units else Fraction(0),
        aux_counts=tuple(aux_units[xi] for xi in range(1, m_copies)),
        steps=tuple(steps),
        warnings=tuple(notes),
    )
    return DesignResult(assemble_md(matrix, reloc), reloc, report)


# ---------------------------------------------------------------------------
# Report rendering

REPORT_TSV_HEADER = (
    "config\tM\tod_instances\tbaseline_md_instances\tod_active_final\t"
    "final_active\trelocated_units\ttotal_units\trelocated_fraction\taux_counts"
)


def report_tsv(report: DesignReport) -> str:
    row = [
        report.config.name,
        report.m_copies,
        report.od_instances,
        report.baseline_md_instances,
        report.od_active_final,
        report.final_active,
        report.relocated_units,
        report.total_units,
        report.relocated_fraction,
        ",".join(str(c) for c in report.aux_counts),
    ]
    return REPORT_TSV_HEADER + "\n" + "\t".join(str(c) for c in row) + "\n"


def _unit_label(unit: Unit) -> str:
    return " ".join(str(t) for t in unit)


def report_log(report: DesignReport) -> str:
    """Human-readable design narrative, one line per loop round."""
    lines = [
        f"target ({report.config.a}, {report.config.d1}) over gamma={report.config.gamma}, M={report.m_copies}",
        f"host instances: {report.od_instances}"
        f" (baseline {report.baseline_md_instances} across copies)",
    ]
    for note in report.warnings:
        lines.append(f"warning: {note}")
    for n, step in enumerate(report.steps, start=1):
        votes = ", ".join(f"{xi}:{t}" for xi, t in step.votes)
        if step.chosen is None:
            lines.append(
                f"step {n}: unit {_unit_label(step.unit)} drew no votes ({votes});"
                " finalizing"
            )
        else:
            lines.append(
                f"step {n}: unit {_unit_label(step.unit)} (in {step.involvement} active)"
                f" -> value {step.chosen} [{votes}];"
                f" active {step.active_before} -> {step.active_after}"
            )
    lines.append(
        f"relocated {report.relocated_units}/{report.total_units} units"
        f" ({float(report.relocated_fraction):.1%});"
        f" final active instances: {report.final_active}"
    )
    return "\n".join(lines) + "\n"
