"""Shared fixtures: reference absorbing sets and small QC hosts."""

import itertools

import pytest

import mdreloc as md


def array_host(rows: int, cols: int, p: int) -> md.QcMatrix:
    """Fully populated QC matrix with shift i*j mod p at block (i, j).

    For prime p this layout has girth >= 6, which keeps the hosts valid
    design inputs without any screening step.
    """
    return md.QcMatrix.from_blocks(
        p, rows, cols, {(i, j): (i * j) % p for i in range(rows) for j in range(cols)}
    )


def lift_identity(m: md.BinaryMatrix) -> md.QcMatrix:
    """Wrap a plain matrix as a p=1 QC matrix, one circulant per entry."""
    return md.QcMatrix.from_blocks(1, m.n_rows, m.n_cols, {rc: 0 for rc in m.entries})


def k4_host() -> md.BinaryMatrix:
    """Six pairwise checks over four VNs: a single stand-alone (4,0) set."""
    pairs = itertools.combinations(range(4), 2)
    entries = [(r, v) for r, pair in enumerate(pairs) for v in pair]
    return md.BinaryMatrix.from_entries(6, 4, entries)


@pytest.fixture(scope="session")
def uas_4_2() -> md.CanonicalUas:
    return md.canonical_uas("4_2_g3")


@pytest.fixture(scope="session")
def uas_4_4() -> md.CanonicalUas:
    return md.canonical_uas("4_4_g4")


@pytest.fixture(scope="session")
def inst_4_2(uas_4_2) -> md.UasInstance:
    return uas_4_2.instance()


@pytest.fixture(scope="session")
def inst_4_4(uas_4_4) -> md.UasInstance:
    return uas_4_4.instance()


@pytest.fixture(scope="session")
def basis_4_2(inst_4_2) -> md.CycleBasis:
    return md.minimum_cycle_basis(inst_4_2.deg2_subgraph())


@pytest.fixture(scope="session")
def basis_4_4(inst_4_4) -> md.CycleBasis:
    return md.minimum_cycle_basis(inst_4_4.deg2_subgraph())


def arrangement_1(incidence: md.BinaryMatrix) -> md.RelocationMap:
    """Reference relocation that keeps the (4,2) set intact across copies."""
    reloc = md.RelocationMap(3, incidence)
    reloc.assign_entry(4, 1, 1)
    reloc.assign_entry(4, 3, 1)
    return reloc


def arrangement_2(incidence: md.BinaryMatrix) -> md.RelocationMap:
    """Reference relocation that breaks the (4,2) set."""
    reloc = md.RelocationMap(3, incidence)
    reloc.assign_entry(2, 3, 1)
    reloc.assign_entry(3, 0, 1)
    return reloc
