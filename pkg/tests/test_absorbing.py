"""Absorbing-set structure: configs, enumeration, and reference fixtures."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import mdreloc as md

from conftest import array_host, k4_host


def brute_force_uas(m: md.BinaryMatrix, config: md.UasConfig):
    """Check every VN subset against the definition directly.

    Deliberately dense and quadratic: a second, independent path to the
    same answer as the search-tree enumerator.
    """
    h = m.to_dense().astype(int)
    found = set()
    for vns in itertools.combinations(range(m.n_cols), config.a):
        sub = h[:, vns]
        deg = sub.sum(axis=1)
        if (deg > 2).any():
            continue
        deg1 = np.flatnonzero(deg == 1)
        deg2 = np.flatnonzero(deg == 2)
        if len(deg1) != config.d1:
            continue
        two = sub[deg2].sum(axis=0)
        one = sub[deg1].sum(axis=0)
        if not (two > one).all():
            continue
        parent = list(range(config.a))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for r in deg2:
            u, v = np.flatnonzero(sub[r])
            parent[find(u)] = find(v)
        if len({find(i) for i in range(config.a)}) != 1:
            continue
        found.add((vns, tuple(int(r) for r in deg1), tuple(int(r) for r in deg2)))
    return found


class TestUasConfig:
    def test_reference_structure_counts(self):
        c42 = md.UasConfig(4, 2, 3)
        assert md.degree2_check_count(c42) == 5
        assert md.basic_cycle_count(c42) == 2
        assert md.cycle_count_bounds(c42) == (3, 3)
        c44 = md.UasConfig(4, 4, 4)
        assert md.degree2_check_count(c44) == 6
        assert md.basic_cycle_count(c44) == 3
        assert md.cycle_count_bounds(c44) == (6, 7)

    def test_name(self):
        assert md.UasConfig(4, 2, 3).name == "4_2_g3"
        assert md.UasConfig(4, 4, 4).name == "4_4_g4"

    def test_parity_violation_rejected(self):
        with pytest.raises(ValueError):
            md.UasConfig(4, 1, 3)

    def test_too_many_degree1_checks_rejected(self):
        # d1 > a * floor((gamma - 1) / 2) contradicts the majority rule
        with pytest.raises(ValueError):
            md.UasConfig(4, 6, 3)

    def test_nonpositive_dimensions_rejected(self):
        with pytest.raises(ValueError):
            md.UasConfig(0, 0, 3)
        with pytest.raises(ValueError):
            md.UasConfig(4, -2, 3)
        with pytest.raises(ValueError):
            md.UasConfig(4, 2, 0)

    @settings(max_examples=60, deadline=None)
    @given(a=st.integers(1, 8), d1=st.integers(0, 12), gamma=st.integers(1, 6))
    def test_counts_are_consistent_when_valid(self, a, d1, gamma):
        try:
            cfg = md.UasConfig(a, d1, gamma)
        except ValueError:
            return
        d2 = md.degree2_check_count(cfg)
        assert 2 * d2 + d1 == a * gamma
        n_f = md.basic_cycle_count(cfg)
        assert n_f == d2 - a + 1
        low, high = md.cycle_count_bounds(cfg)
        assert low == n_f * (n_f + 1) // 2
        assert high == 2**n_f - 1


class TestClassify:
    def test_no_degree1_checks_is_standalone(self):
        cls = md.classify_config(md.UasConfig(4, 0, 3))
        assert cls.non_regenerable is True
        assert cls.stand_alone is True

    def test_complete_degree2_graph_is_non_regenerable(self):
        cls = md.classify_config(md.UasConfig(4, 4, 4))
        assert cls.non_regenerable is True
        assert cls.stand_alone is None

    def test_undecided_otherwise(self):
        cls = md.classify_config(md.UasConfig(4, 2, 3))
        assert cls.non_regenerable is None
        assert cls.stand_alone is None


class TestCanonicalFixtures:
    def test_4_2_layout(self, uas_4_2):
        m = uas_4_2.incidence
        assert (m.n_rows, m.n_cols) == (7, 4)
        assert m.entries == (
            (0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3),
            (3, 0), (3, 3), (4, 1), (4, 3), (5, 0), (6, 2),
        )

    def test_4_4_layout(self, uas_4_4):
        m = uas_4_4.incidence
        assert (m.n_rows, m.n_cols) == (10, 4)
        assert m.entries[:12] == (
            (0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3),
            (3, 0), (3, 3), (4, 1), (4, 3), (5, 0), (5, 2),
        )
        assert m.entries[12:] == ((6, 0), (7, 1), (8, 2), (9, 3))

    def test_unique_instance(self, uas_4_2, inst_4_2):
        assert inst_4_2.vns == (0, 1, 2, 3)
        assert inst_4_2.deg1_cns == (5, 6)
        assert inst_4_2.deg2_cns == (0, 1, 2, 3, 4)
        assert inst_4_2.deg2_entry_ids == tuple(range(10))
        assert inst_4_2.a == 4 and inst_4_2.d1 == 2

    def test_instance_equality_ignores_graph(self, uas_4_2):
        first = uas_4_2.instance()
        second = uas_4_2.instance()
        assert first is not second
        assert first == second
        assert hash(first) == hash(second)

    def test_gamma_regular(self, uas_4_2, uas_4_4):
        assert md.check_regular_gamma(uas_4_2.incidence) == 3
        assert md.check_regular_gamma(uas_4_4.incidence) == 4

    def test_unknown_name_lists_options(self):
        with pytest.raises(KeyError, match="4_2_g3"):
            md.canonical_uas("5_3_g3")


class TestEnumeration:
    @pytest.mark.parametrize(
        "rows,cols,p,config",
        [
            (3, 3, 3, md.UasConfig(4, 2, 3)),
            (3, 3, 5, md.UasConfig(4, 2, 3)),
            (4, 4, 5, md.UasConfig(4, 4, 4)),
        ],
    )
    def test_matches_brute_force(self, rows, cols, p, config):
        m = md.expand_qc(array_host(rows, cols, p))
        got = md.enumerate_uas(md.build_graph(m), config)
        keyed = {(i.vns, i.deg1_cns, i.deg2_cns) for i in got}
        assert len(keyed) == len(got)
        assert keyed == brute_force_uas(m, config)

    @pytest.mark.parametrize(
        "rows,cols,p,config,count",
        [
            (3, 3, 3, md.UasConfig(4, 2, 3), 27),
            (3, 3, 5, md.UasConfig(4, 2, 3), 5),
            (3, 5, 5, md.UasConfig(4, 2, 3), 150),
            (3, 5, 7, md.UasConfig(4, 2, 3), 84),
            (3, 7, 7, md.UasConfig(4, 2, 3), 441),
            (4, 4, 5, md.UasConfig(4, 4, 4), 20),
            (4, 5, 7, md.UasConfig(4, 4, 4), 42),
            (4, 6, 11, md.UasConfig(4, 4, 4), 0),
        ],
    )
    def test_known_host_counts(self, rows, cols, p, config, count):
        g = md.build_graph(md.expand_qc(array_host(rows, cols, p)))
        assert len(md.enumerate_uas(g, config)) == count

    def test_standalone_host(self):
        got = md.enumerate_uas(md.build_graph(k4_host()), md.UasConfig(4, 0, 3))
        assert len(got) == 1
        assert got[0].vns == (0, 1, 2, 3)
        assert got[0].deg1_cns == ()

    def test_instances_satisfy_definition(self):
        g = md.build_graph(md.expand_qc(array_host(3, 3, 3)))
        for inst in md.enumerate_uas(g, md.UasConfig(4, 2, 3)):
            sub = inst.deg2_subgraph()
            assert set(sub.vns) == set(inst.vns)
            assert all(sub.cn_degree(c) == 2 for c in inst.deg2_cns)
            assert len(sub.edges) == 2 * len(inst.deg2_cns)


class TestInvolvement:
    def test_counts_cover_all_instances(self):
        qc = array_host(3, 3, 3)
        g = md.build_graph(md.expand_qc(qc))
        instances = md.enumerate_uas(g, md.UasConfig(4, 2, 3))
        counts = md.involvement_counts(instances, qc)
        assert set(counts) == set(qc.shift_of_block)
        assert all(0 <= c <= len(instances) for c in counts.values())
        expected_total = sum(
            len({qc.block_of_entry(*inst.graph.edge_by_id[e]) for e in inst.deg2_entry_ids})
            for inst in instances
        )
        assert sum(counts.values()) == expected_total

    def test_active_filter(self):
        qc = array_host(3, 3, 3)
        g = md.build_graph(md.expand_qc(qc))
        instances = md.enumerate_uas(g, md.UasConfig(4, 2, 3))
        none_active = md.involvement_counts(instances, qc, active=[False] * len(instances))
        assert set(none_active.values()) == {0}
        all_active = md.involvement_counts(instances, qc, active=[True] * len(instances))
        assert all_active == md.involvement_counts(instances, qc)
