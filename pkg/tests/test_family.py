"""Test the family G_n, its wirings and distinguished data."""

import json

import pytest

from thomason_lab.core import family
from thomason_lab.core.config import DEFAULT_SNAPSHOT
from thomason_lab.core.errors import ParameterError, SelectionError, SnapshotError, WiringSearchError
from thomason_lab.core.family import (
    GadgetWiring,
    build,
    build_skeleton,
    construct_ham_cycles,
    enumerate_wirings,
    search_gadget_wirings,
    select_distinguished_cycles,
)
from thomason_lab.core.graph import check_planarity, check_three_connected, validate_cubic
from thomason_lab.core.oracle import enumerate_ham_cycles
from thomason_lab.core.patterns import ALPHA, BETA, ZETA
from thomason_lab.utils.snapshot import load_canonical_wiring, load_snapshot, save_snapshot

SPIRAL = GadgetWiring.from_shift((2, 0, 1))


class TestWirings:
    """Test the wiring search space."""

    def test_enumerated_classes(self):
        """Test symmetry reduction leaves one spiral and one zigzag."""
        wirings = enumerate_wirings()

        assert [w.shift for w in wirings] == [(2, 0, 1), (2, 1, 0)]
        assert [w.name for w in wirings] == ["spiral", "zigzag"]

        print("✅ Wiring enumeration test passed")

    def test_frames(self):
        """Test the spiral rotates rail roles by one position per gadget."""
        frames = SPIRAL.frames(3)

        assert frames[0] == (0, 1, 2)
        assert frames[1] == (1, 2, 0)
        assert frames[2] == (2, 0, 1)
        assert frames[3] == (0, 1, 2)

        print("✅ Frame test passed")

    @pytest.mark.slow
    def test_search_picks_spiral(self):
        """Test the search's canonical wiring is the one stored in the snapshot."""
        result = search_gadget_wirings(4)

        assert result.canonical_wiring.shift == (2, 0, 1)
        assert result.canonical_wiring == load_canonical_wiring(DEFAULT_SNAPSHOT)

        print("✅ Wiring search test passed")

    def test_search_without_survivors(self, monkeypatch):
        """Test an empty candidate space is a hard failure."""
        monkeypatch.setattr(family, "enumerate_wirings", lambda: [])

        with pytest.raises(WiringSearchError, match="no wiring satisfies the family invariants"):
            search_gadget_wirings(3)

        print("✅ Empty search test passed")

    def test_search_depth_checked(self):
        """Test the search refuses shallow checks."""
        with pytest.raises(ParameterError):
            search_gadget_wirings(2)

        print("✅ Search depth test passed")


class TestSkeleton:
    """Test graph structure of G_n."""

    @pytest.mark.parametrize("n", range(1, 13))
    def test_family_invariants(self, n):
        """Test G_n is cubic, planar, 3-connected with exactly three Hamiltonian cycles."""
        skeleton = build_skeleton(n, SPIRAL)
        graph = skeleton.graph
        constructed = construct_ham_cycles(skeleton)

        assert graph.n_vertices == 2 * n + 6
        assert validate_cubic(graph).ok
        assert check_planarity(graph).planar
        assert check_three_connected(graph)
        assert len(constructed) == 3
        if n <= 10:
            assert enumerate_ham_cycles(graph).cycles == constructed.cycles

        print(f"✅ Family invariants test passed for n={n}")

    def test_layout(self):
        """Test cap, pac and gadget components."""
        skeleton = build_skeleton(3, SPIRAL)

        assert skeleton.cap == (0, 1, 2)
        assert skeleton.pac == (9, 10, 11)
        assert skeleton.gadget_vertices == ((3, 4), (5, 6), (7, 8))
        assert [skeleton.component(v) for v in (0, 3, 4, 8, 11)] == [-1, 0, 0, 2, 3]
        assert len(skeleton.cut_edges) == 4

        print("✅ Layout test passed")

    @pytest.mark.parametrize("n", [2, 5, 9])
    def test_cut_transfer_matches_oracle(self, n):
        """Test the cut-transfer construction finds the same cycles as brute force."""
        skeleton = build_skeleton(n, SPIRAL)
        constructed = construct_ham_cycles(skeleton)

        assert constructed.cycles == enumerate_ham_cycles(skeleton.graph).cycles
        assert all(c.is_valid(skeleton.graph) for c in constructed)

        print(f"✅ Cut transfer test passed for n={n}")

    def test_zero_gadgets(self):
        """Test n must be positive."""
        with pytest.raises(ParameterError):
            build_skeleton(0, SPIRAL)

        print("✅ Gadget count test passed")


class TestDistinguishedData:
    """Test Λ, green, red, C0 and C1."""

    def test_anchor(self):
        """Test the distinguished vertex and edges on the spiral."""
        instance = build(4, SPIRAL)

        assert instance.lambda_vertex == 1
        assert instance.green_edge == (1, 4)
        assert instance.red_edge == (0, 1)

        print("✅ Anchor test passed")

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_selected_cycles(self, n):
        """Test C0 and C1 both use green and only C0 uses red."""
        instance = build(n, SPIRAL)

        assert instance.c0 != instance.c1
        assert instance.c0.contains(instance.green_edge)
        assert instance.c1.contains(instance.green_edge)
        assert instance.c0.contains(instance.red_edge)
        assert not instance.c1.contains(instance.red_edge)

        print(f"✅ Cycle selection test passed for n={n}")

    def test_unused_rails(self):
        """Test C0 skips alpha at the cap and C1 alternates zeta and beta."""
        instance = build(6, SPIRAL)

        assert instance.unused_role(instance.c0, 0) == ALPHA
        for k in range(instance.n + 1):
            assert instance.unused_role(instance.c1, k) == (ZETA if k % 2 == 0 else BETA)

        print("✅ Unused rail test passed")

    def test_large_instance_without_oracle(self):
        """Test instances above the oracle bound are built from the cut transfer."""
        instance = build(20, SPIRAL)

        assert instance.graph.n_vertices == 46
        assert instance.c0.is_valid(instance.graph)
        assert instance.c1.is_valid(instance.graph)

        print("✅ Large instance test passed")

    def test_selection_failure(self):
        """Test selection fails when the edges do not meet at Λ."""
        instance = build(3, SPIRAL)

        with pytest.raises(SelectionError):
            select_distinguished_cycles(instance.graph, 2, instance.green_edge, instance.red_edge)

        print("✅ Selection failure test passed")


class TestSnapshot:
    """Test the checked-in wiring snapshot."""

    def test_packaged_snapshot(self):
        """Test the packaged snapshot loads and marks the spiral canonical."""
        result = load_snapshot(DEFAULT_SNAPSHOT)

        assert result.canonical_wiring.shift == (2, 0, 1)
        assert len(result.candidates) >= 1

        print("✅ Packaged snapshot test passed")

    def test_save_and_reload(self, tmp_path):
        """Test a saved snapshot reloads to the same result."""
        result = load_snapshot(DEFAULT_SNAPSHOT)
        path = save_snapshot(result, tmp_path / "wiring.json")

        assert load_snapshot(path) == result

        print("✅ Snapshot save test passed")

    def test_missing_snapshot(self, tmp_path):
        """Test a missing snapshot refuses to load."""
        with pytest.raises(SnapshotError):
            load_snapshot(tmp_path / "absent.json")

        print("✅ Missing snapshot test passed")

    def test_tampered_snapshot(self, tmp_path):
        """Test an edited candidate list fails the checksum."""
        document = json.loads(DEFAULT_SNAPSHOT.read_text(encoding="utf-8"))
        document["candidates"][0]["shift"] = [1, 2, 0]
        path = tmp_path / "wiring.json"
        path.write_text(json.dumps(document), encoding="utf-8")

        with pytest.raises(SnapshotError):
            load_snapshot(path)

        print("✅ Tampered snapshot test passed")
