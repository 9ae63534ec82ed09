"""Directional singularity detection: cone partitions, per-cone decay
verdicts, and windowed wave-front reports against classical oracles."""

import csv
import io
import json

import numpy as np
import pytest

from gfalg.distributions import (ModelDistribution, classical_wf_oracle,
                                 regularize)
from gfalg.errors import ResolutionError
from gfalg.grids import GridSpec
from gfalg.microlocal import (Cone, ConePartition, sigma_g, wavefront,
                              wf_compare)
from gfalg.nets import (EpsilonLadder, UltradiffOperator, apply_ultradiff,
                        combine, constant_embed, window_net)

CENTERS = (-2.0, 0.0, 2.0)
RADIUS = 0.5
SINGULAR_KINDS = ("delta", "delta_prime", "heaviside", "pv_inverse")


class TestCones:
    def test_1d_rays_cover_halflines(self):
        part = ConePartition.rays_1d()
        xi = np.linspace(-3, 3, 7)
        plus, minus = part.cones
        assert np.array_equal(plus.contains((xi,)), xi > 0)
        assert np.array_equal(minus.contains((xi,)), xi < 0)

    def test_2d_sectors_cover_circle(self):
        part = ConePartition.sectors_2d(8)
        th = np.linspace(0, 2 * np.pi, 720, endpoint=False)
        pts = (np.cos(th), np.sin(th))
        hits = sum(c.contains(pts).astype(int) for c in part.cones)
        assert np.all(hits >= 1)  # overlap: every direction in some cone

    def test_sector_count_validated(self):
        with pytest.raises(ValueError):
            ConePartition.sectors_2d(1)

    def test_default_matches_dim(self):
        assert ConePartition.default(1).dim == 1
        assert ConePartition.default(2).dim == 2


class TestSigmaG:
    def test_windowed_gaussian_all_cones_regular(self, catalog):
        net = window_net(catalog("gaussian"), 0.0, 10.0)
        for v in sigma_g(net, mode="beurling"):
            assert v.verdict == "regular"

    def test_windowed_delta_both_rays_singular(self, catalog):
        net = window_net(catalog("delta"), 0.0, 10.0)
        for v in sigma_g(net, mode="beurling"):
            assert v.verdict == "singular"

    def test_too_coarse_cone_partition_rejected(self, moll, seq):
        # a sliver cone pointing between grid directions captures almost
        # no dual nodes on a coarse 2-D grid
        g2 = GridSpec(2, 10.0, 256)
        lad2 = EpsilonLadder(0.25, 0.5, 6)
        m2 = ModelDistribution(
            "tensor2d", dim=2,
            factors=(ModelDistribution("gaussian"),
                     ModelDistribution("gaussian")))
        net2 = window_net(regularize(m2, moll, lad2, g2, weight=seq),
                          (0.0, 0.0), 5.0)
        sliver = ConePartition(dim=2, cones=(
            Cone("thin", (np.cos(0.123), np.sin(0.123)), 1e-5),
            Cone("rest", (-1.0, 0.0), np.pi),))
        with pytest.raises(ResolutionError):
            sigma_g(net2, sliver, mode="beurling")


class TestWaveFront1D:
    @pytest.mark.parametrize("kind", SINGULAR_KINDS)
    def test_singular_kind_matches_oracle(self, catalog, kind):
        net = catalog(kind)
        rep = wavefront(net, CENTERS, RADIUS, mode="beurling")
        assert wf_compare(classical_wf_oracle(ModelDistribution(kind)), rep)
        assert rep.flagged_centers() == (0.0,)

    def test_gaussian_empty_wavefront(self, catalog):
        rep = wavefront(catalog("gaussian"), CENTERS, RADIUS,
                        mode="beurling")
        assert rep.singular_set == ()
        assert wf_compare(
            classical_wf_oracle(ModelDistribution("gaussian")), rep)

    @pytest.mark.parametrize("kind", ("delta", "heaviside"))
    def test_roumieu_mode_agrees(self, catalog, kind):
        rep = wavefront(catalog(kind), CENTERS, RADIUS, mode="roumieu")
        assert wf_compare(classical_wf_oracle(ModelDistribution(kind)), rep)

    def test_window_shrinking_keeps_detection(self, catalog):
        # the flagged set at the singular center is stable as the window
        # tightens around it
        net = catalog("delta")
        for radius in (2.0, 1.0, 0.5):
            rep = wavefront(net, (0.0,), radius, mode="beurling")
            assert rep.flagged_centers() == (0.0,)

    def test_offset_window_catching_origin_flags(self, catalog):
        # a window whose plateau still covers the origin must flag it
        rep = wavefront(catalog("delta"), (0.3,), 1.0, mode="beurling")
        assert rep.flagged_centers() == (0.3,)

    def test_window_leaving_grid_rejected(self, catalog):
        with pytest.raises(ValueError):
            wavefront(catalog("delta"), (19.0,), 2.0, mode="beurling")


class TestStability:
    def test_derivative_preserves_wavefront(self, catalog, seq):
        # applying a derivative-type operator cannot enlarge the estimated
        # singular support of the delta net
        net = catalog("delta")
        coeffs = {(0,): 1.0, (2,): np.exp(-seq.log_m[2])}
        op = UltradiffOperator(coeffs, seq, bound_c=1.0, bound_l=1.0)
        pnet = apply_ultradiff(op, net)
        rep = wavefront(pnet, CENTERS, RADIUS, mode="beurling")
        assert rep.flagged_centers() == (0.0,)

    def test_smooth_multiplier_preserves_wavefront(self, catalog, grid,
                                                   ladder, seq):
        net = catalog("delta")
        bump = constant_embed(lambda x: np.exp(-x ** 2) + 0.5, ladder, grid,
                              weight=seq, oversample=net.oversample)
        prod = combine(net, bump, "mul")
        rep = wavefront(prod, CENTERS, RADIUS, mode="beurling")
        assert rep.flagged_centers() == (0.0,)

    def test_vanishing_multiplier_does_not_erase_singularity(self, catalog,
                                                             grid, ladder,
                                                             seq):
        # classically x * delta = 0, but in the algebra the product keeps a
        # nonzero moderate net concentrated at the origin; the directional
        # test still flags it (the algebra separates the product from 0)
        net = catalog("delta")
        xfun = constant_embed(lambda x: x, ladder, grid, weight=seq,
                              oversample=net.oversample)
        prod = combine(net, xfun, "mul")
        rep = wavefront(prod, CENTERS, RADIUS, mode="beurling")
        assert rep.flagged_centers() == (0.0,)


@pytest.fixture(scope="module")
def line_net(moll, seq):
    # the dual range must clear the spatial window's own spectral tail
    # above the noise floor; half-width 5 at n=1024 gives |xi| <= 643
    g2 = GridSpec(2, 5.0, 1024)
    lad = EpsilonLadder(0.25, 0.5, 6)
    m = ModelDistribution(
        "tensor2d", dim=2,
        factors=(ModelDistribution("delta"),
                 ModelDistribution("gaussian")))
    with np.errstate(all="ignore"):
        return m, regularize(m, moll, lad, g2, weight=seq)


class TestWaveFront2D:
    def test_conormal_of_line_detected(self, line_net):
        m, net = line_net
        rep = wavefront(net, ((0.0, 0.0), (3.0, 0.0)), 1.0,
                        cones=ConePartition.sectors_2d(8), mode="beurling")
        assert wf_compare(classical_wf_oracle(m), rep)
        flagged = rep.flagged_centers()
        assert (0.0, 0.0) in flagged and (3.0, 0.0) not in flagged
        dirs = [np.asarray(d, dtype=float) for _, d in rep.singular_set]
        assert any(np.allclose(d, (1.0, 0.0)) for d in dirs)
        assert any(np.allclose(d, (-1.0, 0.0)) for d in dirs)


class TestReports:
    def test_json_and_csv_roundtrip(self, catalog, tmp_path):
        rep = wavefront(catalog("delta"), CENTERS, RADIUS, mode="beurling")
        blob = rep.to_json()
        json.dumps(blob)
        assert blob["radius"] == RADIUS
        rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
        assert len(rows) == len(rep.entries)
        assert {"center", "cone", "verdict"} <= set(rows[0])
