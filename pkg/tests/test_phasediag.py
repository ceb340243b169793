"""Tests for phase-diagram scans, wall families, rose curves, and fans."""

import math

import numpy as np
import pytest

from chernkit.models import ModelError, builtin_model
from chernkit.phasediag import (
    DEGENERATE,
    FanDiagram,
    dirac_count,
    fan_family,
    locate_transition,
    minimum_gap,
    rose_curve,
    scan,
    suspension,
    verify_realization,
    wall_family,
    wall_zeros,
)

SQRT3 = math.sqrt(3.0)
TWO_PI = 2.0 * math.pi


def _runs(labels):
    out = []
    for lab in labels:
        if out and out[-1][0] == lab:
            out[-1][1] += 1
        else:
            out.append([lab, 1])
    return [(a, b) for a, b in out]


# ---------------------------------------------------------------------------
# minimum gap
# ---------------------------------------------------------------------------


def test_minimum_gap_haldane():
    h = builtin_model("haldane")
    g, loc = minimum_gap(h, {"m": 3.0 * SQRT3 * 0.5})  # gap closes at K
    assert g < 1e-7
    g2, _ = minimum_gap(h, {"m": 0.0})
    assert g2 > 1.0


def test_minimum_gap_location_at_dirac_point():
    b = builtin_model("bhz_square")
    g, loc = minimum_gap(b, {"m": 2.0})
    assert g < 1e-7
    # gap closes at the zone center
    frac = np.array(loc) / TWO_PI % 1.0
    frac[frac > 0.5] -= 1.0
    assert np.allclose(frac, [0.0, 0.0], atol=1e-4)
    g2, loc2 = minimum_gap(b, {"m": -2.0})
    assert g2 < 1e-7
    # gap closes at the zone corner (pi, pi)
    frac2 = np.array(loc2) / TWO_PI % 1.0
    assert np.allclose(frac2, [0.5, 0.5], atol=1e-4)


# ---------------------------------------------------------------------------
# scans
# ---------------------------------------------------------------------------


def test_bhz_1d_scan_phase_sequence():
    b = builtin_model("bhz_square")
    pd = scan(b, [("m", -3.0, 3.0, 121)], grid=32, kgrid=24)
    labels = [c.chern for c in pd.cells]
    assert _runs(labels) == [
        (0, 20),
        (DEGENERATE, 1),
        (-1, 39),
        (DEGENERATE, 1),
        (1, 39),
        (DEGENERATE, 1),
        (0, 20),
    ]
    assert not pd.errors


def test_haldane_2d_scan_lobes():
    h = builtin_model("haldane")
    pd = scan(
        h,
        [("phi", -math.pi, math.pi, 9), ("m", -4.0, 4.0, 9)],
        grid=32,
        kgrid=24,
        workers=4,
    )
    labels = pd.labels()
    assert labels.shape == (9, 9)
    crit = 3.0 * SQRT3 * 0.5  # phase boundary |m| = 3 sqrt(3) t2 |sin phi|
    phis = np.linspace(-math.pi, math.pi, 9)
    ms = np.linspace(-4.0, 4.0, 9)
    for i, phi in enumerate(phis):
        for j, m in enumerate(ms):
            want_nontrivial = abs(m) < crit * abs(math.sin(phi)) - 1e-9
            got = labels[i, j]
            if got == DEGENERATE:
                continue
            if want_nontrivial:
                assert got == int(np.sign(math.sin(phi))), (phi, m)
            else:
                assert got == 0, (phi, m)


def test_scan_cell_lookup_and_boundary():
    h = builtin_model("haldane")
    pd = scan(h, [("m", 0.0, 4.0, 9)], grid=32, kgrid=24)
    assert pd.cell_at(0).chern == 1
    assert pd.cell_at(8).chern == 0
    # every adjacent differing pair of integer labels is a boundary edge
    labels = [c.chern for c in pd.cells]
    for (i,), (j,) in pd.boundary:
        assert labels[i] != labels[j]
    changes = [
        i
        for i in range(8)
        if isinstance(labels[i], int)
        and isinstance(labels[i + 1], int)
        and labels[i] != labels[i + 1]
    ]
    assert len(pd.boundary) == len(changes)


def test_scan_rejects_bad_axes():
    h = builtin_model("haldane")
    with pytest.raises(ModelError):
        scan(h, [("mass", 0.0, 1.0, 4)])
    with pytest.raises(ModelError):
        scan(h, [("m", 0.0, 1.0, 4)] * 3)
    with pytest.raises(ModelError):
        scan(h, [("m", 0.0, 1.0, 1)])


def test_kagome_scan_flags_degeneracies():
    kg = builtin_model("kagome")
    pd = scan(kg, [("u1", -2.0, 2.0, 5)], grid=32, kgrid=24)
    labels = [c.chern for c in pd.cells]
    assert labels[2] == DEGENERATE  # u1 = 0 collapses the spectrum
    assert all(isinstance(v, int) for i, v in enumerate(labels) if i != 2)


# ---------------------------------------------------------------------------
# transition location
# ---------------------------------------------------------------------------


def test_locate_transition_haldane():
    h = builtin_model("haldane")
    x = locate_transition(h, "m", 2.0, 3.5)
    assert abs(x - 3.0 * SQRT3 * 0.5) < 1e-8


def test_locate_transition_haldane_t2_one():
    h = builtin_model("haldane")
    x = locate_transition(h, "m", 4.0, 6.0, params={"t2": 1.0})
    assert abs(x - 3.0 * SQRT3) < 1e-8


def test_locate_transition_bhz():
    b = builtin_model("bhz_square")
    for lo, hi, want in [(-3.0, -1.0, -2.0), (-1.0, 1.0, 0.0), (1.0, 3.0, 2.0)]:
        x = locate_transition(b, "m", lo, hi)
        assert abs(x - want) < 1e-8, (lo, hi)


def test_locate_transition_kagome_three_band():
    kg = builtin_model("kagome")
    x = locate_transition(kg, "u1", 1.0, 2.5)
    assert abs(x - SQRT3) < 1e-6


def test_locate_transition_requires_sign_change():
    h = builtin_model("haldane")
    with pytest.raises(ModelError):
        locate_transition(h, "m", 0.0, 1.0)


# ---------------------------------------------------------------------------
# suspension and wall families
# ---------------------------------------------------------------------------


def test_suspension_values():
    f = suspension(3, 0.0, math.pi / 2)
    assert np.allclose(f, [1.0, 0.0, 0.0], atol=1e-12)
    assert np.allclose(suspension(2, 0.3, 0.0), [0, 0, 1], atol=1e-12)


def test_wall_zero_positions():
    assert np.allclose(wall_zeros(1, 2), [math.pi])
    assert np.allclose(wall_zeros(1, -2), [math.pi / 3, math.pi, 5 * math.pi / 3])
    assert np.allclose(wall_zeros(1, -1), [math.pi / 2, 3 * math.pi / 2])
    assert len(wall_zeros(-2, 4)) == 6


def test_wall_zeros_are_family_zeros():
    for d, dp in [(1, 2), (1, -2), (-2, 4), (3, -3)]:
        fam = wall_family(d, dp)
        for phi in wall_zeros(d, dp):
            F = fam(0.5, phi, math.pi / 2)
            assert np.linalg.norm(F) < 1e-12, (d, dp, phi)


@pytest.mark.parametrize("d,dp", [(1, 2), (1, -2), (-2, 4), (2, 5), (-3, 1)])
def test_wall_zero_count_exhaustive(d, dp):
    zeros = wall_zeros(d, dp)
    assert len(zeros) == abs(d - dp) == dirac_count(d, dp)
    assert all(0.0 <= z < TWO_PI for z in zeros)
    # no other equatorial zeros: sample densely between the listed angles
    fam = wall_family(d, dp)
    phi = np.linspace(0, TWO_PI, 2000, endpoint=False)
    norms = np.linalg.norm(fam(0.5, phi, math.pi / 2), axis=-1)
    small = phi[norms < 1e-3]
    for s in small:
        assert min(abs(s - z) for z in zeros) < 0.05


def test_wall_family_rejects_equal_degrees():
    with pytest.raises(ValueError):
        wall_zeros(2, 2)
    assert dirac_count(3, 3) == 0


def test_wall_localization_at_half():
    rng = np.random.default_rng(11)
    for _ in range(5):
        d = int(rng.integers(-4, 5))
        dp = int(rng.integers(-4, 5))
        if d == dp:
            dp += 1
        fam = wall_family(d, dp)
        assert fam.min_norm(0.5) < 1e-6
        for t in (0.0, 0.2, 0.44, 0.56, 0.8, 1.0):
            assert fam.min_norm(t) > abs(t - 0.5) / 2.0, (d, dp, t)


def test_wall_winding_plateaus():
    for d, dp in [(1, 2), (5, 7), (1, -2), (-2, 4)]:
        for t in (0.1, 0.25, 0.4):
            assert rose_curve(d, dp, t).winding() == d, (d, dp, t)
        for t in (0.6, 0.75, 0.9):
            assert rose_curve(d, dp, t).winding() == dp, (d, dp, t)


# ---------------------------------------------------------------------------
# rose curves
# ---------------------------------------------------------------------------


def test_rose_winding_examples():
    assert rose_curve(1, 2, 0.25).winding() == 1
    assert rose_curve(5, 7, 0.75).winding() == 7


def test_rose_polar_identity():
    for d, dp in [(1, 3), (5, 7), (1, 2), (-2, 4)]:
        r = rose_curve(d, dp, 0.5)
        assert r.polar_residual() < 1e-9, (d, dp)


def test_rose_interval_parity_rule():
    assert rose_curve(1, 3, 0.5).interval == 2.0  # 2/4 = 1/2, even s -> s
    assert rose_curve(5, 7, 0.5).interval == 6.0  # 2/12 = 1/6, even s -> s
    assert rose_curve(1, 2, 0.5).interval == 6.0  # 1/3 odd/odd -> 2s
    assert rose_curve(2, -2, 0.5).interval == 2.0  # antipodal pair
    assert rose_curve(-2, 4, 0.5).interval == 2.0  # 6/2 = 3/1, odd/odd -> 2s


def test_rose_circle_degenerate_case():
    # d = 0 against d' gives a circle of radius t about the point (1-t, 0)
    r = rose_curve(0, 5, 0.5)
    radii = np.hypot(r.samples[:, 0] - 0.5, r.samples[:, 1])
    assert np.allclose(radii, 0.5, atol=1e-12)


def test_rose_sample_density_floor():
    r = rose_curve(5, 7, 0.75, nsamples=4)
    assert len(r.phis) >= math.ceil(TWO_PI * 7 / 0.1)
    assert r.curve().closed


def test_rose_k_exponent():
    assert rose_curve(5, 7, 0.5).k_rose == pytest.approx(1.0 / 6.0)
    assert rose_curve(3, -3, 0.5).k_rose is None


# ---------------------------------------------------------------------------
# fan realizations
# ---------------------------------------------------------------------------


def test_fan_two_rays_matches_wall():
    fan = FanDiagram(k=2, labels=(1, -1))
    report = verify_realization(fan)
    assert report["passed"], report
    assert [c["degree"] for c in report["chambers"]] == [1, -1]
    assert all(r["wall"] for r in report["rays"])


def test_fan_three_chambers():
    fan = FanDiagram(k=3, labels=(0, 1, 2))
    report = verify_realization(fan)
    assert report["passed"], report
    assert [c["degree"] for c in report["chambers"]] == [0, 1, 2]


def test_fan_constant_labels_have_no_walls():
    fan = FanDiagram(k=4, labels=(1, 1, 1, 1))
    report = verify_realization(fan)
    assert report["passed"], report
    assert not any(r["wall"] for r in report["rays"])
    assert all(r["min_norm_on_ray"] > 1e-6 for r in report["rays"])


def test_fan_scale_covariance():
    fan = FanDiagram(k=3, labels=(2, 0, -1))
    fam = fan_family(fan)
    p = (math.cos(1.0), math.sin(1.0))
    F1 = fam(p, 0.7, 1.1)
    F3 = fam((3 * p[0], 3 * p[1]), 0.7, 1.1)
    assert np.allclose(F3, 3.0 * F1, atol=1e-12)


def test_fan_probe_radius_independence():
    fan = FanDiagram(k=3, labels=(1, -2, 0))
    for radius in (0.5, 2.0):
        assert verify_realization(fan, probe_radius=radius)["passed"]


def test_fan_validation_errors():
    with pytest.raises(ValueError):
        FanDiagram(k=1, labels=(0,))
    with pytest.raises(ValueError):
        FanDiagram(k=3, labels=(0, 1))
    with pytest.raises(ValueError):
        verify_realization(FanDiagram(k=2, labels=(0, 0)), probe_radius=0.0)
    with pytest.raises(ValueError):
        fan_family(FanDiagram(k=2, labels=(0, 1)))((0.0, 0.0), 0.0, 0.0)


def test_adjacent_chamber_rule():
    # a ray is degenerate iff it separates different labels
    fan = FanDiagram(k=4, labels=(0, 0, 1, 1))
    report = verify_realization(fan)
    assert report["passed"], report
    walls = [r["wall"] for r in report["rays"]]
    assert walls == [True, False, True, False]
