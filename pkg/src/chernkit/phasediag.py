"""Phase-diagram scanning and wall-crossing / rose-curve / fan synthesis.

A phase diagram is the assignment of a Chern label to each point of a
parameter grid, with DEGENERATE cells where the spectral gap collapses.
Wall families interpolate between two suspension maps of different degrees
(forcing a degeneracy at the midpoint parameter), rose curves are their
planar critical loci, and fan families realize a prescribed circular fan of
integer labels by a Hamiltonian family over the plane that is degenerate
exactly on the fan's rays.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
from scipy import optimize

from .invariants import (
    ChernResult,
    DegenerateFamilyError,
    InvariantError,
    PlanarCurve,
    chern_berry_lattice,
    sphere_map_degree,
    winding_number,
)
from .models import BlochModel, ModelError, assemble, pre_dirac_points

TWO_PI = 2.0 * math.pi

#: label used for cells whose refined minimum gap is below the threshold
DEGENERATE = "DEGENERATE"


# ---------------------------------------------------------------------------
# gap scanning
# ---------------------------------------------------------------------------


def minimum_gap(
    model: BlochModel,
    params: dict | None = None,
    band: int = 0,
    kgrid: int = 32,
) -> tuple[float, np.ndarray]:
    """Refined minimum gap above ``band`` over the zone and its location.

    A coarse grid locates the candidate minimum; Nelder-Mead descent in
    fractional momentum coordinates refines it.
    """
    p = model.params_with_defaults(params)
    frac = np.arange(kgrid) / kgrid
    S, T = np.meshgrid(frac, frac, indexing="ij")
    K = model.zone.kpoint(S, T)
    vals = np.linalg.eigvalsh(assemble(model, p, K))
    gaps = vals[..., band + 1] - vals[..., band]
    idx = np.unravel_index(np.argmin(gaps), gaps.shape)
    x0 = np.array([S[idx], T[idx]])

    def objective(x):
        k = model.zone.kpoint(x[0], x[1])
        ev = np.linalg.eigvalsh(assemble(model, p, k))
        return float(ev[band + 1] - ev[band])

    res = optimize.minimize(
        objective, x0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12}
    )
    best = min(float(gaps[idx]), float(res.fun))
    loc = model.zone.kpoint(res.x[0] % 1.0, res.x[1] % 1.0)
    return best, loc


@dataclass(frozen=True)
class Cell:
    index: tuple[int, ...]
    params: dict
    chern: object  # int, DEGENERATE, or None when an engine error occurred
    min_gap: float
    min_gap_location: tuple[float, float]
    error: str | None = None


@dataclass(frozen=True)
class PhaseDiagram:
    axes: tuple[tuple[str, float, float, int], ...]
    cells: tuple[Cell, ...]
    boundary: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    errors: tuple[str, ...] = ()

    def cell_at(self, *index) -> Cell:
        shape = tuple(ax[3] for ax in self.axes)
        flat = 0
        for i, n in zip(index, shape):
            flat = flat * n + i
        return self.cells[flat]

    def labels(self) -> np.ndarray:
        shape = tuple(ax[3] for ax in self.axes)
        out = np.empty(shape, dtype=object)
        for c in self.cells:
            out[c.index] = c.chern
        return out


def _axis_values(axis):
    name, lo, hi, n = axis
    if n < 2:
        raise ModelError("resolution must be >= 2 per axis")
    return name, np.linspace(float(lo), float(hi), int(n))


def scan(
    model: BlochModel,
    axes,
    degeneracy_threshold: float = 1e-6,
    band: int = 0,
    grid: int = 40,
    kgrid: int = 32,
    workers: int | None = None,
) -> PhaseDiagram:
    """Label a 1D or 2D parameter grid with Chern numbers.

    ``axes`` is a list of one or two ``(name, lo, hi, n)`` tuples.  Cells
    whose refined minimum gap falls below the threshold are DEGENERATE;
    engine failures are recorded per cell without aborting the scan.
    """
    axes = [tuple(a) for a in axes]
    if not 1 <= len(axes) <= 2:
        raise ModelError("scan supports 1 or 2 axes")
    schema = model.defaults
    for name, *_ in axes:
        if name not in schema:
            raise ModelError(f"axis {name!r} is not a parameter of {model.name}")
    named = [_axis_values(a) for a in axes]

    indices = list(np.ndindex(*(len(v) for _, v in named)))

    def run_cell(index):
        params = {name: float(vals[i]) for (name, vals), i in zip(named, index)}
        try:
            gap, loc = minimum_gap(model, params, band=band, kgrid=kgrid)
            if gap < degeneracy_threshold:
                return Cell(index, params, DEGENERATE, gap, tuple(loc))
            result = chern_berry_lattice(model, params, band=band, grid=grid)
            return Cell(index, params, result.value, gap, tuple(loc))
        except (InvariantError, ModelError) as exc:
            return Cell(
                index, params, None, float("nan"), (float("nan"),) * 2, error=str(exc)
            )

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(run_cell, indices))
    else:
        cells = [run_cell(ix) for ix in indices]

    by_index = {c.index: c for c in cells}
    boundary = []
    for c in cells:
        for axis in range(len(axes)):
            nb = list(c.index)
            nb[axis] += 1
            nb = tuple(nb)
            other = by_index.get(nb)
            if other is None:
                continue
            a, b = c.chern, other.chern
            if isinstance(a, int) and isinstance(b, int) and a != b:
                boundary.append((c.index, nb))
    errors = tuple(f"{c.index}: {c.error}" for c in cells if c.error)
    return PhaseDiagram(
        axes=tuple((n, float(lo), float(hi), int(sz)) for (n, lo, hi, sz) in axes),
        cells=tuple(cells),
        boundary=tuple(boundary),
        errors=errors,
    )


def locate_transition(
    model: BlochModel,
    axis: str,
    lo: float,
    hi: float,
    params: dict | None = None,
    band: int = 0,
    tol: float = 1e-9,
) -> float:
    """Parameter value in [lo, hi] where the gap above ``band`` closes.

    Two-band models use bisection on the sign of h3 at the pre-Dirac point of
    minimal |h3| (exact up to the bisection tolerance); multi-band models use
    bounded minimization of the refined minimum gap.
    """
    base = model.params_with_defaults(params)
    if axis not in base:
        raise ModelError(f"{axis!r} is not a parameter of {model.name}")

    if model.bands == 2 and model.field is not None:

        def indicator(x):
            pts = pre_dirac_points(model, {**base, axis: float(x)})
            if not pts:
                raise DegenerateFamilyError("no pre-Dirac points; ray indicator undefined")
            return min(pts, key=lambda q: abs(q.h3)).h3

        # narrow the bracket around the dip of min |h3| first, so the
        # minimal-|h3| pre-Dirac point is unique (the sign indicator is
        # discontinuous where two points tie)
        xs = np.linspace(float(lo), float(hi), 65)
        vs = [abs(indicator(x)) for x in xs]
        i0 = int(np.argmin(vs))
        a = float(xs[max(i0 - 1, 0)])
        b = float(xs[min(i0 + 1, len(xs) - 1)])
        fa, fb = indicator(a), indicator(b)
        if fa == 0.0:
            return a
        if fb == 0.0:
            return b
        if np.sign(fa) == np.sign(fb):
            raise ModelError(
                f"no sign change of the gap indicator on [{lo}, {hi}]"
            )
        while b - a > tol:
            m = 0.5 * (a + b)
            fm = indicator(m)
            if fm == 0.0:
                return m
            if np.sign(fm) == np.sign(fa):
                a, fa = m, fm
            else:
                b = m
        return 0.5 * (a + b)

    def gap_of(x):
        return minimum_gap(model, {**base, axis: float(x)}, band=band)[0]

    res = optimize.minimize_scalar(
        gap_of, bounds=(float(lo), float(hi)), method="bounded",
        options={"xatol": tol},
    )
    return float(res.x)


# ---------------------------------------------------------------------------
# suspension maps, wall families, rose curves
# ---------------------------------------------------------------------------


def suspension(d: int, phi, theta) -> np.ndarray:
    """The degree-d suspension map f_d(phi, theta) on the standard chart."""
    phi, theta = np.broadcast_arrays(
        np.asarray(phi, dtype=float), np.asarray(theta, dtype=float)
    )
    st = np.sin(theta)
    return np.stack(
        [st * np.cos(d * phi), st * np.sin(d * phi), np.cos(theta)], axis=-1
    )


@dataclass(frozen=True)
class WallFamily:
    """F(t, phi, theta) = (1-t) f_d + t f_d' ; degenerate only at t = 1/2."""

    d: int
    dprime: int

    @property
    def delta(self) -> int:
        return abs(self.d - self.dprime)

    def __call__(self, t, phi, theta) -> np.ndarray:
        t = float(t)
        return (1.0 - t) * suspension(self.d, phi, theta) + t * suspension(
            self.dprime, phi, theta
        )

    def min_norm(self, t, nphi: int = 180, ntheta: int = 91) -> float:
        return _min_norm_on_sphere(lambda P, T: self(t, P, T), nphi, ntheta)


def _min_norm_on_sphere(fn, nphi: int, ntheta: int) -> float:
    """Grid minimum of |fn(phi, theta)| polished by simplex descent."""
    phi = np.linspace(0.0, TWO_PI, nphi, endpoint=False)
    theta = np.linspace(0.0, math.pi, ntheta)
    P, T = np.meshgrid(phi, theta, indexing="ij")
    norms = np.linalg.norm(fn(P, T), axis=-1)
    idx = np.unravel_index(np.argmin(norms), norms.shape)
    x0 = np.array([P[idx], T[idx]])

    def objective(x):
        return float(np.linalg.norm(fn(np.array(x[0]), np.array(x[1]))))

    res = optimize.minimize(
        objective, x0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14}
    )
    return min(float(norms[idx]), float(res.fun))


def wall_family(d: int, dprime: int) -> WallFamily:
    if int(d) != d or int(dprime) != dprime:
        raise ValueError("d and d' must be integers")
    return WallFamily(int(d), int(dprime))


def wall_zeros(d: int, dprime: int) -> list[float]:
    """Equatorial angles where the t = 1/2 wall family hits the origin.

    The zeros of (z^d + z^{d'})/2 on the unit circle are the odd powers of a
    primitive 2*delta-th root of unity, delta = |d - d'|.
    """
    if d == dprime:
        raise ValueError("d = d' has no wall")
    delta = abs(d - dprime)
    return [(2 * j + 1) * math.pi / delta for j in range(delta)]


@dataclass(frozen=True)
class RoseCurve:
    """Samples of g_t(phi) = (1-t) e^{i d phi} + t e^{i d' phi}."""

    d: int
    dprime: int
    t: float
    phis: np.ndarray
    samples: np.ndarray
    #: polar exponent |d-d'|/|d+d'| (None when d = -d')
    k_rose: float | None
    #: length of the polar-identity parameter interval, in units of pi
    interval: float

    def curve(self) -> PlanarCurve:
        pts = np.vstack([self.samples, self.samples[:1]])
        return PlanarCurve(points=pts, closed=True)

    def winding(self) -> int:
        return winding_number(self.curve())

    def polar_residual(self) -> float:
        """Max deviation from r = cos(k theta) along the t = 1/2 locus.

        Only defined at t = 1/2 (where the identity holds); the signed radius
        is cos(a phi) along the direction angle theta = b phi with
        a = (d-d')/2, b = (d+d')/2.
        """
        if abs(self.t - 0.5) > 1e-12:
            raise ValueError("polar identity only holds at t = 1/2")
        if self.k_rose is None:
            raise ValueError("polar exponent undefined for d = -d'")
        a = 0.5 * (self.d - self.dprime)
        b = 0.5 * (self.d + self.dprime)
        r = np.hypot(self.samples[:, 0], self.samples[:, 1])
        pred = np.abs(np.cos(self.k_rose * b * self.phis))
        want = np.abs(np.cos(a * self.phis))
        # sanity: k_rose * b = +/- a
        return float(np.max(np.abs(r - want)) + np.max(np.abs(pred - want)))


def _rose_interval(d: int, dprime: int) -> float:
    if d + dprime == 0:
        return 2.0
    frac = Fraction(abs(d - dprime), abs(d + dprime))
    r, s = frac.numerator, frac.denominator
    return float(2 * s if (r % 2 == 1 and s % 2 == 1) else s)


def rose_curve(d: int, dprime: int, t: float, nsamples: int | None = None) -> RoseCurve:
    """Sampled interpolation curve g_t over one full period.

    The sample count is raised until adjacent samples subtend < 0.1 rad
    about the origin (away from zeros), so winding sums are unambiguous.
    """
    d, dprime = int(d), int(dprime)
    floor = max(
        16 * (abs(d) + abs(dprime) + 1),
        math.ceil(TWO_PI * max(abs(d), abs(dprime), 1) / 0.1),
    )
    n = max(int(nsamples or 0), floor)
    phis = np.arange(n) * (TWO_PI / n)
    g = (1.0 - t) * np.exp(1j * d * phis) + t * np.exp(1j * dprime * phis)
    k_rose = None if d + dprime == 0 else abs(d - dprime) / abs(d + dprime)
    return RoseCurve(
        d=d,
        dprime=dprime,
        t=float(t),
        phis=phis,
        samples=np.stack([g.real, g.imag], axis=-1),
        k_rose=k_rose,
        interval=_rose_interval(d, dprime),
    )


def dirac_count(d: int, dprime: int) -> int:
    """Number of Dirac points created when crossing the (d, d') wall."""
    return abs(int(d) - int(dprime))


# ---------------------------------------------------------------------------
# fan realizations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FanDiagram:
    """k rays at the k-th roots of unity; labels[i] labels the chamber
    between ray i (angle 2 pi i / k) and ray i+1."""

    k: int
    labels: tuple[int, ...]

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("a fan needs at least 2 rays")
        labels = tuple(int(x) for x in self.labels)
        if len(labels) != self.k:
            raise ValueError("need exactly one label per chamber")
        object.__setattr__(self, "labels", labels)

    def ray_angle(self, i: int) -> float:
        return TWO_PI * (i % self.k) / self.k

    def bisector_angle(self, i: int) -> float:
        return (2 * i + 1) * math.pi / self.k


@dataclass(frozen=True)
class FanFamily:
    """Plane family of sphere maps realizing a fan of Chern labels.

    Around ray i the flanking suspension maps are blended with the
    barycentric coordinates of p in the basis of the two adjacent chamber
    bisectors (the odd 2k-th roots of unity); the blend vanishes somewhere on
    the sphere iff the coordinates are equal (p on the ray) and the flanking
    labels differ.  The family is scale-covariant along rays.
    """

    fan: FanDiagram

    def _cone(self, x: float, y: float):
        k = self.fan.k
        alpha = math.atan2(y, x) % TWO_PI
        i = int(round(alpha / (TWO_PI / k))) % k  # nearest ray
        if k == 2:
            # two-ray fans: the flanking bisectors are antiparallel and the
            # barycentric basis degenerates; sine weights around the nearest
            # ray give the same wall structure (equal weights exactly on rays,
            # pure suspensions at the chamber bisectors, scale covariant)
            r = math.hypot(x, y)
            s = math.sin(alpha - self.fan.ray_angle(i))
            return i, 0.5 * r * (1.0 - s), 0.5 * r * (1.0 + s)
        a1_dir = (2 * i - 1) * math.pi / k  # bisector of chamber i-1
        a2_dir = (2 * i + 1) * math.pi / k  # bisector of chamber i
        E = np.array(
            [
                [math.cos(a1_dir), math.cos(a2_dir)],
                [math.sin(a1_dir), math.sin(a2_dir)],
            ]
        )
        a = np.linalg.solve(E, np.array([x, y]))
        return i, float(a[0]), float(a[1])

    def __call__(self, p, phi, theta) -> np.ndarray:
        x, y = float(p[0]), float(p[1])
        if x == 0.0 and y == 0.0:
            raise ValueError("the fan family is undefined at the origin")
        i, a1, a2 = self._cone(x, y)
        labels = self.fan.labels
        return a1 * suspension(labels[(i - 1) % self.fan.k], phi, theta) + a2 * suspension(
            labels[i], phi, theta
        )

    def min_norm(self, p, nphi: int = 240, ntheta: int = 121) -> float:
        return _min_norm_on_sphere(lambda P, T: self(p, P, T), nphi, ntheta)


def fan_family(fan: FanDiagram) -> FanFamily:
    return FanFamily(fan)


def verify_realization(
    fan: FanDiagram, family: FanFamily | None = None, probe_radius: float = 1.0
) -> dict:
    """Check that the family realizes the fan.

    One probe per chamber (at the angular bisector, radius ``probe_radius``)
    must reproduce the chamber label as the degree of the normalized sphere
    map; each ray must be degenerate iff its flanking labels differ, and
    nearby off-ray points must be non-degenerate.
    """
    if probe_radius <= 0:
        raise ValueError("probe_radius must be positive")
    family = family or fan_family(fan)
    k = fan.k
    chambers = []
    passed = True
    for i in range(k):
        ang = fan.bisector_angle(i)
        p = (probe_radius * math.cos(ang), probe_radius * math.sin(ang))
        mn = family.min_norm(p)
        if mn < 1e-9:
            chambers.append(
                {"chamber": i, "label": fan.labels[i], "degree": DEGENERATE, "ok": False}
            )
            passed = False
            continue
        raw = sphere_map_degree(lambda P, T: family(p, P, T))
        deg = int(round(raw))
        ok = abs(raw - deg) < 0.02 and deg == fan.labels[i]
        passed &= ok
        chambers.append(
            {
                "chamber": i,
                "label": fan.labels[i],
                "degree": deg,
                "degree_raw": raw,
                "min_norm": mn,
                "ok": ok,
            }
        )
    rays = []
    off = math.pi / (64 * k)
    for i in range(k):
        ang = fan.ray_angle(i)
        p_on = (probe_radius * math.cos(ang), probe_radius * math.sin(ang))
        wall = fan.labels[(i - 1) % k] != fan.labels[i]
        mn_on = family.min_norm(p_on)
        mns_off = [
            family.min_norm(
                (probe_radius * math.cos(ang + s * off), probe_radius * math.sin(ang + s * off))
            )
            for s in (-1.0, 1.0)
        ]
        ok = (mn_on < 1e-6) == wall and all(m > 1e-6 for m in mns_off)
        passed &= ok
        rays.append(
            {
                "ray": i,
                "wall": wall,
                "min_norm_on_ray": mn_on,
                "min_norm_off_ray": min(mns_off),
                "ok": ok,
            }
        )
    return {"passed": bool(passed), "chambers": chambers, "rays": rays}
