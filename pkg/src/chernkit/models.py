"""Momentum-space Bloch Hamiltonian families (the model zoo).

Every model is a :class:`BlochModel`: a named map from the momentum torus to a
real coefficient vector in the Pauli basis (2 bands) or the Gell-Mann basis
(3 bands), together with its Brillouin zone, neighbor geometry, parameter
schema, and (for 2-band models) the analytic Jacobian of (h1, h2) used by the
root finder.

Honeycomb-family coefficient fields are written in the periodic gauge: the
inter-sublattice amplitude carries a common phase exp(-i N k.a1) so the
coefficient vector is exactly periodic under the reciprocal vectors.  This is
a k-dependent U(1) rotation of (h1, h2); it moves no zeros and changes no
Jacobian sign, gap, or Chern number.  The kagome matrix is periodic up to
conjugation by fixed sign matrices (see ``geometry["gauge_matrices"]``);
consumers that walk across the zone boundary must evaluate at the actual k
rather than wrapping indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from . import quadring

SQRT3 = math.sqrt(3.0)

# Pauli matrices
SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# Gell-Mann matrices, lambda_1 .. lambda_8
GELL_MANN = np.zeros((8, 3, 3), dtype=complex)
GELL_MANN[0][0, 1] = GELL_MANN[0][1, 0] = 1
GELL_MANN[1][0, 1] = -1j
GELL_MANN[1][1, 0] = 1j
GELL_MANN[2][0, 0] = 1
GELL_MANN[2][1, 1] = -1
GELL_MANN[3][0, 2] = GELL_MANN[3][2, 0] = 1
GELL_MANN[4][0, 2] = -1j
GELL_MANN[4][2, 0] = 1j
GELL_MANN[5][1, 2] = GELL_MANN[5][2, 1] = 1
GELL_MANN[6][1, 2] = -1j
GELL_MANN[6][2, 1] = 1j
GELL_MANN[7][0, 0] = GELL_MANN[7][1, 1] = 1 / SQRT3
GELL_MANN[7][2, 2] = -2 / SQRT3


class ModelError(ValueError):
    """Bad model name, parameters, or construction."""


@dataclass(frozen=True)
class BrillouinZone:
    g1: np.ndarray
    g2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "g1", np.asarray(self.g1, dtype=float))
        object.__setattr__(self, "g2", np.asarray(self.g2, dtype=float))
        if abs(self.area) < 1e-12:
            raise ModelError("reciprocal vectors are linearly dependent")

    @property
    def area(self) -> float:
        return float(self.g1[0] * self.g2[1] - self.g1[1] * self.g2[0])

    @property
    def matrix(self) -> np.ndarray:
        """Columns g1, g2."""
        return np.stack([self.g1, self.g2], axis=1)

    def kpoint(self, s, t) -> np.ndarray:
        """k = s g1 + t g2 for fractional coordinates s, t (broadcasting)."""
        s = np.asarray(s, dtype=float)[..., None]
        t = np.asarray(t, dtype=float)[..., None]
        return s * self.g1 + t * self.g2

    def frac(self, k) -> np.ndarray:
        """Fractional coordinates of k (inverse of :meth:`kpoint`)."""
        return np.linalg.solve(self.matrix, np.asarray(k, dtype=float))


SQUARE_ZONE = BrillouinZone(g1=(2 * math.pi, 0.0), g2=(0.0, 2 * math.pi))


@dataclass(frozen=True)
class BlochModel:
    """A parameterized Bloch Hamiltonian family over a 2D momentum zone."""

    name: str
    bands: int
    lattice: str
    defaults: dict
    zone: BrillouinZone
    #: coefficient map: (params, kx, ky) -> (..., 3) Pauli or (..., 8) Gell-Mann
    field: Callable | None
    #: optional scalar sigma_0 / identity part
    h0: Callable | None = None
    #: analytic d(h1,h2)/d(kx,ky), shape (..., 2, 2); 2-band builtins supply it
    jac12: Callable | None = None
    #: direct matrix map for models without a coefficient field (band folding)
    matrix_fn: Callable | None = None
    geometry: dict = dc_field(default_factory=dict)
    #: "exact" or "conjugate" (periodic only up to fixed unitary conjugation)
    periodicity: str = "exact"
    #: name of the builtin implementing the hopping-only range-N family
    hopping_family: str | None = None

    def params_with_defaults(self, params: dict | None) -> dict:
        p = dict(self.defaults)
        if params:
            unknown = set(params) - set(p)
            if unknown:
                raise ModelError(f"unknown parameters for {self.name}: {sorted(unknown)}")
            p.update(params)
        for name, val in p.items():
            if val is None or (isinstance(val, float) and math.isnan(val)):
                raise ModelError(f"parameter {name} of {self.name} is missing or NaN")
        return p


def eval_field(model: BlochModel, params: dict | None, k) -> np.ndarray:
    """Coefficient vector at k (validates parameters against the schema)."""
    if model.field is None:
        raise ModelError(f"model {model.name} has no coefficient field")
    p = model.params_with_defaults(params)
    k = np.asarray(k, dtype=float)
    return model.field(p, k[..., 0], k[..., 1])


def assemble(model: BlochModel, params: dict | None, k) -> np.ndarray:
    """Hermitian matrix value H(k)."""
    p = model.params_with_defaults(params)
    k = np.asarray(k, dtype=float)
    kx, ky = k[..., 0], k[..., 1]
    if model.matrix_fn is not None:
        return model.matrix_fn(p, kx, ky)
    h = model.field(p, kx, ky)
    basis = SIGMA if model.bands == 2 else GELL_MANN
    H = np.einsum("...i,ijk->...jk", h, basis)
    if model.h0 is not None:
        H = H + model.h0(p, kx, ky)[..., None, None] * np.eye(model.bands)
    return H


def spectrum(H: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a (stack of) Hermitian matrices."""
    return np.linalg.eigvalsh(H)


def gap(model: BlochModel, params: dict | None, k, band: int = 0) -> float:
    """Gap above the given band at k (2-band models use the closed form)."""
    if not 0 <= band <= model.bands - 2:
        raise ModelError(f"band must be in [0, {model.bands - 2}]")
    if model.bands == 2 and model.field is not None:
        h = eval_field(model, params, k)
        return float(2.0 * np.linalg.norm(h[..., :3], axis=-1))
    ev = spectrum(assemble(model, params, k))
    return float(ev[..., band + 1] - ev[..., band])


# ---------------------------------------------------------------------------
# honeycomb / triangular geometry
# ---------------------------------------------------------------------------

HONEYCOMB_A = np.array([[0.0, 1.0], [SQRT3 / 2, -0.5], [-SQRT3 / 2, -0.5]])
HONEYCOMB_B = np.array([[SQRT3, 0.0], [-SQRT3 / 2, 1.5], [-SQRT3 / 2, -1.5]])
HONEYCOMB_C = -2.0 * HONEYCOMB_A
HONEYCOMB_ZONE = BrillouinZone(
    g1=(2 * math.pi / SQRT3, 2 * math.pi / 3), g2=(-2 * math.pi / SQRT3, 2 * math.pi / 3)
)
K_POINT = np.array([4 * math.pi / (3 * SQRT3), 0.0])

# triangular lattice: nearest vectors w_j and second-nearest u_j with the sign
# pattern fixed so the Chern number is exactly 3x the honeycomb value at
# matched parameters (the only pattern, up to conjugacy, that does this)
TRI_W = np.array([[1.0, 0.0], [0.5, SQRT3 / 2], [-0.5, SQRT3 / 2]])
TRI_W_SIGNS = np.array([1.0, -1.0, 1.0])
TRI_U = np.array([[1.5, SQRT3 / 2], [0.0, SQRT3], [-1.5, SQRT3 / 2]])
TRI_U_SIGNS = np.array([1.0, -1.0, 1.0])
TRIANGULAR_ZONE = BrillouinZone(
    g1=(2 * math.pi, -2 * math.pi / SQRT3), g2=(0.0, 4 * math.pi / SQRT3)
)

KAGOME_A = np.array([[1.0, 0.0], [0.5, SQRT3 / 2], [-0.5, SQRT3 / 2]])
KAGOME_ZONE = BrillouinZone(g1=(math.pi, -math.pi / SQRT3), g2=(0.0, 2 * math.pi / SQRT3))


def _dots(vecs: np.ndarray, kx, ky):
    """k . v_j for each row v_j; result shape (..., len(vecs))."""
    kx = np.asarray(kx, dtype=float)
    ky = np.asarray(ky, dtype=float)
    return kx[..., None] * vecs[:, 0] + ky[..., None] * vecs[:, 1]


def _honeycomb_field(p, kx, ky, *, N=1, t3=0.0, tN=None):
    """Periodic-gauge honeycomb coefficient vector.

    h1 + i h2 = e^{-iNk.a1} [ t1 sum_j e^{iNk.a_j} + t3 sum_j e^{iNk.c_j} ],
    h3 = m - 2 t2 sin(phi) sum_j sin(k.b_j).  ``tN`` renames t1 -> t_N for the
    hopping-only family (second-neighbor term stays at range 1).
    """
    t1 = p[tN] if tN else p["t1"]
    rel_a = N * (HONEYCOMB_A - HONEYCOMB_A[0])
    w = t1 * np.exp(1j * _dots(rel_a, kx, ky)).sum(axis=-1)
    if t3:
        rel_c = HONEYCOMB_C - HONEYCOMB_A[0]
        w = w + p["t3"] * np.exp(1j * _dots(rel_c, kx, ky)).sum(axis=-1)
    h3 = p["m"] - 2 * p["t2"] * math.sin(p["phi"]) * np.sin(
        _dots(HONEYCOMB_B, kx, ky)
    ).sum(axis=-1)
    return np.stack([w.real, w.imag, h3], axis=-1)


def _honeycomb_jac(p, kx, ky, *, N=1, t3=0.0, tN=None):
    t1 = p[tN] if tN else p["t1"]
    rel_a = N * (HONEYCOMB_A - HONEYCOMB_A[0])
    ph = t1 * np.exp(1j * _dots(rel_a, kx, ky))
    dwx = (1j * rel_a[:, 0] * ph).sum(axis=-1)
    dwy = (1j * rel_a[:, 1] * ph).sum(axis=-1)
    if t3:
        rel_c = HONEYCOMB_C - HONEYCOMB_A[0]
        ph3 = p["t3"] * np.exp(1j * _dots(rel_c, kx, ky))
        dwx = dwx + (1j * rel_c[:, 0] * ph3).sum(axis=-1)
        dwy = dwy + (1j * rel_c[:, 1] * ph3).sum(axis=-1)
    return np.stack(
        [
            np.stack([dwx.real, dwy.real], axis=-1),
            np.stack([dwx.imag, dwy.imag], axis=-1),
        ],
        axis=-2,
    )


def _honeycomb_h0(p, kx, ky, *, N=1):
    return 2 * p["t2"] * math.cos(p["phi"]) * np.cos(
        _dots(N * HONEYCOMB_B, kx, ky)
    ).sum(axis=-1)


def _triangular_field(p, kx, ky, *, Na=1, Nb=1):
    w = -p["t1"] * np.exp(1j * _dots(Na * (TRI_W_SIGNS[:, None] * TRI_W), kx, ky)).sum(axis=-1)
    h3 = p["m"] - 2 * p["t2"] * math.sin(p["phi"]) * (
        TRI_U_SIGNS * np.sin(_dots(Nb * TRI_U, kx, ky))
    ).sum(axis=-1)
    return np.stack([w.real, w.imag, h3], axis=-1)


def _triangular_jac(p, kx, ky, *, Na=1):
    vecs = Na * (TRI_W_SIGNS[:, None] * TRI_W)
    ph = -p["t1"] * np.exp(1j * _dots(vecs, kx, ky))
    dwx = (1j * vecs[:, 0] * ph).sum(axis=-1)
    dwy = (1j * vecs[:, 1] * ph).sum(axis=-1)
    return np.stack(
        [
            np.stack([dwx.real, dwy.real], axis=-1),
            np.stack([dwx.imag, dwy.imag], axis=-1),
        ],
        axis=-2,
    )


def _triangular_h0(p, kx, ky, *, Nb=1):
    return 2 * p["t2"] * math.cos(p["phi"]) * (
        TRI_U_SIGNS * np.cos(_dots(Nb * TRI_U, kx, ky))
    ).sum(axis=-1)


def _kagome_field(p, kx, ky, *, N=1):
    c = np.cos(_dots(N * KAGOME_A, kx, ky))
    t1, u1 = p["t1"], p["u1"]
    z = np.zeros_like(c[..., 0])
    return np.stack(
        [
            -2 * t1 * c[..., 0],
            -2 * u1 * c[..., 0],
            z,
            -2 * t1 * c[..., 1],
            2 * u1 * c[..., 1],
            -2 * t1 * c[..., 2],
            -2 * u1 * c[..., 2],
            z,
        ],
        axis=-1,
    )


def _base_collapse(kx, ky):
    """Fixed smooth degree-one map T^2 -> S^2 (up to normalization)."""
    return np.stack([np.sin(kx), np.sin(ky), np.cos(kx) + np.cos(ky) - 1.0], axis=-1)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


def _make_haldane():
    return BlochModel(
        name="haldane",
        bands=2,
        lattice="honeycomb",
        defaults={"t1": 1.0, "t2": 0.5, "phi": math.pi / 2, "m": 0.0},
        zone=HONEYCOMB_ZONE,
        field=lambda p, kx, ky: _honeycomb_field(p, kx, ky),
        h0=lambda p, kx, ky: _honeycomb_h0(p, kx, ky),
        jac12=lambda p, kx, ky: _honeycomb_jac(p, kx, ky),
        geometry={"a": HONEYCOMB_A, "b": HONEYCOMB_B, "K": K_POINT},
        hopping_family="haldane_n",
    )


def _make_haldane3nn():
    return BlochModel(
        name="haldane3nn",
        bands=2,
        lattice="honeycomb",
        defaults={"t1": 1.0, "t2": 0.5, "t3": 0.35, "phi": math.pi / 2, "m": 0.0},
        zone=HONEYCOMB_ZONE,
        field=lambda p, kx, ky: _honeycomb_field(p, kx, ky, t3=True),
        h0=lambda p, kx, ky: _honeycomb_h0(p, kx, ky),
        jac12=lambda p, kx, ky: _honeycomb_jac(p, kx, ky, t3=True),
        geometry={"a": HONEYCOMB_A, "b": HONEYCOMB_B, "c": HONEYCOMB_C},
    )


def _make_haldane_n2():
    # every term evaluated at N k, so this is definitionally scale_model(haldane, N)
    def f(p, kx, ky):
        N = int(p["N"])
        return _honeycomb_field(p, N * kx, N * ky)

    def jac(p, kx, ky):
        N = int(p["N"])
        return N * _honeycomb_jac(p, N * kx, N * ky)

    return BlochModel(
        name="haldane_n2",
        bands=2,
        lattice="honeycomb",
        defaults={"t1": 1.0, "t2": 0.5, "phi": math.pi / 2, "m": 0.0, "N": 2},
        zone=HONEYCOMB_ZONE,
        field=f,
        h0=lambda p, kx, ky: _honeycomb_h0(p, int(p["N"]) * kx, int(p["N"]) * ky),
        jac12=jac,
        geometry={"a": HONEYCOMB_A, "b": HONEYCOMB_B},
    )


def _make_haldane_n():
    def f(p, kx, ky):
        return _honeycomb_field(p, kx, ky, N=int(p["N"]), tN="t1")

    def jac(p, kx, ky):
        return _honeycomb_jac(p, kx, ky, N=int(p["N"]), tN="t1")

    return BlochModel(
        name="haldane_n",
        bands=2,
        lattice="honeycomb",
        defaults={"t1": 1.0, "t2": 0.5, "phi": math.pi / 2, "m": 0.0, "N": 2},
        zone=HONEYCOMB_ZONE,
        field=f,
        h0=lambda p, kx, ky: _honeycomb_h0(p, kx, ky),
        jac12=jac,
        geometry={"a": HONEYCOMB_A, "b": HONEYCOMB_B},
    )


def _make_bhz():
    def f(p, kx, ky):
        t1 = p["t1"]
        return np.stack(
            [
                t1 * np.sin(kx),
                t1 * np.sin(ky),
                p["m"] - t1 * np.cos(kx) - t1 * np.cos(ky),
            ],
            axis=-1,
        )

    def jac(p, kx, ky):
        t1 = p["t1"]
        z = np.zeros(np.broadcast(kx, ky).shape)
        return np.stack(
            [
                np.stack([t1 * np.cos(kx), z], axis=-1),
                np.stack([z, t1 * np.cos(ky)], axis=-1),
            ],
            axis=-2,
        )

    return BlochModel(
        name="bhz_square",
        bands=2,
        lattice="square",
        defaults={"t1": 1.0, "m": -1.0},
        zone=SQUARE_ZONE,
        field=f,
        jac12=jac,
        geometry={"a": np.array([[1.0, 0.0]]), "b": np.array([[0.0, 1.0]])},
    )


def _make_square_n2():
    def f(p, kx, ky):
        N, t1 = int(p["N"]), p["t1"]
        return np.stack(
            [
                t1 * np.sin(N * kx),
                t1 * np.sin(N * ky),
                p["m"] - t1 * np.cos(N * kx) - t1 * np.cos(N * ky),
            ],
            axis=-1,
        )

    def jac(p, kx, ky):
        N, t1 = int(p["N"]), p["t1"]
        z = np.zeros(np.broadcast(kx, ky).shape)
        return np.stack(
            [
                np.stack([N * t1 * np.cos(N * kx), z], axis=-1),
                np.stack([z, N * t1 * np.cos(N * ky)], axis=-1),
            ],
            axis=-2,
        )

    return BlochModel(
        name="square_n2",
        bands=2,
        lattice="square",
        defaults={"t1": 1.0, "m": -1.0, "N": 2},
        zone=SQUARE_ZONE,
        field=f,
        jac12=jac,
    )


def _make_square_power():
    def f(p, kx, ky):
        w = (p["alpha"] * np.cos(kx) + 1j * p["beta"] * np.cos(ky)) ** int(p["d"])
        h3 = p["m0"] + p["gamma1"] * np.sin(kx) + p["gamma2"] * np.sin(ky)
        return np.stack([w.real, w.imag, h3], axis=-1)

    def jac(p, kx, ky):
        d = int(p["d"])
        base = p["alpha"] * np.cos(kx) + 1j * p["beta"] * np.cos(ky)
        dwx = d * base ** (d - 1) * (-p["alpha"] * np.sin(kx))
        dwy = d * base ** (d - 1) * (-1j * p["beta"] * np.sin(ky))
        return np.stack(
            [
                np.stack([dwx.real, dwy.real], axis=-1),
                np.stack([dwx.imag, dwy.imag], axis=-1),
            ],
            axis=-2,
        )

    return BlochModel(
        name="square_power",
        bands=2,
        lattice="square",
        defaults={"alpha": 1.0, "beta": 1.0, "gamma1": 0.5, "gamma2": 0.25, "m0": 0.0, "d": 1},
        zone=SQUARE_ZONE,
        field=f,
        jac12=jac,
    )


def _make_triangular():
    return BlochModel(
        name="triangular",
        bands=2,
        lattice="triangular",
        defaults={"t1": 1.0, "t2": 0.5, "phi": math.pi / 2, "m": 0.0},
        zone=TRIANGULAR_ZONE,
        field=lambda p, kx, ky: _triangular_field(p, kx, ky),
        h0=lambda p, kx, ky: _triangular_h0(p, kx, ky),
        jac12=lambda p, kx, ky: _triangular_jac(p, kx, ky),
        geometry={"w": TRI_W, "u": TRI_U, "w_signs": TRI_W_SIGNS, "u_signs": TRI_U_SIGNS},
        hopping_family="triangular_n",
    )


def _make_triangular_n2():
    def f(p, kx, ky):
        N = int(p["N"])
        return _triangular_field(p, kx, ky, Na=N, Nb=N)

    return BlochModel(
        name="triangular_n2",
        bands=2,
        lattice="triangular",
        defaults={"t1": 1.0, "t2": 0.5, "phi": math.pi / 2, "m": 0.0, "N": 2},
        zone=TRIANGULAR_ZONE,
        field=f,
        h0=lambda p, kx, ky: _triangular_h0(p, kx, ky, Nb=int(p["N"])),
        jac12=lambda p, kx, ky: _triangular_jac(p, kx, ky, Na=int(p["N"])),
    )


def _make_triangular_n():
    def f(p, kx, ky):
        return _triangular_field(p, kx, ky, Na=int(p["N"]), Nb=1)

    return BlochModel(
        name="triangular_n",
        bands=2,
        lattice="triangular",
        defaults={"t1": 1.0, "t2": 0.5, "phi": math.pi / 2, "m": 0.0, "N": 2},
        zone=TRIANGULAR_ZONE,
        field=f,
        h0=lambda p, kx, ky: _triangular_h0(p, kx, ky),
        jac12=lambda p, kx, ky: _triangular_jac(p, kx, ky, Na=int(p["N"])),
    )


def _kagome_gauge_matrices():
    return (np.diag([1.0, -1.0, 1.0]), np.diag([1.0, 1.0, -1.0]))


def _make_kagome(name="kagome", scaled=False):
    def f(p, kx, ky):
        return _kagome_field(p, kx, ky, N=int(p["N"]) if scaled else 1)

    defaults = {"t1": 1.0, "u1": 1.0}
    if scaled:
        defaults["N"] = 3
    return BlochModel(
        name=name,
        bands=3,
        lattice="kagome",
        defaults=defaults,
        zone=KAGOME_ZONE,
        field=f,
        geometry={"a": KAGOME_A, "gauge_matrices": _kagome_gauge_matrices()},
        periodicity="conjugate",
    )


def _make_mb_dirac():
    def f(p, kx, ky):
        h3 = p["M"] - p["B"] * (np.sin(kx / 2) ** 2 + np.sin(ky / 2) ** 2)
        return np.stack([np.sin(kx), np.sin(ky), h3], axis=-1)

    def jac(p, kx, ky):
        z = np.zeros(np.broadcast(kx, ky).shape)
        return np.stack(
            [
                np.stack([np.cos(kx), z], axis=-1),
                np.stack([z, np.cos(ky)], axis=-1),
            ],
            axis=-2,
        )

    return BlochModel(
        name="mb_dirac",
        bands=2,
        lattice="square",
        defaults={"M": 1.0, "B": 1.0},
        zone=SQUARE_ZONE,
        field=f,
        jac12=jac,
    )


def _make_spin_ssphere():
    def f(p, kx, ky):
        return -_base_collapse(int(p["d"]) * kx, ky)

    def jac(p, kx, ky):
        d = int(p["d"])
        z = np.zeros(np.broadcast(kx, ky).shape)
        return np.stack(
            [
                np.stack([-d * np.cos(d * kx), z], axis=-1),
                np.stack([z, -np.cos(ky)], axis=-1),
            ],
            axis=-2,
        )

    return BlochModel(
        name="spin_ssphere",
        bands=2,
        lattice="square",
        defaults={"d": 1},
        zone=SQUARE_ZONE,
        field=f,
        jac12=jac,
    )


def _make_torus_wind():
    def f(p, kx, ky):
        return -_base_collapse(int(p["d1"]) * kx, int(p["d2"]) * ky)

    def jac(p, kx, ky):
        d1, d2 = int(p["d1"]), int(p["d2"])
        z = np.zeros(np.broadcast(kx, ky).shape)
        return np.stack(
            [
                np.stack([-d1 * np.cos(d1 * kx), z], axis=-1),
                np.stack([z, -d2 * np.cos(d2 * ky)], axis=-1),
            ],
            axis=-2,
        )

    return BlochModel(
        name="torus_wind",
        bands=2,
        lattice="square",
        defaults={"d1": 2, "d2": 3},
        zone=SQUARE_ZONE,
        field=f,
        jac12=jac,
    )


_CATALOG: dict[str, Callable[[], BlochModel]] = {
    "haldane": _make_haldane,
    "haldane3nn": _make_haldane3nn,
    "haldane_n2": _make_haldane_n2,
    "haldane_n": _make_haldane_n,
    "bhz_square": _make_bhz,
    "square_n2": _make_square_n2,
    "square_power": _make_square_power,
    "triangular": _make_triangular,
    "triangular_n2": _make_triangular_n2,
    "triangular_n": _make_triangular_n,
    "kagome": lambda: _make_kagome(),
    "kagome_n2": lambda: _make_kagome("kagome_n2", scaled=True),
    "mb_dirac": _make_mb_dirac,
    "spin_ssphere": _make_spin_ssphere,
    "torus_wind": _make_torus_wind,
}


def catalog() -> list[str]:
    return sorted(_CATALOG)


def builtin_model(name: str) -> BlochModel:
    try:
        return _CATALOG[name]()
    except KeyError:
        raise ModelError(f"unknown model {name!r}; known: {', '.join(catalog())}") from None


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

_ADMISSIBLE_ALL = {
    "square": quadring.square_admissible,
    "triangular": quadring.triangular_admissible,
    "honeycomb": lambda N: quadring.triangular_admissible(abs(N)),
    "kagome": quadring.kagome_admissible,
}

_ADMISSIBLE_HOPPING = {
    "honeycomb": quadring.honeycomb_admissible,
    "triangular": quadring.triangular_admissible,
}


def scale_model(model: BlochModel, N: int, which: str = "all") -> BlochModel:
    """Range-N version of a model.

    ``all`` replaces k.v by N k.v in every term (Chern numbers scale by N^2);
    ``hopping_only`` rescales only the nearest-neighbor terms (the C = N
    families) and is available for models that declare a hopping family.
    Inadmissible N is rejected with the number-theoretic reason.
    """
    if N == 0 or int(N) != N:
        raise ModelError("N must be a nonzero integer")
    N = int(N)
    if which == "all":
        check = _ADMISSIBLE_ALL.get(model.lattice)
        if check is None:
            raise ModelError(f"no admissibility rule for lattice {model.lattice!r}")
        if not check(N):
            raise ModelError(
                f"N={N} is not admissible for a {model.lattice} lattice: a split "
                "prime divides it (or the sublattice species do not match), so the "
                "range-N shell does not replicate the nearest-neighbor structure"
            )
        base_field = model.field
        base_h0 = model.h0
        base_jac = model.jac12
        base_matrix = model.matrix_fn
        return BlochModel(
            name=f"{model.name}_scaled{N}",
            bands=model.bands,
            lattice=model.lattice,
            defaults=model.defaults,
            zone=model.zone,
            field=None if base_field is None else (lambda p, kx, ky: base_field(p, N * kx, N * ky)),
            h0=None if base_h0 is None else (lambda p, kx, ky: base_h0(p, N * kx, N * ky)),
            jac12=None if base_jac is None else (lambda p, kx, ky: N * base_jac(p, N * kx, N * ky)),
            matrix_fn=None if base_matrix is None else (lambda p, kx, ky: base_matrix(p, N * kx, N * ky)),
            geometry=model.geometry,
            periodicity=model.periodicity,
        )
    if which == "hopping_only":
        if model.hopping_family is None:
            raise ModelError(f"model {model.name} has no hopping-only range family")
        check = _ADMISSIBLE_HOPPING[model.lattice]
        if not check(N):
            raise ModelError(
                f"N={N} is not admissible for hopping-only scaling on a "
                f"{model.lattice} lattice (split-prime or sublattice-species rule)"
            )
        fam = builtin_model(model.hopping_family)
        defaults = dict(fam.defaults)
        for key in model.defaults:
            if key in defaults:
                defaults[key] = model.defaults[key]
        defaults["N"] = N
        return BlochModel(
            name=f"{model.name}_hop{N}",
            bands=fam.bands,
            lattice=fam.lattice,
            defaults=defaults,
            zone=fam.zone,
            field=fam.field,
            h0=fam.h0,
            jac12=fam.jac12,
            geometry=fam.geometry,
            periodicity=fam.periodicity,
        )
    raise ModelError(f"which must be 'all' or 'hopping_only', got {which!r}")


def fold_bands(model: BlochModel, N: int) -> BlochModel:
    """Super-cell block model: eigenvalues at k are the union over the N^2
    reciprocal shifts v of the original spectra at k + v (square zones only)."""
    if N <= 0 or int(N) != N:
        raise ModelError("N must be a positive integer")
    N = int(N)
    zone = model.zone
    if not (
        np.allclose(zone.g1, [2 * math.pi, 0]) and np.allclose(zone.g2, [0, 2 * math.pi])
    ):
        raise ModelError("fold_bands requires a square 2pi x 2pi zone")
    if N == 1:
        return model
    shifts = [
        (2 * math.pi * i / N, 2 * math.pi * j / N) for i in range(N) for j in range(N)
    ]
    nb = model.bands

    def matrix_fn(p, kx, ky):
        kx = np.asarray(kx, dtype=float)
        ky = np.asarray(ky, dtype=float)
        out = np.zeros(np.broadcast(kx, ky).shape + (nb * N * N, nb * N * N), dtype=complex)
        for idx, (vx, vy) in enumerate(shifts):
            blk = assemble(model, p, np.stack(np.broadcast_arrays(kx + vx, ky + vy), axis=-1))
            out[..., idx * nb : (idx + 1) * nb, idx * nb : (idx + 1) * nb] = blk
        return out

    return BlochModel(
        name=f"{model.name}_folded{N}",
        bands=nb * N * N,
        lattice=model.lattice,
        defaults=model.defaults,
        zone=BrillouinZone(g1=zone.g1 / N, g2=zone.g2 / N),
        field=None,
        matrix_fn=matrix_fn,
        periodicity=model.periodicity,
    )


# ---------------------------------------------------------------------------
# pre-Dirac points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PreDiracPoint:
    """A zero of (h1, h2) with its local orientation data."""

    k: np.ndarray
    frac: tuple[float, float]
    jac_sign: int
    h3: float
    degenerate: bool


def _fd_jac12(model, p, k, eps=1e-7):
    out = np.zeros((2, 2))
    for j in range(2):
        dk = np.zeros(2)
        dk[j] = eps
        hp = model.field(p, *(k + dk))[:2]
        hm = model.field(p, *(k - dk))[:2]
        out[:, j] = (hp - hm) / (2 * eps)
    return out


def pre_dirac_points(
    model: BlochModel,
    params: dict | None = None,
    seed_density: int = 48,
    tol: float = 1e-10,
) -> list[PreDiracPoint]:
    """All zeros of (h1, h2) on the zone, Newton-refined from a dense seed grid.

    Each zero carries sgn det d(h1,h2)/d(kx,ky); zeros with a singular Jacobian
    are reported with ``degenerate=True`` rather than dropped.
    """
    if model.bands != 2 or model.field is None:
        raise ModelError("pre_dirac_points requires a 2-band coefficient model")
    p = model.params_with_defaults(params)
    zone = model.zone
    G = zone.matrix

    found: dict[tuple[int, int], PreDiracPoint] = {}
    ss = (np.arange(seed_density) + 0.5) / seed_density
    S, T = np.meshgrid(ss, ss, indexing="ij")
    K = zone.kpoint(S.ravel(), T.ravel())
    H = model.field(p, K[:, 0], K[:, 1])
    res = np.hypot(H[:, 0], H[:, 1])
    scale = max(res.max(), 1.0)
    order = np.argsort(res)
    seeds = K[order[: max(64, 8 * seed_density)]]

    for k0 in seeds:
        k = k0.copy()
        ok = False
        for _ in range(60):
            h = model.field(p, k[0], k[1])
            f = h[:2]
            if np.hypot(*f) < tol:
                ok = True
                break
            J = model.jac12(p, k[0], k[1]) if model.jac12 else _fd_jac12(model, p, k)
            try:
                step = np.linalg.solve(J, f)
            except np.linalg.LinAlgError:
                break
            if np.linalg.norm(step) > 2.0:
                step = 2.0 * step / np.linalg.norm(step)
            k = k - step
        if not ok:
            continue
        frac = np.linalg.solve(G, k) % 1.0
        frac[frac > 1.0 - 1e-7] = 0.0  # canonical representative at the seam
        key = tuple((np.round(frac * 1e6).astype(int) % 1000000))
        if key in found:
            continue
        kred = zone.kpoint(frac[0], frac[1])
        h = model.field(p, kred[0], kred[1])
        J = model.jac12(p, kred[0], kred[1]) if model.jac12 else _fd_jac12(model, p, kred)
        det = float(np.linalg.det(J))
        degenerate = abs(det) < 1e-8 * scale**2
        found[key] = PreDiracPoint(
            k=kred,
            frac=(float(frac[0]), float(frac[1])),
            jac_sign=0 if degenerate else int(np.sign(det)),
            h3=float(h[2]),
            degenerate=degenerate,
        )
    return sorted(found.values(), key=lambda q: q.frac)
