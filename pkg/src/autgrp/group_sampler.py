"""Sampling the automorphism group ``{G : G* J G = J}`` through the exponential map.

Samples are ``exp(sum_j r_j S_j)`` over a basis ``S_j`` of ``sol(J)``, so they
cover the identity component only. Also provides 3-D projections of sample
clouds, CSV/PLY/gnuplot export and the small-case classifiers for real
``2 x 2`` and generic real ``4 x 4`` forms.

Random streams
--------------
Every random draw uses numpy's counter-based ``Philox`` generator. Sample
``i`` of a run with seed ``s`` uses the stream ``SeedSequence(s, spawn_key=(0, i))``
and the projection matrix uses ``SeedSequence(s, spawn_key=(1,))``, so any
sample can be regenerated on its own and runs can be split across workers.
"""
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import scipy.linalg

from .core_linalg import Involution, as_form_matrix, star
from .errors import DomainError, InputError
from .solution_basis import sol_basis

__all__ = [
    "SampleConfig",
    "Classification2x2",
    "membership_residual",
    "exp_map",
    "tangent_generators",
    "sample_coefficients",
    "sample_group",
    "projection_matrix",
    "project_cloud",
    "classify_2x2",
    "profile_4x4",
    "samples_to_csv",
    "points_to_csv",
    "points_to_ply",
    "gnuplot_script",
]

_SAMPLE_STREAM = 0
_PROJECTION_STREAM = 1


@dataclass(frozen=True)
class SampleConfig:
    """Sampling parameters.

    Attributes
    ----------
    N : int
        Number of samples (``>= 0``).
    seed : int
        Seed of the counter-based generator (``0 <= seed < 2**64``).
    scale : float
        Coefficients are drawn uniformly from ``[-scale, scale]``.
    """

    N: int = 1000
    seed: int = 0
    scale: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 0:
            raise ValueError(f"N must be a non-negative integer, got {self.N!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an integer in [0, 2**64), got {self.seed!r}")
        if not np.isfinite(self.scale) or self.scale < 0:
            raise ValueError(f"scale must be finite and non-negative, got {self.scale!r}")


def _generator(seed, *key):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=key)))


def membership_residual(G, J, inv="T"):
    """``||G* J G - J||_F``.

    Examples
    --------
    >>> membership_residual(np.eye(2), np.eye(2))
    0.0
    """
    G = np.asarray(G)
    J = np.asarray(J)
    if G.shape != J.shape:
        raise ValueError(f"shape mismatch: G {G.shape} vs J {J.shape}")
    inv = Involution.parse(inv)
    return float(np.linalg.norm(star(G, inv) @ J @ G - J))


def exp_map(X):
    """Matrix exponential (scaling and squaring with a Pade kernel, via :func:`scipy.linalg.expm`)."""
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"exp_map needs a square matrix, got shape {X.shape}")
    return scipy.linalg.expm(X)


def tangent_generators(J, inv="T", tol=None):
    """Real basis of the tangent space ``sol(J)``.

    For complex ``J`` with T the complex span is turned into a real one by
    adding ``i S`` for every element ``S``.
    """
    basis = sol_basis(J, inv, tol)
    elements = list(basis.elements)
    if basis.field == "complex" and basis.involution == "T":
        elements = elements + [1j * S for S in elements]
    return elements


def sample_coefficients(m, cfg: SampleConfig, index):
    """Coefficient vector of sample ``index`` (length ``m``)."""
    rng = _generator(cfg.seed, _SAMPLE_STREAM, int(index))
    return rng.uniform(-cfg.scale, cfg.scale, size=m)


def _combine(generators, r, n):
    if not generators:
        return np.zeros((n, n))
    return np.tensordot(r, np.asarray(generators), axes=1)


def sample_group(J, inv="T", cfg: Optional[SampleConfig] = None, tol=None, generators=None):
    """Draw ``cfg.N`` elements of the identity component of ``{G : G* J G = J}``.

    Parameters
    ----------
    J : (n, n) array_like
    inv : {'T', 'H'}
    cfg : SampleConfig, optional
    tol : float, optional
        Rank tolerance for the tangent basis.
    generators : list of ndarray, optional
        Precomputed output of :func:`tangent_generators`.

    Returns
    -------
    list of ndarray
        ``exp(sum_j r_j S_j)`` with ``r`` drawn per :class:`SampleConfig`.
    """
    cfg = SampleConfig() if cfg is None else cfg
    J = as_form_matrix(J)
    if generators is None:
        generators = tangent_generators(J, inv, tol)
    n = J.shape[0]
    m = len(generators)
    return [exp_map(_combine(generators, sample_coefficients(m, cfg, i), n))
            for i in range(cfg.N)]


def projection_matrix(dim, seed):
    """Orthonormal ``dim x 3`` matrix from the QR factor of a seeded Gaussian matrix."""
    if dim < 3:
        raise DomainError(f"need at least 3 coordinates to project to 3-D, got {dim}")
    rng = _generator(seed, _PROJECTION_STREAM)
    Q, R = np.linalg.qr(rng.standard_normal((dim, 3)))
    # fix the column signs so Q depends on the seed only
    return Q * np.sign(np.diag(R))


def _vec(G):
    v = np.asarray(G).reshape(-1, order="F")
    if np.iscomplexobj(v):
        return np.concatenate([v.real, v.imag])
    return v


def project_cloud(J, inv="T", cfg: Optional[SampleConfig] = None, mode="scatter", grid=50,
                  tol=None, return_samples=False):
    """3-D projection ``Q^T vec(G)`` of sampled group elements.

    Parameters
    ----------
    J : (n, n) array_like
    inv : {'T', 'H'}
    cfg : SampleConfig, optional
    mode : {'scatter', 'surface-grid'}
        ``'scatter'`` projects ``cfg.N`` random samples. ``'surface-grid'``
        needs a two-dimensional tangent space and evaluates ``exp(r1 S1 + r2 S2)``
        on a ``grid x grid`` lattice over ``[-scale, scale]^2`` (``r1`` is the
        slow index), giving an ordered surface mesh.
    grid : int
        Lattice size for ``'surface-grid'``.
    return_samples : bool
        Also return the group elements behind the points.

    Returns
    -------
    points : (N, 3) ndarray
    samples : list of ndarray
        Only with ``return_samples=True``.

    Raises
    ------
    DomainError
        For ``'surface-grid'`` when the tangent space is not two-dimensional.

    Notes
    -----
    ``vec`` stacks columns; for complex samples the real parts are followed by
    the imaginary parts, so ``Q`` has ``2 n^2`` rows.
    """
    cfg = SampleConfig() if cfg is None else cfg
    J = as_form_matrix(J)
    n = J.shape[0]
    generators = tangent_generators(J, inv, tol)
    if mode == "scatter":
        samples = sample_group(J, inv, cfg, generators=generators)
    elif mode == "surface-grid":
        if len(generators) != 2:
            raise DomainError(
                f"surface-grid mode needs a 2-dimensional tangent space, got {len(generators)}")
        if int(grid) != grid or grid < 1:
            raise ValueError(f"grid must be a positive integer, got {grid!r}")
        ticks = np.linspace(-cfg.scale, cfg.scale, int(grid))
        samples = [exp_map(_combine(generators, np.array([a, b]), n))
                   for a in ticks for b in ticks]
    else:
        raise ValueError(f"unknown mode {mode!r}; expected 'scatter' or 'surface-grid'")
    cplx = any(np.iscomplexobj(G) for G in samples) or np.iscomplexobj(J)
    dim = 2 * n * n if cplx else n * n
    Q = projection_matrix(dim, cfg.seed)
    if samples:
        V = np.column_stack([_vec(G.astype(complex) if cplx else G) for G in samples])
        points = (Q.T @ V).T
    else:
        points = np.zeros((0, 3))
    return (points, samples) if return_samples else points


# --------------------------------------------------------------------------
# small-case classifiers


@dataclass(frozen=True)
class Classification2x2:
    """Group type of a real ``2 x 2`` form.

    Attributes
    ----------
    case : int
        Case number 1-9.
    signature : tuple of int
        Inertia ``(p, q)`` of the symmetric part, reported with ``p >= q``.
    rank_skew : int
        Rank of the skew-symmetric part (0 or 2).
    cosquare : str
        Eigenvalue tag of the cosquare (``'-'`` for singular forms).
    group : str
    dim : int
    """

    case: int
    signature: tuple
    rank_skew: int
    cosquare: str
    group: str
    dim: int

    @property
    def label(self):
        return "①②③④⑤⑥⑦⑧⑨"[self.case - 1]

    def to_json(self):
        return {"case": self.case, "label": self.label, "signature": list(self.signature),
                "rank_skew": self.rank_skew, "cosquare": self.cosquare,
                "group": self.group, "dim": self.dim}


_TABLE_2x2 = {
    1: ("lambda, 1/lambda real", "hyperbola {diag(x, 1/x)}", 1),
    2: ("lambda, conj(lambda) on the unit circle", "circle SO(2)", 1),
    3: ("J_1(1) + J_1(1)", "O(2), two circles", 1),
    4: ("J_1(1) + J_1(1)", "O(1,1), two hyperbolae", 1),
    5: ("J_1(-1) + J_1(-1)", "SL(2,R) = Sp(2,R)", 3),
    6: ("J_2(-1)", "two real lines {+-[[1,x],[0,1]]}", 1),
    7: ("-", "hyperbola {diag(x, 1/x)}", 1),
    8: ("-", "{-1,1} x Aff(1,R)", 2),
    9: ("-", "GL(2,R)", 4),
}


def _inertia(S, tol):
    w = np.linalg.eigvalsh(S)
    return int(np.sum(w > tol)), int(np.sum(w < -tol))


def classify_2x2(J, tol=1e-10):
    """Classify a real ``2 x 2`` form by the signature of its symmetric part,
    the rank of its skew part and, when both are ambiguous, its rank.

    Both invariants are preserved by congruence, so congruent forms get the
    same case.

    Examples
    --------
    >>> classify_2x2(np.zeros((2, 2))).case
    9
    >>> classify_2x2(np.array([[0., -1.], [1., 1.]])).dim
    1
    """
    J = np.asarray(J)
    if J.shape != (2, 2) or np.iscomplexobj(J):
        raise InputError(f"classify_2x2 needs a real 2x2 matrix, got {J.dtype} {J.shape}")
    J = J.astype(float)
    thr = tol * max(1.0, np.linalg.norm(J))
    S = (J + J.T) / 2
    rank_a = 2 if abs(J[0, 1] - J[1, 0]) / 2 > thr else 0
    p, q = _inertia(S, thr)
    sig = (max(p, q), min(p, q))
    if rank_a == 0:
        case = {(2, 0): 3, (1, 1): 4, (1, 0): 8, (0, 0): 9}[sig]
    else:
        if sig == (2, 0):
            case = 2
        elif sig == (0, 0):
            case = 5
        elif sig == (1, 0):
            case = 6
        else:
            singular = abs(np.linalg.det(J)) <= thr * max(1.0, np.linalg.norm(J))
            case = 7 if singular else 1
    tag, group, dim = _TABLE_2x2[case]
    return Classification2x2(case, sig, rank_a, tag, group, dim)


PROFILES = ("circle x circle", "punctured-plane", "hyperbola x circle",
            "hyperbola x hyperbola", "NonGeneric")


def profile_4x4(J, tol=1e-8):
    """Profile of a generic real ``4 x 4`` form from the cosquare eigenvalues.

    Returns one of ``'circle x circle'`` (two conjugate pairs on the unit
    circle), ``'punctured-plane'`` (a quadruple ``lam, conj(lam), 1/lam,
    1/conj(lam)``), ``'hyperbola x circle'`` (a real reciprocal pair and a unit
    pair), ``'hyperbola x hyperbola'`` (two real reciprocal pairs) or
    ``'NonGeneric'`` (singular ``J`` or repeated cosquare eigenvalues).
    """
    J = np.asarray(J)
    if J.shape != (4, 4) or np.iscomplexobj(J):
        raise InputError(f"profile_4x4 needs a real 4x4 matrix, got {J.dtype} {J.shape}")
    s = np.linalg.svd(J, compute_uv=False)
    if s[-1] <= tol * s[0]:
        return "NonGeneric"
    lam = np.linalg.eigvals(np.linalg.solve(J.T, J))
    scale = max(1.0, np.max(np.abs(lam)))
    gaps = [abs(lam[i] - lam[j]) for i in range(4) for j in range(i + 1, 4)]
    if min(gaps) <= np.sqrt(tol) * scale:
        return "NonGeneric"
    real = np.abs(lam.imag) <= tol * scale
    unit = np.abs(np.abs(lam) - 1.0) <= np.sqrt(tol)
    n_real, n_unit = int(np.sum(real)), int(np.sum(unit & ~real))
    if n_unit == 4:
        return "circle x circle"
    if n_real == 4:
        return "hyperbola x hyperbola"
    if n_real == 2 and n_unit == 2:
        return "hyperbola x circle"
    if n_real == 0 and n_unit == 0:
        return "punctured-plane"
    return "NonGeneric"


# --------------------------------------------------------------------------
# export


def _fmt(x):
    return repr(float(x))


def samples_to_csv(samples: List[np.ndarray]):
    """CSV text with one sample per row, entries row-major.

    Columns are ``g11,g12,...`` (``g1_1,...`` for ``n > 9``); complex samples get
    ``_re``/``_im`` column pairs. Floats use the shortest round-trip repr.
    """
    if not samples:
        return "\n"
    n = samples[0].shape[0]
    sep = "_" if n > 9 else ""
    names = [f"g{i + 1}{sep}{j + 1}" for i in range(n) for j in range(n)]
    cplx = any(np.iscomplexobj(G) for G in samples)
    if cplx:
        names = [f"{c}_{part}" for c in names for part in ("re", "im")]
    lines = [",".join(names)]
    for G in samples:
        flat = np.asarray(G).reshape(-1)
        if cplx:
            vals = [v for z in flat for v in (z.real, z.imag)]
        else:
            vals = flat
        lines.append(",".join(_fmt(v) for v in vals))
    return "\n".join(lines) + "\n"


def points_to_csv(points):
    """CSV text with header ``x,y,z``."""
    lines = ["x,y,z"] + [",".join(_fmt(v) for v in row) for row in np.asarray(points)]
    return "\n".join(lines) + "\n"


def points_to_ply(points):
    """ASCII PLY point cloud."""
    points = np.asarray(points)
    head = ["ply", "format ascii 1.0", f"element vertex {len(points)}",
            "property double x", "property double y", "property double z", "end_header"]
    body = [" ".join(_fmt(v) for v in row) for row in points]
    return "\n".join(head + body) + "\n"


def gnuplot_script(csv_path, grid=None):
    """gnuplot script plotting a point CSV (as a surface mesh when ``grid`` is given)."""
    lines = ["set datafile separator ','", "set key off", "set view equal xyz"]
    if grid:
        lines.append(f"set dgrid3d {int(grid)},{int(grid)}")
        lines.append(f"splot '{csv_path}' every ::1 using 1:2:3 with lines")
    else:
        lines.append(f"splot '{csv_path}' every ::1 using 1:2:3 with points pt 7 ps 0.3")
    return "\n".join(lines) + "\n"
