"""Dense matrix primitives shared by every other module.

Matrices are plain :class:`numpy.ndarray` objects. The scalar field is read
off the dtype: real dtypes are the real field, complex dtypes the complex
field. Functions never modify their inputs.
"""
import enum

import numpy as np
import scipy.linalg

from ._config import resolve_tol

__all__ = [
    "Involution",
    "as_form_matrix",
    "is_real_field",
    "star",
    "backwards_identity",
    "antidiagonal",
    "realify",
    "unrealify",
    "nullspace",
    "numerical_rank",
    "vec_operator",
    "to_coords",
    "from_coords",
    "independent_subset",
    "max_principal_angle",
]


class Involution(str, enum.Enum):
    """Which "star" is applied to the form: transpose or conjugate transpose."""

    T = "T"
    H = "H"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"involution must be 'T' or 'H', got {value!r}") from None


def as_form_matrix(J, name="J"):
    """Validate a square form matrix and return it as a float or complex array."""
    J = np.asarray(J)
    if J.ndim != 2 or J.shape[0] != J.shape[1]:
        raise ValueError(f"{name} must be a square 2-D array, got shape {J.shape}")
    if J.shape[0] == 0:
        raise ValueError(f"{name} must be non-empty")
    if np.iscomplexobj(J):
        J = J.astype(complex)
    else:
        J = J.astype(float)
    if not np.all(np.isfinite(J)):
        raise ValueError(f"{name} contains non-finite entries")
    return J


def is_real_field(J):
    return not np.iscomplexobj(J)


def effective_involution(J, inv):
    """Real matrices under ``H`` behave exactly like ``T``."""
    inv = Involution.parse(inv)
    if inv is Involution.H and is_real_field(J):
        return Involution.T
    return inv


def star(A, inv):
    """Apply the involution: ``A.T`` for T, ``A.conj().T`` for H."""
    if Involution.parse(inv) is Involution.H:
        return A.conj().T
    return A.T


def backwards_identity(j, s, t):
    """Return the ``s x t`` matrix whose upper-left ``j x j`` corner is reversed identity.

    Parameters
    ----------
    j, s, t : int
        Corner size and matrix shape, ``1 <= j <= min(s, t)``.

    Examples
    --------
    >>> backwards_identity(2, 3, 2)
    array([[0., 1.],
           [1., 0.],
           [0., 0.]])
    """
    if not (1 <= j <= min(s, t)):
        raise ValueError(f"need 1 <= j <= min(s, t), got j={j}, s={s}, t={t}")
    return antidiagonal(j, s, t)


def antidiagonal(k, s, t):
    """``s x t`` matrix with ones where ``a + b == k + 1`` (1-based indices).

    Agrees with :func:`backwards_identity` for ``k <= min(s, t)`` and keeps
    going along the Hankel antidiagonals up to ``k = s + t - 1``.
    """
    M = np.zeros((s, t))
    for a in range(s):
        b = k - 1 - a
        if 0 <= b < t:
            M[a, b] = 1.0
    return M


def realify(A):
    """Embed a complex ``n x m`` matrix as the real ``2n x 2m`` block matrix.

    The layout is ``[[re A, im A], [-im A, re A]]``, a ring homomorphism on
    square matrices.
    """
    A = np.asarray(A)
    re, im = A.real.astype(float), A.imag.astype(float)
    return np.block([[re, im], [-im, re]])


def unrealify(R):
    n, m = R.shape[0] // 2, R.shape[1] // 2
    return R[:n, :m] + 1j * R[:n, m:]


def _svd_threshold(s, tol):
    smax = s[0] if s.size else 0.0
    return tol * smax


def numerical_rank(A, tol=None):
    """Rank with singular values ``<= tol * sigma_max`` counted as zero."""
    tol = resolve_tol(tol)
    A = np.atleast_2d(A)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > _svd_threshold(s, tol)))


def nullspace(A, tol=None):
    """Orthonormal basis of the numerical nullspace of ``A``.

    Parameters
    ----------
    A : (m, n) array_like
    tol : float, optional
        Relative threshold; singular values ``<= tol * sigma_max`` are zero.

    Returns
    -------
    N : (n, k) ndarray
        Columns span ``{v : ||A v|| <= tol ||A|| ||v||}``. ``k`` may be 0.
    """
    tol = resolve_tol(tol)
    A = np.atleast_2d(np.asarray(A))
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=A.dtype if np.iscomplexobj(A) else float)
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > _svd_threshold(s, tol)))
    N = vh[rank:].conj().T
    return _fix_column_signs(N)


def _fix_column_signs(N):
    # deterministic orientation: largest-magnitude entry of each column real positive
    N = N.copy()
    for c in range(N.shape[1]):
        col = N[:, c]
        i = int(np.argmax(np.abs(col)))
        if col[i] != 0:
            N[:, c] = col * (abs(col[i]) / col[i])
    return N


def to_coords(X, real_coords):
    """Column-major vectorisation; ``real_coords`` stacks real and imaginary parts."""
    v = np.asarray(X).reshape(-1, order="F")
    if real_coords:
        return np.concatenate([v.real, v.imag]) if np.iscomplexobj(v) else np.concatenate(
            [v, np.zeros_like(v)])
    return v


def from_coords(v, n, real_coords, complex_out=True):
    if real_coords:
        half = v.size // 2
        w = v[:half] + 1j * v[half:] if complex_out else v[:half]
    else:
        w = v
    return np.asarray(w).reshape((n, n), order="F")


def vec_operator(J, inv, sign):
    """Matrix of ``X -> X* J + sign * J X`` on the coordinates of ``X``.

    Real ``J``: ``n^2`` real coordinates. Complex ``J`` with ``T``: ``n^2``
    complex coordinates (the map is complex-linear). Complex ``J`` with ``H``:
    the map is only real-linear, so ``2 n^2`` real coordinates
    (real parts then imaginary parts, column-major).

    Parameters
    ----------
    J : (n, n) array_like
    inv : {'T', 'H'} or Involution
    sign : {+1, -1} or {'+', '-'}
    """
    J = as_form_matrix(J)
    inv = effective_involution(J, inv)
    sgn = _parse_sign(sign)
    n = J.shape[0]
    real_coords = inv is Involution.H
    dim = 2 * n * n if real_coords else n * n
    dtype = float if (real_coords or is_real_field(J)) else complex
    M = np.empty((dim, dim), dtype=dtype)
    for c in range(dim):
        e = np.zeros(dim)
        e[c] = 1.0
        X = from_coords(e, n, real_coords)
        if not real_coords:
            X = X.astype(dtype)
        Y = star(X, inv) @ J + sgn * (J @ X)
        M[:, c] = to_coords(Y, real_coords)
    return M


def _parse_sign(sign):
    if sign in (1, "+", "plus", "sol"):
        return 1.0
    if sign in (-1, "-", "minus", "cosol"):
        return -1.0
    raise ValueError(f"sign must be +1 or -1, got {sign!r}")


def independent_subset(vectors, tol=1e-8, order=None):
    """Greedy selection of linearly independent vectors.

    Each candidate is normalised and kept if its component orthogonal to the
    span of the kept ones has relative norm above its tolerance.

    Parameters
    ----------
    vectors : sequence of ndarray
    tol : float or sequence of float
        Relative tolerance, either shared or one per vector.
    order : sequence of int, optional
        Visiting order (default: as given). Candidates visited first win ties.

    Returns
    -------
    keep : list of int
        Indices into ``vectors``, sorted increasingly.
    """
    tols = np.broadcast_to(np.asarray(tol, dtype=float), (len(vectors),))
    basis = []
    keep = []
    for idx in (range(len(vectors)) if order is None else order):
        v = vectors[idx]
        nv = np.linalg.norm(v)
        if nv == 0.0:
            continue
        r = v / nv
        for _ in range(2):
            for q in basis:
                r = r - q * np.vdot(q, r)
        nr = np.linalg.norm(r)
        if nr > tols[idx]:
            basis.append(r / nr)
            keep.append(idx)
    return sorted(keep)


def max_principal_angle(A, B):
    """Largest principal angle between the column spans of ``A`` and ``B``."""
    if A.shape[1] == 0 and B.shape[1] == 0:
        return 0.0
    if A.shape[1] == 0 or B.shape[1] == 0:
        return np.pi / 2
    return float(np.max(scipy.linalg.subspace_angles(A, B)))
