"""Basis container and the shared finalisation step (rank reduction + normalisation)."""
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .core_linalg import Involution, independent_subset, star, to_coords


@dataclass
class SolutionBasis:
    """An ordered basis of ``sol`` or ``cosol``.

    Attributes
    ----------
    space : {'sol', 'cosol'}
    involution : {'T', 'H'}
    field : {'real', 'complex'}
        Field of ``J``. For complex ``J`` with T the elements span a complex
        vector space; with H (or for real ``J``) the span is real.
    elements : list of ndarray
    residuals : list of float
        ``||X* J +- J X||_F`` per element.
    tags : list of tuple
        Provenance of each element.
    """

    space: str
    involution: str
    field: str
    elements: List[np.ndarray] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    tags: List[tuple] = field(default_factory=list)
    n: Optional[int] = None

    @property
    def dim(self):
        return len(self.elements)

    @property
    def real_coords(self):
        """Whether the span is real while the elements may be complex (H case)."""
        return self.involution == "H" and self.field == "complex"

    @property
    def real_dim(self):
        """Dimension over the reals (twice ``dim`` for complex spans)."""
        if self.field == "complex" and self.involution == "T":
            return 2 * self.dim
        return self.dim

    @property
    def residual_max(self):
        return max(self.residuals) if self.residuals else 0.0

    def coordinate_matrix(self):
        """Coordinates of the elements as columns (``n^2`` or ``2 n^2`` rows)."""
        n = self.n if self.n is not None else (self.elements[0].shape[0] if self.elements else 0)
        rows = 2 * n * n if self.real_coords else n * n
        if not self.elements:
            return np.zeros((rows, 0))
        return np.column_stack([to_coords(X, self.real_coords) for X in self.elements])

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.elements)


# amplification allowed for rounding errors in the assembled terms
_CANCEL_FACTOR = 1e3


def equation_residual(X, J, inv, sign):
    return float(np.linalg.norm(star(X, inv) @ J + sign * (J @ X)))


def normalize_element(X, real_coords):
    """Unit Frobenius norm; first nonzero coordinate made positive.

    For complex spans the first nonzero coordinate is rotated to the positive
    real axis; for real spans (H case) only its sign is fixed.
    """
    X = X / np.linalg.norm(X)
    v = to_coords(X, real_coords)
    scale = np.max(np.abs(v))
    idx = np.flatnonzero(np.abs(v) > 1e-10 * scale)
    if idx.size:
        c = v[idx[0]]
        if real_coords or not np.iscomplexobj(c):
            X = X * (1.0 if np.real(c) > 0 else -1.0)
        else:
            X = X * (abs(c) / c)
    return X


def finalize_basis(candidates, tags, J, inv, sign, rank_tol=1e-8, scales=None, zero_tol=1e-10):
    """Reduce candidates to an independent, normalised :class:`SolutionBasis`.

    Parameters
    ----------
    candidates : list of ndarray
    tags : list of tuple
    J : ndarray
    inv : Involution
    sign : {+1, -1}
        ``+1`` for ``sol`` and ``-1`` for ``cosol``.
    scales : list of float, optional
        Magnitude of the terms each candidate was assembled from; candidates
        with norm below ``zero_tol * scale`` are cancellations and dropped.
        A candidate that survives a heavy cancellation carries a relative
        error of roughly ``eps * scale / norm``: such candidates are visited
        last and must clear that error bound (not just ``rank_tol``) to count
        as a new direction.
    """
    inv = Involution.parse(inv)
    real_field = not np.iscomplexobj(J)
    real_coords = inv is Involution.H and not real_field
    cleaned, ctags, noise = [], [], []
    if scales is None:
        scales = [0.0] * len(candidates)
    for X, tag, scale in zip(candidates, tags, scales):
        if real_field:
            X = np.real_if_close(X, tol=1e6)
            if np.iscomplexobj(X):
                X = X.real
            X = np.asarray(X, dtype=float)
        nrm = np.linalg.norm(X)
        if nrm == 0.0 or nrm <= zero_tol * scale:
            continue
        cleaned.append(X / nrm)
        ctags.append(tag)
        noise.append(_CANCEL_FACTOR * np.finfo(float).eps * scale / nrm)
    tols = np.maximum(rank_tol, noise)
    order = sorted(range(len(cleaned)), key=lambda i: noise[i])
    keep = independent_subset([to_coords(X, real_coords) for X in cleaned], tols, order)
    elements = [normalize_element(cleaned[i], real_coords) for i in keep]
    return SolutionBasis(
        space="sol" if sign > 0 else "cosol",
        involution=inv.value,
        field="real" if real_field else "complex",
        elements=elements,
        residuals=[equation_residual(X, J, inv, sign) for X in elements],
        tags=[ctags[i] for i in keep],
        n=J.shape[0],
    )
