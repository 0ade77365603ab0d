"""scikit-learn style wrappers around the functional API.

``fit`` takes the form matrix ``J``; the fitted objects then map between
matrices and coordinates (:class:`SolutionSpace`) or between coefficient
vectors and group elements / projected points (:class:`GroupSampler`).
Hyper-parameters follow the ``get_params``/``set_params`` protocol.
"""
import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .core_linalg import as_form_matrix, from_coords, to_coords
from .group_sampler import (
    SampleConfig,
    _vec,
    exp_map,
    membership_residual,
    projection_matrix,
    sample_coefficients,
    tangent_generators,
)
from .solution_basis import cosol_basis, dimension_report, sol_basis

__all__ = ["SolutionSpace", "GroupSampler"]


def _stack(X, n):
    X = np.asarray(X)
    if X.ndim == 2:
        X = X[None]
    if X.ndim != 3 or X.shape[1:] != (n, n):
        raise ValueError(f"expected matrices of shape ({n}, {n}), got {X.shape}")
    return X


class SolutionSpace(BaseEstimator):
    """Basis of ``sol(J)`` or ``cosol(J)`` as a fitted estimator.

    Parameters
    ----------
    space : {'sol', 'cosol'}
    involution : {'T', 'H'}
    tol : float, optional
    random_state : int, optional
        Chain randomisation; the fitted span does not depend on it.

    Attributes
    ----------
    basis_ : SolutionBasis
    components_ : (dim, n, n) ndarray
    dim_ : int
    n_features_in_ : int
        ``n`` of the fitted ``J``.

    Examples
    --------
    >>> est = SolutionSpace().fit(np.eye(3))
    >>> est.dim_
    3
    """

    def __init__(self, space="sol", involution="T", tol=None, random_state=None):
        self.space = space
        self.involution = involution
        self.tol = tol
        self.random_state = random_state

    def fit(self, J, y=None):
        if self.space not in ("sol", "cosol"):
            raise ValueError(f"space must be 'sol' or 'cosol', got {self.space!r}")
        J = as_form_matrix(J)
        fn = sol_basis if self.space == "sol" else cosol_basis
        self.J_ = J
        self.basis_ = fn(J, self.involution, self.tol, random_state=self.random_state)
        n = J.shape[0]
        self.components_ = (np.array(self.basis_.elements) if self.basis_.dim
                            else np.zeros((0, n, n)))
        self.dim_ = self.basis_.dim
        self.n_features_in_ = n
        return self

    def _coord_matrix(self):
        return self.basis_.coordinate_matrix()

    def transform(self, X):
        """Least-squares coordinates of matrices ``X`` (``(k, n, n)`` or ``(n, n)``) in the basis."""
        check_is_fitted(self, "basis_")
        X = _stack(X, self.n_features_in_)
        B = self._coord_matrix()
        rc = self.basis_.real_coords
        V = np.column_stack([to_coords(M, rc) for M in X]) if len(X) else np.zeros((B.shape[0], 0))
        coef, *_ = np.linalg.lstsq(B, V, rcond=None)
        return coef.T

    def inverse_transform(self, C):
        """Matrices ``sum_j c_j S_j`` for coefficient rows ``C``."""
        check_is_fitted(self, "basis_")
        C = np.atleast_2d(np.asarray(C))
        if C.shape[1] != self.dim_:
            raise ValueError(f"expected {self.dim_} coefficients per row, got {C.shape[1]}")
        return np.tensordot(C, self.components_, axes=1)

    def residual(self, X):
        """Distance of each matrix from the fitted space (Frobenius norm)."""
        X = _stack(X, self.n_features_in_)
        back = self.inverse_transform(self.transform(X))
        return np.linalg.norm((X - back).reshape(len(X), -1), axis=1)

    def report(self):
        """Dimension report (formula, oracle and constructed counts) for the fitted ``J``."""
        check_is_fitted(self, "basis_")
        return dimension_report(self.J_, self.involution, self.space, self.tol, basis=self.basis_)


class GroupSampler(BaseEstimator):
    """Exponential-map sampler of ``{G : G* J G = J}`` as a fitted estimator.

    Parameters
    ----------
    involution : {'T', 'H'}
    n_samples : int
    seed : int
    scale : float
    tol : float, optional

    Attributes
    ----------
    generators_ : (m, n, n) ndarray
        Real basis of the tangent space.
    projection_ : (d, 3) ndarray
        Orthonormal projection used by :meth:`transform`.
    """

    def __init__(self, involution="T", n_samples=1000, seed=0, scale=1.0, tol=None):
        self.involution = involution
        self.n_samples = n_samples
        self.seed = seed
        self.scale = scale
        self.tol = tol

    def fit(self, J, y=None):
        J = as_form_matrix(J)
        self.config_ = SampleConfig(self.n_samples, self.seed, self.scale)
        self.J_ = J
        n = J.shape[0]
        gens = tangent_generators(J, self.involution, self.tol)
        self.generators_ = np.array(gens) if gens else np.zeros((0, n, n))
        cplx = np.iscomplexobj(J) or np.iscomplexobj(self.generators_)
        self.projection_ = projection_matrix(2 * n * n if cplx else n * n, self.seed)
        self.n_features_in_ = n
        return self

    def coefficients(self):
        """``(n_samples, m)`` coefficient matrix of the configured run."""
        check_is_fitted(self, "generators_")
        m = len(self.generators_)
        return np.array([sample_coefficients(m, self.config_, i)
                         for i in range(self.config_.N)]).reshape(self.config_.N, m)

    def group_elements(self, R=None):
        """``exp(sum_j r_j S_j)`` for each coefficient row (default: :meth:`coefficients`)."""
        check_is_fitted(self, "generators_")
        R = self.coefficients() if R is None else np.atleast_2d(np.asarray(R, dtype=float))
        if R.shape[1] != len(self.generators_):
            raise ValueError(f"expected {len(self.generators_)} coefficients per row")
        return [exp_map(np.tensordot(r, self.generators_, axes=1)) for r in R]

    def transform(self, R=None):
        """3-D points ``Q^T vec(G)`` for coefficient rows ``R``."""
        Gs = self.group_elements(R)
        cplx = self.projection_.shape[0] != self.n_features_in_ ** 2
        if not Gs:
            return np.zeros((0, 3))
        V = np.column_stack([_vec(G.astype(complex) if cplx else G) for G in Gs])
        return (self.projection_.T @ V).T

    def membership_residuals(self, R=None):
        return np.array([membership_residual(G, self.J_, self.involution)
                         for G in self.group_elements(R)])
