"""Kronecker structure of the palindromic pencil ``J - lam J*`` and singular-J bases.

The pencil is handled through its *elementary* blocks:

* ``S`` -- the odd-sized singular block ``S_n = A - lam A^T`` (equivalent to
  ``L_s (+) L_s^T`` with ``n = 2s + 1``),
* ``finite`` -- ``J_m(alpha) - lam I``,
* ``infinite`` -- ``I - lam N_m``.

Paired blocks (``Z_t``, reciprocal Jordan pairs, real quadruples) are groups
of elementary blocks. For each elementary block reducing chains ``W, Q`` and
``U, P`` are drawn from the nullspace of the linear equations they satisfy;
``(E, F)`` pairs between blocks come from closed-form lists where available.
"""
from dataclasses import dataclass, field
from math import comb
from typing import List, Optional, Tuple

import numpy as np

from ._basis import SolutionBasis, finalize_basis
from ._config import cluster_radius, resolve_tol
from .core_linalg import (
    Involution,
    antidiagonal,
    as_form_matrix,
    effective_involution,
    is_real_field,
    nullspace,
    numerical_rank,
    star,
)
from .eigenstructure import (
    _cluster,
    _snap,
    _sort_key,
    build_pairing,
    cosquare,
    jordan_structure,
    partial_multiplicities,
)
from .errors import StructureError

__all__ = [
    "KroneckerBlock",
    "KroneckerSpec",
    "ElementaryBlock",
    "ReducingChains",
    "EFPair",
    "kronecker_structure",
    "reducing_chains",
    "ef_block_basis",
    "ef_interaction_basis",
    "ef_residual",
    "G_matrix",
    "S_pencil",
    "singular_sol_basis",
    "singular_cosol_basis",
    "canonical_block",
    "congruence_scramble",
]


# --------------------------------------------------------------------------
# block descriptors


@dataclass(frozen=True)
class ElementaryBlock:
    """One indecomposable block ``K(lam) = K0 + lam K1`` of the pencil."""

    kind: str  # 'S', 'finite', 'infinite'
    size: int
    eigenvalue: Optional[complex] = None

    def coefficients(self):
        """Return ``(K0, K1)``."""
        if self.kind == "S":
            return S_pencil(self.size)
        if self.kind == "finite":
            lam = complex(self.eigenvalue)
            dtype = complex if lam.imag != 0 else float
            K0 = (lam if dtype is complex else lam.real) * np.eye(self.size, dtype=dtype)
            K0 = K0 + np.eye(self.size, k=1)
            return K0, -np.eye(self.size)
        if self.kind == "infinite":
            return np.eye(self.size), -np.eye(self.size, k=1)
        raise ValueError(f"unknown block kind {self.kind!r}")

    def conj(self):
        if self.kind == "finite":
            return ElementaryBlock(self.kind, self.size, complex(self.eigenvalue).conjugate())
        return self


@dataclass(frozen=True)
class KroneckerBlock:
    """A paired canonical block of the palindromic pencil.

    ``kind`` is one of

    * ``'L'`` -- singular pair, ``index = s``, size ``2 s + 1``;
    * ``'Z'`` -- zero/infinity pair, ``index = t``, size ``2 t``;
    * ``'Jordan'`` -- self-paired Jordan block (``lam = +-1`` for T,
      ``|lam| = 1`` for H), ``index = m``;
    * ``'PairedJordan'`` -- a class of Jordan blocks of size ``index = p``
      at the eigenvalues in ``members`` (two, or four for a real quadruple).
    """

    kind: str
    index: int
    eigenvalue: Optional[complex] = None
    members: Tuple[complex, ...] = ()

    @property
    def size(self):
        if self.kind == "L":
            return 2 * self.index + 1
        if self.kind == "Z":
            return 2 * self.index
        if self.kind == "Jordan":
            return self.index
        return self.index * max(1, len(self.members))

    def elementary(self):
        if self.kind == "L":
            return [ElementaryBlock("S", 2 * self.index + 1)]
        if self.kind == "Z":
            return [ElementaryBlock("finite", self.index, 0j),
                    ElementaryBlock("infinite", self.index)]
        if self.kind == "Jordan":
            return [ElementaryBlock("finite", self.index, complex(self.eigenvalue))]
        return [ElementaryBlock("finite", self.index, complex(mu)) for mu in self.members]

    def to_json(self):
        if self.kind == "L":
            return {"kind": "L", "s": self.index}
        if self.kind == "Z":
            return {"kind": "Z", "t": self.index}
        lam = complex(self.eigenvalue)
        d = {"kind": self.kind, "lambda": [lam.real, lam.imag]}
        if self.kind == "Jordan":
            d["m"] = self.index
        else:
            d["p"] = self.index
            d["members"] = [[complex(mu).real, complex(mu).imag] for mu in self.members]
        return d


@dataclass
class KroneckerSpec:
    blocks: List[KroneckerBlock]
    involution: str = "T"
    field: str = "complex"

    @property
    def n(self):
        return sum(b.size for b in self.blocks)

    def elementary(self):
        out = []
        for b in self.blocks:
            out.extend(b.elementary())
        return out

    def of_kind(self, kind):
        return [b for b in self.blocks if b.kind == kind]

    def to_json(self):
        return {"blocks": [b.to_json() for b in self.blocks],
                "involution": self.involution, "field": self.field}


@dataclass
class ReducingChains:
    """``(J - lam J*) W = Q K(lam)`` and ``(J* - lam J) U = P K'(lam)``.

    ``K'`` is ``K`` for T and the entrywise conjugate of ``K`` for H.
    """

    block: ElementaryBlock
    W: np.ndarray
    Q: np.ndarray
    U: np.ndarray
    P: np.ndarray

    def residual(self, J, inv):
        inv = Involution.parse(inv)
        Js = star(J, inv)
        K0, K1 = self.block.coefficients()
        K0u, K1u = (K0, K1) if inv is Involution.T else (np.conj(K0), np.conj(K1))
        parts = [
            J @ self.W - self.Q @ K0, -Js @ self.W - self.Q @ K1,
            Js @ self.U - self.P @ K0u, -J @ self.U - self.P @ K1u,
        ]
        return max(float(np.max(np.abs(p))) if p.size else 0.0 for p in parts)


@dataclass
class EFPair:
    """``E K1(lam)^T - K2(lam) F = 0``; ``E, F`` have shape ``size(K2) x size(K1)``."""

    E: np.ndarray
    F: np.ndarray
    blocks: Tuple[ElementaryBlock, ElementaryBlock] = None


# --------------------------------------------------------------------------
# canonical matrices


def S_pencil(n):
    """Coefficients ``(A, -A^T)`` of the odd-sized singular block ``S_n = A - lam A^T``.

    ``A`` carries ``[[0, L~], [L^T, 0]]`` at ``lam = 0``: an identity in the
    upper-right ``(p+1) x p`` corner (last row zero) and in the lower-left
    ``p x (p+1)`` corner (first column zero), ``n = 2p + 1``.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError(f"S_n needs an odd positive size, got {n}")
    p = (n - 1) // 2
    A = np.zeros((n, n))
    if p:
        A[:p, p + 1:] = np.eye(p)
        A[p + 1:, 1:p + 1] = np.eye(p)
    return A, -A.T


def G_matrix(m, alpha):
    """``m x m`` matrix with entries ``binom(j-1, e) alpha^e`` at ``e = j + k - m - 1``.

    Rows and columns are 1-based in the formula; entries with ``e`` outside
    ``0..j-1`` are zero. ``G_matrix(3, a) == [[0,0,1],[0,1,a],[1,2a,a^2]]``.
    """
    dtype = complex if np.iscomplexobj(alpha) and np.imag(alpha) != 0 else float
    alpha = alpha if dtype is complex else float(np.real(alpha))
    G = np.zeros((m, m), dtype=dtype)
    for j in range(1, m + 1):
        for k in range(1, m + 1):
            e = j + k - m - 1
            if 0 <= e <= j - 1:
                G[j - 1, k - 1] = comb(j - 1, e) * alpha ** e
    return G


# --------------------------------------------------------------------------
# (E, F) lists


def ef_residual(E, F, K1, K2):
    """Largest coefficient of ``E K1(lam)^T - K2(lam) F``."""
    a0, a1 = K1.coefficients()
    b0, b1 = K2.coefficients()
    r0 = E @ a0.T - b0 @ F
    r1 = E @ a1.T - b1 @ F
    return max(float(np.max(np.abs(r0))), float(np.max(np.abs(r1))))


def _ef_single_S(n):
    p = (n - 1) // 2
    out = []
    E = np.zeros((n, n))
    F = np.zeros((n, n))
    E[:p + 1, :p + 1] = antidiagonal(p + 1, p + 1, p + 1)
    F[p + 1:, p + 1:] = antidiagonal(p, p, p)
    out.append((E, F))
    for j in range(2, n + 1):
        E = np.zeros((n, n))
        F = np.zeros((n, n))
        E[p + 1:, :p + 1] = antidiagonal(j - 1, p, p + 1)
        F[:p + 1, p + 1:] = antidiagonal(j - 1, p + 1, p)
        out.append((E, F))
    out.append((out[0][1].copy(), out[0][0].copy()))
    return out


def _ef_two_S(m, n):
    """Pairs with ``E S_n^T - S_m F = 0``, ``m > n`` (``E, F`` are ``m x n``)."""
    mp, q = (m - 1) // 2, (n - 1) // 2
    out = []
    for j in range(1, (m - n) // 2 + 2):
        E = np.zeros((m, n))
        F = np.zeros((m, n))
        E[:mp + 1, :q + 1] = antidiagonal(q + j, mp + 1, q + 1)
        if mp and q:
            F[mp + 1:, q + 1:] = antidiagonal(q + j - 1, mp, q)
        out.append((E, F))
    for j in range((m - n) // 2 + 2, m + 1):
        k = j - (mp - q + 1)
        E = np.zeros((m, n))
        F = np.zeros((m, n))
        E[mp + 1:, :q + 1] = antidiagonal(k, mp, q + 1)
        F[:mp + 1, q + 1:] = antidiagonal(k, mp + 1, q)
        out.append((E, F))
    return out


def _ef_jordan_S(n, m, alpha):
    """Pairs with ``E (J_m(alpha) - lam I)^T - S_n F = 0`` (``E, F`` are ``n x m``)."""
    p = (n - 1) // 2
    dtype = complex if np.iscomplexobj(alpha) and np.imag(alpha) != 0 else float
    Gp = G_matrix(p, alpha) if p else np.zeros((0, 0))
    Gq = G_matrix(p + 1, alpha)
    out = []
    for j in range(1, m + 1):
        E = np.zeros((n, m), dtype=dtype)
        F = np.zeros((n, m), dtype=dtype)
        for k in range(1, p + 1):
            c = j - k + 1
            if 1 <= c <= m:
                E[n - p:, c - 1] = Gp[:, p - k]
        for k in range(1, p + 2):
            c = j - k + 1
            if 1 <= c <= m:
                F[:p + 1, c - 1] = Gq[:, p - k + 1]
        out.append((E, F))
    return out


def _ef_jordan_jordan(a, b):
    # E = F = backwards identities, shape b x a
    return [(antidiagonal(k, b, a), antidiagonal(k, b, a)) for k in range(1, min(a, b) + 1)]


def _same_eigenvalue(x, y, radius=1e-9):
    return abs(complex(x) - complex(y)) <= radius * max(1.0, abs(complex(x)))


def ef_block_basis(K1, K2):
    """Closed-form ``(E, F)`` pairs with ``E K1(lam)^T - K2(lam) F = 0``.

    Supported combinations: ``(S_n, S_n)``, ``(S_n, S_m)`` and ``(S_m, S_n)``,
    ``(Jordan, S_n)`` and ``(S_n, Jordan)``, and Jordan/infinite blocks among
    themselves (empty unless both eigenvalues agree).

    Returns
    -------
    list of EFPair

    Raises
    ------
    ValueError
        For combinations without a closed form (singular block against an
        infinite block).
    """
    k1, k2 = K1.kind, K2.kind
    if k1 == "S" and k2 == "S":
        n1, n2 = K1.size, K2.size
        if n1 == n2:
            pairs = _ef_single_S(n1)
        elif n2 > n1:
            pairs = _ef_two_S(n2, n1)
        else:
            pairs = [(F.T.copy(), E.T.copy()) for E, F in _ef_two_S(n1, n2)]
    elif k1 == "finite" and k2 == "S":
        pairs = _ef_jordan_S(K2.size, K1.size, complex(K1.eigenvalue) if np.imag(
            K1.eigenvalue) else float(np.real(K1.eigenvalue)))
    elif k1 == "S" and k2 == "finite":
        alpha = complex(K2.eigenvalue) if np.imag(K2.eigenvalue) else float(np.real(K2.eigenvalue))
        pairs = [(F.T.copy(), E.T.copy()) for E, F in _ef_jordan_S(K1.size, K2.size, alpha)]
    elif k1 in ("finite", "infinite") and k2 in ("finite", "infinite"):
        if k1 != k2:
            pairs = []
        elif k1 == "finite" and not _same_eigenvalue(K1.eigenvalue, K2.eigenvalue):
            pairs = []
        else:
            pairs = _ef_jordan_jordan(K1.size, K2.size)
    else:
        raise ValueError(f"no closed-form (E, F) list for ({k1}, {k2})")
    return [EFPair(E, F, (K1, K2)) for E, F in pairs]


def ef_interaction_basis(K1, K2):
    """Both orientations of the interaction of two blocks.

    For ``K1 != K2`` this is ``ef_block_basis(K1, K2)`` followed by
    ``ef_block_basis(K2, K1)``; for a single block it is its own list.
    """
    if K1 == K2:
        return ef_block_basis(K1, K1)
    return ef_block_basis(K1, K2) + ef_block_basis(K2, K1)


def _ef_numeric(K1, K2, tol):
    a0, a1 = K1.coefficients()
    b0, b1 = K2.coefficients()
    r1, r2 = K1.size, K2.size
    I1, I2 = np.eye(r1), np.eye(r2)
    # column-major: vec(E A^T) = (A kron I) vec E, vec(B F) = (I kron B) vec F
    M = np.vstack([
        np.hstack([np.kron(a0, I2), -np.kron(I1, b0)]),
        np.hstack([np.kron(a1, I2), -np.kron(I1, b1)]),
    ])
    N = nullspace(M, tol)
    out = []
    for c in range(N.shape[1]):
        v = N[:, c]
        E = v[: r1 * r2].reshape((r2, r1), order="F")
        F = v[r1 * r2:].reshape((r2, r1), order="F")
        out.append(EFPair(E, F, (K1, K2)))
    return out


def _ef_pairs(K1, K2, tol):
    try:
        return ef_block_basis(K1, K2)
    except ValueError:
        return _ef_numeric(K1, K2, tol)


# --------------------------------------------------------------------------
# structure


def _nonsingular_structure(J, inv, field, tol):
    C = cosquare(J, inv, tol)
    spec = jordan_structure(C, tol, inv, field)
    eig_blocks = {i: spec.blocks[i] for i in range(len(spec.eigenvalues))}
    return _assemble_blocks([], [], spec.eigenvalues, eig_blocks, spec.pairing,
                            spec.representatives, inv, field)


def _assemble_blocks(L_indices, Z_sizes, eigs, eig_blocks, pairing, reps, inv, field):
    blocks = [KroneckerBlock("L", s) for s in sorted(L_indices)]
    blocks += [KroneckerBlock("Z", t) for t in sorted(Z_sizes, reverse=True)]
    classes = sorted(zip(pairing, reps), key=lambda cr: _sort_key(eigs[cr[1]]))
    for cls, rep in classes:
        lam = complex(eigs[rep])
        sizes = eig_blocks[rep]
        if len(cls) == 1:
            # self-paired: exactly +-1 for T, on the unit circle for H
            lam = complex(np.sign(lam.real)) if inv is Involution.T else lam / abs(lam)
            for m in sizes:
                blocks.append(KroneckerBlock("Jordan", m, lam, (lam,)))
            continue
        members = tuple(sorted((complex(eigs[i]) for i in cls), key=lambda z: (
            z != lam, _sort_key(z))))
        for p in sizes:
            blocks.append(KroneckerBlock("PairedJordan", p, lam, members))
    return KroneckerSpec(blocks, inv.value, field)


def _normal_rank(J, Js, rng, tol):
    return max(numerical_rank(J - z * Js, tol) for z in rng.standard_normal(4) + 1j * rng.standard_normal(4))


def _right_minimal_indices(A, B, count, tol):
    """Right minimal indices of ``A + lam B`` from nullities of the coefficient systems."""
    n = A.shape[1]
    m = A.shape[0]
    found = []
    N = {-2: 0, -1: 0}
    k = 0
    while len(found) < count:
        if k > n:
            raise StructureError("minimal indices did not close", "minimal_indices", tol)
        M = np.zeros(((k + 2) * m, (k + 1) * n), dtype=complex if (
            np.iscomplexobj(A) or np.iscomplexobj(B)) else float)
        for i in range(k + 1):
            M[i * m:(i + 1) * m, i * n:(i + 1) * n] = A
            M[(i + 1) * m:(i + 2) * m, i * n:(i + 1) * n] = B
        N[k] = M.shape[1] - numerical_rank(M, tol)
        c = N[k] - 2 * N[k - 1] + N[k - 2]
        if c < 0:
            raise StructureError("negative minimal-index count", "minimal_indices", tol)
        found.extend([k] * c)
        k += 1
    if len(found) != count:
        raise StructureError("minimal index count mismatch", "minimal_indices", tol)
    return found


def _candidate_eigenvalues(J, Js, r, rng):
    import scipy.linalg

    n = J.shape[0]
    if r == n:
        Uc, Vc = np.eye(n), np.eye(n)
    else:
        Uc = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
        Vc = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
    A = Uc.conj().T @ J @ Vc
    B = Uc.conj().T @ Js @ Vc
    w = scipy.linalg.eigvals(A, B, homogeneous_eigvals=True)
    alpha, beta = w
    out = []
    for a, b in zip(alpha, beta):
        if abs(b) > 1e-12 * max(abs(a), abs(b)):
            out.append(complex(a / b))
    return out


def _singular_structure(J, inv, field, tol):
    n = J.shape[0]
    Js = star(J, inv)
    rng = np.random.default_rng(20240611)
    radius = cluster_radius(tol)
    r = _normal_rank(J, Js, rng, tol)
    a = n - r
    L = _right_minimal_indices(J, -Js, a, tol) if a else []
    # finite eigenvalues: candidates from a projected regular pencil, then a rank test
    cands = _candidate_eigenvalues(J, Js, r, rng)
    eigs, eig_blocks = [], []
    scale = np.linalg.norm(J, 2)
    if cands:
        raw = np.array(cands)
        for group in _cluster(raw, radius):
            centre = complex(np.mean(raw[group]))
            s = np.linalg.svd(J - centre * Js, compute_uv=False)
            if r == 0 or s[r - 1] > radius * scale * max(1.0, abs(centre)):
                continue
            sizes = partial_multiplicities(J, -Js, centre, tol, singular_blocks=a)
            if sizes and not any(_same_eigenvalue(centre, e, radius) for e in eigs):
                eigs.append(centre)
                eig_blocks.append(sizes)
    # infinite eigenvalue: reversed pencil at zero
    inf_sizes = partial_multiplicities(-Js, J, 0.0, tol, singular_blocks=a)
    zero_idx = [i for i, e in enumerate(eigs) if abs(e) <= radius]
    zero_sizes = eig_blocks[zero_idx[0]] if zero_idx else ()
    if tuple(sorted(zero_sizes)) != tuple(sorted(inf_sizes)):
        raise StructureError(
            f"zero blocks {zero_sizes} do not pair with infinite blocks {inf_sizes}",
            "pairing", tol)
    keep = [i for i in range(len(eigs)) if i not in zero_idx]
    eigs = [eigs[i] for i in keep]
    eig_blocks = [eig_blocks[i] for i in keep]
    total = sum(2 * s + 1 for s in L) + 2 * sum(zero_sizes) + sum(sum(b) for b in eig_blocks)
    if total != n:
        raise StructureError(
            f"Kronecker block sizes add up to {total}, expected {n}", "kronecker_structure", tol)
    eigs = _snap(eigs, field, radius)
    order = sorted(range(len(eigs)), key=lambda i: _sort_key(eigs[i]))
    eigs = [eigs[i] for i in order]
    eig_blocks = [eig_blocks[i] for i in order]
    pairing, reps = build_pairing(eigs, eig_blocks, inv, field, radius)
    return _assemble_blocks(L, list(zero_sizes), eigs, dict(enumerate(eig_blocks)),
                            pairing, reps, inv, field)


def kronecker_structure(J, inv="T", tol=None):
    """Kronecker structure of ``J - lam J*`` as paired canonical blocks.

    Nonsingular ``J`` goes through the Jordan structure of the cosquare. For
    singular ``J`` the normal rank gives the number of singular pairs, the
    nullities of the coefficient systems of polynomial null vectors give their
    minimal indices, and finite/infinite eigenvalues get their partial
    multiplicities from chain-system rank staircases.

    Raises
    ------
    StructureError
        When a rank decision does not produce a consistent block list.
    """
    J = as_form_matrix(J)
    tol = resolve_tol(tol)
    inv = effective_involution(J, inv)
    field = "real" if is_real_field(J) else "complex"
    if numerical_rank(J, tol) == J.shape[0]:
        return _nonsingular_structure(J, inv, field, tol)
    return _singular_structure(J, inv, field, tol)


# --------------------------------------------------------------------------
# reducing chains


def _hom_nullspace(A, B, K0, K1, tol):
    """Basis of ``{(X, Y) : A X = Y K0, B X = Y K1}`` as stacked column-major vectors."""
    n = A.shape[1]
    r = K0.shape[0]
    Ir, In = np.eye(r), np.eye(n)
    M = np.vstack([
        np.hstack([np.kron(Ir, A), -np.kron(K0.T, In)]),
        np.hstack([np.kron(Ir, B), -np.kron(K1.T, In)]),
    ])
    return nullspace(M, tol)


def _draw(N, n, r, rng, complex_):
    c = rng.standard_normal(N.shape[1])
    if complex_:
        c = c + 1j * rng.standard_normal(N.shape[1])
    v = N @ c
    X = v[: n * r].reshape((n, r), order="F")
    Y = v[n * r:].reshape((n, r), order="F")
    return X, Y


def _side_chains(J, Js, block, rng, tol, conj):
    K0, K1 = block.coefficients()
    if conj:
        K0, K1 = np.conj(K0), np.conj(K1)
    N = _hom_nullspace(J, -Js, K0, K1, tol)
    cplx = np.iscomplexobj(J) or np.iscomplexobj(K0) or np.iscomplexobj(N)
    return N, cplx


def reducing_chains(J, spec, block=None, inv=None, tol=None, random_state=0, max_tries=8):
    """Reducing chains for the elementary blocks of ``spec``.

    Parameters
    ----------
    J : (n, n) array_like
    spec : KroneckerSpec
    block : ElementaryBlock or KroneckerBlock, optional
        Restrict the output to the chains of this block.
    random_state : int or Generator
        Chains are random elements of the solution spaces of the chain
        equations; all blocks are drawn together and redrawn until the
        assembled ``[W_1 ... W_m]``, ``[Q_1 ... Q_m]`` (and ``U``, ``P``)
        are well conditioned.

    Returns
    -------
    list of ReducingChains (or one ReducingChains when ``block`` is given)
    """
    J = as_form_matrix(J)
    tol = resolve_tol(tol)
    inv = effective_involution(J, spec.involution if inv is None else inv)
    Js = star(J, inv)
    n = J.shape[0]
    rng = np.random.default_rng(random_state)
    elem = spec.elementary()
    conj_u = inv is Involution.H
    spaces = []
    for b in elem:
        Nw, cw = _side_chains(J, Js, b, rng, tol, False)
        Nu, cu = _side_chains(Js, J, b, rng, tol, conj_u)
        spaces.append((Nw, cw, Nu, cu))
    best = None
    for _ in range(max_tries):
        chains = []
        for b, (Nw, cw, Nu, cu) in zip(elem, spaces):
            W, Q = _draw(Nw, n, b.size, rng, cw)
            U, P = _draw(Nu, n, b.size, rng, cu)
            chains.append(ReducingChains(b, W, Q, U, P))
        conds = [np.linalg.cond(np.hstack([getattr(c, name) for c in chains]))
                 for name in "WQUP"]
        worst = max(conds)
        if best is None or worst < best[0]:
            best = (worst, chains)
        if worst < 1e6:
            break
    worst, chains = best
    if not np.isfinite(worst) or worst > 1e10:
        raise StructureError("reducing chains are not independent", "reducing_chains", tol)
    scale = max(1.0, float(np.linalg.norm(J)))
    for c in chains:
        nrm = max(np.linalg.norm(c.W), np.linalg.norm(c.Q), np.linalg.norm(c.U),
                  np.linalg.norm(c.P), 1.0)
        if c.residual(J, inv) > 1e-6 * scale * nrm:
            raise StructureError(
                f"reducing chain residual too large for block {c.block}", "reducing_chains", tol)
    if block is not None:
        targets = block.elementary() if isinstance(block, KroneckerBlock) else [block]
        sel = [c for c in chains if c.block in targets]
        return sel[0] if len(sel) == 1 else sel
    return chains


# --------------------------------------------------------------------------
# singular-J bases


def _pencil_candidates(J, inv, tol, sign, random_state):
    spec = kronecker_structure(J, inv, tol)
    chains = reducing_chains(J, spec, inv=inv, tol=tol, random_state=random_state)
    inv = Involution.parse(spec.involution)
    real_field = is_real_field(J)
    cands, tags, scales = [], [], []
    # diagonal interactions first, then ordered pairs by block index
    order = [(s, s) for s in range(len(chains))]
    order += [(s, t) for s in range(len(chains)) for t in range(len(chains)) if s != t]
    for s, t in order:
        cs, ct = chains[s], chains[t]
        for j, ef in enumerate(_ef_pairs(cs.block, ct.block, tol)):
            for phase in ((1.0,) if inv is Involution.T else (1.0, 1j)):
                E = phase * ef.E
                # Z1 = Q_t E U_s^*, Z2 = W_t F P_s^*  ->  X = Z1^* -/+ Z2
                Z1s = cs.U @ star(E, inv) @ star(ct.Q, inv)
                Z2 = ct.W @ (phase * ef.F) @ star(cs.P, inv)
                X = Z1s - Z2 if sign > 0 else Z1s + Z2
                scale = np.linalg.norm(Z1s) + np.linalg.norm(Z2)
                tag = ("pencil", s, t, j + 1, "Z" if phase == 1.0 else "iZ")
                if real_field and np.iscomplexobj(X):
                    cands.extend([X.real.copy(), X.imag.copy()])
                    tags.extend([tag + ("re",), tag + ("im",)])
                    scales.extend([scale, scale])
                else:
                    cands.append(X)
                    tags.append(tag)
                    scales.append(scale)
    return spec, cands, tags, scales


def singular_sol_basis(J, inv="T", tol=None, random_state=0):
    """Basis of ``{X : X* J + J X = 0}`` through the pencil ``J - lam J*``.

    Works for any square ``J``; intended for singular ones.
    """
    J = as_form_matrix(J)
    inv = effective_involution(J, inv)
    spec, cands, tags, scales = _pencil_candidates(J, inv, resolve_tol(tol), +1, random_state)
    basis = finalize_basis(cands, tags, J, inv, +1, scales=scales)
    basis.structure = spec
    return basis


def singular_cosol_basis(J, inv="T", tol=None, random_state=0):
    """Basis of ``{X : X* J - J X = 0}`` through the pencil ``J - lam J*``."""
    J = as_form_matrix(J)
    inv = effective_involution(J, inv)
    spec, cands, tags, scales = _pencil_candidates(J, inv, resolve_tol(tol), -1, random_state)
    basis = finalize_basis(cands, tags, J, inv, -1, scales=scales)
    basis.structure = spec
    return basis


# --------------------------------------------------------------------------
# canonical test forms


def canonical_block(kind, size=1, mu=None):
    """Small congruence-canonical forms with a known pencil structure.

    ``'nilpotent'``: ``J_size(0)``; odd sizes give one singular pair
    ``L_{(size-1)/2}``, even sizes one zero/infinity pair ``Z_{size/2}``.
    ``'pair'``: ``[[0, I], [J_size(mu), 0]]``, whose cosquare has Jordan
    blocks ``J_size(mu)`` and ``J_size(1/mu)``.
    ``'identity'``: ``I_size`` (blocks ``J_1(1)``).
    """
    if kind == "nilpotent":
        return np.eye(size, k=1)
    if kind == "identity":
        return np.eye(size)
    if kind == "pair":
        dtype = complex if np.iscomplexobj(mu) else float
        Jm = mu * np.eye(size, dtype=dtype) + np.eye(size, k=1)
        Z = np.zeros((size, size), dtype=dtype)
        return np.block([[Z, np.eye(size, dtype=dtype)], [Jm, Z]])
    raise ValueError(f"unknown canonical block {kind!r}")


def congruence_scramble(J, inv="T", random_state=None):
    """Return ``S* J S`` for a random well-conditioned ``S`` (same structure)."""
    rng = np.random.default_rng(random_state)
    J = np.asarray(J)
    n = J.shape[0]
    cplx = np.iscomplexobj(J) or Involution.parse(inv) is Involution.H
    S = rng.standard_normal((n, n))
    if cplx:
        S = S + 1j * rng.standard_normal((n, n))
    S = S + 2 * np.sqrt(n) * np.eye(n)
    return star(S, inv) @ J @ S
