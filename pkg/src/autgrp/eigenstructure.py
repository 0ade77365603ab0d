"""Cosquare, Jordan structure, Jordan chains and centralizers for nonsingular forms."""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ._config import cluster_radius, resolve_tol
from .core_linalg import (
    Involution,
    as_form_matrix,
    backwards_identity,
    effective_involution,
    is_real_field,
    numerical_rank,
    star,
)
from .errors import SingularInput, StructureError

__all__ = [
    "JordanSpec",
    "ChainSet",
    "cosquare",
    "jordan_structure",
    "jordan_chains",
    "centralizer_basis",
    "centralizer_dimension",
    "partial_multiplicities",
    "jordan_block",
]


def jordan_block(lam, r):
    """Upper bidiagonal ``r x r`` Jordan block with eigenvalue ``lam``."""
    dtype = complex if np.iscomplexobj(lam) and np.imag(lam) != 0 else float
    lam = lam if dtype is complex else float(np.real(lam))
    return lam * np.eye(r, dtype=dtype) + np.eye(r, k=1)


@dataclass
class JordanSpec:
    """Jordan structure of a cosquare.

    Attributes
    ----------
    eigenvalues : list of complex
        Distinct eigenvalues, sorted lexicographically on ``(re, im)``.
    blocks : list of tuple of int
        Descending block sizes for each eigenvalue.
    pairing : list of tuple of int
        Classes of eigenvalue indices that must carry identical blocks
        (``lam ~ 1/lam`` for T, ``lam ~ 1/conj(lam)`` for H, plus
        ``lam ~ conj(lam)`` for real matrices).
    representatives : list of int
        One eigenvalue index per pairing class.
    involution, field : str
    """

    eigenvalues: List[complex]
    blocks: List[Tuple[int, ...]]
    pairing: List[Tuple[int, ...]] = field(default_factory=list)
    representatives: List[int] = field(default_factory=list)
    involution: str = "T"
    field: str = "complex"

    @property
    def n(self):
        return sum(sum(b) for b in self.blocks)

    def index_of(self, lam, radius=1e-6):
        for i, mu in enumerate(self.eigenvalues):
            if abs(mu - lam) <= radius * max(1.0, abs(lam)):
                return i
        return None

    def to_json(self):
        return {
            "eigenvalues": [
                {"eigenvalue": [float(np.real(lam)), float(np.imag(lam))], "blocks": list(b)}
                for lam, b in zip(self.eigenvalues, self.blocks)
            ],
            "pairing": [list(c) for c in self.pairing],
            "representatives": list(self.representatives),
            "involution": self.involution,
            "field": self.field,
        }


@dataclass
class ChainSet:
    """Jordan chains of one block: ``C W = W J`` and ``C^{-1} U = U J'``.

    For real matrices and a non-real eigenvalue the chains are realified and
    ``C W = W realify(J)`` holds instead.
    """

    block_id: Tuple[int, int]
    eigenvalue: complex
    size: int
    W: np.ndarray
    U: np.ndarray
    involution: str = "T"
    realified: bool = False


def cosquare(J, inv="T", tol=None):
    """Return ``J^{-T} J`` (T) or ``J^{-H} J`` (H).

    Raises
    ------
    SingularInput
        If the smallest singular value of ``J`` is below ``tol`` times the
        largest; use :mod:`autgrp.pencil_kronecker` for those forms.
    """
    J = as_form_matrix(J)
    tol = resolve_tol(tol)
    inv = effective_involution(J, inv)
    if numerical_rank(J, tol) < J.shape[0]:
        raise SingularInput(
            "J is numerically singular; the cosquare is undefined "
            "(use pencil_kronecker for singular forms)")
    return np.linalg.solve(star(J, inv), J)


def _nullity(M, tol, scale=0.0):
    """Nullity with singular values ``<= tol * max(sigma_max, scale)`` treated as zero."""
    sv = np.linalg.svd(M, compute_uv=False)
    top = max(sv[0] if sv.size else 0.0, scale)
    if top == 0.0:
        return M.shape[1]
    return M.shape[1] - int(np.sum(sv > tol * top))


def chain_system(A, B, alpha, k):
    """Block matrix whose kernel holds length-``k`` chains of ``A + lam B`` at ``alpha``.

    Equations: ``(A + alpha B) x_0 = 0`` and ``(A + alpha B) x_j + B x_{j-1} = 0``.
    """
    n = A.shape[1]
    m = A.shape[0]
    D = A + alpha * B
    dtype = complex if (np.iscomplexobj(D) or np.iscomplexobj(B)) else float
    T = np.zeros((k * m, k * n), dtype=dtype)
    for j in range(k):
        T[j * m:(j + 1) * m, j * n:(j + 1) * n] = D
        if j > 0:
            T[j * m:(j + 1) * m, (j - 1) * n:j * n] = B
    return T


def partial_multiplicities(A, B, alpha, tol=None, singular_blocks=0, max_size=None):
    """Jordan block sizes of the pencil ``A + lam B`` at ``lam = alpha``.

    Uses the nullities of the chain systems (a staircase on ranks, never an
    eigenvector inversion). Each right singular block contributes one null
    direction per chain level; ``singular_blocks`` of them are discounted.

    Returns
    -------
    sizes : tuple of int, descending; empty when ``alpha`` is not an eigenvalue.
    """
    tol = resolve_tol(tol)
    n = A.shape[1]
    max_size = n if max_size is None else max_size
    # rank decisions relative to the pencil, not to its value at alpha
    scale = np.linalg.norm(A, 2) + abs(alpha) * np.linalg.norm(B, 2)
    if singular_blocks == 0:
        counts = _staircase_counts(A, B, alpha, tol, scale, max_size)
    else:
        counts = _chain_counts(A, B, alpha, tol, scale, max_size, singular_blocks)
    sizes = []
    for k in range(len(counts), 0, -1):
        nxt = counts[k] if k < len(counts) else 0
        sizes.extend([k] * (counts[k - 1] - nxt))
    return tuple(sizes)


def _threshold_null(M, tol, scale):
    """Orthonormal basis of the numerical nullspace of ``M`` (threshold ``tol * scale``)."""
    _, sv, vh = np.linalg.svd(M)
    top = max(sv[0] if sv.size else 0.0, scale)
    rank = int(np.sum(sv > tol * top)) if top > 0 else 0
    return vh[rank:].conj().T


def _staircase_counts(A, B, alpha, tol, scale, max_size):
    """Blocks of size ``>= k`` for a regular pencil, level by level.

    ``Y`` spans the vectors of all chains of length ``< k``; level ``k``
    solves ``D x = -B y`` with ``y`` in that span, so every rank decision is
    made on ``[D, B Y]`` and never on powers of ``D``. The solution space has
    dimension ``dim Y`` plus the number of blocks of size ``>= k``.
    """
    D = A + alpha * B
    n = A.shape[1]
    Y = _threshold_null(D, tol, scale)
    counts = []
    if Y.shape[1] == 0:
        return counts
    counts.append(Y.shape[1])
    while len(counts) < max_size and Y.shape[1] < n:
        N = _threshold_null(np.hstack([D, B @ Y]), tol, scale)
        new = N.shape[1] - Y.shape[1]
        if new <= 0:
            break
        if new > counts[-1]:
            raise StructureError(
                f"non-monotone chain counts at eigenvalue {alpha:.6g}", "partial_multiplicities",
                tol)
        counts.append(new)
        # extend Y by the directions of the new chain vectors outside span(Y)
        X = N[:n]
        R = X - Y @ (Y.conj().T @ X)
        u = np.linalg.svd(R, full_matrices=False)[0]
        Y = np.linalg.qr(np.hstack([Y, u[:, :new]]))[0]
    return counts


def _chain_counts(A, B, alpha, tol, scale, max_size, singular_blocks):
    counts = []  # counts[k-1] = number of blocks of size >= k
    prev = 0
    for k in range(1, max_size + 1):
        g = _nullity(chain_system(A, B, alpha, k), tol, scale) - singular_blocks * k
        inc = g - prev
        if inc <= 0:
            break
        if counts and inc > counts[-1]:
            raise StructureError(
                f"non-monotone chain counts at eigenvalue {alpha:.6g}", "partial_multiplicities",
                tol)
        counts.append(inc)
        prev = g
    return counts


def _cluster(values, radius):
    """Single-linkage clustering with relative radius ``radius * max(1, |lam|)``."""
    values = list(values)
    parent = list(range(len(values)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            scale = max(1.0, abs(values[i]), abs(values[j]))
            if abs(values[i] - values[j]) <= radius * scale:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(len(values)):
        groups.setdefault(find(i), []).append(i)
    return [sorted(g) for g in groups.values()]


def _sort_key(lam):
    return (round(float(np.real(lam)), 12), round(float(np.imag(lam)), 12))


def _partner_functions(inv, field):
    fs = [(lambda z: 1.0 / z) if inv is Involution.T else (lambda z: 1.0 / np.conj(z))]
    if field == "real":
        fs.append(np.conj)
        fs.append(lambda z: 1.0 / np.conj(z))
    return fs


def _representative(members):
    """Pick ``|lam| > 1``; on the unit circle ``Im >= 0``; ties go to the first."""

    def score(lam):
        mod = abs(lam)
        on_circle = abs(mod - 1.0) <= 1e-8
        return (
            0 if mod > 1.0 + 1e-8 else (1 if on_circle else 2),
            0 if np.imag(lam) >= -1e-12 else 1,
            -np.imag(lam),
            -np.real(lam),
        )

    return min(members, key=lambda i_lam: score(i_lam[1]))[0]


def build_pairing(eigenvalues, blocks, inv, field, radius):
    """Group eigenvalues into pairing classes and check their block multisets."""
    inv = Involution.parse(inv)
    partner_fns = _partner_functions(inv, field)
    m = len(eigenvalues)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i, lam in enumerate(eigenvalues):
        for fn in partner_fns:
            mu = fn(lam)
            j = _nearest(eigenvalues, mu, radius)
            if j is None:
                raise StructureError(
                    f"eigenvalue {lam:.6g} has no partner {mu:.6g}", "pairing", radius)
            if blocks[i] != blocks[j]:
                raise StructureError(
                    f"eigenvalues {lam:.6g} and {mu:.6g} carry different Jordan blocks "
                    f"{blocks[i]} vs {blocks[j]}", "pairing", radius)
            parent[find(i)] = find(j)
    classes = {}
    for i in range(m):
        classes.setdefault(find(i), []).append(i)
    pairing = sorted((tuple(sorted(c)) for c in classes.values()), key=lambda c: c[0])
    reps = [_representative([(i, eigenvalues[i]) for i in c]) for c in pairing]
    return pairing, reps


def _nearest(values, target, radius):
    best, best_d = None, None
    for i, v in enumerate(values):
        d = abs(v - target)
        if d <= radius * max(1.0, abs(target)) and (best_d is None or d < best_d):
            best, best_d = i, d
    return best


_MAX_CLUSTER_RADIUS = 1e-2


def jordan_structure(C, tol=None, inv="T", field=None):
    """Jordan structure of ``C`` with eigenvalue pairing.

    Eigenvalues of ``C`` are clustered (single linkage), each cluster centre
    is tested with the chain-system rank staircase, and clusters whose
    partial multiplicities do not add up to the cluster size are split.

    Parameters
    ----------
    C : (n, n) array_like
    tol : float, optional
        Relative rank tolerance.
    inv : {'T', 'H'}
        Decides the pairing rule (``1/lam`` or ``1/conj(lam)``).
    field : {'real', 'complex'}, optional
        Defaults to the field of ``C``. For ``'real'`` conjugates are paired as well.

    Raises
    ------
    StructureError
        If the pairing implied by the involution cannot be matched.
    """
    C = np.asarray(C)
    tol = resolve_tol(tol)
    inv = Involution.parse(inv)
    if field is None:
        field = "real" if is_real_field(C) else "complex"
    if field == "real" and inv is Involution.H:
        inv = Involution.T
    n = C.shape[0]
    radius = cluster_radius(tol)
    raw = np.linalg.eigvals(C)
    A, B = C.astype(complex), -np.eye(n)
    eigs, blocks = [], []
    # confirm clusters with the rank staircase; clusters that fail are split and
    # the pieces re-clustered at a larger radius (highly defective eigenvalues
    # scatter further than the base radius)
    pool = list(range(n))
    r = radius
    def confirm(g):
        centre = np.mean(raw[g])
        try:
            sizes = partial_multiplicities(A, B, centre, tol)
        except StructureError:
            return False
        if sum(sizes) != len(g):
            return False
        eigs.append(centre)
        blocks.append(sizes)
        return True

    while pool:
        leftover = []
        for group in _cluster(raw[pool], r):
            g = [pool[i] for i in group]
            if confirm(g):
                continue
            # close but distinct eigenvalues: try the members one by one
            if len(g) > 1:
                g = [i for i in g if not confirm([i])]
            leftover.extend(g)
        if len(leftover) == len(pool) and r >= _MAX_CLUSTER_RADIUS:
            centre = raw[leftover[0]]
            raise StructureError(
                f"eigenvalue {centre:.6g} not confirmed by rank test", "jordan_structure", tol)
        pool = leftover
        r = min(10.0 * r, _MAX_CLUSTER_RADIUS)
    if sum(sum(b) for b in blocks) != n:
        raise StructureError("Jordan block sizes do not add up to n", "jordan_structure", tol)
    eigs = _snap(eigs, field, radius)
    order = sorted(range(len(eigs)), key=lambda i: _sort_key(eigs[i]))
    eigs = [eigs[i] for i in order]
    blocks = [blocks[i] for i in order]
    pairing, reps = build_pairing(eigs, blocks, inv, field, radius)
    return JordanSpec(eigs, blocks, pairing, reps, inv.value, field)


def _snap(eigs, field, radius):
    out = []
    for lam in eigs:
        lam = complex(lam)
        if field == "real" and abs(lam.imag) <= radius * max(1.0, abs(lam)):
            lam = complex(lam.real, 0.0)
        out.append(lam)
    if field == "real":
        # conjugate partners are made exact conjugates
        for i, lam in enumerate(out):
            if lam.imag > 0:
                j = _nearest(out, lam.conjugate(), radius)
                if j is not None and j != i:
                    avg = 0.5 * (lam + out[j].conjugate())
                    out[i], out[j] = avg, avg.conjugate()
    return out


def _kernel_basis(M, dim):
    """Orthonormal basis of the ``dim`` smallest right singular directions of ``M``."""
    _, _, vh = np.linalg.svd(M)
    return vh[M.shape[1] - dim:].conj().T


def _chains_at(A, mu, sizes, B=None):
    """Jordan chains of ``B^{-1} A`` at ``mu`` for the given descending block sizes.

    Chains are read off the kernels of the chain systems of the pencil
    ``A - lam B`` (``(A - mu B) w_1 = 0``, ``(A - mu B) w_j = B w_{j-1}``),
    so neither ``B^{-1}`` nor powers of ``A - mu B`` are formed. ``B``
    defaults to the identity.

    Returns a list of ``n x r`` matrices ``W`` with ``A W = B W J_r(mu)``,
    ordered like ``sizes``.
    """
    n = A.shape[0]
    B = np.eye(n) if B is None else B
    real = not (np.iscomplexobj(A) or np.iscomplexobj(B)) and np.imag(mu) == 0
    mu = float(np.real(mu)) if real else complex(mu)
    rmax = sizes[0]
    # kernels[k]: columns are stacked chains (w_1; ...; w_k) spanning all length-k chains
    kernels = {}
    for k in range(1, rmax + 1):
        T = chain_system(A, -B, mu, k)
        kernels[k] = _kernel_basis(T, sum(min(k, r) for r in sizes))
    tops = []  # (size, full chain matrix)
    for k in range(rmax, 0, -1):
        count = sum(1 for r in sizes if r == k)
        if count == 0:
            continue
        Y = kernels[k]
        top = Y[(k - 1) * n:]
        # top vectors already accounted for: shorter chains and the k-th columns of longer ones
        taken = []
        if k > 1:
            taken.append(kernels[k - 1][(k - 2) * n:])
        for size, Wc in tops:
            taken.append(Wc[:, k - 1:k])
        if taken:
            S = np.hstack(taken)
            Qs, sv, _ = np.linalg.svd(S, full_matrices=False)
            Qs = Qs[:, : int(np.sum(sv > 1e-10 * max(sv[0], 1e-300)))]
            P = top - Qs @ (Qs.conj().T @ top)
        else:
            P = top
        # coefficient directions whose top vectors are new
        _, s, vh = np.linalg.svd(P, full_matrices=False)
        if s.size < count or s[count - 1] <= 1e-10 * max(1.0, s[0]):
            raise StructureError(
                f"cannot extend Jordan chains at {mu:.6g}", "jordan_chains", 1e-10)
        for c in range(count):
            v = Y @ vh[c].conj()
            Wc = v.reshape((k, n)).T
            tops.append((k, Wc / np.linalg.norm(Wc[:, -1])))
    return [Wc for _, Wc in tops]


def _random_toeplitz(r, rng, complex_):
    c = rng.uniform(0.5, 1.5, r) * rng.choice([-1.0, 1.0], r)
    if complex_:
        c = c + 1j * rng.uniform(-1.0, 1.0, r)
    T = np.zeros((r, r), dtype=complex if complex_ else float)
    for d in range(r):
        T += c[d] * np.eye(r, k=d)
    return T


def jordan_chains(C, spec, inv="T", random_state=None, include_conjugates=False, J=None):
    """Jordan chain matrices of ``C`` (W) and of ``C^{-1}`` (U), block by block.

    ``U`` is taken at the same eigenvalue ``lam`` for T and at ``conj(lam)``
    for H. For a real ``C`` and a non-real ``lam`` only the member with
    positive imaginary part is returned, realified so that
    ``C W = W realify(J_r(lam))``.

    Parameters
    ----------
    random_state : int or numpy.random.Generator, optional
        When given, each chain is replaced by ``W T`` with a random invertible
        upper triangular Toeplitz ``T`` (another valid chain choice).
    include_conjugates : bool
        For real ``C``, also return realified chains at the eigenvalues with
        negative imaginary part.
    J : ndarray, optional
        The form whose cosquare is ``C``. When given, chains are computed from
        the pencils ``J - lam J*`` and ``J* - lam J`` without inverting ``J``.
    """
    C = np.asarray(C)
    inv = Involution.parse(inv)
    real = spec.field == "real"
    rng = None if random_state is None else np.random.default_rng(random_state)
    if J is None:
        Cinv = np.linalg.inv(C)
    else:
        Js = star(J, inv)
    out = []
    for i, (lam, sizes) in enumerate(zip(spec.eigenvalues, spec.blocks)):
        if real and lam.imag < 0 and not include_conjugates:
            continue
        mu = np.conj(lam) if inv is Involution.H else lam
        if J is None:
            Ws = _chains_at(C, lam, sizes)
            Us = _chains_at(Cinv, mu, sizes)
        else:
            Ws = _chains_at(J, lam, sizes, Js)
            Us = _chains_at(Js, mu, sizes, J)
        cplx = (not real) or lam.imag != 0
        for b, (W, U, r) in enumerate(zip(Ws, Us, sizes)):
            if rng is not None:
                W = W @ _random_toeplitz(r, rng, cplx)
                U = U @ _random_toeplitz(r, rng, cplx)
            realified = False
            if real:
                if lam.imag == 0:
                    W, U = _real_chain(W), _real_chain(U)
                else:
                    W = np.hstack([W.real, W.imag])
                    U = np.hstack([U.real, U.imag])
                    realified = True
            out.append(ChainSet((i, b), lam, r, W, U, inv.value, realified))
    return out


def _real_chain(W):
    # a chain at a real eigenvalue can be rotated to be real: pick the phase
    # maximising the real part of the top vector
    v = W[:, -1]
    k = int(np.argmax(np.abs(v)))
    phase = np.conj(v[k]) / abs(v[k]) if v[k] != 0 else 1.0
    Wr = W * phase
    return Wr.real.copy()


def centralizer_basis(C, spec=None, tol=None):
    """Spanning set ``W E_k P^T`` of ``{Z : Z C = C Z}``.

    ``W`` runs over Jordan chains of ``C`` and ``P`` over Jordan chains of
    ``C^T``, paired when they share an eigenvalue. For a real ``C`` the
    non-real eigenvalues contribute real and imaginary parts.
    """
    C = np.asarray(C)
    if spec is None:
        spec = jordan_structure(C, tol)
    real = spec.field == "real"
    basis = []
    for lam, sizes in zip(spec.eigenvalues, spec.blocks):
        if real and lam.imag < 0:
            continue
        Ws = _chains_at(C, lam, sizes)
        Ps = _chains_at(C.T, lam, sizes)
        for W in Ws:
            for P in Ps:
                a, b = W.shape[1], P.shape[1]
                for k in range(1, min(a, b) + 1):
                    Z = W @ backwards_identity(k, a, b) @ P.T
                    if real:
                        if lam.imag == 0:
                            basis.append(_realest(Z))
                        else:
                            basis.extend([Z.real.copy(), Z.imag.copy()])
                    else:
                        basis.append(Z)
    return basis


def _realest(Z):
    # Z is a complex multiple of a real matrix
    k = int(np.argmax(np.abs(Z)))
    z = Z.flat[k]
    return (Z * (abs(z) / z)).real.copy()


def centralizer_dimension(spec):
    """``sum r_j + sum_{j<k, lam_j = lam_k} min(2 r_j, 2 r_k)``."""
    total = 0
    for sizes in spec.blocks:
        total += sum(sizes)
        for j in range(len(sizes)):
            for k in range(j + 1, len(sizes)):
                total += min(2 * sizes[j], 2 * sizes[k])
    return total
