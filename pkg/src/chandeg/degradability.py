"""Degradability decision engine.

For a channel M with complement Mhat, each query mode reduces to a one-sided
matrix equation ``known @ D = target`` between superoperators:

* DEGRADABLE:            channel @ D = complement
* ANTIDEGRADABLE:        complement @ D = channel
* CONJ_DEGRADABLE:       channel @ D = complement @ C   (C = conjugation)
* CONJ_ANTIDEGRADABLE:   complement @ D = channel @ C

The pseudoinverse candidate ``D0 = pinv(known) @ target`` is the unique
solution exactly when the known map's matrix has full rank and its output
dimension does not exceed its input dimension; only then can a candidate with
negative Choi eigenvalues rule the property out.  Otherwise the full solution
family is an affine subspace and a convex penalty search over it can still
produce a completely positive certificate.
"""

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import minimize

from .channel import (
    Channel,
    SuperOp,
    choi_rank,
    complement,
    is_cp,
    is_ppt,
    superop_to_choi,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    hermitian_eigs,
    kernel_basis,
    numeric_rank,
    pseudoinverse,
)

VERDICT_SCHEMA_VERSION = 1


class Mode(str, Enum):
    DEGRADABLE = "degradable"
    ANTIDEGRADABLE = "antidegradable"
    CONJ_DEGRADABLE = "conj-degradable"
    CONJ_ANTIDEGRADABLE = "conj-antidegradable"


@dataclass(frozen=True)
class Query:
    channel: Channel
    mode: Mode


@dataclass(frozen=True)
class SearchConfig:
    """Deterministic feasibility-search configuration (seed is mandatory)."""

    seed: int
    restarts: int = 32
    max_iters: int = 2000
    step: float = 1.0
    tol: Tolerance = DEFAULT_TOL


@dataclass(frozen=True)
class Verdict:
    status: str  # YES / NO / INCONCLUSIVE
    mode: Mode
    candidate: SuperOp
    candidate_choi_eigs: tuple
    unique: bool
    kernel_dim: int
    residual: float
    consistent: bool
    certificate: SuperOp | None = None


@dataclass(frozen=True)
class KernelFamily:
    """Affine family base + sum_i alpha_i * unvec(b_i) of all solutions."""

    base: SuperOp
    basis: tuple  # flattened kernel vectors of known (x) I
    known: SuperOp = field(repr=False)
    target: SuperOp = field(repr=False)

    def member(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (len(self.basis),):
            raise ValueError(f"expected {len(self.basis)} coefficients")
        D = self.base.matrix.copy()
        for a, b in zip(coeffs, self.basis):
            D += a * b.reshape(D.shape)
        return SuperOp(self.base.d_in, self.base.d_out, D)


def swap_superop(d: int) -> SuperOp:
    """Superoperator of entrywise conjugation on Hermitian states.

    On a Hermitian rho, conjugation equals transposition; the right-acting
    matrix is the SWAP permutation C[k*d+mu, l*d+nu] = delta_{k,nu} delta_{mu,l},
    an involution that merely permutes superoperator columns.
    """
    C = np.zeros((d * d, d * d))
    for k in range(d):
        for mu in range(d):
            C[k * d + mu, mu * d + k] = 1.0
    return SuperOp(d, d, C)


def candidate_map(known: SuperOp, target: SuperOp, tol: Tolerance = DEFAULT_TOL):
    """Least-squares candidate D = pinv(known) @ target.

    Returns (candidate, consistent, residual); consistency is the solvability
    of known @ D = target, checked through the residual of the least-squares
    solution (equivalent to the rank test on the augmented system).
    """
    if known.d_in != target.d_in:
        raise ValueError(
            f"known map input dim {known.d_in} != target input dim {target.d_in}"
        )
    D = pseudoinverse(known.matrix, tol) @ target.matrix
    residual = float(np.linalg.norm(known.matrix @ D - target.matrix))
    scale = max(1.0, float(np.linalg.norm(target.matrix)))
    consistent = residual <= tol.residual_tol * scale
    return SuperOp(known.d_out, target.d_out, D), consistent, residual


def uniqueness(d_a: int, d_b: int, rank_known: int) -> bool:
    """Whether the solution of known @ D = target is unique.

    d_a, d_b are the input/output dimensions of the known map.  Unique iff the
    known superoperator has full rank min(d_a^2, d_b^2) and d_b <= d_a; a
    rank-deficient known map always leaves a nontrivial solution family.
    """
    return rank_known == min(d_a**2, d_b**2) and d_b <= d_a


def kernel_family(known: SuperOp, target: SuperOp, tol: Tolerance = DEFAULT_TOL) -> KernelFamily:
    """All solutions of known @ D = target as base + null-space directions.

    The kernel of known (x) I factorizes as {k_i (x) e_j} over the SVD null
    space of the known matrix alone, so basis vectors are built structurally
    (identical span, orthonormal).
    """
    D0, consistent, residual = candidate_map(known, target, tol)
    if not consistent:
        raise InconsistentSystem(
            f"composition equation unsolvable (residual {residual:.3e})"
        )
    cols = target.d_out ** 2
    basis = []
    for k in kernel_basis(known.matrix, tol):
        for j in range(cols):
            e = np.zeros(cols)
            e[j] = 1.0
            basis.append(np.kron(k, e))
    return KernelFamily(base=D0, basis=tuple(basis), known=known, target=target)


class InconsistentSystem(ValueError):
    """The composition equation has no solution at all."""


def _partial_trace_B(R, d_in, d_out):
    return np.einsum("klml->km", R.reshape(d_in, d_out, d_in, d_out))


def _choi_stacks(family: KernelFamily):
    """Hermitian/anti-Hermitian Choi parts (and output partial traces) of the
    base point and every search direction.

    Each complex coefficient is split into two real parameters; parameter 2m
    scales reshuffle(B_m), parameter 2m+1 scales reshuffle(i*B_m).
    """
    d_in, d_out = family.base.d_in, family.base.d_out
    R0 = superop_to_choi(family.base).matrix
    H0, S0 = (R0 + R0.conj().T) / 2, (R0 - R0.conj().T) / 2
    T0 = _partial_trace_B(R0, d_in, d_out) - np.eye(d_in)
    Hs, Ss, Ts = [], [], []
    for b in family.basis:
        C = superop_to_choi(SuperOp(d_in, d_out, b.reshape(family.base.matrix.shape))).matrix
        for Cm in (C, 1j * C):
            Hs.append((Cm + Cm.conj().T) / 2)
            Ss.append((Cm - Cm.conj().T) / 2)
            Ts.append(_partial_trace_B(Cm, d_in, d_out))
    return H0, S0, T0, np.array(Hs), np.array(Ss), np.array(Ts)


def kernel_search(family: KernelFamily, cfg: SearchConfig):
    """Search the solution family for a map with PSD Choi.

    Minimizes the convex penalty
        f(x) = sum_i min(0, lambda_i(Herm R(x)))^2 + ||antiherm R(x)||_F^2
               + ||Tr_B R(x) - I||_F^2
    over real coordinates with L-BFGS-B and an analytic gradient, restarting
    from seeded random points (restart r uses seed + r; restart 0 starts at the
    pseudoinverse candidate).  The trace-preservation term restricts the search
    to genuine channels, so a returned certificate is a CP, TP degrading map.
    Returns None when no restart converges to a feasible point; absence of a
    result is not evidence of nonexistence.
    """
    tol = cfg.tol
    k = len(family.basis)
    if k == 0:
        return None
    H0, S0, T0, Hs, Ss, Ts = _choi_stacks(family)
    n = H0.shape[0]
    d_in = family.base.d_in
    nH = Hs.reshape(2 * k, n * n)
    nS = Ss.reshape(2 * k, n * n)
    nT = Ts.reshape(2 * k, d_in * d_in)

    def objective(x):
        H = H0 + (x @ nH).reshape(n, n)
        S = S0 + (x @ nS).reshape(n, n)
        T = T0 + (x @ nT).reshape(d_in, d_in)
        w, v = np.linalg.eigh(H)
        neg = w < 0
        f = float(np.sum(w[neg] ** 2) + np.linalg.norm(S) ** 2 + np.linalg.norm(T) ** 2)
        grad = 2.0 * (nS @ S.reshape(-1).conj()).real
        grad += 2.0 * (nT @ T.reshape(-1).conj()).real
        if np.any(neg):
            V = v[:, neg]
            tmp = (Hs.reshape(2 * k * n, n) @ V).reshape(2 * k, n, -1)
            quad = np.einsum("ai,mai->mi", V.conj(), tmp).real
            grad += 2.0 * quad @ w[neg]
        return f, grad

    def accept(x):
        D = family.member(x[0::2] + 1j * x[1::2])
        R = superop_to_choi(D).matrix
        w, _ = hermitian_eigs(R, tol)
        tr = max(abs(float(np.trace(R).real)), 1.0)
        herm_dev = float(np.linalg.norm(R - R.conj().T))
        tp_dev = float(np.linalg.norm(_partial_trace_B(R, D.d_in, D.d_out) - np.eye(D.d_in)))
        resid = float(np.linalg.norm(family.known.matrix @ D.matrix - family.target.matrix))
        scale = max(1.0, float(np.linalg.norm(family.target.matrix)))
        if (
            w[0] >= -tol.psd_tol * tr
            and herm_dev <= 1e3 * tol.residual_tol
            and tp_dev <= 1e3 * tol.residual_tol
            and resid <= tol.residual_tol * scale
        ):
            return D
        return None

    for restart in range(cfg.restarts):
        if restart == 0:
            x0 = np.zeros(2 * k)
        else:
            rng = np.random.default_rng(cfg.seed + restart)
            x0 = cfg.step * rng.standard_normal(2 * k)
        res = minimize(
            objective,
            x0,
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": cfg.max_iters, "ftol": 1e-18, "gtol": 1e-14},
        )
        found = accept(res.x)
        if found is not None:
            return found
    return None


def _build_system(q: Query):
    """(known, target) superoperators for a query mode."""
    chan = q.channel
    comp = complement(chan)
    if q.mode == Mode.DEGRADABLE:
        known, target = chan.superop, comp.superop
    elif q.mode == Mode.ANTIDEGRADABLE:
        known, target = comp.superop, chan.superop
    elif q.mode == Mode.CONJ_DEGRADABLE:
        known = chan.superop
        target = SuperOp(
            comp.superop.d_in,
            comp.superop.d_out,
            comp.superop.matrix @ swap_superop(comp.superop.d_out).matrix,
        )
    elif q.mode == Mode.CONJ_ANTIDEGRADABLE:
        known = comp.superop
        target = SuperOp(
            chan.superop.d_in,
            chan.superop.d_out,
            chan.superop.matrix @ swap_superop(chan.superop.d_out).matrix,
        )
    else:
        raise ValueError(f"unknown mode {q.mode!r}")
    return known, target


def decide(q: Query, cfg: SearchConfig | None = None, search: bool = False) -> Verdict:
    """Tri-state decision for one degradability mode.

    NO is returned only when the system is inconsistent (no solution exists)
    or the solution is provably unique and fails complete positivity; a
    negative candidate alone is inconclusive when the family is nontrivial.
    """
    tol = cfg.tol if cfg is not None else DEFAULT_TOL
    known, target = _build_system(q)
    rank_known = numeric_rank(known.matrix, tol)
    unique = uniqueness(known.d_in, known.d_out, rank_known)
    D0, consistent, residual = candidate_map(known, target, tol)
    R0 = superop_to_choi(D0)
    eigs, _ = hermitian_eigs(R0.matrix, tol)
    cand_cp, _ = is_cp(R0, tol)
    kernel_dim = (known.d_out**2 - rank_known) * target.d_out**2

    certificate = None
    if not consistent:
        status = "NO"
    elif cand_cp:
        status = "YES"
        certificate = D0
    elif unique:
        status = "NO"
    else:
        status = "INCONCLUSIVE"
        if search:
            if cfg is None:
                raise ValueError("kernel search requires an explicit SearchConfig")
            family = kernel_family(known, target, tol)
            found = kernel_search(family, cfg)
            if found is not None:
                status = "YES"
                certificate = found
    return Verdict(
        status=status,
        mode=q.mode,
        candidate=D0,
        candidate_choi_eigs=tuple(float(x) for x in eigs),
        unique=unique,
        kernel_dim=int(kernel_dim),
        residual=residual,
        consistent=consistent,
        certificate=certificate,
    )


def verify_certificate(channel: Channel, mode: Mode, D: SuperOp, tol: Tolerance = DEFAULT_TOL):
    """Independent re-verification of a stored certificate.

    Checks the composition residual against the freshly rebuilt system and the
    positivity of the certificate's Choi matrix.  Returns (ok, report dict).
    """
    known, target = _build_system(Query(channel, mode))
    if D.matrix.shape != (known.d_out**2, target.d_out**2):
        return False, {"error": "certificate dimensions do not match the query"}
    resid = float(np.linalg.norm(known.matrix @ D.matrix - target.matrix))
    scale = max(1.0, float(np.linalg.norm(target.matrix)))
    R = superop_to_choi(D)
    cp, min_eig = is_cp(R, tol)
    ok = resid <= tol.residual_tol * scale and cp
    report = {
        "residual": resid,
        "choi_min_eigenvalue": min_eig,
        "choi_trace": float(np.trace(R.matrix).real),
        "cp": bool(cp),
        "ok": bool(ok),
    }
    return ok, report


def ecd_screen(c: Channel, tol: Tolerance = DEFAULT_TOL) -> dict:
    """Screen for channels that could be exclusively conjugate degradable.

    Rules out the possibility when d_B <= d_A, when the complement's Choi rank
    is at most max(d_A, d_E) (low-rank states are separable iff PPT, so
    conjugate degradability cannot outrun plain degradability there), or when
    d_A = d_E = 2 (no bound-entangled Choi matrix in 2 x n).  Also reports
    whether the complement's Choi matrix is PPT, a necessary condition for
    conjugate degradability of the channel.
    """
    comp = complement(c)
    d_a, d_b = c.d_in, c.d_out
    d_e = choi_rank(c, tol)
    comp_rank = numeric_rank(comp.choi.matrix, tol)
    reasons = []
    if d_b <= d_a:
        reasons.append("output dimension does not exceed input dimension")
    if comp_rank <= max(d_a, d_e):
        reasons.append("complement Choi rank in the separable-iff-PPT regime")
    if d_a == 2 and d_e == 2:
        reasons.append("2x2 input/environment: no bound-entangled Choi matrix")
    return {
        "hopeless": bool(reasons),
        "reasons": reasons,
        "d_in": d_a,
        "d_out": d_b,
        "choi_rank": d_e,
        "complement_choi_rank": comp_rank,
        "complement_ppt": bool(is_ppt(comp.choi, tol)),
    }


def superop_to_pairs(M: SuperOp):
    return [[[float(x.real), float(x.imag)] for x in row] for row in M.matrix]


def superop_from_pairs(d_in, d_out, rows):
    mat = np.array([[complex(re, im) for re, im in row] for row in rows])
    return SuperOp(int(d_in), int(d_out), mat)


def verdict_to_dict(v: Verdict) -> dict:
    doc = {
        "schema_version": VERDICT_SCHEMA_VERSION,
        "status": v.status,
        "mode": v.mode.value,
        "unique": v.unique,
        "consistent": v.consistent,
        "kernel_dim": v.kernel_dim,
        "residual": v.residual,
        "candidate_choi_eigenvalues": list(v.candidate_choi_eigs),
    }
    if v.certificate is not None:
        doc["certificate"] = {
            "d_in": v.certificate.d_in,
            "d_out": v.certificate.d_out,
            "matrix": superop_to_pairs(v.certificate),
        }
    return doc


def verdict_to_json(v: Verdict) -> str:
    return json.dumps(verdict_to_dict(v), sort_keys=True, indent=2)
