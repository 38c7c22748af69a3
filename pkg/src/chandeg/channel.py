"""Quantum-channel data model and representation conversions.

Three interchangeable representations are supported:

* Kraus operators ``K_e`` (``d_out x d_in`` each),
* the Choi matrix ``R`` in the basis ``|k><mu|_A (x) |l><nu|_B`` with composite
  row index ``k*d_out + l``,
* the superoperator ``M`` (``d_in^2 x d_out^2``) acting on row-flattened states
  from the right: ``row(sigma) = row(rho) @ M``; composition of channels is
  then plain matrix multiplication of their superoperators.

Conversion between Choi matrix and superoperator is the pure index permutation

    M[k*d_in + mu, l*d_out + nu] = R[k*d_out + l, mu*d_out + nu].
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    hermitian_eigs,
    numeric_rank,
    row_flatten,
)

SCHEMA_VERSION = 1


class DimensionMismatch(ValueError):
    """Operands have incompatible dimensions."""


class NotCP(ValueError):
    """Choi matrix has a significantly negative eigenvalue."""


class NotTP(ValueError):
    """Map is not trace-preserving where it was required to be."""


@dataclass(frozen=True)
class DensityMatrix:
    """A state: Hermitian, PSD, unit-trace matrix.

    ``normalized=False`` relaxes the unit-trace requirement (used for the
    unnormalized maximally entangled state backing the Choi construction).
    """

    matrix: np.ndarray
    normalized: bool = True
    tol: Tolerance = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"state must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("state contains non-finite entries")
        if np.linalg.norm(m - m.conj().T) > self.tol.residual_tol:
            raise ValueError("state is not Hermitian within tolerance")
        tr = float(np.trace(m).real)
        w = np.linalg.eigvalsh((m + m.conj().T) / 2)
        if w[0] < -self.tol.psd_tol * max(abs(tr), 1.0):
            raise ValueError(f"state has negative eigenvalue {w[0]:.3e}")
        if self.normalized and abs(np.trace(m) - 1.0) > self.tol.residual_tol:
            raise ValueError(f"state trace {np.trace(m):.6g} != 1")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]


@dataclass(frozen=True)
class KrausSet:
    """Ordered list of d_out x d_in Kraus operators."""

    d_in: int
    d_out: int
    operators: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(K, dtype=complex) for K in self.operators)
        if not ops:
            raise ValueError("KrausSet requires at least one operator")
        for K in ops:
            if K.shape != (self.d_out, self.d_in):
                raise DimensionMismatch(
                    f"Kraus operator shape {K.shape} != ({self.d_out}, {self.d_in})"
                )
        object.__setattr__(self, "operators", ops)

    def is_trace_preserving(self, tol: Tolerance = DEFAULT_TOL):
        acc = sum(K.conj().T @ K for K in self.operators)
        return np.linalg.norm(acc - np.eye(self.d_in)) <= tol.residual_tol


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi matrix with composite row index k*d_out + l."""

    d_in: int
    d_out: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        n = self.d_in * self.d_out
        if m.shape != (n, n):
            raise DimensionMismatch(f"Choi matrix shape {m.shape} != ({n}, {n})")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class SuperOp:
    """Superoperator acting from the right on row-flattened states."""

    d_in: int
    d_out: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.d_in**2, self.d_out**2):
            raise DimensionMismatch(
                f"superoperator shape {m.shape} != ({self.d_in**2}, {self.d_out**2})"
            )
        object.__setattr__(self, "matrix", m)


def kraus_to_choi(k: KrausSet) -> ChoiMatrix:
    """Choi matrix R = sum_ij |i><j| (x) sum_e K_e |i><j| K_e^dag.

    Equivalently R = sum_e |v_e><v_e| with v_e the row-flattened K_e^T,
    which makes positivity manifest.
    """
    n = k.d_in * k.d_out
    R = np.zeros((n, n), dtype=complex)
    for K in k.operators:
        v = row_flatten(K.T)
        R += np.outer(v, v.conj())
    return ChoiMatrix(k.d_in, k.d_out, R)


def choi_to_kraus(R: ChoiMatrix, tol: Tolerance = DEFAULT_TOL) -> KrausSet:
    """Eigen-Kraus extraction from a PSD Choi matrix.

    Eigenvalues are taken in descending order and each eigenvector's phase is
    fixed (first non-negligible component real positive) so the representative
    is reproducible.  Raises NotCP on a significantly negative eigenvalue.
    """
    w, v = hermitian_eigs(R.matrix, tol)
    tr = max(abs(float(np.trace(R.matrix).real)), 1.0)
    if w[0] < -tol.psd_tol * tr:
        raise NotCP(f"Choi matrix has negative eigenvalue {w[0]:.3e}")
    ops = []
    for lam, vec in zip(w[::-1], v.T[::-1]):
        if lam <= tol.psd_tol * tr:
            continue
        idx = np.argmax(np.abs(vec) > 1e-8)
        phase = vec[idx] / abs(vec[idx])
        vec = vec / phase
        ops.append(np.sqrt(lam) * vec.reshape(R.d_in, R.d_out).T)
    if not ops:
        ops.append(np.zeros((R.d_out, R.d_in), dtype=complex))
    return KrausSet(R.d_in, R.d_out, tuple(ops))


def choi_to_superop(R: ChoiMatrix) -> SuperOp:
    """Reshuffle R_{kl;mu nu} -> M_{k mu; l nu} (a pure index permutation)."""
    dA, dB = R.d_in, R.d_out
    M = R.matrix.reshape(dA, dB, dA, dB).transpose(0, 2, 1, 3).reshape(dA**2, dB**2)
    return SuperOp(dA, dB, M)


def superop_to_choi(M: SuperOp) -> ChoiMatrix:
    """Inverse reshuffle M_{k mu; l nu} -> R_{kl; mu nu}."""
    dA, dB = M.d_in, M.d_out
    n = dA * dB
    R = M.matrix.reshape(dA, dA, dB, dB).transpose(0, 2, 1, 3).reshape(n, n)
    return ChoiMatrix(dA, dB, R)


def apply(M: SuperOp, rho) -> np.ndarray:
    """Apply a channel in superoperator form: unflatten(row(rho) @ M)."""
    r = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if r.shape != (M.d_in, M.d_in):
        raise DimensionMismatch(f"state shape {r.shape} != ({M.d_in}, {M.d_in})")
    return (row_flatten(r) @ M.matrix).reshape(M.d_out, M.d_out)


def apply_choi(R: ChoiMatrix, rho) -> np.ndarray:
    """Apply a channel via its Choi matrix: Tr_A[(rho^T (x) I_B) R]."""
    r = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if r.shape != (R.d_in, R.d_in):
        raise DimensionMismatch(f"state shape {r.shape} != ({R.d_in}, {R.d_in})")
    R4 = R.matrix.reshape(R.d_in, R.d_out, R.d_in, R.d_out)
    return np.einsum("mk,mlkn->ln", r, R4)


def compose(M: SuperOp, N: SuperOp) -> SuperOp:
    """Superoperator of the composition "apply M first, then N"."""
    if M.d_out != N.d_in:
        raise DimensionMismatch(
            f"cannot compose: first map outputs dim {M.d_out}, second expects {N.d_in}"
        )
    return SuperOp(M.d_in, N.d_out, M.matrix @ N.matrix)


def is_cp(R: ChoiMatrix, tol: Tolerance = DEFAULT_TOL):
    """(CP?, minimal eigenvalue) -- CP iff lambda_min >= -psd_tol * trace."""
    w, _ = hermitian_eigs(R.matrix, tol)
    tr = max(abs(float(np.trace(R.matrix).real)), 1.0)
    return bool(w[0] >= -tol.psd_tol * tr), float(w[0])


def is_tp(R: ChoiMatrix, tol: Tolerance = DEFAULT_TOL):
    """(TP?, deviation) -- TP iff Tr_B R = I_A within residual_tol."""
    R4 = R.matrix.reshape(R.d_in, R.d_out, R.d_in, R.d_out)
    trB = np.einsum("klml->km", R4)
    dev = float(np.linalg.norm(trB - np.eye(R.d_in)))
    return dev <= tol.residual_tol, dev


def partial_trace_out(R: ChoiMatrix):
    """Tr_A of the Choi matrix (the average output times d_in)."""
    R4 = R.matrix.reshape(R.d_in, R.d_out, R.d_in, R.d_out)
    return np.einsum("klkn->ln", R4)


def partial_transpose(R: ChoiMatrix, subsystem="A") -> np.ndarray:
    """Transpose on one tensor factor of the Choi matrix."""
    R4 = R.matrix.reshape(R.d_in, R.d_out, R.d_in, R.d_out)
    if subsystem == "A":
        out = R4.transpose(2, 1, 0, 3)
    elif subsystem == "B":
        out = R4.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    n = R.d_in * R.d_out
    return out.reshape(n, n)


def is_ppt(R: ChoiMatrix, tol: Tolerance = DEFAULT_TOL):
    """True when the partial transpose of the Choi matrix is PSD."""
    pt = partial_transpose(R, "A")
    w = np.linalg.eigvalsh((pt + pt.conj().T) / 2)
    tr = max(abs(float(np.trace(R.matrix).real)), 1.0)
    return bool(w[0] >= -tol.psd_tol * tr)


@dataclass(frozen=True)
class Channel:
    """Immutable channel with all three representations cached eagerly."""

    kraus: KrausSet
    label: str = ""
    choi: ChoiMatrix = field(init=False)
    superop: SuperOp = field(init=False)

    def __post_init__(self):
        R = kraus_to_choi(self.kraus)
        object.__setattr__(self, "choi", R)
        object.__setattr__(self, "superop", choi_to_superop(R))

    @property
    def d_in(self):
        return self.kraus.d_in

    @property
    def d_out(self):
        return self.kraus.d_out

    def __call__(self, rho):
        return apply(self.superop, rho)


def channel_from_choi(R: ChoiMatrix, label="", tol: Tolerance = DEFAULT_TOL) -> Channel:
    return Channel(choi_to_kraus(R, tol), label=label)


def complement(c, label=None) -> Channel:
    """Complementary channel: the map to the environment of the dilation.

    For Kraus operators K_e the complement has entries
    ``[C(rho)]_{ef} = Tr[K_f^dag K_e rho]``; its Kraus operators are
    ``(Khat_j)_{e,i} = (K_e)_{j,i}``.  Unique up to an isometry on the
    environment; the representative follows the stored Kraus order.
    """
    k = c.kraus if isinstance(c, Channel) else c
    if not k.is_trace_preserving():
        raise NotTP("complement requires a trace-preserving Kraus set")
    stack = np.array(k.operators)  # (d_E, d_out, d_in)
    ops = tuple(stack[:, j, :].copy() for j in range(k.d_out))
    name = label if label is not None else (
        f"complement({c.label})" if isinstance(c, Channel) and c.label else "complement"
    )
    return Channel(KrausSet(k.d_in, stack.shape[0], ops), label=name)


def is_unital(c: Channel, tol: Tolerance = DEFAULT_TOL):
    """True when the channel maps I/d_in to I/d_out."""
    out = apply(c.superop, np.eye(c.d_in) / c.d_in)
    return bool(np.linalg.norm(out - np.eye(c.d_out) / c.d_out) <= tol.residual_tol)


def choi_rank(c: Channel, tol: Tolerance = DEFAULT_TOL) -> int:
    """Rank of the Choi matrix (minimal environment dimension)."""
    return numeric_rank(c.choi.matrix, tol)


def channel_to_dict(c: Channel) -> dict:
    """JSON-serializable form: operators stored as row-major [re, im] pairs."""
    ops = [
        [[[float(x.real), float(x.imag)] for x in row] for row in K]
        for K in c.kraus.operators
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "label": c.label,
        "d_in": c.d_in,
        "d_out": c.d_out,
        "kraus": ops,
    }


def channel_from_dict(doc: dict) -> Channel:
    try:
        d_in, d_out = int(doc["d_in"]), int(doc["d_out"])
        ops = tuple(
            np.array([[complex(re, im) for re, im in row] for row in K])
            for K in doc["kraus"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed channel document: {exc}") from exc
    return Channel(KrausSet(d_in, d_out, ops), label=str(doc.get("label", "")))
