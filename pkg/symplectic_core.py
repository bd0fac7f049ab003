#!/usr/bin/env python3
"""
Symplectic Core
===============

Linear algebra for real symplectic matrices: certification (SᵀJS = J),
A/B/C/D block views, free matrices and their quadratic generating function,
the named families used by linear canonical transforms (Fourier, fractional
Fourier, Fresnel, Lorentz, shears, squeezes), coupling (Darboux) matrices of
two symplectic matrices and non-standard symplectic forms.

Block convention::

    S = [[A, B],
         [C, D]]        acting on z = (x, ξ)

All records are immutable; every function is pure.
"""

import json
import re
from typing import Optional, Sequence, Tuple, Union

import attrs
import numpy as np
import scipy.linalg

from lct_errors import (BadParameter, NotAntisymmetric, NotFree, NotSymplectic,
                        OddDimension, SingularCoupling, SpecParseError)

TOL_SYMPL = 1e-10
FREE_THRESHOLD = 1e-10
DET_TOL = 1e-8
MAX_HALF_DIMENSION = 16

ArrayLike = Union[float, Sequence, np.ndarray]


def _frozen(value: ArrayLike, dtype=float) -> np.ndarray:
    arr = np.array(value, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def _as_square(value: ArrayLike) -> np.ndarray:
    """Scalars become 1×1 matrices, vectors become diagonal matrices"""
    arr = np.array(value, dtype=float)
    if arr.ndim == 0:
        return arr.reshape(1, 1)
    if arr.ndim == 1:
        return np.diag(arr)
    return arr


def _scale(matrix: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(matrix))) if matrix.size else 1.0)


def _standard_j_array(n: int) -> np.ndarray:
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_residual(matrix: ArrayLike) -> float:
    """‖MᵀJM − J‖_max"""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise BadParameter(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] % 2:
        raise OddDimension(f"symplectic matrices have even dimension, got {m.shape[0]}")
    j = _standard_j_array(m.shape[0] // 2)
    return float(np.max(np.abs(m.T @ j @ m - j)))


@attrs.define(frozen=True, eq=False)
class BlockDecomposition:
    """The four n×n blocks of a symplectic matrix"""
    A: np.ndarray = attrs.field(converter=_frozen)
    B: np.ndarray = attrs.field(converter=_frozen)
    C: np.ndarray = attrs.field(converter=_frozen)
    D: np.ndarray = attrs.field(converter=_frozen)
    tol: float = attrs.field(default=TOL_SYMPL, validator=attrs.validators.gt(0.0))

    def __attrs_post_init__(self):
        n = self.A.shape[0]
        for name in ("A", "B", "C", "D"):
            if getattr(self, name).shape != (n, n):
                raise BadParameter(f"block {name} must be {n}×{n}")
        scale = max(_scale(self.A), _scale(self.B), _scale(self.C), _scale(self.D)) ** 2
        limit = self.tol * scale
        atc = self.A.T @ self.C
        btd = self.B.T @ self.D
        if np.max(np.abs(atc - atc.T)) > limit or np.max(np.abs(btd - btd.T)) > limit:
            raise NotSymplectic("AᵀC and BᵀD must be symmetric")
        if np.max(np.abs(self.A.T @ self.D - self.C.T @ self.B - np.eye(n))) > limit:
            raise NotSymplectic("AᵀD − CᵀB must equal the identity")

    @property
    def n(self) -> int:
        return self.A.shape[0]


@attrs.define(frozen=True, eq=False)
class SymplecticMatrix:
    """A 2n×2n real matrix certified to satisfy SᵀJS = J"""
    entries: np.ndarray = attrs.field(converter=_frozen)
    tol: float = attrs.field(default=TOL_SYMPL, validator=attrs.validators.gt(0.0))
    label: str = attrs.field(default="", validator=attrs.validators.instance_of(str))

    def __attrs_post_init__(self):
        m = self.entries
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise BadParameter(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] % 2:
            raise OddDimension(f"symplectic matrices have even dimension, got {m.shape[0]}")
        n = m.shape[0] // 2
        if n > MAX_HALF_DIMENSION:
            raise BadParameter(f"n = {n} exceeds the supported maximum {MAX_HALF_DIMENSION}")
        if not np.all(np.isfinite(m)):
            raise BadParameter("matrix entries must be finite")
        scale = _scale(m)
        residual = symplectic_residual(m)
        if residual > self.tol * scale ** 2:
            raise NotSymplectic(f"‖SᵀJS − J‖ = {residual:.3e} exceeds tolerance", residual=residual)
        det = float(np.linalg.det(m))
        if abs(det - 1.0) > max(DET_TOL, self.tol) * scale ** (2 * n):
            raise NotSymplectic(f"det S = {det!r} differs from 1", determinant=det)

    @property
    def n(self) -> int:
        return self.entries.shape[0] // 2

    @property
    def blocks(self) -> BlockDecomposition:
        return block_split(self)

    @property
    def is_free(self) -> bool:
        n = self.n
        return abs(np.linalg.det(self.entries[:n, n:])) >= FREE_THRESHOLD

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return compose(self, other)

    def __repr__(self) -> str:
        tag = f" {self.label}" if self.label else ""
        return f"SymplecticMatrix(n={self.n}{tag}, entries={self.entries.tolist()})"

    def to_dict(self) -> dict:
        return {"n": self.n, "entries": self.entries.ravel().tolist()}


@attrs.define(frozen=True, eq=False)
class FreeSymplectic:
    """A free symplectic matrix with the cached generating-function coefficients"""
    matrix: SymplecticMatrix = attrs.field(validator=attrs.validators.instance_of(SymplecticMatrix))
    blocks: BlockDecomposition = attrs.field(validator=attrs.validators.instance_of(BlockDecomposition))
    db_inv: np.ndarray = attrs.field(converter=_frozen)
    b_inv: np.ndarray = attrs.field(converter=_frozen)
    b_inv_a: np.ndarray = attrs.field(converter=_frozen)
    det_b: float = attrs.field(converter=float)

    def __attrs_post_init__(self):
        if abs(self.det_b) < FREE_THRESHOLD:
            raise NotFree(f"|det B| = {abs(self.det_b):.3e} is below the free threshold")
        for name in ("db_inv", "b_inv_a"):
            q = getattr(self, name)
            if np.max(np.abs(q - q.T)) > 1e-8 * _scale(q):
                raise NotSymplectic(f"{name} must be symmetric")

    @property
    def n(self) -> int:
        return self.matrix.n


@attrs.define(frozen=True, eq=False)
class SymplecticFormNS:
    """A (possibly non-standard) symplectic form ϑ(z, z′) = z·Ω⁻¹z′"""
    omega: np.ndarray = attrs.field(converter=_frozen)
    omega_inv: Optional[np.ndarray] = attrs.field(default=None)

    def __attrs_post_init__(self):
        om = self.omega
        if om.ndim != 2 or om.shape[0] != om.shape[1] or om.shape[0] % 2:
            raise OddDimension(f"Ω must be square of even dimension, got {om.shape}")
        if np.max(np.abs(om + om.T)) > 1e-10 * _scale(om):
            raise NotAntisymmetric("Ω must be antisymmetric")
        if abs(np.linalg.det(om)) <= 0.0:
            raise BadParameter("Ω must be invertible")
        inv = np.linalg.inv(om) if self.omega_inv is None else np.asarray(self.omega_inv, dtype=float)
        if np.max(np.abs(om @ inv - np.eye(om.shape[0]))) > 1e-8 * _scale(om) * _scale(inv):
            raise BadParameter("omega_inv is not the inverse of Ω")
        object.__setattr__(self, "omega_inv", _frozen(inv))

    @property
    def n(self) -> int:
        return self.omega.shape[0] // 2

    def pairing(self, z: ArrayLike, zp: ArrayLike) -> float:
        """ϑ(z, z′)"""
        return float(np.asarray(z, dtype=float) @ self.omega_inv @ np.asarray(zp, dtype=float))


@attrs.define(frozen=True, eq=False)
class DarbouxMatrix:
    """An invertible D carrying the standard form to Ω: DJDᵀ = Ω"""
    d: np.ndarray = attrs.field(converter=_frozen)
    target_form: SymplecticFormNS = attrs.field(validator=attrs.validators.instance_of(SymplecticFormNS))

    def __attrs_post_init__(self):
        j = _standard_j_array(self.d.shape[0] // 2)
        mismatch = np.max(np.abs(self.d @ j @ self.d.T - self.target_form.omega))
        if mismatch > 1e-8 * _scale(self.d) ** 2:
            raise NotSymplectic(f"DJDᵀ differs from Ω by {mismatch:.3e}")

    @property
    def n(self) -> int:
        return self.d.shape[0] // 2

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.d))

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.d)

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.d, np.eye(self.d.shape[0])))


# --- elementary operations ---

def standard_J(n: int = 1) -> SymplecticMatrix:
    """J = [[0, I], [−I, 0]]"""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise BadParameter(f"n must be a positive integer, got {n!r}")
    return SymplecticMatrix(_standard_j_array(int(n)), label="J")


def identity(n: int = 1) -> SymplecticMatrix:
    return SymplecticMatrix(np.eye(2 * n), label="I")


def is_symplectic(matrix: ArrayLike, tol: float = TOL_SYMPL) -> Tuple[bool, float]:
    """Return (‖MᵀJM − J‖_max ≤ tol, residual)"""
    residual = symplectic_residual(matrix)
    return residual <= tol, residual


def block_split(S: SymplecticMatrix) -> BlockDecomposition:
    n = S.n
    m = S.entries
    return BlockDecomposition(A=m[:n, :n], B=m[:n, n:], C=m[n:, :n], D=m[n:, n:], tol=S.tol)


def from_blocks(A: ArrayLike, B: ArrayLike, C: ArrayLike, D: ArrayLike, label: str = "") -> SymplecticMatrix:
    return SymplecticMatrix(np.block([[_as_square(A), _as_square(B)], [_as_square(C), _as_square(D)]]), label=label)


def as_free(S: Union[SymplecticMatrix, FreeSymplectic]) -> FreeSymplectic:
    """Cache DB⁻¹, B⁻¹, B⁻¹A and det B; raise NotFree if B is singular"""
    if isinstance(S, FreeSymplectic):
        return S
    blocks = block_split(S)
    det_b = float(np.linalg.det(blocks.B))
    if abs(det_b) < FREE_THRESHOLD:
        raise NotFree(f"|det B| = {abs(det_b):.3e} < {FREE_THRESHOLD:g}; {S.label or 'matrix'} is not free")
    b_inv = np.linalg.inv(blocks.B)
    db_inv = blocks.D @ b_inv
    b_inv_a = b_inv @ blocks.A
    # symmetric by construction; remove rounding asymmetry
    db_inv = 0.5 * (db_inv + db_inv.T)
    b_inv_a = 0.5 * (b_inv_a + b_inv_a.T)
    return FreeSymplectic(matrix=S, blocks=blocks, db_inv=db_inv, b_inv=b_inv, b_inv_a=b_inv_a, det_b=det_b)


def generating_function(F: FreeSymplectic, x: ArrayLike, xp: ArrayLike) -> float:
    """W(x, x′) = ½ x·DB⁻¹x − (B⁻¹x)·x′ + ½ x′·B⁻¹Ax′"""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xp = np.atleast_1d(np.asarray(xp, dtype=float))
    return float(0.5 * x @ F.db_inv @ x - (F.b_inv @ x) @ xp + 0.5 * xp @ F.b_inv_a @ xp)


def inverse(S: SymplecticMatrix) -> SymplecticMatrix:
    """S⁻¹ = [[Dᵀ, −Bᵀ], [−Cᵀ, Aᵀ]]"""
    b = block_split(S)
    label = f"{S.label}^-1" if S.label else ""
    return SymplecticMatrix(np.block([[b.D.T, -b.B.T], [-b.C.T, b.A.T]]), tol=S.tol, label=label)


def compose(S1: SymplecticMatrix, S2: SymplecticMatrix) -> SymplecticMatrix:
    if S1.n != S2.n:
        raise BadParameter(f"cannot compose n={S1.n} with n={S2.n}")
    label = f"{S1.label}·{S2.label}" if S1.label and S2.label else ""
    return SymplecticMatrix(S1.entries @ S2.entries, tol=max(S1.tol, S2.tol), label=label)


# --- named families ---

def _angles(value: ArrayLike) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.ndim != 1 or not np.all(np.isfinite(arr)):
        raise BadParameter("parameters must be a finite scalar or vector")
    return arr


def fourier_matrix(n: int = 1) -> SymplecticMatrix:
    return SymplecticMatrix(_standard_j_array(n), label="fourier")


def frft_matrix(theta: ArrayLike) -> SymplecticMatrix:
    """A = D = diag(cos θ), B = −C = diag(sin θ)"""
    th = _angles(theta)
    if np.any(np.abs(np.sin(th)) < FREE_THRESHOLD):
        raise BadParameter("frft angles must satisfy sin θ ≠ 0")
    c, s = np.diag(np.cos(th)), np.diag(np.sin(th))
    return from_blocks(c, s, -s, c, label=f"frft:{','.join(repr(float(t)) for t in th)}")


def fresnel_matrix(b: ArrayLike) -> SymplecticMatrix:
    """A = D = I, B = diag(b), C = 0"""
    bb = _angles(b)
    if np.any(bb == 0.0):
        raise BadParameter("fresnel parameters must be non-zero")
    n = bb.size
    return from_blocks(np.eye(n), np.diag(bb), np.zeros((n, n)), np.eye(n), label=f"fresnel:{','.join(repr(float(v)) for v in bb)}")


def lorentz_matrix(phi: ArrayLike) -> SymplecticMatrix:
    """A = D = diag(cosh φ), B = C = diag(sinh φ)"""
    ph = _angles(phi)
    if np.any(ph == 0.0):
        raise BadParameter("lorentz rapidities must be non-zero")
    ch, sh = np.diag(np.cosh(ph)), np.diag(np.sinh(ph))
    return from_blocks(ch, sh, sh, ch, label=f"lorentz:{','.join(repr(float(v)) for v in ph)}")


def shear_matrix(P: ArrayLike) -> SymplecticMatrix:
    """V_P = [[I, 0], [−P, I]] for symmetric P"""
    p = _as_square(P)
    if np.max(np.abs(p - p.T)) > 1e-12 * _scale(p):
        raise BadParameter("shear matrix P must be symmetric")
    n = p.shape[0]
    return from_blocks(np.eye(n), np.zeros((n, n)), -p, np.eye(n), label="shear")


def squeeze_matrix(L: ArrayLike) -> SymplecticMatrix:
    """M_L = [[L⁻¹, 0], [0, Lᵀ]] for invertible L"""
    lm = _as_square(L)
    if abs(np.linalg.det(lm)) < FREE_THRESHOLD:
        raise BadParameter("squeeze matrix L must be invertible")
    n = lm.shape[0]
    return from_blocks(np.linalg.inv(lm), np.zeros((n, n)), np.zeros((n, n)), lm.T, label="squeeze")


def make_named(kind: str, param: Optional[ArrayLike] = None, n: int = 1) -> SymplecticMatrix:
    """Dispatch on the family name: fourier, frft, fresnel, lorentz, shear, squeeze"""
    kind = kind.lower()
    if kind in ("fourier", "j"):
        return fourier_matrix(n)
    if kind in ("identity", "i"):
        return identity(n)
    builders = {
        "frft": frft_matrix,
        "fresnel": fresnel_matrix,
        "lorentz": lorentz_matrix,
        "shear": shear_matrix,
        "squeeze": squeeze_matrix,
    }
    if kind not in builders:
        raise BadParameter(f"unknown matrix family {kind!r}")
    if param is None:
        raise BadParameter(f"{kind} needs a parameter")
    return builders[kind](param)


def squeeze_conjugate(S: SymplecticMatrix, L: ArrayLike) -> SymplecticMatrix:
    """S_L = M S Mᵀ with M = [[Lᵀ, 0], [0, L⁻¹]]"""
    lm = _as_square(L)
    if abs(np.linalg.det(lm)) < FREE_THRESHOLD:
        raise BadParameter("L must be invertible")
    n = lm.shape[0]
    zero = np.zeros((n, n))
    m = np.block([[lm.T, zero], [zero, np.linalg.inv(lm)]])
    return SymplecticMatrix(m @ S.entries @ m.T, tol=S.tol)


# --- coupling and non-standard forms ---

def coupling_matrix(S1: SymplecticMatrix, S2: SymplecticMatrix) -> DarbouxMatrix:
    """D = [[A⁽¹⁾, B⁽¹⁾], [A⁽²⁾, B⁽²⁾]] with Ω = DJDᵀ"""
    if S1.n != S2.n:
        raise BadParameter(f"coupling needs equal n, got {S1.n} and {S2.n}")
    b1, b2 = block_split(S1), block_split(S2)
    d = np.block([[b1.A, b1.B], [b2.A, b2.B]])
    det = float(np.linalg.det(d))
    if abs(det) < FREE_THRESHOLD:
        raise SingularCoupling(f"det D = {det:.3e}: the pair does not induce a symplectic form")
    omega = d @ _standard_j_array(S1.n) @ d.T
    omega = 0.5 * (omega - omega.T)
    return DarbouxMatrix(d=d, target_form=SymplecticFormNS(omega))


def in_sp_theta(P: ArrayLike, form: SymplecticFormNS, tol: float = TOL_SYMPL) -> bool:
    """PΩPᵀ = Ω within tol (scaled by the operand magnitudes)"""
    p = np.asarray(P, dtype=float)
    if p.shape != form.omega.shape:
        raise BadParameter(f"P has shape {p.shape}, Ω has {form.omega.shape}")
    residual = np.max(np.abs(p @ form.omega @ p.T - form.omega))
    return bool(residual <= tol * _scale(p) ** 2 * _scale(form.omega))


def magnetic_form(B_field: ArrayLike) -> SymplecticFormNS:
    """J_B = [[0, I], [−I, B]] with inverse [[B, −I], [I, 0]]"""
    bf = _as_square(B_field)
    if np.max(np.abs(bf + bf.T)) > 1e-12 * _scale(bf):
        raise NotAntisymmetric("the magnetic field matrix must be antisymmetric")
    n = bf.shape[0]
    eye, zero = np.eye(n), np.zeros((n, n))
    return SymplecticFormNS(np.block([[zero, eye], [-eye, bf]]), omega_inv=np.block([[bf, -eye], [eye, zero]]))


def darboux_for(form: SymplecticFormNS) -> DarbouxMatrix:
    """Some D with DJDᵀ = Ω"""
    n = form.n
    om = form.omega
    eye = np.eye(n)
    if np.array_equal(om[:n, :n], np.zeros((n, n))) and np.array_equal(om[:n, n:], eye) \
            and np.array_equal(om[n:, :n], -eye):
        # magnetic structure: [[I, 0], [B/2, I]]
        return DarbouxMatrix(d=np.block([[eye, np.zeros((n, n))], [0.5 * om[n:, n:], eye]]), target_form=form)
    t, z = scipy.linalg.schur(om, output="real")
    d = np.zeros_like(om)
    k = 0
    i = 0
    while i < 2 * n:
        strength = 0.5 * (t[i, i + 1] - t[i + 1, i])
        qa, qb = z[:, i], z[:, i + 1]
        root = np.sqrt(abs(strength))
        if strength > 0:
            d[:, k], d[:, n + k] = root * qa, root * qb
        else:
            d[:, k], d[:, n + k] = root * qb, root * qa
        k += 1
        i += 2
    return DarbouxMatrix(d=d, target_form=form)


def heisenberg_bound_matrix(S1: SymplecticMatrix, S2: SymplecticMatrix) -> np.ndarray:
    """Upper-left n×n block of S⁽¹⁾J(S⁽²⁾)ᵀ"""
    if S1.n != S2.n:
        raise BadParameter(f"bound matrix needs equal n, got {S1.n} and {S2.n}")
    n = S1.n
    return (S1.entries @ _standard_j_array(n) @ S2.entries.T)[:n, :n]


# --- random generators ---

def random_symplectic(rng: np.random.Generator, n: int = 1, factors: Tuple[int, int] = (2, 6)) -> SymplecticMatrix:
    """Product of k ∈ [factors] random shear, squeeze and frft factors"""
    k = int(rng.integers(factors[0], factors[1] + 1))
    product = np.eye(2 * n)
    for _ in range(k):
        choice = int(rng.integers(3))
        if choice == 0:
            p = rng.normal(scale=0.5, size=(n, n))
            factor = shear_matrix(0.5 * (p + p.T))
        elif choice == 1:
            while True:
                lm = np.eye(n) + rng.normal(scale=0.3, size=(n, n))
                if abs(np.linalg.det(lm)) > 0.2:
                    break
            factor = squeeze_matrix(lm)
        else:
            theta = rng.uniform(-np.pi, np.pi, size=n)
            theta = np.where(np.abs(np.sin(theta)) < 1e-3, theta + 0.1, theta)
            factor = frft_matrix(theta)
        product = product @ factor.entries
    return SymplecticMatrix(product, tol=1e-9, label="random")


def random_free_symplectic(rng: np.random.Generator, n: int = 1, max_entry: float = 2.5,
                           min_det_b: float = 0.3, max_tries: int = 10000) -> SymplecticMatrix:
    """Rejection-sample random_symplectic until it is comfortably free"""
    for _ in range(max_tries):
        s = random_symplectic(rng, n)
        if np.max(np.abs(s.entries)) > max_entry:
            continue
        if abs(np.linalg.det(s.entries[:n, n:])) >= min_det_b:
            return s
    raise BadParameter("could not draw a free symplectic matrix with the requested bounds")


# --- spec strings and JSON ---

_PI_TOKEN = re.compile(r"^(?P<coef>[-+]?(\d+(\.\d*)?|\.\d+)?([eE][-+]?\d+)?)\*?pi(/(?P<den>\d+(\.\d*)?))?$")


def parse_number(token: str) -> float:
    """Float literal or a multiple/fraction of pi: ``pi``, ``-pi/3``, ``5*pi/6``, ``2pi``"""
    text = token.strip().lower()
    try:
        return float(text)
    except ValueError:
        pass
    match = _PI_TOKEN.match(text)
    if not match:
        raise SpecParseError(f"cannot parse number {token!r}")
    coef = match.group("coef")
    value = np.pi * (float(coef) if coef not in ("", "+", "-", None) else (-1.0 if coef == "-" else 1.0))
    if match.group("den"):
        value /= float(match.group("den"))
    return float(value)


def parse_matrix_spec(spec: str, n: int = 1, tol: float = TOL_SYMPL) -> SymplecticMatrix:
    """``I``, ``J``, ``fourier``, ``frft:θ[,θ]``, ``fresnel:b``, ``lorentz:φ``,
    ``shear:p``, ``squeeze:l`` or the path of a JSON matrix file

    ``tol`` bounds ‖SᵀJS − J‖ for matrices read from JSON.
    """
    text = spec.strip()
    if text.lower().endswith(".json"):
        return matrix_from_json(text, tol=tol)
    kind, _, rest = text.partition(":")
    kind = kind.lower()
    if kind in ("i", "identity"):
        return identity(n)
    if kind in ("j", "fourier"):
        return fourier_matrix(n)
    if kind not in ("frft", "fresnel", "lorentz", "shear", "squeeze"):
        raise SpecParseError(f"unknown matrix spec {spec!r}")
    if not rest:
        raise SpecParseError(f"matrix spec {spec!r} needs a parameter")
    values = [parse_number(tok) for tok in rest.split(",")]
    try:
        return make_named(kind, values if len(values) > 1 else values[0])
    except BadParameter as e:
        raise BadParameter(f"{spec}: {e.message}")


def matrix_to_json(S: SymplecticMatrix) -> str:
    return json.dumps(S.to_dict())


def matrix_from_json(path_or_text: str, tol: float = TOL_SYMPL) -> SymplecticMatrix:
    """Read {"n": int, "entries": [4n² reals, row-major]} from a file path or JSON text"""
    text = path_or_text
    if not path_or_text.lstrip().startswith("{"):
        try:
            with open(path_or_text, "r") as f:
                text = f.read()
        except IOError as e:
            raise SpecParseError(f"cannot read matrix file {path_or_text}: {e}")
    try:
        payload = json.loads(text)
        n = int(payload["n"])
        entries = np.asarray(payload["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise SpecParseError(f"malformed matrix JSON: {e}")
    if entries.size != 4 * n * n:
        raise SpecParseError(f"expected {4 * n * n} entries for n={n}, got {entries.size}")
    return SymplecticMatrix(entries.reshape(2 * n, 2 * n), tol=tol)
