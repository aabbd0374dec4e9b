"""Chern-connection geometry of invariant Hermitian metrics.

Everything here works over a :class:`~cherncurv.forms.CoframeAlgebra` with a
constant Hermitian matrix h.  The connection matrix of 1-forms is pinned down
by its two defining properties: the (0,1)-part kills the (1,1)-torsion and
the (1,0)-part is forced by compatibility with the constant metric.  All
contractions (the two Ricci forms, the third Ricci tensor, both scalar
curvatures) are then index gymnastics on the lowered curvature tensor

    Theta_{i jbar k lbar} = h_{m lbar} R^m_{k, i jbar},
    Theta^m_k = d theta^m_k + theta^m_l ^ theta^l_k
              = R^m_{k, i jbar} phi^i ^ bar(phi)^j.

Sign calibration is normative against the Hopf anchors
Ric1 = 2 sqrt(-1) phi^1 ^ bar(phi)^1, Ric2 = (2/r^2) omega, S = 4/r^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np

from . import scalars as sc
from .forms import CoframeAlgebra, InvariantForm, ext_d, del_part, dbar_part
from .scalars import QQi, conj, is_exact, is_zero, mat_det, mat_inv, mat_solve

TYPE_TOL = 1e-9


class NotPositiveDefinite(ValueError):
    pass


class DegenerateMetric(ValueError):
    pass


class HermitianMetric:
    """Constant Hermitian positive-definite matrix h_{i jbar}.

    The associated fundamental form is
    omega = sqrt(-1) h_{i jbar} phi^i ^ bar(phi)^j.
    """

    def __init__(self, h):
        self.h = [list(row) for row in h]
        self.n = len(self.h)
        self._validate()

    def _validate(self):
        n = self.n
        for i in range(n):
            if len(self.h[i]) != n:
                raise ValueError("metric matrix must be square")
        scale = max(abs(self.h[i][j]) for i in range(n) for j in range(n))
        for i in range(n):
            for j in range(n):
                if not is_zero(self.h[i][j] - conj(self.h[j][i]), scale=scale):
                    raise ValueError("metric matrix is not Hermitian")
        det = mat_det(self.h)
        if not self.exact and abs(det) < 1e-10 * scale ** n:
            raise DegenerateMetric("metric is numerically degenerate")
        # positive definiteness via leading principal minors
        for k in range(1, n + 1):
            minor = mat_det([row[:k] for row in self.h[:k]])
            val = complex(minor)
            if val.real <= 0:
                raise NotPositiveDefinite(
                    f"leading principal minor {k} is not positive")

    @property
    def exact(self) -> bool:
        return is_exact(self.h[0][0])

    def inverse_upper(self):
        """h^{i jbar}, the inverse satisfying h^{i jbar} h_{k jbar} = delta."""
        inv = mat_inv(self.h)
        n = self.n
        return [[inv[j][i] for j in range(n)] for i in range(n)]

    def scaled(self, c) -> "HermitianMetric":
        return HermitianMetric([[v * c for v in row] for row in self.h])

    def omega(self) -> InvariantForm:
        n = self.n
        i_unit = sc.I_EXACT if self.exact else 1j
        coeffs = {}
        for i in range(n):
            for j in range(n):
                if not is_zero(self.h[i][j]):
                    coeffs[(i, j + n)] = i_unit * self.h[i][j]
        return InvariantForm(n, coeffs)

    def det(self):
        return mat_det(self.h)


@dataclass(frozen=True)
class SurfaceMetricParams:
    """(r, s, u) parameterisation of invariant surface metrics.

    Induces h11 = r^2/2, h22 = s^2/2, h12 = -sqrt(-1) u / 2,
    h21 = sqrt(-1) conj(u) / 2, admissible when r^2 s^2 - |u|^2 > 0.
    """

    r: object
    s: object
    u: object = 0

    def admissible(self) -> bool:
        r2 = complex(self.r).real ** 2
        s2 = complex(self.s).real ** 2
        uu = abs(complex(self.u)) ** 2
        return r2 > 0 and s2 > 0 and r2 * s2 - uu > 0

    def metric(self, exact: Optional[bool] = None) -> HermitianMetric:
        if exact is None:
            exact = all(is_exact(v) for v in (self.r, self.s, self.u))
        if exact:
            r, s = QQi(self.r), QQi(self.s)
            u = self.u if isinstance(self.u, QQi) else QQi(self.u)
            half, i_unit = QQi(1, 0) / 2, sc.I_EXACT
        else:
            r, s = complex(self.r), complex(self.s)
            u, half, i_unit = complex(self.u), 0.5 + 0j, 1j
        h11 = r * r * half
        h22 = s * s * half
        h12 = -i_unit * u * half
        h21 = i_unit * conj(u) * half
        return HermitianMetric([[h11, h12], [h21, h22]])


@dataclass
class ConnectionForms:
    theta: list  # n x n matrix of InvariantForm (mixed-type 1-forms)
    gamma: list  # (1,0)-coefficients gamma[m][k][l]: phi^l part of theta^m_k


@dataclass
class CurvatureTensor:
    """Lowered Chern curvature Theta[i][j][k][l] = Theta_{i jbar k lbar}."""

    theta_end: list  # endomorphism-valued curvature 2-forms Theta^m_k
    r_upper: list    # R[m][k][i][j] with Theta^m_k = R phi^i ^ bar(phi)^j
    lowered: list    # Theta[i][j][k][l]
    n: int

    def component(self, i, j, k, l):
        """1-based Theta_{i jbar k lbar}."""
        return self.lowered[i - 1][j - 1][k - 1][l - 1]


def _zeros(exact, *shape):
    zero = QQi() if exact else 0j
    if len(shape) == 1:
        return [zero for _ in range(shape[0])]
    return [_zeros(exact, *shape[1:]) for _ in range(shape[0])]


def _b_tensor(alg: CoframeAlgebra, exact):
    """B[i][j][k] = coefficient of phi^j ^ bar(phi)^k in d phi^i, 0-based."""
    n = alg.n
    b = _zeros(exact, n, n, n)
    for (i, j, k), v in alg.b.items():
        b[i - 1][j - 1][k - 1] = b[i - 1][j - 1][k - 1] + v
    return b


def chern_connection(alg: CoframeAlgebra, h: HermitianMetric) -> ConnectionForms:
    """Connection 1-forms theta^i_j of the Chern connection.

    The (0,1)-part is B^i_{j kbar} bar(phi)^k (this removes the (1,1)-part
    of the torsion); the (1,0)-part gamma solves metric compatibility
    gamma^k_{i l} h_{k jbar} = - h_{i kbar} conj(B^k_{j lbar}).
    """
    alg.check_integrable()
    ok, res = alg.check_jacobi()
    if not ok:
        raise ValueError(f"structure equations fail the Jacobi check ({res})")
    if h.n != alg.n:
        raise ValueError("metric dimension does not match the coframe")
    n = alg.n
    exact = h.exact
    b = _b_tensor(alg, exact)
    ht = [[h.h[m][j] for m in range(n)] for j in range(n)]  # (H^T)[j][m]
    # right-hand sides for all (i,l) at once: rhs[j][(i,l)]
    rhs = [[-sum((h.h[i][k] * conj(b[k][j][l]) for k in range(n)),
                 QQi() if exact else 0j)
            for i in range(n) for l in range(n)] for j in range(n)]
    sol = mat_solve(ht, rhs)  # sol[m][(i,l)] = gamma[m][i][l]
    gamma = [[[sol[m][i * n + l] for l in range(n)] for i in range(n)]
             for m in range(n)]
    theta = []
    for m in range(n):
        row = []
        for k in range(n):
            coeffs = {}
            for l in range(n):
                if not is_zero(gamma[m][k][l]):
                    coeffs[(l,)] = gamma[m][k][l]
                if not is_zero(b[m][k][l]):
                    coeffs[(l + n,)] = b[m][k][l]
            row.append(InvariantForm(n, coeffs))
        theta.append(row)
    return ConnectionForms(theta=theta, gamma=gamma)


def chern_curvature(alg: CoframeAlgebra, h: HermitianMetric,
                    connection: Optional[ConnectionForms] = None
                    ) -> CurvatureTensor:
    """Curvature Theta^m_k = d theta^m_k + theta^m_l ^ theta^l_k, lowered.

    Raises if any Theta^m_k has a (2,0)- or (0,2)-component above tolerance,
    which would signal invalid structure constants or an internal error.
    """
    if connection is None:
        connection = chern_connection(alg, h)
    n = alg.n
    exact = h.exact
    theta = connection.theta
    theta_end = []
    r_upper = _zeros(exact, n, n, n, n)
    for m in range(n):
        row = []
        for k in range(n):
            big = ext_d(alg, theta[m][k])
            for l in range(n):
                big = big + theta[m][l].wedge(theta[l][k])
            bad = big.project_bidegree(2, 0) + big.project_bidegree(0, 2)
            if not bad.is_zero(tol_scale=max(big.max_abs(), 1.0)):
                raise ValueError(
                    "endomorphism curvature is not of type (1,1)")
            row.append(big)
            for i in range(n):
                for j in range(n):
                    r_upper[m][k][i][j] = big.coeff(i, j + n)
        theta_end.append(row)
    lowered = _zeros(exact, n, n, n, n)
    for i, j, k, l in product(range(n), repeat=4):
        acc = QQi() if exact else 0j
        for m in range(n):
            acc = acc + r_upper[m][k][i][j] * h.h[m][l]
        lowered[i][j][k][l] = acc
    return CurvatureTensor(theta_end=theta_end, r_upper=r_upper,
                           lowered=lowered, n=n)


# ---------------------------------------------------------------------------
# contractions

def _ric_matrix(kind: int, curv: CurvatureTensor, h: HermitianMetric):
    """Coefficient matrix M with Ric = sqrt(-1) M_{a bbar} phi^a ^ bar(phi)^b
    for kinds 1 and 2; for kind 3 the tensor Ric3_{k jbar} itself."""
    n = curv.n
    up = h.inverse_upper()
    th = curv.lowered
    exact = h.exact
    out = _zeros(exact, n, n)
    for a in range(n):
        for b in range(n):
            acc = QQi() if exact else 0j
            if kind == 1:
                for k, l in product(range(n), repeat=2):
                    acc = acc + up[k][l] * th[a][b][k][l]
            elif kind == 2:
                for i, j in product(range(n), repeat=2):
                    acc = acc + up[i][j] * th[i][j][a][b]
            elif kind == 3:
                # indices (k, jbar): contract h^{i lbar} Theta_{i jbar k lbar}
                for i, l in product(range(n), repeat=2):
                    acc = acc + up[i][l] * th[i][b][a][l]
            else:
                raise ValueError("kind must be 1, 2 or 3")
            out[a][b] = acc
    return out


def _matrix_to_form(m, n, exact) -> InvariantForm:
    i_unit = sc.I_EXACT if exact else 1j
    coeffs = {}
    for a in range(n):
        for b in range(n):
            if not is_zero(m[a][b]):
                coeffs[(a, b + n)] = i_unit * m[a][b]
    return InvariantForm(n, coeffs)


def ricci(kind: int, curv: CurvatureTensor, h: HermitianMetric):
    """Chern-Ricci contraction of the given kind.

    Kinds 1 and 2 return real (1,1)-forms; kind 3 returns the coefficient
    matrix of the Ricci tensor with indices (k, jbar).
    """
    m = _ric_matrix(kind, curv, h)
    if kind == 3:
        return m
    return _matrix_to_form(m, curv.n, h.exact)


def scalar_chern(curv: CurvatureTensor, h: HermitianMetric):
    """S = h^{i jbar} h^{k lbar} Theta_{i jbar k lbar} (real)."""
    n = curv.n
    up = h.inverse_upper()
    acc = QQi() if h.exact else 0j
    for i, j, k, l in product(range(n), repeat=4):
        acc = acc + up[i][j] * up[k][l] * curv.lowered[i][j][k][l]
    return _realize(acc)


def scalar_third(curv: CurvatureTensor, h: HermitianMetric):
    """The alternative double trace h^{k jbar} h^{i lbar} Theta_{i jbar k lbar}."""
    n = curv.n
    up = h.inverse_upper()
    acc = QQi() if h.exact else 0j
    for i, j, k, l in product(range(n), repeat=4):
        acc = acc + up[k][j] * up[i][l] * curv.lowered[i][j][k][l]
    return _realize(acc)


def _realize(x):
    if isinstance(x, QQi):
        if x.im != 0:
            raise ValueError(f"expected a real scalar, got {x!r}")
        return x.re
    if abs(x.imag) > max(1e-9 * abs(x), sc.ABS_TOL):
        raise ValueError(f"expected a real scalar, got {x!r}")
    return x.real


# ---------------------------------------------------------------------------
# torsion, Lee form, Gauduchon

def torsion(alg: CoframeAlgebra, h: HermitianMetric,
            connection: Optional[ConnectionForms] = None):
    """(2,0)-torsion forms tau^i = d phi^i + theta^i_j ^ phi^j and the trace
    1-form T^k_{jk} phi^j."""
    if connection is None:
        connection = chern_connection(alg, h)
    n = alg.n
    exact = h.exact
    taus = []
    t = _zeros(exact, n, n, n)
    for i in range(n):
        tau = ext_d(alg, alg.basis_1form(i + 1))
        for j in range(n):
            tau = tau + connection.theta[i][j].wedge(alg.basis_1form(j + 1))
        if not (tau.project_bidegree(1, 1) + tau.project_bidegree(0, 2)
                ).is_zero(tol_scale=max(tau.max_abs(), 1.0)):
            raise ValueError("torsion is not of type (2,0)")
        taus.append(tau)
        for j in range(n):
            for k in range(n):
                if j < k:
                    t[i][j][k] = tau.coeff(j, k)
                    t[i][k][j] = -tau.coeff(j, k)
    trace_coeffs = {}
    for j in range(n):
        acc = QQi() if exact else 0j
        for k in range(n):
            acc = acc + t[k][j][k]
        if not is_zero(acc):
            trace_coeffs[(j,)] = acc
    return taus, InvariantForm(n, trace_coeffs)


def lee_form(alg: CoframeAlgebra, h: HermitianMetric):
    """Solve d omega^{n-1} = theta ^ omega^{n-1} for the Lee 1-form.

    Returns (theta, lck, residual); ``theta`` is None when no 1-form
    factorisation exists.  lck is True when additionally d theta = 0
    (for n = 2 this is the locally-conformally-Kahler condition).
    """
    n = alg.n
    if n < 2:
        raise ValueError("Lee form needs n >= 2")
    omega = h.omega()
    power = omega
    for _ in range(n - 2):
        power = power.wedge(omega)
    target = ext_d(alg, power)
    # unknown 1-form over the 2n covectors; assemble a least-squares system
    basis = [alg.basis_1form(i + 1, barred=bar)
             for bar in (False, True) for i in range(n)]
    wedges = [e.wedge(power) for e in basis]
    keys = sorted({k for w in wedges for k in w.coefficients}
                  | set(target.coefficients))
    a = np.array([[complex(w.coefficients.get(k, 0)) for w in wedges]
                  for k in keys])
    rhs = np.array([complex(target.coefficients.get(k, 0)) for k in keys])
    sol, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    residual = float(np.max(np.abs(a @ sol - rhs))) if len(keys) else 0.0
    scale = max(float(np.max(np.abs(rhs))) if len(keys) else 0.0, 1.0)
    if residual > 1e-9 * scale:
        return None, False, residual
    theta = InvariantForm(n, {(i if not bar else i + n,):
                              sol[bar * n + i]
                              for bar in (0, 1) for i in range(n)})
    dtheta = ext_d(alg, theta)
    lck = dtheta.is_zero(tol_scale=max(theta.max_abs(), 1.0))
    return theta, lck, residual


def is_gauduchon(alg: CoframeAlgebra, h: HermitianMetric):
    """del dbar omega^{n-1} = 0, with residual."""
    omega = h.omega()
    power = omega
    for _ in range(alg.n - 2):
        power = power.wedge(omega)
    ddc = del_part(alg, dbar_part(alg, power))
    residual = ddc.max_abs()
    scale = max(power.max_abs(), 1.0)
    return ddc.is_zero(tol_scale=scale), float(residual)


def gauduchon_degree(alg: CoframeAlgebra, h: HermitianMetric):
    """Gauduchon degree for invariant data: the Chern scalar curvature of
    the unit-volume rescaling of h (the integrand is constant).

    Requires h to be Gauduchon.
    """
    ok, res = is_gauduchon(alg, h)
    if not ok:
        raise ValueError(f"metric is not Gauduchon (residual {res})")
    det = complex(mat_det(h.h)).real
    curv = chern_curvature(alg, h)
    s = float(scalar_chern(curv, h))
    # S(c*h) = S(h)/c with c = det^{-1/n} normalising det to 1
    return s * det ** (1.0 / alg.n)


# ---------------------------------------------------------------------------
# Einstein residuals

def einstein_residual(kind: int, alg: CoframeAlgebra, h: HermitianMetric,
                      mode: str = "strong",
                      curv: Optional[CurvatureTensor] = None):
    """(lambda*, residual) of Ric^(kind) - lambda * omega.

    strong: lambda* = S / n.  weak: least-squares over real lambda in the
    Frobenius inner product of coefficient matrices.  For kind 3 the tensor
    h^{i lbar} Theta_{i jbar k lbar} is compared against lambda h_{k jbar}.
    """
    if mode not in ("strong", "weak"):
        raise ValueError("mode must be 'strong' or 'weak'")
    if curv is None:
        curv = chern_curvature(alg, h)
    n = alg.n
    m = _ric_matrix(kind, curv, h)
    mf = np.array([[complex(v) for v in row] for row in m])
    hf = np.array([[complex(v) for v in row] for row in h.h])
    if mode == "strong":
        lam = float(scalar_chern(curv, h)) / n
    else:
        denom = float(np.sum(np.abs(hf) ** 2))
        lam = float(np.real(np.sum(np.conj(hf) * mf))) / denom
    residual = float(np.max(np.abs(mf - lam * hf)))
    return lam, residual


# ---------------------------------------------------------------------------
# Chern-Weil forms and the Bogomolov-Lubke pairing

def chern_weil(curv: CurvatureTensor):
    """(c1, c2) as invariant forms, with the usual 2*pi normalisations."""
    n = curv.n
    tr = InvariantForm(n)
    for m in range(n):
        tr = tr + _to_float_form(curv.theta_end[m][m])
    trtr = InvariantForm(n)
    for m in range(n):
        for l in range(n):
            trtr = trtr + _to_float_form(curv.theta_end[m][l]).wedge(
                _to_float_form(curv.theta_end[l][m]))
    c1 = tr.scale(1j / (2 * math.pi))
    c2 = (tr.wedge(tr) - trtr).scale(1.0 / (8 * math.pi ** 2))
    return c1, c2


def _to_float_form(form: InvariantForm) -> InvariantForm:
    out = InvariantForm(form.n)
    out.coefficients = {k: complex(v) for k, v in form.coefficients.items()}
    return out


def bogomolov_lubke(curv: CurvatureTensor, h: HermitianMetric):
    """Coefficient of ((n-1) c1^2 - 2n c2) ^ omega^{n-1} against the volume
    form omega^n / n!.  Non-positive for (2)-Chern-Einstein data."""
    n = curv.n
    if n < 2:
        raise ValueError("Bogomolov-Lubke pairing needs n >= 2")
    c1, c2 = chern_weil(curv)
    omega = _to_float_form(h.omega())
    wpow = omega
    for _ in range(n - 2):
        wpow = wpow.wedge(omega)
    lhs = (c1.wedge(c1).scale(float(n - 1)) - c2.scale(2.0 * n)).wedge(wpow)
    vol = wpow.wedge(omega)
    vol = vol.scale(1.0 / math.factorial(n))
    key = tuple(range(2 * n))
    vc = vol.coefficients.get(key, 0)
    if is_zero(vc):
        raise DegenerateMetric("volume form vanishes")
    ratio = complex(lhs.coefficients.get(key, 0)) / complex(vc)
    return _realize(ratio)


# ---------------------------------------------------------------------------
# batched float pipeline (used by parameter scans)

def batch_curvature(alg: CoframeAlgebra, hs: np.ndarray):
    """Lowered curvature for a batch of constant metrics, vectorised.

    ``hs`` has shape (M, n, n).  Returns Theta of shape (M, n, n, n, n)
    indexed [batch, i, j, k, l].  Agrees with :func:`chern_curvature`
    (property-tested); only the (1,1)-part is produced.
    """
    alg.check_integrable()
    n = alg.n
    b = np.zeros((n, n, n), dtype=complex)
    for (i, j, k), v in alg.b.items():
        b[i - 1, j - 1, k - 1] += complex(v)
    bc = b.conj()
    m = hs.shape[0]
    # gamma[m_,i,l] solves sum_m H[m,j] gamma[m] = -sum_k H[i,k] conj(B[k,j,l])
    rhs = -np.einsum("Mik,kjl->Mjil", hs, bc).reshape(m, n, n * n)
    gam = np.linalg.solve(np.transpose(hs, (0, 2, 1)), rhs)
    gamma = gam.reshape(m, n, n, n)  # [batch, m, i, l]
    r = (np.einsum("Mmkl,lab->Mmkab", gamma, b)
         - np.einsum("mkl,lba->mkab", b, bc)[None]
         + np.einsum("Mmla,lkb->Mmkab", gamma, b)
         - np.einsum("mlb,Mlka->Mmkab", b, gamma))
    return np.einsum("Mmkij,Mml->Mijkl", r, hs)


def batch_einstein_residual(kind: int, alg: CoframeAlgebra, hs: np.ndarray,
                            mode: str = "strong", relative: bool = False):
    """Vectorised (lambda*, residual) over a batch of metrics.

    With ``relative`` the residual is normalised by
    max(|Ric|, |lambda| |h|) per point, a dimensionless distance from the
    Einstein condition that is comparable across metric scales.
    """
    theta = batch_curvature(alg, hs)
    up = np.transpose(np.linalg.inv(hs), (0, 2, 1))  # up[M,k,l] = h^{k lbar}
    if kind == 1:
        ric = np.einsum("Mkl,Mabkl->Mab", up, theta)
    elif kind == 2:
        ric = np.einsum("Mij,Mijab->Mab", up, theta)
    elif kind == 3:
        ric = np.einsum("Mil,Mibal->Mab", up, theta)
    else:
        raise ValueError("kind must be 1, 2 or 3")
    s = np.real(np.einsum("Mij,Mkl,Mijkl->M", up, up, theta))
    if mode == "strong":
        lam = s / alg.n
    else:
        lam = (np.real(np.einsum("Mab,Mab->M", hs.conj(), ric))
               / np.sum(np.abs(hs) ** 2, axis=(1, 2)))
    resid = np.max(np.abs(ric - lam[:, None, None] * hs), axis=(1, 2))
    if relative:
        scale = np.maximum(np.max(np.abs(ric), axis=(1, 2)),
                           np.abs(lam) * np.max(np.abs(hs), axis=(1, 2)))
        resid = resid / np.maximum(scale, 1e-300)
    return lam, resid, s


# ---------------------------------------------------------------------------
# parameter scan over the surface metric family

@dataclass
class ScanReport:
    entry: Optional[str]
    kind: int
    count: int
    min_residual: float    # relative residual at the best point
    argmin: tuple          # (r, s, u) at the minimum
    certificate_ok: Optional[bool]
    certificate_worst: Optional[float]
    min_residual_abs: float = 0.0


def default_surface_grid(r_values=None, s_values=None, radii=9, phases=8,
                         include_zero=True):
    """(r, s, u) triples with r, s in 0.25..3 and u on a polar grid strictly
    inside the admissibility cone |u| < 0.95 r s."""
    if r_values is None:
        r_values = [0.25 * k for k in range(1, 13)]
    if s_values is None:
        s_values = [0.25 * k for k in range(1, 13)]
    pts = []
    for r in r_values:
        for s in s_values:
            if include_zero:
                pts.append((r, s, 0j))
            for a in range(1, radii + 1):
                rho = 0.95 * r * s * a / (radii + 1)
                for p in range(phases):
                    ang = 2 * math.pi * p / phases
                    pts.append((r, s, rho * complex(math.cos(ang),
                                                    math.sin(ang))))
    return pts


def scan(alg: CoframeAlgebra, kind: int, grid=None, mode: str = "strong",
         certificate=None, entry_name=None, extra_params=None) -> ScanReport:
    """Einstein residual over a (r, s, u) grid, with optional per-point sign
    certificate callable(r, s, u, lam) -> float that must stay negative.

    The minimised quantity is the relative residual (see
    :func:`batch_einstein_residual`), which puts points with very
    different metric scales on a common footing; the absolute residual at
    the minimiser is reported alongside."""
    if grid is None:
        grid = default_surface_grid()
    grid = [(r, s, complex(u)) for (r, s, u) in grid
            if SurfaceMetricParams(r, s, u).admissible()]
    if not grid:
        raise ValueError("no admissible grid points")
    hs = np.empty((len(grid), 2, 2), dtype=complex)
    for idx, (r, s, u) in enumerate(grid):
        hs[idx, 0, 0] = r * r / 2
        hs[idx, 1, 1] = s * s / 2
        hs[idx, 0, 1] = -1j * u / 2
        hs[idx, 1, 0] = 1j * u.conjugate() / 2
    lam, resid, _s = batch_einstein_residual(kind, alg, hs, mode=mode,
                                             relative=True)
    _, resid_abs, _ = batch_einstein_residual(kind, alg, hs, mode=mode)
    order = np.lexsort((np.arange(len(grid)), resid))
    best = int(order[0])
    cert_ok, cert_worst = None, None
    if certificate is not None:
        vals = np.array([certificate(r, s, u, lam[i])
                         for i, (r, s, u) in enumerate(grid)])
        cert_ok = bool(np.all(vals < 0))
        cert_worst = float(np.max(vals))
    return ScanReport(entry=entry_name, kind=kind, count=len(grid),
                      min_residual=float(resid[best]),
                      argmin=grid[best],
                      certificate_ok=cert_ok, certificate_worst=cert_worst,
                      min_residual_abs=float(resid_abs[best]))


# ---------------------------------------------------------------------------
# one-stop summary

@dataclass
class RicciReport:
    ric1: InvariantForm
    ric2: InvariantForm
    ric3: list
    s_chern: object
    s_third: object
    einstein: dict  # (kind, mode) -> (lambda*, residual)


def ricci_report(alg: CoframeAlgebra, h: HermitianMetric) -> RicciReport:
    curv = chern_curvature(alg, h)
    einstein = {}
    for kind in (1, 2, 3):
        for mode in ("strong", "weak"):
            einstein[(kind, mode)] = einstein_residual(
                kind, alg, h, mode=mode, curv=curv)
    return RicciReport(ric1=ricci(1, curv, h), ric2=ricci(2, curv, h),
                       ric3=ricci(3, curv, h),
                       s_chern=scalar_chern(curv, h),
                       s_third=scalar_third(curv, h),
                       einstein=einstein)
