"""The four heat kernels and their cross-identities.

Kernels
-------
p_series / p_series_array / p_integral
    the subelliptic heat kernel p(t, r, theta) on SU(2), as the Jacobi
    spectral double sum and as a contour integral against q.
q_eval / q_log
    the one-variable kernel q(t, x); q(t, cos delta(x, y)) is the heat
    kernel of the round sphere S^3 (curvature-normalized generator with
    spectrum -(m^2 - 1), m >= 1).
q_t_kernel
    q composed with the pair distance, in both the theta-sum form and the
    spectral double-sum form.
q_tilde / q_tilde_array
    the quotient (S^2) kernel, a Legendre series in cos(2r).

Numerical notes
---------------
The scalar p_series accumulates in extended precision (np.longdouble):
for small t and theta near pi the double sum suffers catastrophic
cancellation, with an absolute floor around 1e-15 in float64 that is far
above the 1e-8 relative agreement demanded against p_integral.

p_integral evaluates (4 pi t)^{-1/2} * Int e^{-(y+i theta)^2/4t}
q(t, cos r cosh y) dy after shifting the contour to y -> y - i*theta,
which turns the oscillatory Gaussian into e^{-y^2/4t} and removes the
cancellation; the integrand is conjugate-symmetric so the result is real
up to rounding.  The Gaussian log-weight is folded into every term of the
q series to avoid overflow at large |y| where q grows like
e^{(arccosh z)^2/4t}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .su2 import GroupElement, pair_coords

__all__ = [
    "EvalPolicy",
    "SpectralIndex",
    "EigenTerm",
    "eigen_term_value",
    "p_series",
    "p_series_array",
    "p_integral",
    "q_eval",
    "q_eval_array",
    "q_log",
    "q_t_kernel",
    "q_t_spectral",
    "q_tilde",
    "q_tilde_array",
    "convolution_check",
    "eigen_residual",
]


@dataclass(frozen=True)
class EvalPolicy:
    """Truncation, branch-switch and quadrature parameters.

    tol         relative truncation tolerance for the spectral sums.
    t_switch    direct Gaussian-side theta sum for t < t_switch, dual
                trigonometric sum for t >= t_switch.
    quad_nodes  minimum total Gauss-Legendre node count for p_integral;
                the integral is evaluated on composite panels of 16 nodes.
    y_cut       the y-integral is truncated at |y| <= y_cut*sqrt(t) + 32;
                the additive constant covers the slowly decaying
                (e^{-y}-type) tail of the integrand at small r.
    haar_grid   (n_r, n_phi1, n_phi2) sizes for haar_quadrature.
    """

    tol: float = 1e-14
    t_switch: float = 0.5
    quad_nodes: int = 400
    y_cut: float = 12.0
    haar_grid: tuple = (64, 64, 64)

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("EvalPolicy: tol must be positive")
        if self.quad_nodes < 16:
            raise ValueError("EvalPolicy: quad_nodes must be >= 16")


_DEFAULT_POLICY = EvalPolicy()


@dataclass(frozen=True)
class SpectralIndex:
    """Index (k, n) with the sub-Riemannian and round eigenvalues.

    lam       = -(4k(k+|n|+1) + 2|n|)   eigenvalue of the sub-Laplacian
    lam_prime = lam - n^2               eigenvalue of the round Laplacian
    """

    k: int
    n: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("SpectralIndex: k must be >= 0")

    @property
    def lam(self) -> float:
        n = abs(self.n)
        return -float(4 * self.k * (self.k + n + 1) + 2 * n)

    @property
    def lam_prime(self) -> float:
        return self.lam - float(self.n * self.n)


def _jacobi_rec(k, n, x):
    """P_k^(0,n)(x) by degree recurrence; works for float, ndarray, longdouble."""
    if k == 0:
        return x * 0 + 1.0
    pm1 = x * 0 + 1.0
    p = (n + 2) / 2 * x - n / 2
    for m in range(2, k + 1):
        a = 2 * m * (m + n) * (2 * m + n - 2)
        c = 2 * (m - 1) * (m + n - 1) * (2 * m + n)
        b1 = (2 * m + n - 1) * (2 * m + n) * (2 * m + n - 2)
        b0 = -(2 * m + n - 1) * n * n
        pm1, p = p, ((b1 * x + b0) * p - c * pm1) / a
    return p


def eigen_term_value(idx: SpectralIndex, r, theta):
    """Value of the real eigenterm p_{k,n} at pair coordinates (r, theta).

    p_{k,n} = w_n (2k+|n|+1) cos(n theta) (cos r)^{|n|} P_k^{(0,|n|)}(cos 2r)
    with w_0 = 1 and w_n = 2 otherwise; p_{k,n}(x, x) = w_n (2k+|n|+1).
    """
    n = abs(idx.n)
    w = 1.0 if n == 0 else 2.0
    return w * (2 * idx.k + n + 1) * np.cos(n * theta) * np.cos(r) ** n * _jacobi_rec(
        idx.k, n, np.cos(2 * r)
    )


@dataclass(frozen=True)
class EigenTerm:
    """An eigenterm of the spectral decomposition, evaluable at (r, theta)."""

    index: SpectralIndex

    def value(self, r, theta):
        return eigen_term_value(self.index, r, theta)


# ---------------------------------------------------------------------------
# the subelliptic kernel p
# ---------------------------------------------------------------------------


def p_series(t: float, r: float, theta: float, policy: EvalPolicy = _DEFAULT_POLICY) -> float:
    """Subelliptic kernel on SU(2) by its spectral double sum (scalar).

    p(t,r,theta) = sum_{n in Z} sum_{k>=0} (2k+|n|+1) e^{lam_{k,n} t}
                   cos(n theta) (cos r)^{|n|} P_k^{(0,|n|)}(cos 2r)

    Accumulated in extended precision; terms are cut with the a-priori bound
    (term weight) * jacobi_sup_bound * (cos r)^n against tol * |partial sum|.
    """
    if t <= 0:
        raise ValueError("p_series: t must be positive")
    ld = np.longdouble
    x = np.cos(ld(2) * ld(r))
    cr = np.cos(ld(r))
    acr = abs(cr)
    # extended precision leaves headroom below policy.tol; spend some of it
    # so the truncation error stays negligible even where p is ~1e-9 and the
    # partial-sum cap is dominated by its floor of 1
    tol = ld(policy.tol) * ld(1e-4)
    total = ld(0)
    crn = ld(1)
    n = 0
    while True:
        w = ld(1) if n == 0 else ld(2) * np.cos(ld(n) * ld(theta))
        cap = max(ld(1), abs(total))
        # inner sum over k for this n
        sub = ld(0)
        pm1 = ld(0)
        P = ld(1)
        k = 0
        while True:
            coef = ld(2 * k + n + 1) * np.exp(ld(-(4 * k * (k + n + 1) + 2 * n)) * ld(t))
            sub += coef * P
            if k > 1 and coef * ld(math.comb(k + n, k)) * crn < tol * cap:
                break
            k += 1
            if k > 10000:
                raise RuntimeError("p_series: k sum did not converge; use p_integral")
            if k == 1:
                pm1, P = P, ld(n + 2) / 2 * x - ld(n) / 2
            else:
                a = ld(2 * k * (k + n) * (2 * k + n - 2))
                c = ld(2 * (k - 1) * (k + n - 1) * (2 * k + n))
                b1 = ld((2 * k + n - 1) * (2 * k + n) * (2 * k + n - 2))
                b0 = ld(-(2 * k + n - 1) * n * n)
                pm1, P = P, ((b1 * x + b0) * P - c * pm1) / a
        total += w * crn * sub
        if n > 2 and ld(n + 1) * np.exp(ld(-2 * n) * ld(t)) * crn < tol * cap:
            break
        n += 1
        if n > 10000:
            raise RuntimeError("p_series: n sum did not converge; use p_integral")
        crn *= acr
    return float(total)


def p_series_array(t: float, r: np.ndarray, theta: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """Vectorized float64 evaluation of p over arrays of pair coordinates.

    Used by the quadrature suites where 1e-12-level absolute accuracy is
    sufficient; the scalar p_series is the extended-precision reference.
    """
    if t <= 0:
        raise ValueError("p_series_array: t must be positive")
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    x = np.cos(2 * r)
    cr = np.cos(r)
    cth = np.cos(theta)
    total = np.zeros_like(x)
    crn = np.ones_like(x)
    c_nm1 = None
    c_n = np.ones_like(theta)  # cos(n*theta) by Chebyshev recurrence
    n = 0
    while True:
        sub = np.zeros_like(x)
        pm1 = np.zeros_like(x)
        P = np.ones_like(x)
        k = 0
        while True:
            coef = (2 * k + n + 1) * math.exp(-(4 * k * (k + n + 1) + 2 * n) * t)
            sub += coef * P
            if k > 1 and coef * math.comb(k + n, k) < tol:
                break
            k += 1
            a = 2 * k * (k + n) * (2 * k + n - 2)
            c = 2 * (k - 1) * (k + n - 1) * (2 * k + n)
            if k == 1:
                pm1, P = P, (n + 2) / 2 * x - n / 2
            else:
                pm1, P = P, (((2 * k + n - 1) * ((2 * k + n) * (2 * k + n - 2) * x - n * n)) * P - c * pm1) / a
        total += (1.0 if n == 0 else 2.0) * c_n * crn * sub
        if n > 2 and (n + 1) * math.exp(-2 * n * t) < tol:
            break
        n += 1
        crn = crn * cr
        if n == 1:
            c_nm1, c_n = c_n, cth.copy()
        else:
            c_nm1, c_n = c_n, 2 * cth * c_n - c_nm1
    return total


# ---------------------------------------------------------------------------
# the one-variable kernel q and the round-sphere kernel q_t
# ---------------------------------------------------------------------------


def _pref(t: float) -> float:
    return math.sqrt(math.pi) * math.exp(t) / (4.0 * t ** 1.5)


def q_eval(t: float, x: float, policy: EvalPolicy = _DEFAULT_POLICY) -> float:
    """The kernel q(t, x) for x > -1, including the continuation to x >= 1.

    For |x| < 1:  q = (sqrt(pi) e^t / 4 t^{3/2}) * S(t, arccos x) / sin(arccos x)
    with S the theta sum, direct branch for t < t_switch and dual branch
    otherwise.  At x = 1 the limit value; for x > 1 the hyperbolic branch
    with u = arccosh x, whose leading term carries e^{+u^2/4t}.
    """
    if t <= 0:
        raise ValueError("q_eval: t must be positive")
    if x <= -1.0:
        raise ValueError("q_eval: x must be > -1 (continuation cut at (-inf, -1])")
    if x > 1.0:
        return _q_hyperbolic(t, x)
    if x == 1.0:
        return _q_at_one(t)
    from .special import theta_sum_direct, theta_sum_dual

    d = math.acos(x)
    s = theta_sum_direct(t, d) if t < policy.t_switch else theta_sum_dual(t, d)
    return _pref(t) * s / math.sin(d)


def _q_at_one(t: float) -> float:
    """Limit of q(t, x) as x -> 1: S(t,d)/sin(d) -> 1 + exponentially small tail."""
    tail = 0.0
    for k in range(1, 200):
        a = 2 * k * math.pi
        term = (2.0 - a * a / t) * math.exp(-a * a / (4 * t))
        tail += term
        if abs(term) < 1e-18 * (1.0 + abs(tail)):
            break
    return _pref(t) * (1.0 + tail)


def _q_hyperbolic(t: float, x: float) -> float:
    """Continuation of q to x > 1 via u = arccosh x.

    Setting arccos x = i*u in the theta sum gives the real series
    q = pref * e^{u^2/4t}/sinh u * [u + sum_{k>=1} 2 e^{-k^2 pi^2/t}
        (u cos(k pi u / t) - 2 k pi sin(k pi u / t))].
    """
    u = math.acosh(x)
    if u == 0.0:
        return _q_at_one(t)
    bracket = u
    for k in range(1, 200):
        damp = math.exp(-k * k * math.pi * math.pi / t)
        if damp * (u + 2 * k * math.pi) < 1e-18 * abs(bracket):
            break
        phi = k * math.pi * u / t
        bracket += 2.0 * damp * (u * math.cos(phi) - 2 * k * math.pi * math.sin(phi))
    return _pref(t) * math.exp(u * u / (4 * t)) / math.sinh(u) * bracket


def q_eval_array(t: float, x: np.ndarray, tol: float = 1e-15) -> np.ndarray:
    """Vectorized q(t, x) for x in [-1, 1] via the Chebyshev (dual) series.

    q(t, x) = e^t sum_{m>=1} m e^{-t m^2} U_{m-1}(x).  Converges for all
    x in [-1, 1]; intended for t >= 0.2 (the suites use t >= 0.3).  For
    smaller t the scalar q_eval with the direct branch should be used.
    """
    if t <= 0:
        raise ValueError("q_eval_array: t must be positive")
    if t < 0.2:
        return np.vectorize(lambda xx: q_eval(t, float(xx)))(np.asarray(x, dtype=float))
    x = np.asarray(x, dtype=float)
    um2 = np.zeros_like(x)
    um1 = np.ones_like(x)
    total = np.zeros_like(x)
    m = 1
    while True:
        w = m * math.exp(t - t * m * m)
        total += w * um1
        if m > 3 and w * m < tol:
            break
        um2, um1 = um1, 2 * x * um1 - um2
        m += 1
    return total


def q_log(t: float, delta: float) -> float:
    """log q(t, cos delta) for delta in [0, pi), stable for very small t.

    For small t the value itself underflows float64 (it is of size
    e^{-delta^2/4t}); the logarithm is assembled as
    log(pref * d/sin d) - d^2/4t + log1p(image tail).
    """
    if t <= 0:
        raise ValueError("q_log: t must be positive")
    if not 0.0 <= delta < math.pi:
        raise ValueError("q_log: delta must be in [0, pi)")
    logpref = 0.5 * math.log(math.pi) + t - math.log(4.0) - 1.5 * math.log(t)
    if delta == 0.0:
        tail = 0.0
        for k in range(1, 200):
            a = 2 * k * math.pi
            term = (2.0 - a * a / t) * math.exp(-a * a / (4 * t))
            tail += term
            if abs(term) < 1e-18 * (1.0 + abs(tail)):
                break
        return logpref + math.log1p(tail)
    main = logpref + math.log(delta / math.sin(delta)) - delta * delta / (4 * t)
    tail = 0.0
    for k in range(1, 200):
        up = delta + 2 * k * math.pi
        dn = delta - 2 * k * math.pi
        term = (
            up * math.exp(-(up * up - delta * delta) / (4 * t))
            + dn * math.exp(-(dn * dn - delta * delta) / (4 * t))
        ) / delta
        tail += term
        if abs(term) < 1e-18 * (1.0 + abs(tail)):
            break
    return main + math.log1p(tail)


def q_t_spectral(t: float, r: float, theta: float, tol: float = 1e-14) -> float:
    """Round-sphere kernel by the spectral double sum with weights e^{lam' t}.

    Same eigenterms as p_series but with the round eigenvalues
    lam'_{k,n} = lam_{k,n} - n^2; used as an independent cross-check of the
    theta-sum form q(t, cos delta).
    """
    if t <= 0:
        raise ValueError("q_t_spectral: t must be positive")
    x = math.cos(2 * r)
    cr = math.cos(r)
    total = 0.0
    crn = 1.0
    n = 0
    while True:
        w = 1.0 if n == 0 else 2.0 * math.cos(n * theta)
        sub = 0.0
        pm1 = 0.0
        P = 1.0
        k = 0
        while True:
            coef = (2 * k + n + 1) * math.exp(-(4 * k * (k + n + 1) + 2 * n + n * n) * t)
            sub += coef * P
            if k > 1 and coef * math.comb(k + n, k) < tol:
                break
            k += 1
            a = 2 * k * (k + n) * (2 * k + n - 2)
            c = 2 * (k - 1) * (k + n - 1) * (2 * k + n)
            if k == 1:
                pm1, P = P, (n + 2) / 2 * x - n / 2
            else:
                pm1, P = P, (((2 * k + n - 1) * ((2 * k + n) * (2 * k + n - 2) * x - n * n)) * P - c * pm1) / a
        total += w * crn * sub
        if n > 2 and (n + 1) * math.exp(-(2 * n + n * n) * t) < tol:
            break
        n += 1
        crn *= abs(cr)
    return total


def q_t_kernel(
    t: float,
    x: GroupElement,
    y: GroupElement,
    policy: EvalPolicy = _DEFAULT_POLICY,
    form: str = "auto",
) -> float:
    """Heat kernel of the round S^3 between two group elements.

    form = "theta":    q(t, cos delta(x, y)) through the theta sum.
    form = "spectral": the Jacobi double sum with round eigenvalues.
    form = "auto":     theta form (cheaper, valid at all delta).
    """
    pc = pair_coords(x, y)
    if form in ("auto", "theta"):
        return q_eval(t, math.cos(pc.delta), policy)
    if form == "spectral":
        return q_t_spectral(t, pc.r, pc.theta, policy.tol)
    raise ValueError(f"q_t_kernel: unknown form {form!r}")


# ---------------------------------------------------------------------------
# the quotient kernel on S^2
# ---------------------------------------------------------------------------


def q_tilde_array(t: float, r: np.ndarray, tol: float = 1e-15) -> np.ndarray:
    """Quotient kernel sum_k (2k+1) e^{-4k(k+1)t} P_k(cos 2r), vectorized."""
    if t <= 0:
        raise ValueError("q_tilde_array: t must be positive")
    x = np.cos(2 * np.asarray(r, dtype=float))
    pm1 = np.zeros_like(x)
    P = np.ones_like(x)
    total = np.zeros_like(x)
    k = 0
    while True:
        w = (2 * k + 1) * math.exp(-4 * k * (k + 1) * t)
        total += w * P
        if k > 2 and w < tol:
            break
        k += 1
        pm1, P = P, ((2 * k - 1) * x * P - (k - 1) * pm1) / k
    return total


def q_tilde(t: float, r: float, policy: EvalPolicy = _DEFAULT_POLICY) -> float:
    """Quotient (S^2) heat kernel at horizontal distance r."""
    return float(q_tilde_array(t, np.asarray(r, dtype=float), policy.tol))


# ---------------------------------------------------------------------------
# the integral representation of p
# ---------------------------------------------------------------------------


def _q_complex_direct(t: float, z: complex, gexp: float) -> complex:
    """e^{gexp} * q(t, z) for complex z, Gaussian-side branch (small t).

    gexp is a large negative log-weight (the Gaussian of the contour
    integral); folding it into each term keeps every exponent in range even
    where q itself overflows.
    """
    A = cmath.acos(z)
    sA = cmath.sin(A)
    if abs(sA) < 1e-150:
        s = cmath.exp(gexp - A * A / (4 * t))
    else:
        s = (A / sA) * cmath.exp(gexp - A * A / (4 * t))
        for k in range(1, 60):
            up = A + 2 * k * math.pi
            dn = A - 2 * k * math.pi
            add = (up * cmath.exp(gexp - up * up / (4 * t)) + dn * cmath.exp(gexp - dn * dn / (4 * t))) / sA
            s += add
            if abs(add) < 1e-18 * (abs(s) + 1e-300):
                break
    return _pref(t) * s


def _q_complex_dual(t: float, z: complex, gexp: float) -> complex:
    """e^{gexp} * q(t, z) via the Chebyshev series (large-t branch).

    For |z| >= 0.5 the recurrence is run on V_m = U_m / (2z)^m to avoid
    overflow of U at large |z|; the discarded power is restored in the log
    of each term.
    """
    if abs(z) < 0.5:
        um2, um1 = 0j, 1.0 + 0j
        s = 0j
        m = 1
        while m < 4000:
            term = m * cmath.exp(gexp + t - t * m * m) * um1
            s += term
            if m > 5 and abs(term) < 1e-18 * (abs(s) + 1e-300):
                break
            um2, um1 = um1, 2 * z * um1 - um2
            m += 1
        return s
    l2z = cmath.log(2 * z)
    inv4z2 = 1.0 / (4 * z * z)
    vm2, vm1 = 0j, 1.0 + 0j
    s = 0j
    m = 1
    while m < 4000:
        term = m * cmath.exp(gexp + t - t * m * m + (m - 1) * l2z) * vm1
        s += term
        if m > 5 and abs(term) < 1e-18 * (abs(s) + 1e-300):
            break
        vm2, vm1 = vm1, vm1 - vm2 * inv4z2
        m += 1
    return s


def p_integral(t: float, r: float, theta: float, policy: EvalPolicy = _DEFAULT_POLICY) -> float:
    """Subelliptic kernel via the integral against q:

        p(t, r, theta) = (4 pi t)^{-1/2} Int_R e^{-(y + i theta)^2 / 4t}
                         q(t, cos r cosh y) dy

    evaluated after the contour shift y -> y - i*theta (legitimate by
    analyticity of the integrand in the strip), which replaces the
    oscillatory Gaussian by e^{-y^2/4t} and makes the integrand
    conjugate-symmetric; the imaginary part of the quadrature sum is
    asserted to be negligible.  Composite 16-point Gauss-Legendre panels
    on |y| <= y_cut*sqrt(t) + 32.
    """
    if t <= 0:
        raise ValueError("p_integral: t must be positive")
    qfun = _q_complex_direct if t < policy.t_switch else _q_complex_dual
    Y = policy.y_cut * math.sqrt(t) + 32.0
    panel_w = min(1.0, 2.0 * math.sqrt(t))
    n_panels = max(int(math.ceil(2 * Y / panel_w)), int(math.ceil(policy.quad_nodes / 16)))
    nodes, wts = np.polynomial.legendre.leggauss(16)
    edges = np.linspace(-Y, Y, n_panels + 1)
    cr = math.cos(r)
    total = 0j
    for i in range(n_panels):
        a, b = edges[i], edges[i + 1]
        ys = (nodes + 1.0) * 0.5 * (b - a) + a
        ws = wts * 0.5 * (b - a)
        for y, w in zip(ys, ws):
            z = cr * cmath.cosh(complex(y, -theta))
            total += w * qfun(t, z, -y * y / (4 * t))
    total /= math.sqrt(4 * math.pi * t)
    value = total.real
    if abs(total.imag) > 1e-10 * max(1.0, abs(value)):
        raise RuntimeError(f"p_integral: imaginary part {total.imag:.3e} not negligible")
    return value


# ---------------------------------------------------------------------------
# convolution and spectral residual checks
# ---------------------------------------------------------------------------


def convolution_check(t: float, r: float, theta: float, policy: EvalPolicy = _DEFAULT_POLICY) -> float:
    """Residual of q(t, cos r cos theta) = Int zeta(t, theta-phi) p(t, r, phi) dphi.

    zeta is the real-line Gaussian e^{-phi^2/4t}/sqrt(4 pi t); p is extended
    in phi with period 2pi (even in phi), which is canonical for its
    cos(n phi) spectral form.  The phi-integral is done with composite
    Gauss-Legendre after substituting u = theta - phi.
    """
    if t <= 0:
        raise ValueError("convolution_check: t must be positive")
    lhs = q_eval(t, math.cos(r) * math.cos(theta), policy)
    L = 14.0 * math.sqrt(t)
    n_panels = max(8, int(math.ceil(2 * L / min(0.5, math.sqrt(t)))))
    nodes, wts = np.polynomial.legendre.leggauss(24)
    edges = np.linspace(-L, L, n_panels + 1)
    us, ws = [], []
    for i in range(n_panels):
        a, b = edges[i], edges[i + 1]
        us.append((nodes + 1.0) * 0.5 * (b - a) + a)
        ws.append(wts * 0.5 * (b - a))
    u = np.concatenate(us)
    w = np.concatenate(ws)
    zeta = np.exp(-u * u / (4 * t)) / math.sqrt(4 * math.pi * t)
    phi = theta - u
    phi = np.abs(np.mod(phi + math.pi, 2 * math.pi) - math.pi)
    rhs = float(np.sum(zeta * p_series_array(t, np.full_like(u, r), phi) * w))
    return abs(lhs - rhs)


def eigen_residual(idx: SpectralIndex, r: float, theta: float, h: float = 1e-4) -> float:
    """|Delta p_{k,n} - lam_{k,n} p_{k,n}| at (r, theta) by central differences.

    Delta = d^2/dr^2 + 2 cot(2r) d/dr + tan^2(r) d^2/dtheta^2, applied with
    step h in extended precision (the h^-2 amplification of rounding error
    would otherwise dominate the O(h^2) truncation error).  Requires r at
    least 4h away from 0 and pi/2.
    """
    if not (4 * h <= r <= math.pi / 2 - 4 * h):
        raise ValueError("eigen_residual: r must be >= 4h away from 0 and pi/2")
    ld = np.longdouble
    k, n = idx.k, abs(idx.n)
    wn = ld(1) if n == 0 else ld(2)

    def f(rr, tt):
        return wn * ld(2 * k + n + 1) * np.cos(ld(n) * tt) * np.cos(rr) ** n * _jacobi_rec(
            k, n, np.cos(ld(2) * rr)
        )

    hh = ld(h)
    rr = ld(r)
    tt = ld(theta)
    frr = (f(rr + hh, tt) - 2 * f(rr, tt) + f(rr - hh, tt)) / (hh * hh)
    fr = (f(rr + hh, tt) - f(rr - hh, tt)) / (2 * hh)
    ftt = (f(rr, tt + hh) - 2 * f(rr, tt) + f(rr, tt - hh)) / (hh * hh)
    lap = frr + ld(2) * np.cos(ld(2) * rr) / np.sin(ld(2) * rr) * fr + np.tan(rr) ** 2 * ftt
    return abs(float(lap - ld(idx.lam) * f(rr, tt)))
