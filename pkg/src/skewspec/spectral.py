"""Spectra of real skew-symmetric matrices and derived objects.

For skew-symmetric M the eigenvalues are i*lambda_1, ..., i*lambda_n with
real lambda_i; equivalently the lambda_i are the eigenvalues of the
Hermitian matrix -i*M.  Everything here works with the real lambda_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._tridiagonal import _skew_tridiag_lower, symtridiag_eigvals
from .errors import NotSkewSymmetric
from .normalization import NormalizationContext

SKEW_CHECK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Real eigenvalues lambda_i of -i*M, stored ascending."""

    lambdas: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.sort(np.asarray(self.lambdas, dtype=np.float64).ravel())
        object.__setattr__(self, "lambdas", vals)

    def __len__(self) -> int:
        return self.lambdas.shape[0]

    @property
    def n(self) -> int:
        return self.lambdas.shape[0]

    @property
    def descending(self) -> np.ndarray:
        """Eigenvalues in descending order (mu-hat ordering)."""
        return self.lambdas[::-1]

    def max_abs(self) -> float:
        if self.n == 0:
            raise ValueError("empty spectrum")
        return max(abs(float(self.lambdas[0])), abs(float(self.lambdas[-1])))

    def symmetry_defect(self) -> float:
        """max_i |lambda_i + lambda_{n-1-i}|, zero for an exactly symmetric spectrum."""
        if self.n == 0:
            return 0.0
        return float(np.max(np.abs(self.lambdas + self.lambdas[::-1])))

    def symmetry_ok(self, tol_sym: float | None = None) -> bool:
        """Check symmetry about zero within tol_sym * max(1, max|lambda|).

        Default tol_sym is 1e-8 * n.  For odd n this also bounds the middle
        eigenvalue, since it is paired with itself.
        """
        if self.n == 0:
            return True
        if tol_sym is None:
            tol_sym = 1e-8 * self.n
        return self.symmetry_defect() <= tol_sym * max(1.0, self.max_abs())


class ESD:
    """Empirical spectral distribution: a right-continuous step CDF.

    Places mass 1/n at each sample point; ``evaluate`` accepts scalars or
    arrays and returns (#points <= x) / n.
    """

    def __init__(self, points):
        pts = np.sort(np.asarray(points, dtype=np.float64).ravel())
        if pts.size == 0:
            raise ValueError("ESD needs at least one sample point")
        self.points = pts

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def evaluate(self, x):
        idx = np.searchsorted(self.points, x, side="right")
        result = idx / self.n
        if np.isscalar(x):
            return float(result)
        return result

    __call__ = evaluate


@dataclass(frozen=True)
class WeylReport:
    """Per-index result of the eigenvalue sandwich check.

    The check compares the descending eigenvalues mu-hat_i of -i*S against

        shift_i - r*sqrt(n)*(2 + epsilon) <= mu-hat_i <= shift_i + r*sqrt(n)*(2 + epsilon)

    where shift_i = p*(2q-1)*cot(pi*(2i-1)/(2n)) for q >= 1/2 and
    shift_i = p*(2q-1)*cot(pi*(2n-2i+1)/(2n)) for q < 1/2: the exact
    descending eigenvalues of the deterministic part i*p*(1-2q)*Y_n.
    epsilon is the caller's stand-in for the vanishing spectral-edge excess.
    """

    epsilon: float
    branch: str
    mu: np.ndarray = field(repr=False)
    lower: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)
    passed: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.mu.shape[0]

    @property
    def num_pass(self) -> int:
        return int(np.count_nonzero(self.passed))

    @property
    def num_fail(self) -> int:
        return self.n - self.num_pass

    @property
    def all_pass(self) -> bool:
        return self.num_fail == 0

    def violations(self) -> list[dict]:
        """1-based indices failing the sandwich, with their bounds."""
        out = []
        for i in np.nonzero(~self.passed)[0]:
            out.append(
                {
                    "index": int(i) + 1,
                    "mu": float(self.mu[i]),
                    "lower": float(self.lower[i]),
                    "upper": float(self.upper[i]),
                }
            )
        return out


def skew_tridiagonalize(m: np.ndarray, validate: bool = True) -> np.ndarray:
    """Reduce skew-symmetric m to skew tridiagonal form; return off-diagonals b.

    b[k] is the (k, k+1) entry of the reduced matrix, so the similar
    symmetric tridiagonal problem has zero diagonal and off-diagonals |b|.
    """
    m = np.asarray(m, dtype=np.float64)
    if validate:
        _check_skew(m)
    work = np.array(m, dtype=np.float64, order="C", copy=True)
    return _skew_tridiag_lower(work)


def _check_skew(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSkewSymmetric(f"expected a square matrix, got shape {m.shape}")
    defect = float(np.max(np.abs(m + m.T))) if m.size else 0.0
    if defect > SKEW_CHECK_TOL:
        raise NotSkewSymmetric(
            f"matrix deviates from skew-symmetry by {defect:.3e} (> {SKEW_CHECK_TOL:.0e})"
        )


def eig_skew(m: np.ndarray) -> Spectrum:
    """All real lambda with i*lambda an eigenvalue of skew-symmetric m.

    Householder tridiagonalization followed by the symmetric tridiagonal
    QL solve on (0, |b|); raises NotSkewSymmetric if the input fails the
    entrywise skew check, and RuntimeError if the computed spectrum is not
    symmetric about zero within the Spectrum tolerance (a solver defect,
    never expected).
    """
    m = np.asarray(m, dtype=np.float64)
    _check_skew(m)
    n = m.shape[0]
    work = np.array(m, dtype=np.float64, order="C", copy=True)
    b = _skew_tridiag_lower(work)
    vals = symtridiag_eigvals(np.zeros(n), np.abs(b))
    spec = Spectrum(vals)
    if not spec.symmetry_ok():
        raise RuntimeError(
            f"solver produced an asymmetric spectrum (defect {spec.symmetry_defect():.3e})"
        )
    return spec


def y_spectrum_closed_form(n: int) -> Spectrum:
    """Spectrum {cot(pi*(2i-1)/(2n)) : i = 1..n} of the all-ones skew matrix."""
    if n < 1:
        raise ValueError("n must be >= 1")
    i = np.arange(1, n + 1, dtype=np.float64)
    theta = math.pi * (2.0 * i - 1.0) / (2.0 * n)
    return Spectrum(np.cos(theta) / np.sin(theta))


def esd(spec: Spectrum, scale: float) -> ESD:
    """Step CDF of {lambda_i / scale}; scale = r*sqrt(n) realizes the target ESD."""
    if not scale > 0.0:
        raise ValueError(f"scale must be positive, got {scale!r}")
    return ESD(spec.lambdas / scale)


def spectral_radius(spec: Spectrum) -> float:
    """max_i |lambda_i|."""
    return spec.max_abs()


def weyl_bounds(
    spec: Spectrum, ctx: NormalizationContext, epsilon: float
) -> WeylReport:
    """Check the eigenvalue sandwich for the spectrum of -i*S_n.

    ``spec`` must be the spectrum of the raw skew-adjacency matrix S_n (not
    of the shifted matrix).  The bound splits -i*S_n into the zero-mean part,
    whose spectral radius is r*sqrt(n)*(2 + o(1)), plus the deterministic
    part i*p*(1-2q)*Y_n with known cotangent eigenvalues; the eigenvalue
    perturbation inequality for Hermitian sums then sandwiches each
    descending eigenvalue between the cotangent shift plus/minus the radius
    term.  ``epsilon`` replaces the unquantified o(1).
    """
    if epsilon < 0.0:
        raise ValueError("epsilon must be non-negative")
    n = spec.n
    mu = spec.descending
    i = np.arange(1, n + 1, dtype=np.float64)
    if ctx.q >= 0.5:
        theta = math.pi * (2.0 * i - 1.0) / (2.0 * n)
        branch = "q>=1/2"
    else:
        theta = math.pi * (2.0 * n - 2.0 * i + 1.0) / (2.0 * n)
        branch = "q<1/2"
    shift = ctx.p * (2.0 * ctx.q - 1.0) * (np.cos(theta) / np.sin(theta))
    half_width = ctx.r * math.sqrt(n) * (2.0 + epsilon)
    lower = shift - half_width
    upper = shift + half_width
    passed = (lower <= mu) & (mu <= upper)
    return WeylReport(
        epsilon=float(epsilon),
        branch=branch,
        mu=np.array(mu),
        lower=lower,
        upper=upper,
        passed=passed,
    )


def spectrum_to_csv(spec: Spectrum, fp) -> None:
    """Write the spectrum CSV: header "index,lambda", ascending, 1-based."""
    fp.write("index,lambda\n")
    for i, lam in enumerate(spec.lambdas, start=1):
        fp.write(f"{i},{format(float(lam), '.17g')}\n")


def residual_norm_tridiagonal(b: np.ndarray, lam: float) -> float:
    """||T w - i*lam*w|| for the skew tridiagonal T with off-diagonals b.

    w is obtained by one step of inverse iteration on the similar real
    symmetric tridiagonal matrix, refined once; used by tests to verify the
    eigenvalue residual contract without forming eigenvectors of the full
    matrix.  The orthogonal reduction preserves residual norms up to
    machine-level factors.
    """
    n = b.shape[0] + 1
    e = np.abs(b)
    t = np.zeros((n, n))
    idx = np.arange(n - 1)
    t[idx, idx + 1] = e
    t[idx + 1, idx] = e
    scale = float(np.max(e)) if n > 1 else 1.0
    shift = lam + 1e-10 * max(scale, 1.0)
    a = t - shift * np.eye(n)
    rng = np.random.default_rng(12345)
    w = rng.standard_normal(n)
    for _ in range(2):
        try:
            w = np.linalg.solve(a, w)
        except np.linalg.LinAlgError:  # exactly singular: lam is exact
            return 0.0
        w = w / np.linalg.norm(w)
    return float(np.linalg.norm(t @ w - lam * w))


__all__ = [
    "ESD",
    "Spectrum",
    "WeylReport",
    "eig_skew",
    "esd",
    "residual_norm_tridiagonal",
    "skew_tridiagonalize",
    "spectral_radius",
    "spectrum_to_csv",
    "weyl_bounds",
    "y_spectrum_closed_form",
]
