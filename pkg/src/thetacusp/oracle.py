"""Numerical ground truth: classical theta series, the weight-1/2 slash and
Fourier extraction on a horocycle.

Everything here is double precision and independent of the metaplectic
machinery.  The image sigma*z is written as r + w' with r rational (the cusp
a/c, or b/d when c = 0) so that the large phases n^2 r are reduced exactly in
integer arithmetic before exponentiation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .characters import DirichletCharacter
from .metaplectic import Mat2Q

TAIL_EXPONENT = 36.0  # exp(-36) ~ 2e-16
CHUNK = 256


class HeightError(ValueError):
    """Raised when the truncation budget cannot reach the requested height."""


class NonPeriodicError(ValueError):
    pass


@dataclass(frozen=True)
class SeriesSpec:
    character: DirichletCharacter
    n_max: int
    Y: float
    K: int

    @classmethod
    def plan(cls, character: DirichletCharacter, sigma: Mat2Q, nu_max: int) -> "SeriesSpec":
        """Parameters for extracting frequencies 0..nu_max at the cusp of sigma."""
        Y = min(0.5, 1.0 / (2 * math.pi * (nu_max + 1)))
        K = 1 << max(6, math.ceil(math.log2(max(8 * (nu_max + 1), 30.0 / (2 * math.pi * Y)))))
        n_max = truncation_for_height(min_image_height(sigma, Y))
        return cls(character, n_max, Y, K)


def truncation_for_height(y: float) -> int:
    return int(math.ceil(math.sqrt(TAIL_EXPONENT / (2 * math.pi * y)))) + 2


def min_image_height(sigma: Mat2Q, Y: float, reach: float = 1.5) -> float:
    """Smallest Im(sigma z) for Im z = Y and |x + d/c| <= reach.

    The default reach covers the centred period and its translate by one,
    which the periodicity checks visit.
    """
    c = float(sigma.c)
    if c == 0:
        return Y * float(sigma.a) ** 2
    return Y / (c * c * (reach * reach + Y * Y))


def horocycle_start(sigma: Mat2Q) -> float:
    """Left end of the period centred on the pole -d/c."""
    if sigma.c == 0:
        return 0.0
    return float(-sigma.d / sigma.c) - 0.5


def principal_sqrt(j: np.ndarray) -> np.ndarray:
    """Square root with argument in [-pi/2, pi/2); sqrt(-t) = -i sqrt(t)."""
    j = np.asarray(j, dtype=complex)
    out = np.sqrt(j)
    neg = (j.imag == 0) & (j.real < 0)
    if np.any(neg):
        out = np.where(neg, -1j * np.sqrt(np.abs(j.real)), out)
    return out


def _theta_split(character: DirichletCharacter, r: Fraction, wprime: np.ndarray, n_max: int) -> np.ndarray:
    """sum_{n<=n_max} chi(n) e(n^2 r) exp(2 pi i n^2 w') for each w'."""
    wprime = np.asarray(wprime, dtype=complex)
    need = truncation_for_height(float(np.min(wprime.imag)))
    if need > n_max:
        raise HeightError(f"height {np.min(wprime.imag):.3e} needs {need} terms, budget is {n_max}")
    q = character.modulus
    chi = character.complex_table()
    per_point = np.array([truncation_for_height(y) for y in wprime.imag])
    total = np.zeros(wprime.shape, dtype=complex)
    num, den = r.numerator % r.denominator, r.denominator
    for start in range(1, need + 1, CHUNK):
        active = per_point >= start
        if not np.any(active):
            break
        n = np.arange(start, min(start + CHUNK, need + 1), dtype=np.int64)
        coef = chi[n % q]
        nz = coef != 0
        if not np.any(nz):
            continue
        n, coef = n[nz], coef[nz]
        phase = ((n * n) % den) * num % den
        coef = coef * np.exp(2j * np.pi * phase / den)
        n2 = (n * n).astype(float)
        wa = wprime[active]
        total[active] += np.exp(2j * np.pi * np.outer(wa, n2)) @ coef
    return total


def theta_eval(spec: SeriesSpec, z: complex | np.ndarray) -> complex | np.ndarray:
    """theta_chi(z) = sum_{n>=1} chi(n) e^{2 pi i n^2 z}, tail below 1e-14."""
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag <= 0):
        raise ValueError("theta_eval needs Im z > 0")
    scalar = z.ndim == 0
    zz = np.atleast_1d(z)
    # exact integer period: reduce Re z mod 1 and keep the fractional part in w'
    shift = np.floor(zz.real)
    out = _theta_split(spec.character, Fraction(0), zz - shift, spec.n_max)
    return complex(out[0]) if scalar else out


def _image_split(sigma: Mat2Q, z: np.ndarray) -> tuple[Fraction, np.ndarray, np.ndarray]:
    """(r, w', j) with sigma z = r + w' and j = cz + d."""
    a, b, c, d = sigma.a, sigma.b, sigma.c, sigma.d
    if c == 0:
        j = np.full(z.shape, float(d), dtype=complex)
        return b / d, float(a / d) * z, j
    j = float(c) * z + float(d)
    return a / c, -1.0 / (float(c) * j), j


def hol_slash_half(spec: SeriesSpec, sigma: Mat2Q, z: complex | np.ndarray) -> complex | np.ndarray:
    """(theta | sigma)(z) = j(sigma, z)^(-1/2) theta(sigma z)."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    zz = np.atleast_1d(z)
    r, wprime, j = _image_split(sigma, zz)
    out = _theta_split(spec.character, r, wprime, spec.n_max) / principal_sqrt(j)
    return complex(out[0]) if scalar else out


@dataclass
class Extraction:
    frequencies: list
    values: list[complex]
    error: float


def _horocycle(spec: SeriesSpec, sigma: Mat2Q) -> tuple[float, np.ndarray, np.ndarray]:
    x0 = horocycle_start(sigma)
    xs = x0 + np.arange(spec.K) / spec.K
    return x0, xs, hol_slash_half(spec, sigma, xs + 1j * spec.Y)


def check_periodic(spec: SeriesSpec, sigma: Mat2Q, points: int = 3, tol: float = 1e-8) -> float:
    x0 = horocycle_start(sigma)
    xs = x0 + (np.arange(points) + 0.37) / points
    z = xs + 1j * spec.Y
    f0 = hol_slash_half(spec, sigma, z)
    f1 = hol_slash_half(spec, sigma, z + 1)
    dev = float(np.max(np.abs(f1 - f0)) / max(1.0, float(np.max(np.abs(f0)))))
    if dev > tol:
        raise NonPeriodicError(f"slashed function is not 1-periodic (deviation {dev:.2e})")
    return dev


def fourier_extract(spec: SeriesSpec, sigma: Mat2Q, frequencies: Sequence) -> Extraction:
    """A(sigma, nu) = e^{2 pi nu Y} * mean_k f(x_k + iY) e^{-2 pi i nu x_k}."""
    frequencies = list(frequencies)
    if not frequencies:
        return Extraction([], [], 0.0)
    check_periodic(spec, sigma)
    x0, xs, f = _horocycle(spec, sigma)
    K, Y = spec.K, spec.Y
    spectrum = None
    values = []
    for nu in frequencies:
        nu_f = float(nu)
        if Fraction(nu).denominator == 1 and 0 <= int(nu) < K:
            if spectrum is None:
                spectrum = np.fft.fft(f) / K
            raw = spectrum[int(nu)] * np.exp(-2j * np.pi * nu_f * x0)
        else:
            raw = np.mean(f * np.exp(-2j * np.pi * nu_f * xs))
        values.append(complex(raw * np.exp(2 * np.pi * nu_f * Y)))
    nu_top = max(float(nu) for nu in frequencies)
    amp = math.exp(2 * math.pi * nu_top * Y)
    alias = 4.0 * math.exp(-2 * math.pi * K * Y) / (1 - math.exp(-2 * math.pi * K * Y))
    rounding = 1e-15 * float(np.max(np.abs(f))) * math.sqrt(K) + 1e-15
    return Extraction(frequencies, values, amp * (alias + rounding))


@dataclass
class ScanResult:
    kappa: Fraction
    residual: float
    residuals: dict


def scan_function(f: Callable[[np.ndarray], np.ndarray], x0: float, Y: float, Q: int, points: int = 64) -> ScanResult:
    """Best kappa = k/Q with f(z + 1) = e(kappa) f(z) on a horocycle segment."""
    if not 1 <= Q <= 24:
        raise ValueError("Q must lie in 1..24")
    z = x0 + (np.arange(points) + 0.5) / points + 1j * Y
    f0 = np.asarray(f(z))
    f1 = np.asarray(f(z + 1))
    energy = float(np.sum(np.abs(f0) ** 2))
    residuals = {}
    for k in range(Q):
        kappa = Fraction(k, Q)
        if kappa in residuals:
            continue
        rot = np.exp(2j * np.pi * float(kappa))
        residuals[kappa] = float(np.sum(np.abs(f1 - rot * f0) ** 2)) / energy
    best = min(residuals, key=lambda k: (residuals[k], k))
    return ScanResult(best, residuals[best], residuals)


def cusp_parameter_scan(spec: SeriesSpec, sigma: Mat2Q, Q: int, points: int = 64) -> ScanResult:
    Y = 0.25
    n_max = truncation_for_height(min_image_height(sigma, Y))
    local = SeriesSpec(spec.character, max(spec.n_max, n_max), Y, spec.K)
    return scan_function(lambda z: hol_slash_half(local, sigma, z), horocycle_start(sigma), Y, Q, points)


def real_fourier_transform(phi: Callable[[np.ndarray], np.ndarray], a: float, xs: np.ndarray,
                           half_width: float = 12.0, steps: int = 4801) -> np.ndarray:
    """|2a|^(1/2) * integral phi(y) e^{2 pi i 2 a x y} dy by the trapezoid rule."""
    y = np.linspace(-half_width, half_width, steps)
    vals = phi(y)
    kernel = np.exp(2j * np.pi * 2 * a * np.outer(xs, y))
    return math.sqrt(abs(2 * a)) * np.trapezoid(kernel * vals, y, axis=1)


def _j_at_preimage(g: Mat2Q, w: complex) -> complex:
    # j(g, g^-1 w) = 1 / (a - c w), free of the cancellation in c z + d
    return 1.0 / (float(g.a) - float(g.c) * w)


def composition_defect(spec: SeriesSpec, s1: Mat2Q, s2: Mat2Q, w: complex = 0.1 + 0.5j) -> complex:
    """((theta|s1)|s2)(z) / (theta|s1 s2)(z) at the point z = (s1 s2)^-1 w.

    The automorphy factors are recovered from w through the inverse matrices,
    so the ratio is accurate even when z sits very close to the real axis.
    """
    th = theta_eval(spec, w)
    s12 = s1 @ s2
    j12 = _j_at_preimage(s12, w)
    j1 = _j_at_preimage(s1, w)  # j(s1, s2 z)
    j2 = j12 / j1  # j(s2, z) by the cocycle relation of j
    roots = principal_sqrt(np.array([j12, j1, j2]))
    lhs = th / roots[1] / roots[2]
    rhs = th / roots[0]
    return complex(lhs / rhs)
