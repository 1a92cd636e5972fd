"""Joint dynamics of a spin-1/2 and a classical field mode under dispersive coupling.

The coupling chi * a'a * sigma_z generates a shear flow on the product phase
space sphere x plane: writing the field amplitude as alpha = r exp(-i phi),

    r(t)         = r(0)
    phi(t)       = phi(0) + sqrt(3) chi t cos(theta)      (back-reaction)
    theta(t)     = theta(0)
    phi_atom(t)  = phi_atom(0) + 2 chi r^2 t

and every distribution is transported along it.  Initial field states are
either a sharp amplitude (Dirac delta in r and phi) or an isotropic Gaussian;
delta states are always collapsed analytically, never sampled.

Expectation values use the phase-space symbols of the supported operators
(sigma_z -> sqrt(3) cos(theta), the lowering operator ->
(sqrt(3)/2) sin(theta) exp(-i phi_atom), a -> alpha).  With that table the
moments of the equal superposition come out at exactly half the scale of the
conventional spin coherences (the symbol average of the lowering operator is
(s_x - i s_y)/2 at t = 0); SIGMA_MINUS_SCALE records this constant.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union

import numpy as np
from scipy.special import ive, spherical_jn

from .quadrature import (
    BlochPoint,
    DEFAULT_SPEC,
    IntegrationSpec,
    integrate_interval,
)
from .su2_wigner import SQRT3, SphereFunction, SpinHalfState, spin_wigner
from .cartesian_wigner import MarginalDistribution, PhaseSpaceFunction

__all__ = [
    "SIGMA_MINUS_SCALE",
    "AnalyticPathRequiredError",
    "DeltaAmplitude",
    "GaussianAmplitude",
    "FieldState",
    "HybridState",
    "PhaseDistribution",
    "JointDistribution",
    "ObservableSymbol",
    "flow_map",
    "joint_wigner",
    "field_marginal",
    "atom_marginal",
    "phase_distribution_delta",
    "phase_distribution_gaussian",
    "phase_moments",
    "quadrature_distribution",
    "hybrid_expectation",
    "correlation",
    "semiclassical_standard",
    "semiclassical_expectation",
    "atomic_pfunction",
]

TWO_PI = 2.0 * math.pi

# Ratio between the phase-space average of the lowering-operator symbol and
# the conventional unit-magnitude coherence of the equal superposition.  It is
# time independent and real; verified as such by the acceptance suite.
SIGMA_MINUS_SCALE = 0.5


class AnalyticPathRequiredError(ValueError):
    """Raised when a pointwise density is requested for a delta-amplitude field."""


@dataclass(frozen=True)
class DeltaAmplitude:
    """Field with a perfectly defined amplitude r0 * exp(-i phi0).

    No legitimate quantum state has this distribution, so instances are
    flagged nonquantum from the start.
    """

    r0: float
    phi0: float = 0.0

    def __post_init__(self) -> None:
        if self.r0 < 0.0:
            raise ValueError("r0 must be non-negative")

    @property
    def nonquantum(self) -> bool:
        return True

    @property
    def mean_amplitude(self) -> complex:
        return self.r0 * cmath.exp(-1j * self.phi0)

    @property
    def mean_intensity(self) -> float:
        return self.r0 * self.r0


@dataclass(frozen=True)
class GaussianAmplitude:
    """Isotropic Gaussian field distribution centred at the real amplitude r0.

    sigma = 1 mimics a coherent state; sigma < 1 is narrower than any quantum
    state allows.
    """

    r0: float
    sigma: float

    def __post_init__(self) -> None:
        if self.r0 < 0.0:
            raise ValueError("r0 must be non-negative")
        if self.sigma <= 0.0:
            raise ValueError("sigma must be positive")

    @property
    def nonquantum(self) -> bool:
        return self.sigma < 1.0

    @property
    def mean_amplitude(self) -> complex:
        return complex(self.r0)

    @property
    def mean_intensity(self) -> float:
        # Second moment of the Gaussian: r0^2 plus the width term.
        return self.r0 * self.r0 + 0.5 * self.sigma * self.sigma

    def polar_density(self, r: float, phi: float) -> float:
        """Density at alpha = r exp(-i phi)."""
        s2 = self.sigma * self.sigma
        d2 = r * r + self.r0 * self.r0 - 2.0 * r * self.r0 * math.cos(phi)
        return (2.0 / (math.pi * s2)) * math.exp(-2.0 * d2 / s2)

    def radial_bounds(self, cutoff: float) -> tuple[float, float]:
        return max(0.0, self.r0 - cutoff * self.sigma), self.r0 + cutoff * self.sigma


FieldState = Union[DeltaAmplitude, GaussianAmplitude]


@dataclass(frozen=True)
class HybridState:
    """Product initial state plus coupling chi and elapsed time t."""

    atom: SpinHalfState
    field: FieldState
    chi: float
    t: float

    def __post_init__(self) -> None:
        if self.t < 0.0:
            raise ValueError("t must be non-negative")

    @property
    def kappa(self) -> float:
        """Accumulated field-phase spread sqrt(3) * chi * t."""
        return SQRT3 * self.chi * self.t


@dataclass(frozen=True)
class PhaseDistribution:
    """Density of the field phase.

    Delta-field results live on the unwrapped line with compact support;
    Gaussian-field results are 2pi-periodic.  ``delta_at`` marks the t = 0
    degenerate case where the phase is still perfectly defined.
    """

    evaluate: Callable[[float], float] | None
    support: tuple[float, float]
    periodic: bool = False
    delta_at: float | None = None


@dataclass(frozen=True)
class JointDistribution:
    """Evaluable joint density on (Bloch sphere) x (plane)."""

    evaluate: Callable[[BlochPoint, complex], float]
    label: str = ""


def flow_map(
    r: float,
    phi_field: float,
    theta: float,
    phi_atom: float,
    chi: float,
    t: float,
) -> tuple[float, float, float, float]:
    """Advance one phase-space point by time t.

    r and theta are conserved; the field phase shifts by sqrt(3) chi t
    cos(theta) and the atomic azimuth by 2 chi r^2 t.
    """
    if r < 0.0:
        raise ValueError("r must be non-negative")
    return (
        r,
        phi_field + SQRT3 * chi * t * math.cos(theta),
        theta,
        phi_atom + 2.0 * chi * r * r * t,
    )


def _polar_of(alpha: complex) -> tuple[float, float]:
    # alpha = r exp(-i phi): the stored phase is minus the argument.
    alpha = complex(alpha)
    return abs(alpha), -cmath.phase(alpha) if alpha != 0 else 0.0


def joint_wigner(state: HybridState) -> JointDistribution:
    """Joint density W_t(Omega, alpha), both arguments pulled back by the flow.

    Only Gaussian fields have a pointwise joint density; delta fields must go
    through the dedicated closed-form operations.
    """
    field = state.field
    if isinstance(field, DeltaAmplitude):
        raise AnalyticPathRequiredError(
            "delta-amplitude fields have no pointwise joint density; "
            "use the closed-form phase/moment operations"
        )
    atom_w = spin_wigner(state.atom)
    chi, t, kappa = state.chi, state.t, state.kappa

    def w(point: BlochPoint, alpha: complex) -> float:
        r, phi_f = _polar_of(alpha)
        shifted = BlochPoint(point.theta, point.phi - 2.0 * chi * r * r * t)
        return atom_w.evaluate(shifted) * field.polar_density(
            r, phi_f - kappa * math.cos(point.theta)
        )

    return JointDistribution(w, label=f"joint(t={state.t:.6g})")


def _spike_segments(
    lo: float, hi: float, centers: list[float], widths: list[float]
) -> list[tuple[float, float]]:
    """Split [lo, hi] so each narrow feature straddles panel boundaries."""
    points = {lo, hi}
    for c, w in zip(centers, widths):
        for p in (c - 8.0 * w, c, c + 8.0 * w):
            if lo < p < hi:
                points.add(p)
    ordered = sorted(points)
    return list(zip(ordered[:-1], ordered[1:]))


def _sum_segments(f, segments, spec) -> float:
    return math.fsum(integrate_interval(f, a, b, spec).value for a, b in segments)


def field_marginal(
    state: HybridState, spec: IntegrationSpec = DEFAULT_SPEC
) -> PhaseSpaceFunction:
    """Field distribution after tracing out the atom.

    Pointwise evaluation integrates the polar angle of the spin numerically;
    the atomic azimuth has already been integrated in closed form (only the
    cos(theta)-weighted part of the spin distribution survives).
    """
    field = state.field
    if isinstance(field, DeltaAmplitude):
        raise AnalyticPathRequiredError(
            "delta-amplitude fields keep a singular marginal; "
            "use phase_distribution_delta for their phase law"
        )
    sz = state.atom.s[2]
    kappa = state.kappa
    spike_width = None
    if kappa > 0.0 and field.r0 > 0.0:
        spike_width = field.sigma / (kappa * max(field.r0, field.sigma) * math.sqrt(2.0))

    def w(alpha: complex) -> float:
        r, phi_f = _polar_of(alpha)

        def integrand(u: float) -> float:
            return 0.5 * (1.0 + SQRT3 * sz * u) * field.polar_density(
                r, phi_f - kappa * u
            )

        if kappa == 0.0:
            return integrate_interval(integrand, -1.0, 1.0, spec).value
        n_lo = math.ceil((phi_f - kappa) / TWO_PI)
        n_hi = math.floor((phi_f + kappa) / TWO_PI)
        centers = [(phi_f - TWO_PI * n) / kappa for n in range(n_lo, n_hi + 1)]
        widths = [max(spike_width or 1.0, 1e-9)] * len(centers)
        return _sum_segments(integrand, _spike_segments(-1.0, 1.0, centers, widths), spec)

    return PhaseSpaceFunction(
        w,
        label=f"field-marginal(t={state.t:.6g})",
        decay_scale=field.r0 + field.sigma,
        decay_center=0j,
    )


def _radial_weight(field: GaussianAmplitude, r: float) -> float:
    """Azimuth-integrated field density: C(r) with Integral[r C(r) dr] = 1."""
    s2 = field.sigma * field.sigma
    x = 4.0 * r * field.r0 / s2
    d = r - field.r0
    return (4.0 / s2) * math.exp(-2.0 * d * d / s2) * float(ive(0, x))


def _dephasing_factor(
    field: FieldState, chi: float, t: float, spec: IntegrationSpec
) -> complex:
    """Average of exp(-2i chi r^2 t) over the field's intensity distribution."""
    if isinstance(field, DeltaAmplitude):
        return cmath.exp(-2j * chi * field.r0 * field.r0 * t)
    lo, hi = field.radial_bounds(spec.radial_cutoff_sigmas)
    res = integrate_interval(
        lambda r: r * _radial_weight(field, r) * cmath.exp(-2j * chi * r * r * t),
        lo,
        hi,
        spec,
    )
    return res.value


def _rotated_atom(atom: SpinHalfState, factor: complex) -> SpinHalfState:
    """Transverse Bloch components multiplied by the (|factor| <= 1) dephasing."""
    sx, sy, sz = atom.s
    trans = complex(sx, sy) * factor.conjugate()
    return SpinHalfState((trans.real, trans.imag, sz))


def atom_marginal(
    state: HybridState, spec: IntegrationSpec = DEFAULT_SPEC
) -> SphereFunction:
    """Atomic distribution after tracing out the field.

    The field azimuth integrates away exactly, leaving the transverse Bloch
    components multiplied by the intensity-averaged phase factor; for a delta
    field this is a rigid rotation of the azimuth by 2 chi r0^2 t.
    """
    factor = _dephasing_factor(state.field, state.chi, state.t, spec)
    return spin_wigner(_rotated_atom(state.atom, factor))


def phase_distribution_delta(atom: SpinHalfState, chi_t: float) -> PhaseDistribution:
    """Field-phase density for a sharp-amplitude field.

    The support is [-sqrt(3) chi t, sqrt(3) chi t] and the density is the
    linear ramp (1 + s_z phi / (chi t)) / (2 sqrt(3) chi t); it only depends
    on the population imbalance s_z.  For the ground state it dips negative
    on the outer part of the support.
    """
    if chi_t < 0.0:
        raise ValueError("chi_t must be non-negative")
    if chi_t == 0.0:
        return PhaseDistribution(None, (0.0, 0.0), delta_at=0.0)
    kappa = SQRT3 * chi_t
    sz = atom.s[2]
    norm = 1.0 / (2.0 * kappa)

    def density(phi: float) -> float:
        if abs(phi) > kappa:
            return 0.0
        return norm * (1.0 + sz * phi / chi_t)

    return PhaseDistribution(density, (-kappa, kappa), periodic=False)


def phase_moments(
    dist: PhaseDistribution, spec: IntegrationSpec = DEFAULT_SPEC
) -> tuple[float, float]:
    """Mean and variance of a compact-support phase density by quadrature."""
    if dist.evaluate is None:
        return dist.delta_at or 0.0, 0.0
    lo, hi = dist.support
    mean = integrate_interval(lambda p: p * dist.evaluate(p), lo, hi, spec).value
    second = integrate_interval(lambda p: p * p * dist.evaluate(p), lo, hi, spec).value
    return mean, second - mean * mean


def phase_distribution_gaussian(
    atom: SpinHalfState,
    field: GaussianAmplitude,
    chi_t: float,
    spec: IntegrationSpec = DEFAULT_SPEC,
) -> PhaseDistribution:
    """Field-phase density for a Gaussian field, 2pi-periodic in phi.

    Evaluation is a double quadrature over the radial coordinate and
    u = cos(theta); narrow angular features (width ~ sigma / (kappa r0)) are
    bracketed explicitly so the panels cannot step over them.
    """
    if chi_t < 0.0:
        raise ValueError("chi_t must be non-negative")
    if not isinstance(field, GaussianAmplitude):
        raise AnalyticPathRequiredError("gaussian phase law needs a Gaussian field")
    sz = atom.s[2]
    kappa = SQRT3 * chi_t
    r_lo, r_hi = field.radial_bounds(spec.radial_cutoff_sigmas)
    spike = None
    if kappa > 0.0 and field.r0 > 0.0:
        spike = field.sigma / (kappa * max(field.r0, field.sigma) * math.sqrt(2.0))
    inner = spec

    def density(phi: float) -> float:
        def outer(u: float) -> float:
            shift = phi - kappa * u
            radial = integrate_interval(
                lambda r: r * field.polar_density(r, shift), r_lo, r_hi, inner
            ).value
            return 0.5 * (1.0 + SQRT3 * sz * u) * radial

        if kappa == 0.0:
            return integrate_interval(outer, -1.0, 1.0, spec).value
        n_lo = math.ceil((phi - kappa) / TWO_PI)
        n_hi = math.floor((phi + kappa) / TWO_PI)
        centers = [(phi - TWO_PI * n) / kappa for n in range(n_lo, n_hi + 1)]
        widths = [max(spike or 1.0, 1e-9)] * len(centers)
        return _sum_segments(outer, _spike_segments(-1.0, 1.0, centers, widths), spec)

    return PhaseDistribution(density, (-math.pi, math.pi), periodic=True)


def quadrature_distribution(
    atom: SpinHalfState,
    field: GaussianAmplitude,
    chi_t: float,
    spec: IntegrationSpec = DEFAULT_SPEC,
) -> MarginalDistribution:
    """Density of the imaginary-part quadrature of the evolved field.

    p(y) = (2 pi sigma^2)^(-1/2) * Integral[du (1 + sqrt(3) s_z u)
           exp(-2 (y + r0 sin(kappa u))^2 / sigma^2)],

    i.e. the x-integral of the evolved field distribution carried out in
    closed form (a rigid rotation keeps the Gaussian isotropic).
    """
    if chi_t < 0.0:
        raise ValueError("chi_t must be non-negative")
    if not isinstance(field, GaussianAmplitude):
        raise AnalyticPathRequiredError("quadrature law needs a Gaussian field")
    sz = atom.s[2]
    kappa = SQRT3 * chi_t
    s2 = field.sigma * field.sigma
    pref = 1.0 / math.sqrt(2.0 * math.pi * s2)
    r0 = field.r0

    def density(y: float) -> float:
        def integrand(u: float) -> float:
            d = y + r0 * math.sin(kappa * u)
            return (1.0 + SQRT3 * sz * u) * math.exp(-2.0 * d * d / s2)

        if kappa == 0.0 or r0 == 0.0:
            return pref * integrate_interval(integrand, -1.0, 1.0, spec).value
        centers: list[float] = []
        widths: list[float] = []
        if abs(y) <= r0:
            base = math.asin(-y / r0)
            for root in (base, math.pi - base):
                n_lo = math.ceil((-kappa - root) / TWO_PI)
                n_hi = math.floor((kappa - root) / TWO_PI)
                for n in range(n_lo, n_hi + 1):
                    u_star = (root + TWO_PI * n) / kappa
                    if -1.0 <= u_star <= 1.0:
                        slope = abs(r0 * kappa * math.cos(kappa * u_star))
                        centers.append(u_star)
                        widths.append(min(0.5, field.sigma / (2.0 * slope + 1e-12)))
        segs = _spike_segments(-1.0, 1.0, centers, widths)
        return pref * _sum_segments(integrand, segs, spec)

    return MarginalDistribution(
        density, center=0.0, scale=r0 + field.sigma, axis_angle=math.pi / 2
    )


class ObservableSymbol(Enum):
    """Supported operators and their phase-space symbols.

    Each member is a product of an atomic factor and a field factor; the
    symbol of the product is the product of the sector symbols.
    """

    A = ("one", "a")
    ADAG = ("one", "adag")
    SIGMA_Z = ("sz", "one")
    SIGMA_MINUS = ("sm", "one")
    SIGMA_MINUS_ADAG = ("sm", "adag")
    SIGMA_Z_A = ("sz", "a")

    def __init__(self, atomic_kind: str, field_kind: str):
        self.atomic_kind = atomic_kind
        self.field_kind = field_kind

    def atomic_symbol(self, point: BlochPoint) -> complex:
        if self.atomic_kind == "one":
            return 1.0 + 0j
        if self.atomic_kind == "sz":
            return SQRT3 * math.cos(point.theta) + 0j
        return 0.5 * SQRT3 * math.sin(point.theta) * cmath.exp(-1j * point.phi)

    def field_symbol(self, alpha: complex) -> complex:
        if self.field_kind == "one":
            return 1.0 + 0j
        if self.field_kind == "a":
            return complex(alpha)
        return complex(alpha).conjugate()

    def symbol(self, point: BlochPoint, alpha: complex) -> complex:
        return self.atomic_symbol(point) * self.field_symbol(alpha)


def _bessel_j012(kappa: float) -> tuple[float, float, float]:
    # Spherical Bessel j0, j1, j2 with explicit parity for negative argument.
    x = abs(kappa)
    j0 = float(spherical_jn(0, x))
    j1 = float(spherical_jn(1, x))
    j2 = float(spherical_jn(2, x))
    if kappa < 0.0:
        j1 = -j1
    return j0, j1, j2


def _field_factors(
    field: FieldState, chi: float, t: float
) -> tuple[complex, complex, complex]:
    """Closed field-sector integrals: mean amplitude, the intensity-phase
    average F0 = <exp(-2i chi r^2 t)>, and F1 = <conj(alpha) exp(-2i chi r^2 t)>.
    """
    if isinstance(field, DeltaAmplitude):
        f0 = cmath.exp(-2j * chi * field.r0 * field.r0 * t)
        return field.mean_amplitude, f0, field.r0 * cmath.exp(1j * field.phi0) * f0
    denom = 1.0 + 1j * chi * field.sigma * field.sigma * t
    core = cmath.exp(-2j * chi * field.r0 * field.r0 * t / denom)
    return complex(field.r0), core / denom, field.r0 * core / (denom * denom)


def _expectation_closed(state: HybridState, obs: ObservableSymbol) -> complex:
    sx, sy, sz = state.atom.s
    kappa = state.kappa
    j0, j1, j2 = _bessel_j012(kappa)
    mean_alpha, f0, f1 = _field_factors(state.field, state.chi, state.t)
    if obs is ObservableSymbol.A:
        return mean_alpha * (j0 - 1j * SQRT3 * sz * j1)
    if obs is ObservableSymbol.ADAG:
        return mean_alpha.conjugate() * (j0 + 1j * SQRT3 * sz * j1)
    if obs is ObservableSymbol.SIGMA_Z:
        return complex(sz)
    if obs is ObservableSymbol.SIGMA_MINUS:
        return 0.5 * complex(sx, -sy) * f0
    if obs is ObservableSymbol.SIGMA_MINUS_ADAG:
        return 0.5 * complex(sx, -sy) * (j0 + j2) * f1
    if obs is ObservableSymbol.SIGMA_Z_A:
        return mean_alpha * (-1j * SQRT3 * j1 + sz * (j0 - 2.0 * j2))
    raise ValueError(f"unsupported symbol {obs}")


def _n_phi(x_max: float) -> int:
    # Periodic trapezoid resolution for exp(x cos(phi))-type profiles; the
    # Fourier tail of exp(x cos phi) dies once the harmonic index passes ~x.
    for n, bound in ((64, 20.0), (128, 80.0), (256, 320.0), (512, 1300.0), (1024, 5200.0)):
        if x_max <= bound:
            return n
    return 2048


def _atom_azimuthal(s: tuple[float, float, float], u: float, m: int, n: int = 32) -> complex:
    """Trapezoid of W_atom(theta(u), phi) exp(-i m phi) over one period."""
    sx, sy, sz = s
    st = math.sqrt(max(0.0, 1.0 - u * u))
    grid = np.arange(n) * (TWO_PI / n)
    w = (1.0 + SQRT3 * (sx * st * np.cos(grid) + sy * st * np.sin(grid) + sz * u)) / (
        4.0 * math.pi
    )
    return complex((w * np.exp(-1j * m * grid)).sum() * (TWO_PI / n))


def _field_azimuthal_table(field: GaussianAmplitude, m: int, n: int):
    s2 = field.sigma * field.sigma
    grid = np.arange(n) * (TWO_PI / n)
    cosg = np.cos(grid)
    phase = np.exp(-1j * m * grid)

    def row(r: float) -> complex:
        w = (2.0 / (math.pi * s2)) * np.exp(
            -2.0 * (r * r + field.r0 * field.r0 - 2.0 * r * field.r0 * cosg) / s2
        )
        return complex((w * phase).sum() * (TWO_PI / n))

    return row


def _expectation_quadrature(
    state: HybridState, obs: ObservableSymbol, spec: IntegrationSpec
) -> complex:
    """Direct quadrature of the symbol against the transported joint density.

    Azimuthal integrals are fixed-order periodic trapezoids (spectrally exact
    for these profiles); the remaining coordinates use adaptive panels with
    the radial integral nested inside the polar one.
    """
    s = state.atom.s
    chi, t, kappa = state.chi, state.t, state.kappa
    m_a = 1 if obs.atomic_kind == "sm" else 0
    m_f = {"one": 0, "a": 1, "adag": -1}[obs.field_kind]

    def g_theta(u: float) -> float:
        if obs.atomic_kind == "one":
            return 1.0
        if obs.atomic_kind == "sz":
            return SQRT3 * u
        return 0.5 * SQRT3 * math.sqrt(max(0.0, 1.0 - u * u))

    field = state.field
    if isinstance(field, DeltaAmplitude):
        h = field.r0 if m_f != 0 else 1.0
        const = h * cmath.exp(-1j * m_f * field.phi0) * cmath.exp(
            -2j * m_a * chi * field.r0 * field.r0 * t
        )

        def f(u: float) -> complex:
            return (
                _atom_azimuthal(s, u, m_a)
                * g_theta(u)
                * cmath.exp(-1j * m_f * kappa * u)
            )

        return const * integrate_interval(f, -1.0, 1.0, spec).value

    r_lo, r_hi = field.radial_bounds(spec.radial_cutoff_sigmas)
    n_phi = _n_phi(4.0 * r_hi * field.r0 / (field.sigma * field.sigma))
    field_row = _field_azimuthal_table(field, m_f, n_phi)

    def outer(u: float) -> complex:
        def radial(r: float) -> complex:
            h = r if m_f != 0 else 1.0
            return r * h * field_row(r) * cmath.exp(-2j * m_a * chi * r * r * t)

        inner = integrate_interval(radial, r_lo, r_hi, spec).value
        return (
            _atom_azimuthal(s, u, m_a)
            * g_theta(u)
            * cmath.exp(-1j * m_f * kappa * u)
            * inner
        )

    return integrate_interval(outer, -1.0, 1.0, spec).value


def hybrid_expectation(
    state: HybridState,
    obs: ObservableSymbol,
    spec: IntegrationSpec = DEFAULT_SPEC,
    method: str = "closed",
) -> complex:
    """Phase-space average of the observable's symbol at time t.

    method="closed" uses the analytically reduced forms (delta fields collapse
    exactly, Gaussian fields reduce to elementary Gaussian integrals);
    method="quadrature" integrates the transported joint density directly and
    exists as the independent cross-check of the closed route.
    """
    if not isinstance(obs, ObservableSymbol):
        raise ValueError(f"unsupported observable {obs!r}")
    if method == "closed":
        return _expectation_closed(state, obs)
    if method == "quadrature":
        return _expectation_quadrature(state, obs, spec)
    raise ValueError(f"unknown method {method!r}")


_PRODUCT_SYMBOLS = {
    ("sz", "a"): ObservableSymbol.SIGMA_Z_A,
    ("sm", "adag"): ObservableSymbol.SIGMA_MINUS_ADAG,
}


def _product_symbol(A: ObservableSymbol, B: ObservableSymbol) -> ObservableSymbol:
    if A.field_kind != "one" or A.atomic_kind == "one":
        raise ValueError("first factor must be a purely atomic observable")
    if B.atomic_kind != "one" or B.field_kind == "one":
        raise ValueError("second factor must be a purely field observable")
    try:
        return _PRODUCT_SYMBOLS[(A.atomic_kind, B.field_kind)]
    except KeyError:
        raise ValueError(f"no product symbol for ({A.name}, {B.name})") from None


def correlation(
    state: HybridState,
    A: ObservableSymbol,
    B: ObservableSymbol,
    spec: IntegrationSpec = DEFAULT_SPEC,
    method: str = "closed",
) -> complex:
    """Cross-sector correlation <AB> - <A><B>.

    A must act on the atom and B on the field; same-sector products would
    need operator-ordering rules that are out of scope here.
    """
    AB = _product_symbol(A, B)
    return (
        hybrid_expectation(state, AB, spec, method)
        - hybrid_expectation(state, A, spec, method)
        * hybrid_expectation(state, B, spec, method)
    )


def semiclassical_standard(
    atom: SpinHalfState,
    field: FieldState,
    chi: float,
    t: float,
    mean_field: bool = False,
    spec: IntegrationSpec = DEFAULT_SPEC,
    mean_intensity: float | None = None,
) -> SphereFunction:
    """Atomic distribution when the field is frozen (no back-reaction).

    mean_field=False averages the atomic azimuth shift over the full field
    intensity distribution; mean_field=True replaces it by a rigid rotation
    at the mean intensity (override with ``mean_intensity`` if desired).
    """
    if mean_field:
        intensity = field.mean_intensity if mean_intensity is None else mean_intensity
        factor = cmath.exp(-2j * chi * intensity * t)
    else:
        factor = _dephasing_factor(field, chi, t, spec)
    return spin_wigner(_rotated_atom(atom, factor))


def semiclassical_expectation(
    atom: SpinHalfState,
    field: FieldState,
    obs: ObservableSymbol,
    chi: float,
    t: float,
    mean_field: bool = False,
    mean_intensity: float | None = None,
) -> complex:
    """Moments of the back-reaction-free comparison models.

    The field keeps its initial distribution, so field symbols average to
    their initial values; atomic coherences still dephase through the field's
    intensity spread (or rotate rigidly in the mean-field variant).
    """
    sx, sy, sz = atom.s
    mean_alpha = field.mean_amplitude
    if mean_field:
        intensity = field.mean_intensity if mean_intensity is None else mean_intensity
        f0 = cmath.exp(-2j * chi * intensity * t)
        f1 = mean_alpha.conjugate() * f0
    else:
        _, f0, f1 = _field_factors(field, chi, t)
    if obs is ObservableSymbol.A:
        return mean_alpha
    if obs is ObservableSymbol.ADAG:
        return mean_alpha.conjugate()
    if obs is ObservableSymbol.SIGMA_Z:
        return complex(sz)
    if obs is ObservableSymbol.SIGMA_MINUS:
        return 0.5 * complex(sx, -sy) * f0
    if obs is ObservableSymbol.SIGMA_MINUS_ADAG:
        return 0.5 * complex(sx, -sy) * f1
    if obs is ObservableSymbol.SIGMA_Z_A:
        return complex(sz) * mean_alpha
    raise ValueError(f"unsupported symbol {obs}")


def atomic_pfunction(atom: SpinHalfState, chi_t: float) -> PhaseDistribution:
    """Weight P(delta) of the field's expansion over rotated sharp amplitudes.

    Identical to the sharp-field phase law with the rotation angle delta in
    place of the phase: the azimuth-integrated atomic distribution, pushed
    through delta = sqrt(3) chi t cos(theta).
    """
    return phase_distribution_delta(atom, chi_t)
