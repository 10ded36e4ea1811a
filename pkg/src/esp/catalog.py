"""Closed-form potential families.

Four rationally extended potentials whose bound states are written with X1
exceptional polynomials, and the four standard potentials they extend. Each
family is a :class:`PotentialModel` subclass; the module-level functions
(:func:`build_model`, :func:`potential_value`, ...) are the public surface.

Units are natural (hbar = 2m = 1): the radial equation reads
``psi'' + (D-1)/r psi' + (E - V) psi = 0`` with any centrifugal term
included in ``V``.

Two of the extended families have a rational part that depends on the level
index through per-level parameters; for those, ``V(r; m)`` is a different
potential for every ``m`` and ``E(m)`` is an eigenvalue of ``V(.; m)``.
"""

import enum
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import eop
from .errors import ParameterError, SingularityError
from .specfun import jacobi, laguerre, jacobi_poly, laguerre_poly
from .xform import (
    EndpointTag,
    Interval,
    TransformSpec,
    exponential_map,
    jacobi_characteristics,
    laguerre_characteristics,
    make_spec,
    quadratic_map,
    sine_map,
    tanh_map,
)

__all__ = [
    "FamilyId",
    "Reading",
    "ExtOscillatorParams",
    "ExtMorseParams",
    "ExtScarfParams",
    "ExtRosenMorseParams",
    "StdOscillatorParams",
    "StdMorseParams",
    "StdScarfParams",
    "StdRosenMorseParams",
    "PotentialModel",
    "JacobiChannelCoefficients",
    "build_model",
    "potential_value",
    "wavefunction_value",
    "norm_const",
    "level_range",
    "partner",
    "partner_params",
    "std_model_spectrum",
    "PARAMS_BY_FAMILY",
]

ORIGIN_OFFSET = 1e-6


class FamilyId(enum.Enum):
    EXT_OSCILLATOR = "ext-oscillator"
    EXT_MORSE = "ext-morse"
    EXT_SCARF1 = "ext-scarf1"
    EXT_ROSEN_MORSE = "ext-rosen-morse"
    STD_OSCILLATOR = "std-oscillator"
    STD_MORSE = "std-morse"
    STD_SCARF1 = "std-scarf1"
    STD_ROSEN_MORSE = "std-rosen-morse"

    @property
    def extended(self) -> bool:
        return self.value.startswith("ext-")


class Reading(enum.Enum):
    """Which form of a rational extension to use.

    ``AS_PRINTED`` is the alternative closed form kept for comparison.
    ``CORRECTED`` is the form the transformation engine regenerates.
    """

    AS_PRINTED = "as_printed"
    CORRECTED = "corrected"


# Parameter records ----------------------------------------------------------


@dataclass(frozen=True)
class ExtOscillatorParams:
    omega: float
    ell: int = 0
    dim: int = 3


@dataclass(frozen=True)
class ExtMorseParams:
    p2: float
    A: float
    dim: int = 1
    reading: Reading = Reading.CORRECTED


@dataclass(frozen=True)
class ExtScarfParams:
    A: float
    B: float
    p: float = 1.0
    dim: int = 1


@dataclass(frozen=True)
class ExtRosenMorseParams:
    P1: float
    Q: float
    dim: int = 1
    reading: Reading = Reading.CORRECTED


@dataclass(frozen=True)
class StdOscillatorParams:
    omega: float
    ell: int = 0
    dim: int = 3


@dataclass(frozen=True)
class StdMorseParams:
    A: float
    B: float
    a: float = 1.0


@dataclass(frozen=True)
class StdScarfParams:
    a: float
    b: float
    alpha: float = 1.0


@dataclass(frozen=True)
class StdRosenMorseParams:
    A: float
    B: float
    a: float = 1.0


PARAMS_BY_FAMILY = {
    FamilyId.EXT_OSCILLATOR: ExtOscillatorParams,
    FamilyId.EXT_MORSE: ExtMorseParams,
    FamilyId.EXT_SCARF1: ExtScarfParams,
    FamilyId.EXT_ROSEN_MORSE: ExtRosenMorseParams,
    FamilyId.STD_OSCILLATOR: StdOscillatorParams,
    FamilyId.STD_MORSE: StdMorseParams,
    FamilyId.STD_SCARF1: StdScarfParams,
    FamilyId.STD_ROSEN_MORSE: StdRosenMorseParams,
}


def params_to_dict(params) -> dict:
    out = asdict(params)
    for k, v in out.items():
        if isinstance(v, enum.Enum):
            out[k] = v.value
    return out


# Helpers --------------------------------------------------------------------


def _is_int(x):
    return float(x) == int(x)


def _require(problems):
    if problems:
        raise ParameterError("invalid parameters: " + "; ".join(problems))


def _log_one_minus_tanh(r):
    return math.log(2.0) - np.logaddexp(0.0, 2.0 * r)


def _log_one_plus_tanh(r):
    return math.log(2.0) - np.logaddexp(0.0, -2.0 * r)


@dataclass(frozen=True)
class JacobiChannelCoefficients:
    """Coefficients of the Jacobi-type change-of-variable identity.

    With ``den = (beta - alpha) g - (beta + alpha)``, the bracket
    ``g'^2/4 [M^2 + 2M' - 4J]`` equals ``g'^2`` times::

        (C g + D1)/(1 - g^2) + (E g + F)/(1 - g^2)^2 + G/den + K/den^2
    """

    C: float
    D1: float
    E_coef: float
    F: float
    G: float
    K: float

    @classmethod
    def from_params(cls, alpha, beta, n):
        a, b = alpha, beta
        if a * b == 0:
            raise ParameterError("coefficients need alpha * beta != 0")
        return cls(
            C=-0.5 * (b - a) * (b + a) / (b * a),
            D1=-n * n
            - (b + a - 1) * n
            - 0.25 * ((b + a) ** 2 - 2 * (b + a) - 4)
            - (b * b + a * a) / (2 * b * a),
            E_coef=-0.5 * (b - a) * (b + a),
            F=0.5 * (b * b + a * a - 2),
            G=-((b - a) ** 2) * (b + a) / (2 * b * a),
            K=2 * (b - a) ** 2,
        )

    def bracket(self, alpha, beta, g):
        den = (beta - alpha) * g - (beta + alpha)
        s = 1 - g * g
        return (
            (self.C * g + self.D1) / s
            + (self.E_coef * g + self.F) / (s * s)
            + self.G / den
            + self.K / (den * den)
        )


# Models ---------------------------------------------------------------------


@dataclass(frozen=True)
class PotentialModel:
    """One family instance. Subclasses supply the closed forms.

    ``V(r, m) = V1 + V2 + centrifugal_extra``; ``m`` matters only when
    ``level_dependent_potential`` is true.
    """

    id: FamilyId
    params: object
    domain: Interval
    dim: int
    level_dependent_potential: bool = False
    nodes_claimed: bool = False
    m_max: Optional[int] = None

    # closed forms
    def V1(self, r, m=0):
        raise NotImplementedError

    def V2(self, r, m=0):
        return 0.0 * np.asarray(r, dtype=float)

    def centrifugal_extra(self, r):
        k = (self.dim - 1) * (self.dim - 3)
        return 0.0 * np.asarray(r, dtype=float) if k == 0 else -k / (4 * np.square(r))

    def V(self, r, m=0):
        return self.V1(r, m) + self.V2(r, m) + self.centrifugal_extra(r)

    def energy(self, m):
        raise NotImplementedError

    def norm_const(self, m):
        raise NotImplementedError

    def _psi_unnormalized(self, m, r):
        raise NotImplementedError

    def psi(self, m, r):
        self.check_level(m)
        return self.norm_const(m) * self._psi_unnormalized(m, r)

    def transform(self, m) -> Optional[TransformSpec]:
        return None

    # numerics support
    def edge_powers(self, m):
        """Exponents s with u ~ distance^s at singular finite ends (None elsewhere)."""
        return None, None

    def numeric_window(self, levels):
        raise NotImplementedError

    def sample_window(self):
        """Interior sub-interval for pointwise identity checks."""
        lo, hi = self.numeric_window(1)
        pad = 0.05 * (hi - lo)
        return lo + pad, hi - pad

    def radial_weight(self, r):
        return np.ones_like(r) if self.dim == 1 else np.asarray(r) ** (self.dim - 1)

    def check_level(self, m):
        if int(m) != m or m < 0:
            raise ParameterError(f"level index must be a non-negative integer, got {m}")
        if self.m_max is not None and m > self.m_max:
            raise ParameterError(
                f"level m={m} is not admissible for {self.id.value} (m_max={self.m_max})"
            )

    def check_interior(self, r):
        if not self.domain.contains(r):
            raise ParameterError(
                f"r outside the open domain ({self.domain.lo}, {self.domain.hi})"
            )


@dataclass(frozen=True)
class ExtOscillator(PotentialModel):
    @property
    def alpha(self):
        return self.params.ell + (self.dim - 2) / 2

    def V1(self, r, m=0):
        w, ell, D = self.params.omega, self.params.ell, self.dim
        r = np.asarray(r, dtype=float)
        return 0.25 * w * w * r * r + ell * (ell + D - 2) / (r * r)

    def V2(self, r, m=0):
        w, a = self.params.omega, self.alpha
        s = w * np.square(r) + 2 * a
        return 4 * w / s - 16 * w * a / (s * s)

    def centrifugal_extra(self, r):
        # already folded into V1 through the choice of alpha
        return 0.0 * np.asarray(r, dtype=float)

    def energy(self, m):
        p = self.params
        return p.omega * (2 * m + p.ell + self.dim / 2)

    def norm_const(self, m):
        self.check_level(m)
        w, a = self.params.omega, self.alpha
        log_n2 = (
            math.log(4 * w) + a * math.log(w / 2) - math.log(eop.x1_laguerre_norm(m + 1, a))
        )
        return math.exp(0.5 * log_n2)

    def _psi_unnormalized(self, m, r):
        w, ell, a = self.params.omega, self.params.ell, self.alpha
        r = np.asarray(r, dtype=float)
        z = 0.5 * w * r * r
        return (
            r**ell / (w * r * r + 2 * a) * np.exp(-0.5 * z)
            * eop.x1_laguerre(m + 1, a, z)
        )

    def transform(self, m):
        a = self.alpha
        return make_spec(
            quadratic_map(self.params.omega / 2),
            laguerre_characteristics(a, m + 1),
            self.domain,
        )

    def edge_powers(self, m):
        return self.alpha + 0.5, None

    def numeric_window(self, levels):
        e_top = self.energy(max(levels - 1, 0))
        r_turn = 2 * math.sqrt(e_top) / self.params.omega
        return ORIGIN_OFFSET, max(12.0, 3 * r_turn)


@dataclass(frozen=True)
class ExtMorse(PotentialModel):
    def alpha_m(self, m):
        return 2 * self.params.A - 2 * m - 1

    def B_m(self, m):
        return -(self.params.A + 1.0 / self.alpha_m(m))

    def V1(self, r, m=0):
        p = self.params.p2
        e1 = np.exp(-p * np.asarray(r, dtype=float))
        return p * p * (self.B_m(m) * e1 + 0.25 * e1 * e1)

    def V2(self, r, m=0):
        p, A = self.params.p2, self.params.A
        a, B = self.alpha_m(m), self.B_m(m)
        e1 = np.exp(-p * np.asarray(r, dtype=float))
        e2 = e1 * e1
        if self.params.reading is Reading.AS_PRINTED:
            first = (B - A) * e2 / (e2 + a)
        else:
            first = -(A + B) * e2 / (e1 + a)
        return p * p * (first + 2 * e2 / (e1 + a) ** 2)

    def energy(self, m):
        return -0.25 * self.alpha_m(m) ** 2 * self.params.p2**2

    def norm_const(self, m):
        self.check_level(m)
        a = self.alpha_m(m)
        P = eop.x1_laguerre_poly(m + 1, a)
        integral = eop.gamma_rational_moment(P * P, a, a)
        return math.sqrt(self.params.p2 / integral)

    def _psi_unnormalized(self, m, r):
        p, a = self.params.p2, self.alpha_m(m)
        r = np.asarray(r, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            g = np.exp(-p * r)
            out = np.exp(-0.5 * a * p * r - 0.5 * g) / (g + a) * eop.x1_laguerre(m + 1, a, g)
            out = np.where(np.isfinite(g), out, 0.0)
        out = np.nan_to_num(out, nan=0.0, posinf=0.0, neginf=0.0)
        if self.dim != 1:
            out = out * r ** (-(self.dim - 1) / 2)
        return out if out.ndim else float(out)

    def transform(self, m):
        return make_spec(
            exponential_map(self.params.p2),
            laguerre_characteristics(self.alpha_m(m), m + 1),
            self.domain,
        )

    def numeric_window(self, levels):
        p = self.params.p2
        return -8.0 / p, 25.0 / p


@dataclass(frozen=True)
class ExtScarf(PotentialModel):
    @property
    def jacobi_ab(self):
        A, B = self.params.A, self.params.B
        return A - B - 0.5, A + B - 0.5

    def _den(self, r):
        A, B, p = self.params.A, self.params.B, self.params.p
        d = 2 * A - 1 - 2 * B * np.sin(p * np.asarray(r, dtype=float))
        if np.any(np.abs(d) < 1e-12):
            raise SingularityError("evaluation at the pole of the rational extension")
        return d

    def V1(self, r, m=0):
        A, B, p = self.params.A, self.params.B, self.params.p
        x = p * np.asarray(r, dtype=float)
        sec = 1.0 / np.cos(x)
        return p * p * ((A * (A - 1) + B * B) * sec * sec - B * (2 * A - 1) * sec * np.tan(x))

    def V2(self, r, m=0):
        A, B, p = self.params.A, self.params.B, self.params.p
        d = self._den(r)
        return p * p * (2 * (2 * A - 1) / d - 2 * ((2 * A - 1) ** 2 - 4 * B * B) / (d * d))

    def energy(self, m):
        return self.params.p**2 * (m + self.params.A) ** 2

    def norm_const(self, m):
        self.check_level(m)
        a, b = self.jacobi_ab
        return math.sqrt(4 * self.params.B**2 / eop.x1_jacobi_norm(m + 1, a, b))

    def _psi_unnormalized(self, m, r):
        A, B, p = self.params.A, self.params.B, self.params.p
        a, b = self.jacobi_ab
        r = np.asarray(r, dtype=float)
        s = np.sin(p * r)
        out = (
            math.sqrt(p)
            * np.clip(1 - s, 0, None) ** (0.5 * (A - B))
            * (1 + s) ** (0.5 * (A + B))
            / self._den(r)
            * eop.x1_jacobi(m + 1, a, b, s)
        )
        if self.dim != 1:
            out = out * r ** (-(self.dim - 1) / 2)
        return out

    def transform(self, m):
        a, b = self.jacobi_ab
        return make_spec(sine_map(self.params.p), jacobi_characteristics(a, b, m + 1), self.domain)

    def edge_powers(self, m):
        A, B = self.params.A, self.params.B
        return A + B, A - B

    def numeric_window(self, levels):
        half = 0.5 * math.pi / self.params.p
        lo = -half if self.dim == 1 else 0.0
        return lo + ORIGIN_OFFSET, half - ORIGIN_OFFSET


@dataclass(frozen=True)
class ExtRosenMorse(PotentialModel):
    def k_m(self, m):
        return self.params.P1 - m - 0.5

    def q_m(self, m):
        return self.params.Q / (2 * self.k_m(m))

    def lam_delta(self, m):
        k, q = self.k_m(m), self.q_m(m)
        return k + 0.5 - q, k + 0.5 + q

    def jacobi_ab(self, m):
        k, q = self.k_m(m), self.q_m(m)
        return k - q, k + q

    def Q1(self, m):
        return (2 * self.k_m(m)) ** 2 / self.params.Q

    def V1(self, r, m=0):
        P1, Q = self.params.P1, self.params.Q
        r = np.asarray(r, dtype=float)
        shift = 1.25 if self.params.reading is Reading.AS_PRINTED else 0.25
        return -(P1 * P1 - shift) / np.cosh(r) ** 2 - Q * np.tanh(r)

    def V2(self, r, m=0):
        r = np.asarray(r, dtype=float)
        Q1 = self.Q1(m)
        t = np.tanh(r)
        # divide through by cosh^2 to stay finite for large |r|
        den = (2 * t - Q1) ** 2
        sech2 = 1.0 / np.cosh(r) ** 2
        if self.params.reading is Reading.AS_PRINTED:
            num = 2 - t * t
        else:
            num = 2 - Q1 * t
        return 4 * num * sech2 / den

    def energy(self, m):
        k = self.k_m(m)
        return -k * k - self.params.Q**2 / (4 * k * k)

    def norm_const(self, m):
        self.check_level(m)
        a, b = self.jacobi_ab(m)
        P = eop.x1_jacobi_poly(m + 1, a, b)
        integral = eop.beta_rational_moment(P * P, a, b, self.k_m(m) / self.q_m(m))
        return 2 * abs(self.q_m(m)) / math.sqrt(integral)

    def _psi_unnormalized(self, m, r):
        r = np.asarray(r, dtype=float)
        k, q = self.k_m(m), self.q_m(m)
        lam, dl = self.lam_delta(m)
        a, b = self.jacobi_ab(m)
        t = np.tanh(r)
        log_amp = (
            0.5 * (np.logaddexp(r, -r) - math.log(2.0))
            + 0.5 * lam * _log_one_minus_tanh(r)
            + 0.5 * dl * _log_one_plus_tanh(r)
        )
        out = np.exp(log_amp) / (2 * q * t - 2 * k) * eop.x1_jacobi(m + 1, a, b, t)
        if self.dim != 1:
            out = out * r ** (-(self.dim - 1) / 2)
        return out

    def transform(self, m):
        a, b = self.jacobi_ab(m)
        return make_spec(tanh_map(1.0), jacobi_characteristics(a, b, m + 1), self.domain)

    def numeric_window(self, levels):
        rates = []
        for m in range(levels):
            rates.extend(self.jacobi_ab(m))
        half = max(20.0, 16.0 / min(rates)) if rates else 20.0
        return -half, half

    def sample_window(self):
        # 1 - tanh^2 loses all digits beyond |r| ~ 18
        return -6.0, 6.0


@dataclass(frozen=True)
class StdOscillator(PotentialModel):
    @property
    def alpha(self):
        return self.params.ell + (self.dim - 2) / 2

    def V1(self, r, m=0):
        w, ell, D = self.params.omega, self.params.ell, self.dim
        r = np.asarray(r, dtype=float)
        return 0.25 * w * w * r * r + ell * (ell + D - 2) / (r * r)

    def centrifugal_extra(self, r):
        return 0.0 * np.asarray(r, dtype=float)

    def energy(self, n):
        p = self.params
        return p.omega * (2 * n + p.ell + self.dim / 2)

    def norm_const(self, n):
        self.check_level(n)
        w, a = self.params.omega, self.alpha
        log_n2 = math.log(w) + a * math.log(w / 2) + math.lgamma(n + 1) - math.lgamma(n + a + 1)
        return math.exp(0.5 * log_n2)

    def _psi_unnormalized(self, n, r):
        w, ell, a = self.params.omega, self.params.ell, self.alpha
        r = np.asarray(r, dtype=float)
        z = 0.5 * w * r * r
        return r**ell * np.exp(-0.5 * z) * laguerre(n, a, z)

    def edge_powers(self, n):
        return self.alpha + 0.5, None

    def numeric_window(self, levels):
        e_top = self.energy(max(levels - 1, 0))
        return ORIGIN_OFFSET, max(12.0, 6 * math.sqrt(e_top) / self.params.omega)


@dataclass(frozen=True)
class StdMorse(PotentialModel):
    def V1(self, r, m=0):
        A, B, a = self.params.A, self.params.B, self.params.a
        e1 = np.exp(-a * np.asarray(r, dtype=float))
        return -B * (2 * A + a) * e1 + B * B * e1 * e1

    def energy(self, n):
        return -((self.params.A - n * self.params.a) ** 2)

    def norm_const(self, n):
        self.check_level(n)
        s = self.params.A / self.params.a
        lam = 2 * s - 2 * n
        return math.sqrt(
            self.params.a * lam * math.exp(math.lgamma(n + 1) - math.lgamma(2 * s - n + 1))
        )

    def _psi_unnormalized(self, n, r):
        A, B, a = self.params.A, self.params.B, self.params.a
        s = A / a
        r = np.asarray(r, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            logg = math.log(2 * B / a) - a * r
            g = np.exp(logg)
            out = np.exp((s - n) * logg - 0.5 * g) * laguerre(n, 2 * s - 2 * n, g)
        out = np.nan_to_num(np.where(np.isfinite(g), out, 0.0), nan=0.0)
        return out if out.ndim else float(out)

    def numeric_window(self, levels):
        a = self.params.a
        return -8.0 / a, 25.0 / a


@dataclass(frozen=True)
class StdScarf(PotentialModel):
    @property
    def gamma_delta(self):
        a, b, al = self.params.a, self.params.b, self.params.alpha
        return (a - b) / al, (a + b) / al

    def V1(self, r, m=0):
        a, b, al = self.params.a, self.params.b, self.params.alpha
        x = al * np.asarray(r, dtype=float)
        sec = 1.0 / np.cos(x)
        return (a * a + b * b - a * al) * sec * sec - b * (2 * a - al) * np.tan(x) * sec

    def energy(self, n):
        return (n * self.params.alpha + self.params.a) ** 2

    def norm_const(self, n):
        self.check_level(n)
        g, d = self.gamma_delta
        return math.sqrt(self.params.alpha / eop.jacobi_norm_constant(n, g - 0.5, d - 0.5))

    def _psi_unnormalized(self, n, r):
        g, d = self.gamma_delta
        s = np.sin(self.params.alpha * np.asarray(r, dtype=float))
        return (
            np.clip(1 - s, 0, None) ** (0.5 * g) * (1 + s) ** (0.5 * d)
            * jacobi(n, g - 0.5, d - 0.5, s)
        )

    def edge_powers(self, n):
        g, d = self.gamma_delta
        return d, g

    def numeric_window(self, levels):
        half = 0.5 * math.pi / self.params.alpha
        return -half + ORIGIN_OFFSET, half - ORIGIN_OFFSET


@dataclass(frozen=True)
class StdRosenMorse(PotentialModel):
    def exponents(self, n):
        s = self.params.A / self.params.a
        kappa = s - n
        bt = self.params.B / self.params.a**2
        return kappa + bt / kappa, kappa - bt / kappa

    def V1(self, r, m=0):
        A, B, a = self.params.A, self.params.B, self.params.a
        x = a * np.asarray(r, dtype=float)
        return -A * (A + a) / np.cosh(x) ** 2 + 2 * B * np.tanh(x)

    def energy(self, n):
        A, B, a = self.params.A, self.params.B, self.params.a
        k = A - n * a
        return -k * k - B * B / (k * k)

    def norm_const(self, n):
        self.check_level(n)
        s1, s2 = self.exponents(n)
        P = jacobi_poly(n, s1, s2)
        return math.sqrt(self.params.a / eop.beta_moment(P * P, s1, s2))

    def _psi_unnormalized(self, n, r):
        s1, s2 = self.exponents(n)
        x = self.params.a * np.asarray(r, dtype=float)
        amp = np.exp(0.5 * s1 * _log_one_minus_tanh(x) + 0.5 * s2 * _log_one_plus_tanh(x))
        return amp * jacobi(n, s1, s2, np.tanh(x))

    def numeric_window(self, levels):
        rates = []
        for n in range(levels):
            rates.extend(self.exponents(n))
        half = max(20.0, 16.0 / min(rates)) if rates else 20.0
        return -half / self.params.a, half / self.params.a


# Construction ---------------------------------------------------------------


def _radial_domain(dim, regular_origin):
    lo_tag = EndpointTag.REGULAR if regular_origin else EndpointTag.SINGULAR
    return Interval(0.0, math.inf, lo_tag, EndpointTag.INFINITE)


def _line_or_half(dim):
    if dim == 1:
        return Interval(-math.inf, math.inf, EndpointTag.INFINITE, EndpointTag.INFINITE)
    return Interval(0.0, math.inf, EndpointTag.SINGULAR, EndpointTag.INFINITE)


def _check_dim(dim, problems, minimum=1):
    if not _is_int(dim) or dim < minimum:
        problems.append(f"dim must be an integer >= {minimum} (got {dim})")


def _coerce(fid, params):
    cls = PARAMS_BY_FAMILY[fid]
    if isinstance(params, dict):
        kwargs = dict(params)
        if "reading" in kwargs and not isinstance(kwargs["reading"], Reading):
            try:
                kwargs["reading"] = Reading(kwargs["reading"])
            except ValueError:
                choices = ", ".join(r.value for r in Reading)
                raise ParameterError(
                    f"reading must be one of {choices}, got {kwargs['reading']!r}"
                ) from None
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ParameterError(f"bad parameters for {fid.value}: {exc}") from None
    if not isinstance(params, cls):
        raise ParameterError(f"{fid.value} expects {cls.__name__}")
    return params


def build_model(fid, params) -> PotentialModel:
    """Validate ``params`` for family ``fid`` and return the model.

    ``params`` may be the family's parameter dataclass or a plain dict.
    Every violated constraint is listed in the raised ``ParameterError``.
    """
    fid = FamilyId(fid)
    p = _coerce(fid, params)
    problems = []

    if fid in (FamilyId.EXT_OSCILLATOR, FamilyId.STD_OSCILLATOR):
        if not p.omega > 0:
            problems.append("omega must be > 0")
        if not _is_int(p.ell) or p.ell < 0:
            problems.append("ell must be an integer >= 0")
        _check_dim(p.dim, problems, minimum=2)
        _require(problems)
        alpha = p.ell + (p.dim - 2) / 2
        if fid is FamilyId.EXT_OSCILLATOR and not alpha > 0:
            _require([f"alpha = ell + (dim-2)/2 = {alpha} must be > 0 (ell=0, dim=2 excluded)"])
        c = p.ell * (p.ell + p.dim - 2)
        cls = ExtOscillator if fid is FamilyId.EXT_OSCILLATOR else StdOscillator
        return cls(fid, p, _radial_domain(p.dim, c == 0 and p.dim in (1, 3)), int(p.dim),
                   nodes_claimed=True)

    if fid is FamilyId.EXT_MORSE:
        if not p.p2 > 0:
            problems.append("p2 must be > 0")
        if not p.A > 0.5:
            problems.append("A must exceed 1/2 so that level m=0 exists")
        _check_dim(p.dim, problems)
        _require(problems)
        m_max = math.ceil(p.A - 0.5) - 1
        return ExtMorse(fid, p, _line_or_half(p.dim), int(p.dim),
                        level_dependent_potential=True, m_max=m_max)

    if fid is FamilyId.EXT_SCARF1:
        a, b = p.A - p.B - 0.5, p.A + p.B - 0.5
        if not a > -1:
            problems.append(f"A - B - 1/2 = {a} must be > -1")
        if not b > -1:
            problems.append(f"A + B - 1/2 = {b} must be > -1")
        if p.B == 0:
            problems.append("B must be nonzero")
        if not abs(2 * p.B) < abs(2 * p.A - 1):
            problems.append("pole-freedom needs |2B| < |2A - 1|")
        if not p.p > 0:
            problems.append("p must be > 0")
        _check_dim(p.dim, problems)
        _require(problems)
        half = 0.5 * math.pi / p.p
        dom = Interval(-half if p.dim == 1 else 0.0, half,
                       EndpointTag.SINGULAR, EndpointTag.SINGULAR)
        return ExtScarf(fid, p, dom, int(p.dim), nodes_claimed=True)

    if fid is FamilyId.EXT_ROSEN_MORSE:
        if p.Q == 0:
            problems.append("Q must be nonzero")
        _check_dim(p.dim, problems)
        _require(problems)
        m_max = -1
        while True:
            k = p.P1 - (m_max + 1) - 0.5
            if k > 0 and k * k > abs(p.Q) / 2:
                m_max += 1
            else:
                break
        if m_max < 0:
            _require(["no admissible level: need (P1 - 1/2)^2 > |Q|/2 with P1 > 1/2"])
        return ExtRosenMorse(fid, p, _line_or_half(p.dim), int(p.dim),
                             level_dependent_potential=True, m_max=m_max)

    if fid is FamilyId.STD_MORSE:
        if not p.a > 0:
            problems.append("a must be > 0")
        if not p.A > 0:
            problems.append("A must be > 0")
        if not p.B > 0:
            problems.append("B must be > 0")
        _require(problems)
        m_max = math.ceil(p.A / p.a) - 1
        return StdMorse(fid, p, _line_or_half(1), 1, m_max=m_max)

    if fid is FamilyId.STD_SCARF1:
        if not p.alpha > 0:
            problems.append("alpha must be > 0")
        else:
            g, d = (p.a - p.b) / p.alpha, (p.a + p.b) / p.alpha
            if not (g > 0.5 and d > 0.5):
                problems.append("need (a - b)/alpha > 1/2 and (a + b)/alpha > 1/2")
        _require(problems)
        half = 0.5 * math.pi / p.alpha
        dom = Interval(-half, half, EndpointTag.SINGULAR, EndpointTag.SINGULAR)
        return StdScarf(fid, p, dom, 1, nodes_claimed=True)

    if fid is FamilyId.STD_ROSEN_MORSE:
        if not p.a > 0:
            problems.append("a must be > 0")
        _require(problems)
        m_max = -1
        while True:
            kappa = p.A / p.a - (m_max + 1)
            if kappa > 0 and kappa * kappa > abs(p.B) / p.a**2:
                m_max += 1
            else:
                break
        if m_max < 0:
            _require(["no bound state: need (A/a)^2 > |B|/a^2 with A > 0"])
        return StdRosenMorse(fid, p, _line_or_half(1), 1, m_max=m_max)

    raise ParameterError(f"unknown family {fid}")  # pragma: no cover


# Module-level operations ------------------------------------------------------


def potential_value(model: PotentialModel, m, r):
    """V(r) for level ``m`` (``m`` ignored for level-independent families)."""
    model.check_interior(r)
    if model.level_dependent_potential:
        model.check_level(m)
    return model.V(r, m)


def wavefunction_value(model: PotentialModel, m, r):
    """Normalized wavefunction of level ``m`` at ``r``."""
    model.check_interior(r)
    return model.psi(m, r)


def norm_const(model: PotentialModel, m):
    return model.norm_const(m)


def level_range(model: PotentialModel):
    """``(0, m_max)``; ``m_max`` is None when every level is admissible."""
    return 0, model.m_max


_PARTNERS = {
    FamilyId.EXT_OSCILLATOR: FamilyId.STD_OSCILLATOR,
    FamilyId.EXT_MORSE: FamilyId.STD_MORSE,
    FamilyId.EXT_SCARF1: FamilyId.STD_SCARF1,
    FamilyId.EXT_ROSEN_MORSE: FamilyId.STD_ROSEN_MORSE,
}
_PARTNERS.update({v: k for k, v in list(_PARTNERS.items())})


def partner(fid) -> FamilyId:
    return _PARTNERS[FamilyId(fid)]


def partner_params(model: PotentialModel):
    """Parameters of the standard potential that the extension is built on.

    Defined where the unextended part is a single standard potential: the
    oscillator, Scarf I, and Rosen-Morse (corrected reading) families.
    """
    p = model.params
    if model.id is FamilyId.EXT_OSCILLATOR:
        return StdOscillatorParams(omega=p.omega, ell=p.ell, dim=p.dim)
    if model.id is FamilyId.EXT_SCARF1:
        return StdScarfParams(a=p.p * p.A, b=p.p * p.B, alpha=p.p)
    if model.id is FamilyId.EXT_ROSEN_MORSE and p.reading is Reading.CORRECTED:
        return StdRosenMorseParams(A=p.P1 - 0.5, B=-p.Q / 2, a=1.0)
    raise ParameterError(f"no single standard partner for {model.id.value}")


def std_model_spectrum(fid, params, n):
    """Closed-form energy of level ``n`` of a standard family."""
    fid = FamilyId(fid)
    if fid.extended:
        raise ParameterError("std_model_spectrum takes a standard family")
    model = build_model(fid, params)
    model.check_level(n)
    return model.energy(n)


ADMISSIBILITY = {
    FamilyId.EXT_OSCILLATOR: "omega > 0; ell integer >= 0; dim integer >= 2 with "
    "alpha = ell + (dim-2)/2 > 0; every m >= 0 admissible",
    FamilyId.EXT_MORSE: "p2 > 0; A > 1/2; level m admissible iff m < A - 1/2",
    FamilyId.EXT_SCARF1: "A - B - 1/2 > -1; A + B - 1/2 > -1; B != 0; |2B| < |2A - 1|; "
    "every m >= 0 admissible",
    FamilyId.EXT_ROSEN_MORSE: "Q != 0; level m admissible iff k = P1 - m - 1/2 > 0 "
    "and k^2 > |Q|/2",
    FamilyId.STD_OSCILLATOR: "omega > 0; ell integer >= 0; dim integer >= 2; every n admissible",
    FamilyId.STD_MORSE: "A, B, a > 0; level n admissible iff n < A/a",
    FamilyId.STD_SCARF1: "alpha > 0; (a - b)/alpha > 1/2; (a + b)/alpha > 1/2; "
    "every n admissible",
    FamilyId.STD_ROSEN_MORSE: "a > 0; level n admissible iff kappa = A/a - n > 0 "
    "and kappa^2 > |B|/a^2",
}
