"""Second-order Taylor approximations of the UF moments.

The mean and variance of W = X1/(X1+X2) have no closed form; they are
approximated by expanding g(x1, x2) = [x1/(x1+x2)]^p to second order
around the marginal means and taking expectations, which leaves only
the marginal means, the marginal variances and the covariance of the
bivariate vector as inputs.

The Frechet margins supply those inputs in closed form via the gamma
function: mean sigma_i Gamma(1-1/alpha) for alpha > 1 and variance
sigma_i^2 [Gamma(1-2/alpha) - Gamma(1-1/alpha)^2] for alpha > 2. The
covariance has no closed form here, only a Cauchy-Schwarz bound, so it
must be supplied by the caller (typically from
:func:`unitfrechet.bivariate.estimate_cov`); it is never defaulted
silently.

A quality warning is emitted when a margin's coefficient of variation
exceeds one half: the heavy Frechet tails make the second-order
expansion unreliable there. The variance approximation in particular
degrades well before the mean does; see the package README for
measured error levels.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from scipy import special

from .bivariate import BivParams
from .errors import DomainError, ParameterError

__all__ = [
    "ApproximationWarning",
    "MomentInputs",
    "frechet_moments",
    "approx_moment",
    "approx_var",
]


class ApproximationWarning(UserWarning):
    """The Taylor expansion is being used outside its comfort zone."""


@dataclass(frozen=True)
class MomentInputs:
    """Marginal means, variances and covariance feeding the expansion.

    ``var1``, ``var2`` and ``cov`` may be None when unavailable (the
    variance formulas require alpha > 2; the covariance always comes
    from the caller). The approximation operations require a fully
    populated instance.
    """

    mu1: float
    mu2: float
    var1: Optional[float] = None
    var2: Optional[float] = None
    cov: Optional[float] = None

    def __post_init__(self) -> None:
        for name in ("mu1", "mu2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ParameterError(f"{name} must be finite and > 0, got {v!r}")
        for name in ("var1", "var2"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v >= 0.0):
                raise ParameterError(f"{name} must be finite and >= 0, got {v!r}")
        if self.cov is not None:
            if not math.isfinite(self.cov):
                raise ParameterError(f"cov must be finite, got {self.cov!r}")
            if self.var1 is not None and self.var2 is not None:
                bound = math.sqrt(self.var1 * self.var2)
                if abs(self.cov) > bound * (1.0 + 1e-12) + 1e-300:
                    raise ParameterError(
                        f"cov={self.cov!r} violates the Cauchy-Schwarz bound "
                        f"{bound!r}"
                    )

    @property
    def complete(self) -> bool:
        return self.var1 is not None and self.var2 is not None and self.cov is not None

    def with_cov(self, cov: float) -> "MomentInputs":
        """Copy of these inputs with the covariance filled in."""
        return replace(self, cov=float(cov))


def frechet_moments(p: BivParams | Sequence[float]) -> MomentInputs:
    """Marginal Frechet means and variances; covariance left unset.

    Raises DomainError for alpha <= 1 (the mean diverges). For
    1 < alpha <= 2 only the means are returned and the variances stay
    None, since Gamma(1 - 2/alpha) diverges at alpha = 2 and the second
    moment does not exist below it.
    """
    p = BivParams.of(p)
    if p.alpha <= 1.0:
        raise DomainError(
            f"the Frechet mean requires alpha > 1, got alpha={p.alpha!r}"
        )
    g1 = float(special.gamma(1.0 - 1.0 / p.alpha))
    mu1 = p.sigma1 * g1
    mu2 = p.sigma2 * g1
    if p.alpha <= 2.0:
        return MomentInputs(mu1=mu1, mu2=mu2)
    g2 = float(special.gamma(1.0 - 2.0 / p.alpha))
    spread = g2 - g1 * g1
    return MomentInputs(
        mu1=mu1,
        mu2=mu2,
        var1=p.sigma1**2 * spread,
        var2=p.sigma2**2 * spread,
    )


def _require_complete(m: MomentInputs) -> None:
    if not m.complete:
        missing = [
            name for name in ("var1", "var2", "cov") if getattr(m, name) is None
        ]
        raise DomainError(
            "moment approximation needs fully populated inputs; missing: "
            + ", ".join(missing)
        )


def _quality_guard(m: MomentInputs) -> None:
    cv1 = math.sqrt(m.var1) / m.mu1
    cv2 = math.sqrt(m.var2) / m.mu2
    if max(cv1, cv2) > 0.5:
        warnings.warn(
            "second-order expansion is unreliable: a marginal coefficient of "
            f"variation is {max(cv1, cv2):.3f} (> 0.5)",
            ApproximationWarning,
            stacklevel=3,
        )


def approx_moment(p_exponent: float, m: MomentInputs) -> float:
    """Second-order approximation of E(W^p).

    E(W^p) ~ r^p + [p mu1^(p-1) / (2 (mu1+mu2)^(p+2))]
             * { (mu2/mu1) [(p-1) mu2 - 2 mu1] var1
                 + 2 (mu1 - p mu2) cov
                 + (p+1) mu1 var2 }

    with r = mu1/(mu1+mu2). Exact for p = 0 (everything carries a
    factor p); equal to 1/2 at p = 1 for symmetric inputs, where the
    correction cancels. Every term is degree-0 homogeneous in
    (mu, sqrt(var), sqrt(cov)) scaling, so the value is scale free.
    """
    _require_complete(m)
    _quality_guard(m)
    p = float(p_exponent)
    mu1, mu2 = m.mu1, m.mu2
    tot = mu1 + mu2
    lead = (mu1 / tot) ** p
    inner = (
        (mu2 / mu1) * ((p - 1.0) * mu2 - 2.0 * mu1) * m.var1
        + 2.0 * (mu1 - p * mu2) * m.cov
        + (p + 1.0) * mu1 * m.var2
    )
    corr = p * mu1 ** (p - 1.0) / (2.0 * tot ** (p + 2.0)) * inner
    return lead + corr


def approx_var(m: MomentInputs, truncated: bool = False) -> float:
    """Second-order approximation of Var(W).

    The default assembles the variance display

        mu1/(mu1+mu2)^4 { (mu2/mu1)(mu2 - 2 mu1) var1
                          + 2 (mu1 - 2 mu2) cov + 3 mu1 var2 }
        - B^2/(mu1+mu2)^6 + 2 mu1 B/(mu1+mu2)^4,
        B = mu2 var1 + (mu2 - mu1) cov - mu1 var2

    which is algebraically identical to
    ``approx_moment(2, m) - approx_moment(1, m)**2`` (the tests assert
    the two routes agree). The middle term is the square of the
    first-order mean correction; it is formally beyond second order, so
    ``truncated=True`` drops it, giving a consistently truncated
    variant that is never smaller than the default. The two variants
    coincide whenever B = 0, in particular for symmetric margins.
    """
    _require_complete(m)
    _quality_guard(m)
    mu1, mu2 = m.mu1, m.mu2
    tot = mu1 + mu2
    t2 = (
        mu1
        / tot**4
        * (
            (mu2 / mu1) * (mu2 - 2.0 * mu1) * m.var1
            + 2.0 * (mu1 - 2.0 * mu2) * m.cov
            + 3.0 * mu1 * m.var2
        )
    )
    b = mu2 * m.var1 + (mu2 - mu1) * m.cov - mu1 * m.var2
    out = t2 + 2.0 * mu1 * b / tot**4
    if not truncated:
        out -= b * b / tot**6
    return out
