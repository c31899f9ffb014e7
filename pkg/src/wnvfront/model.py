"""Model parameterization, reaction terms, and initial data.

The two infected compartments are U (birds) and V (mosquitoes):

    U_t = D1 U_xx + a1(x,t) (N1 - U) V - d1(x,t) U
    V_t = D2 V_xx + a2(x,t) (N2 - V) U - d2(x,t) V

with a1 = alpha1*beta/N1, a2 = alpha2*beta/N1, d1 = gamma, d2 = d.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .coefficients import CoefficientField, LinearizationMatrix, TemporalHarmonic


@dataclass(frozen=True)
class ModelSpec:
    """Full parameterization of the two-compartment free-boundary model."""

    D1: float
    D2: float
    N1: float
    N2: float
    beta: float
    alpha1: CoefficientField
    alpha2: CoefficientField
    gamma_field: CoefficientField  # bird recovery rate d1
    death_field: CoefficientField  # mosquito death rate d2
    mu: float
    h0: float

    def __post_init__(self):
        for name in ("D1", "D2", "N1", "N2", "beta", "mu", "h0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    # Derived reduced coefficients
    @property
    def a1(self) -> CoefficientField:
        return self.alpha1.scaled(self.beta / self.N1)

    @property
    def a2(self) -> CoefficientField:
        return self.alpha2.scaled(self.beta / self.N1)

    @property
    def d1(self) -> CoefficientField:
        return self.gamma_field

    @property
    def d2(self) -> CoefficientField:
        return self.death_field

    def reaction(self, x, t, U, V):
        """Reaction terms (dU, dV); vectorized over all arguments."""
        a1 = self.a1.eval(x, t)
        a2 = self.a2.eval(x, t)
        d1 = self.d1.eval(x, t)
        d2 = self.d2.eval(x, t)
        dU = a1 * (self.N1 - U) * V - d1 * U
        dV = a2 * (self.N2 - V) * U - d2 * V
        return dU, dV

    def linearization(self) -> LinearizationMatrix:
        """Jacobian of the reaction at (U, V) = (0, 0) as a matrix field."""
        return LinearizationMatrix(
            a1=self.a1,
            a2=self.a2,
            d1=self.d1,
            d2=self.d2,
            N1=self.N1,
            N2=self.N2,
        )

    def jacobian_at_zero(self, x: float, t: float) -> np.ndarray:
        return self.linearization().eval(x, t)

    def with_mu(self, mu: float) -> "ModelSpec":
        from dataclasses import replace

        return replace(self, mu=mu)

    def with_h0(self, h0: float) -> "ModelSpec":
        from dataclasses import replace

        return replace(self, h0=h0)


@dataclass(frozen=True)
class InitialData:
    """Initial infected profiles on [-h0, h0].

    Default is the cosine-bump family

        U0(x) = amp_U * cos(pi x / (2 h0)),  V0(x) = amp_V * cos(pi x / (2 h0)),

    optionally replaced by sampled arrays (x_samples strictly increasing,
    endpoints at +-h0 with zero values).
    """

    amp_U: float = 0.1
    amp_V: float = 2.0
    x_samples: Optional[np.ndarray] = field(default=None)
    U_samples: Optional[np.ndarray] = field(default=None)
    V_samples: Optional[np.ndarray] = field(default=None)

    @property
    def is_sampled(self) -> bool:
        return self.x_samples is not None

    def u0(self, x, h0: float):
        return self._eval(x, h0, self.amp_U, self.U_samples)

    def v0(self, x, h0: float):
        return self._eval(x, h0, self.amp_V, self.V_samples)

    def _eval(self, x, h0, amp, samples):
        x = np.asarray(x, dtype=float)
        if self.is_sampled:
            return np.interp(x, self.x_samples, samples)
        return amp * np.cos(np.pi * x / (2.0 * h0))

    def validate(self, spec: ModelSpec):
        """Check endpoint zeros and 0 < U0 <= N1, 0 < V0 <= N2 on the interior."""
        h0 = spec.h0
        x = np.linspace(-h0, h0, 401)
        U = self.u0(x, h0)
        V = self.v0(x, h0)
        if abs(U[0]) > 1e-12 or abs(U[-1]) > 1e-12 or abs(V[0]) > 1e-12 or abs(V[-1]) > 1e-12:
            raise ValueError("initial profiles must vanish at the fronts x = +-h0")
        Ui, Vi = U[1:-1], V[1:-1]
        if np.any(Ui <= 0) or np.any(Ui > spec.N1):
            raise ValueError("U0 must satisfy 0 < U0 <= N1 on (-h0, h0)")
        if np.any(Vi <= 0) or np.any(Vi > spec.N2):
            raise ValueError("V0 must satisfy 0 < V0 <= N2 on (-h0, h0)")

    @classmethod
    def from_samples(cls, x, U, V) -> "InitialData":
        x = np.asarray(x, dtype=float)
        U = np.asarray(U, dtype=float)
        V = np.asarray(V, dtype=float)
        if not (x.shape == U.shape == V.shape) or x.ndim != 1 or x.size < 3:
            raise ValueError("sampled initial data needs matching 1-D arrays, >= 3 points")
        if np.any(np.diff(x) <= 0):
            raise ValueError("sample abscissae must be strictly increasing")
        return cls(x_samples=x, U_samples=U, V_samples=V)


def default_paper_spec(mu: float = 0.1, h0: float = 2.0) -> ModelSpec:
    """The reference simulation parameterization.

    D1=3, D2=0.125, N1=1, N2=20, beta=0.6, with the four heterogeneous
    almost-periodic rate fields (two transmission probabilities, recovery,
    mosquito death).
    """
    alpha1 = CoefficientField(
        base=0.88,
        harmonics=(TemporalHarmonic(0.56, 0.5, "cos"),),
        spatial_amp=0.088,
        spatial="ratio2_cos",
        floor=1e-3,
    )
    alpha2 = CoefficientField(
        base=0.16,
        harmonics=(TemporalHarmonic(0.2, np.pi / 3.0, "cos"),),
        spatial_amp=0.024,
        spatial="ratio1_cos",
        floor=1e-3,
    )
    gamma = CoefficientField(
        base=0.1,
        harmonics=(TemporalHarmonic(0.3, 1.0 / 3.0, "sin"),),
        spatial_amp=0.02,
        spatial="ratio2_sin",
        floor=1e-3,
    )
    death = CoefficientField(
        base=0.029,
        harmonics=(TemporalHarmonic(0.1, np.pi / 2.0, "sin"),),
        spatial_amp=0.0016,
        spatial="ratio1_sin",
        floor=1e-3,
    )
    return ModelSpec(
        D1=3.0,
        D2=0.125,
        N1=1.0,
        N2=20.0,
        beta=0.6,
        alpha1=alpha1,
        alpha2=alpha2,
        gamma_field=gamma,
        death_field=death,
        mu=mu,
        h0=h0,
    )
