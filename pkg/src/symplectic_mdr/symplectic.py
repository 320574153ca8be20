"""Symplectic form, compatible almost-complex structure and the geometric scale.

The metric is ``g = omega @ J`` (``g_uv = sum_w omega_uw J^w_v``).  The
geometric length squared is the spectral norm of ``inv(omega) @ J``,
obtained from the largest eigenvalue of its Gram matrix.

The orientation flag ``sigma`` is configuration, not derived: any real
``J`` with ``J @ J = -I`` has eigenvalues in conjugate pairs ``+-i`` and
therefore ``det J = +1``, so a determinant-sign rule could never produce
the ``-1`` the polymer realization needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .enclosure import DEFAULT_WIDTH, Interval, exact_sqrt, largest_real_root, sqrt_enclosure

SCHEMA_VERSION = 1

# orientation flags of the two concrete realizations
SIGMA_POLYMER = -1
SIGMA_MOYAL = +1


@dataclass(frozen=True)
class SymplecticData:
    omega: la.Matrix
    J: la.Matrix
    sigma: int = +1

    def __post_init__(self):
        object.__setattr__(self, "omega", la.mat(self.omega))
        object.__setattr__(self, "J", la.mat(self.J))
        if self.sigma not in (1, -1):
            raise ValueError("sigma must be +1 or -1")

    @property
    def dim(self) -> int:
        return len(self.omega)

    @property
    def metric(self) -> la.Matrix:
        return la.matmul(self.omega, self.J)

    @classmethod
    def canonical(cls, n: int = 1, scale=1, sigma: int = +1) -> "SymplecticData":
        """Standard Kahler pair on R^(2n): ``omega`` blocks ``[[0, s], [-s, 0]]``, ``J`` blocks ``[[0, -1], [1, 0]]``."""
        s = Fraction(scale)
        om = la.block_diag(*[la.mat([[0, s], [-s, 0]])] * n)
        j = la.block_diag(*[la.mat([[0, -1], [1, 0]])] * n)
        return cls(om, j, sigma)

    def conjugate(self, S: la.Matrix) -> "SymplecticData":
        """Change of basis ``omega -> S^T omega S``, ``J -> S^-1 J S``."""
        om = la.matmul(la.transpose(S), la.matmul(self.omega, S))
        j = la.matmul(la.inverse(S), la.matmul(self.J, S))
        return SymplecticData(om, j, self.sigma)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "dim": self.dim,
            "omega": la.to_strings(self.omega),
            "J": la.to_strings(self.J),
            "sigma": self.sigma,
        }

    @classmethod
    def from_json(cls, obj) -> "SymplecticData":
        data = cls([[Fraction(x) for x in r] for r in obj["omega"]],
                   [[Fraction(x) for x in r] for r in obj["J"]],
                   int(obj.get("sigma", 1)))
        if "dim" in obj and obj["dim"] != data.dim:
            raise ValueError("declared dim does not match matrix size")
        return data


@dataclass
class ValidationReport:
    checks: dict = field(default_factory=dict)
    first_bad_minor: int | None = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        out = {"ok": self.ok, "checks": dict(self.checks)}
        if self.first_bad_minor is not None:
            out["first_bad_minor"] = self.first_bad_minor
        if self.message:
            out["message"] = self.message
        return out


def validate(data: SymplecticData) -> ValidationReport:
    om, j = data.omega, data.J
    n = len(om)
    if not la.is_square(om) or not la.is_square(j) or len(j) != n:
        raise ValueError("omega and J must be square matrices of the same size")
    if n == 0 or n % 2:
        raise ValueError(f"dimension must be even and positive, got {n}")
    rep = ValidationReport()
    rep.checks["omega_antisymmetric"] = la.is_antisymmetric(om)
    rep.checks["omega_invertible"] = la.det(om) != 0
    rep.checks["J_squared_is_minus_identity"] = la.matmul(j, j) == la.neg(la.identity(n))
    g = data.metric
    rep.checks["metric_symmetric"] = la.is_symmetric(g)
    minors = la.leading_minors(g)
    bad = next((k + 1 for k, m in enumerate(minors) if m <= 0), None)
    rep.checks["metric_positive_definite"] = rep.checks["metric_symmetric"] and bad is None
    if bad is not None:
        rep.first_bad_minor = bad
        rep.message = f"leading principal minor {bad} of g = omega J is {minors[bad - 1]}"
    return rep


@dataclass(frozen=True)
class GeometricScale:
    """Operator norm of ``inv(omega) @ J``: exact, or a certified enclosure."""

    ell_star_sq: Fraction | Interval

    @property
    def exact(self) -> bool:
        return isinstance(self.ell_star_sq, Fraction)

    def __float__(self):
        return float(self.ell_star_sq)


def ell_star_squared(data: SymplecticData, width=DEFAULT_WIDTH) -> GeometricScale:
    rep = validate(data)
    if not rep.ok:
        failed = [k for k, v in rep.checks.items() if not v]
        raise ValueError(f"symplectic data failed validation: {failed}")
    a = la.matmul(la.inverse(data.omega), data.J)
    gram = la.matmul(la.transpose(a), a)
    lam = largest_real_root(la.charpoly(gram), width)
    if isinstance(lam, Fraction):
        r = exact_sqrt(lam)
        return GeometricScale(r if r is not None else sqrt_enclosure(lam, width))
    return GeometricScale(lam.sqrt(width))


def orientation_sigma(data: SymplecticData) -> int:
    return data.sigma
