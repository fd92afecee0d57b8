"""Exception and warning types shared across the package."""


class KreinBemError(Exception):
    """Base class for all package errors."""


class DomainError(KreinBemError):
    """Kernel evaluated at a point where it is singular (x = 0 or zeta = 0)."""


class InvalidDomain(KreinBemError):
    """Domain specification violates its invariants (self-intersection, nonpositive radius, ...)."""


class EmptyGrid(KreinBemError):
    """Interior grid construction produced no admissible points."""


class MeshMismatch(KreinBemError):
    """Two objects that must share a boundary mesh do not."""


class GridTooCoarse(KreinBemError):
    """Volume grid does not resolve the source field."""


class SupportTooWide(KreinBemError):
    """Source field is not separated from the boundary as required."""


class NearSingular(KreinBemError):
    """Boundary operator is numerically singular at this spectral parameter.

    Signals that z lies at (or too close to) an eigenvalue of the
    corresponding Laplacian, or in the exceptional set of the integral
    formulation.
    """

    def __init__(self, z, cond):
        self.z = z
        self.cond = float(cond)
        super().__init__(f"boundary operator near-singular at z={z}: cond={cond:.3e}")


class RootNotBracketed(KreinBemError):
    """Bisection oracle could not bracket a requested root."""


class ZeroData(KreinBemError):
    """A check that needs nonzero data received zero data."""


class TargetTooCloseWarning(UserWarning):
    """Evaluation targets are closer to the boundary than the quadrature resolves well."""
