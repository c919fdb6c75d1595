"""Working-precision context and the error taxonomy shared by all kernels."""

from __future__ import annotations

from dataclasses import dataclass, field


class KernelError(Exception):
    """Base class for numerical-evaluation failures."""


class NonConvergenceError(KernelError):
    """A series or iteration hit its term cap before converging."""


class QuadratureError(KernelError):
    """A quadrature failed to stabilize within its refinement budget."""


class CancellationAlarm(KernelError):
    """A combination lost more significant bits than the context allows."""


class PoleError(ValueError):
    """Evaluation requested at (or too near) a pole."""


class GeneralPositionError(ValueError):
    """Spectral parameter violates the generic-position assumption."""


class InsufficientSupportError(ValueError):
    """A truncated coefficient schedule does not cover the required terms."""


class BracketViolation(KernelError):
    """A selected representative failed its guaranteed bracketing inequality."""


_MAX_BITS = 960  # tolerances are stored as doubles; 2^-(bits+8) must not underflow


@dataclass(frozen=True)
class PrecisionContext:
    """Mantissa precision plus the tolerances that drive every evaluator.

    bits        working mantissa bits for results returned to the caller
    series_tol  relative size at which series terms count as negligible
    quad_tol    relative agreement required between quadrature refinements
    max_terms   hard cap on series terms before NonConvergenceError
    """

    bits: int = 128
    series_tol: float = field(default=None)  # type: ignore[assignment]
    quad_tol: float = field(default=None)  # type: ignore[assignment]
    max_terms: int = 8192

    def __post_init__(self):
        if not (53 <= self.bits <= _MAX_BITS):
            raise ValueError(f"bits must lie in [53, {_MAX_BITS}], got {self.bits}")
        if self.series_tol is None:
            object.__setattr__(self, "series_tol", 2.0 ** -(self.bits + 8))
        if self.quad_tol is None:
            object.__setattr__(self, "quad_tol", 2.0 ** -(self.bits // 2))
        for name in ("series_tol", "quad_tol"):
            v = getattr(self, name)
            if not (0.0 < v < 2.0**-20):
                raise ValueError(f"{name} must lie in (0, 2^-20), got {v}")
        if self.max_terms < 64:
            raise ValueError(f"max_terms must be >= 64, got {self.max_terms}")

    def with_bits(self, bits: int) -> "PrecisionContext":
        return PrecisionContext(bits=bits, max_terms=self.max_terms)


DEFAULT_CTX = PrecisionContext()
