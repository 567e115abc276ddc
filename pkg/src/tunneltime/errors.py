"""Exception hierarchy shared across the package."""


class TunnelTimeError(Exception):
    """Base class for all package errors."""


class DegenerateKinematicsError(TunnelTimeError, ValueError):
    """Energy coincides with a segment height, so a wavenumber vanishes."""


class EnergyDomainError(TunnelTimeError, ValueError):
    """Energy outside the admissible domain (e.g. E <= 0)."""


class ProfileError(TunnelTimeError, ValueError):
    """Malformed potential profile."""


class NearResonanceError(TunnelTimeError, ArithmeticError):
    """Opaque-limit cavity factor diverges at a resonance."""


class StepTooLargeError(TunnelTimeError, ArithmeticError):
    """Differentiation stencil too coarse to follow the transmission phase."""


class SchemeError(TunnelTimeError, ArithmeticError):
    """Time stepping lost unitarity."""


class InsufficientTransmissionError(TunnelTimeError, ValueError):
    """Transmitted signal is below the detection floor."""


class MappingError(TunnelTimeError, ValueError):
    """Waveguide parameters do not map onto a tunneling problem."""
