class QBatteryError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(QBatteryError, ValueError):
    def __init__(self, what, expected, actual):
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what}: expected {expected}, got {actual}")


class StructureError(QBatteryError, ValueError):
    """An operator or state fails its structural invariant (Hermiticity, unitarity, ...)."""


class NonConvergenceError(QBatteryError, ArithmeticError):
    pass


class InfiniteRelativeEntropyError(QBatteryError, ValueError):
    def __init__(self, leak):
        self.leak = leak
        super().__init__(f"infinite relative entropy: support weight {leak:.3e} outside support of second argument")


class DegenerateSpectrumError(QBatteryError, ValueError):
    pass


class EquilibriumError(QBatteryError, ValueError):
    """Raised when the equilibrium commutation conditions fail."""

    def __init__(self, which, norm, tol):
        self.which = which
        self.norm = norm
        super().__init__(f"commutator {which} has max entry {norm:.3e} > {tol:.1e}")


class ParameterError(QBatteryError, ValueError):
    pass


class OracleSizeError(QBatteryError, ValueError):
    pass


class ModelFileError(QBatteryError, ValueError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        parts = [str(path)] if path is not None else []
        if line is not None:
            parts.append(f"line {line}")
        super().__init__(f"{', '.join(parts)}: {message}" if parts else message)
