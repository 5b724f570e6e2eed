"""Exception and warning types raised across the package."""


class ConfigurationError(ValueError):
    """Invalid physical or numerical parameters."""


class DomainError(ValueError):
    """A position or frequency lies outside the region an operation supports."""


class SingularBoundaryError(ArithmeticError):
    """The scattering boundary conditions cannot be solved (|W22| ~ 0)."""


class TransferOverflowError(OverflowError):
    """A transfer matrix grew past the representable range."""


class CatalogError(KeyError):
    """Unknown scenario name."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown scenario"


class ConfigParseError(ConfigurationError):
    """A configuration text could not be parsed; ``key`` names the offending entry."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


class UnitarityError(ArithmeticError):
    """A spectrum violated flux conservation and must not be written."""


class ResolutionWarning(UserWarning):
    pass


class NonNormalizableWarning(UserWarning):
    pass


class WraparoundWarning(UserWarning):
    pass
