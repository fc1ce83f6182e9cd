"""Exception types shared across the package."""


class BindimError(Exception):
    """Base class for structured computation errors."""


class FormatError(BindimError):
    """Input does not conform to the declared file format."""


class EmptyDatasetError(BindimError):
    """Operation undefined on a dataset with no rows."""


class DegenerateDataError(BindimError):
    """Data carries no variation where the operation requires some."""


class DegenerateRangeError(BindimError):
    """The radius range for a slope fit collapsed to a single point."""


class InsufficientMassError(BindimError):
    """The distance CDF has zero mass at the lower fitting radius."""


class NoRootError(BindimError):
    """A bracketing search could not enclose its target value.

    Diagnostics (target, bracket values) are attached as keyword data.
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class SaturationError(BindimError):
    """An integer search ran into its configured upper bound."""
