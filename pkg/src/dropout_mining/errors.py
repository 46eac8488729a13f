"""Exception types shared across the toolkit.

Everything raised on bad data or bad arguments derives from ``MiningError`` so
the CLI can map it to exit status 1.
"""


class MiningError(Exception):
    pass


class StructuralError(MiningError):
    """Malformed input file: ragged rows, duplicate headers, empty file."""


class ConfigurationError(MiningError):
    """A name or option that does not fit the data (unknown attribute etc.)."""


class DegenerateError(MiningError):
    """Input has no usable content: empty dataset, zero marginal, N = 0."""


class DomainError(MiningError, ValueError):
    """Numeric argument outside the function's domain."""


class ContractError(MiningError):
    """Violated precondition such as mismatched lengths or wrong attribute kind."""


class ClassificationError(ContractError):
    pass


class CollinearityError(DegenerateError):
    def __init__(self, message, predictor=None):
        super().__init__(message)
        self.predictor = predictor


class SpecificationError(MiningError):
    """Inconsistent synthetic cohort specification."""
