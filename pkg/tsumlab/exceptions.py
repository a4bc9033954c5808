"""
Exception hierarchy for the 3SUM-Indexing laboratory
"""

from typing import Any, Dict, Optional


class TsumLabError(Exception):
    """Base class for every error raised by tsumlab"""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def to_dict(self) -> Dict[str, Any]:
        """Serializable view used by the CLI error reports"""
        return {
            "error": self.__class__.__name__,
            "message": self.message,
            "context": {key: _plain(value) for key, value in self.context.items()},
        }


def _plain(value: Any) -> Any:
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


# Group arithmetic and codecs
class InvalidElement(TsumLabError):
    """Element id outside [0, |G|)"""


class DigitOutOfRange(TsumLabError):
    """A digit is not below its base"""


class LengthMismatch(TsumLabError):
    """Digit vector length differs from the codec length"""


class OrderMismatch(TsumLabError):
    """Codec order differs from the ambient group order"""


# Cell-probe execution
class ProbeBudgetExceeded(TsumLabError):
    """A query read more cells than its declared T"""


class OutOfBoundsProbe(TsumLabError):
    """A query addressed a cell outside [0, S)"""


class WordTooSmall(TsumLabError):
    """A value does not fit in a w-bit word"""


class InvalidParameters(TsumLabError):
    """Parameters violate an operation's precondition"""


class GroupTooLarge(TsumLabError):
    """Group order exceeds the configured desk-scale cap"""


class ParameterOverflow(TsumLabError):
    """Derived sizes exceed the configured desk-scale caps"""


# Reductions
class UnsupportedMode(TsumLabError):
    """Encoding mode not available for these parameters"""


class LabelOutOfRange(TsumLabError):
    """Butterfly node label outside [B^d]"""


# Adversarial distribution
class GroupTooSmall(TsumLabError):
    """No safe element exists for the greedy realization step"""


class IncompleteCover(TsumLabError):
    """Realizations do not cover every subset of Q"""


# Bit-probe audit
class DegreeTooSmall(TsumLabError):
    """Average degree is not above 2"""


# One-way function
class EqualHalves(TsumLabError):
    """Immunized function evaluated with x1 == x2"""


class OutOfDomain(TsumLabError):
    """Oracle input outside [0, N)"""


# Files and reports
class InstanceFormatError(TsumLabError):
    """An input file could not be parsed"""

    def __init__(self, message: str, location: Optional[str] = None, **context: Any):
        super().__init__(message, location=location, **context)
        self.location = location


class ReportIOError(TsumLabError):
    """A report could not be written"""


class UsageError(TsumLabError):
    """Command line could not be parsed"""
