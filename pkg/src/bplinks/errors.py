"""Exception hierarchy shared across the library.

Everything raised deliberately by this package derives from
:class:`LinkInvariantError`, so callers can catch one type at the
boundary (the CLI does exactly that) and still tell failure modes
apart by subclass.
"""


class LinkInvariantError(Exception):
    """Base class for all errors raised by this library."""


class InvalidExponent(LinkInvariantError):
    """An exponent vector contains an entry below 2, or is empty."""


class OddDimension(LinkInvariantError):
    """A signature was requested for a fibre of odd complex dimension.

    The intersection form is symmetric only when the number of
    variables is odd (n even); otherwise there is no signature to
    report.
    """


class BudgetExceeded(LinkInvariantError):
    """A lattice enumeration or matrix build would exceed its size budget."""


class AmbiguousRounding(LinkInvariantError):
    """A certified interval is too wide to round to a unique integer."""


class NotCommonMultiple(LinkInvariantError):
    """A supplied modulus is not a common multiple of the exponents."""


class NotFiniteOrder(LinkInvariantError):
    """A monodromy operator failed to have finite order (defensive)."""


class IncomparableLinks(LinkInvariantError):
    """Two links cannot differ by a homotopy sphere (ranks disagree)."""


class NotDivisibleBy8(LinkInvariantError):
    """A signature difference is not divisible by 8, so no offset exists."""
