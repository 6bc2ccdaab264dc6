"""Exception types shared across the package."""


class FFPermError(Exception):
    """Base class for all package errors."""


class InvalidParameters(FFPermError, ValueError):
    """A construction was requested with parameters outside its hypotheses."""


class ContextMismatch(FFPermError, ValueError):
    """Operands live in different field contexts."""


class IndexOutOfRange(FFPermError, IndexError):
    pass


class NotAPermutation(FFPermError):
    """A map that must be bijective (on its stated domain) is not."""


class NotACompleteMapping(FFPermError):
    pass


class BudgetExceeded(FFPermError):
    """An exhaustive sweep would exceed the configured element budget."""


class PMismatch(FFPermError, ValueError):
    """Cyclotomic integers over different primes were combined."""


class OrderMismatch(FFPermError, ValueError):
    pass


class ClaimViolated(FFPermError, ArithmeticError):
    """An identity that the construction relies on failed at runtime."""
