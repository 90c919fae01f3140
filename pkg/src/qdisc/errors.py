"""Exception and warning types shared across the package."""


class QDiscError(Exception):
    """Base class for all library errors."""


class PoleError(QDiscError):
    """A q-gamma / q-Pochhammer ratio was evaluated at a pole."""


class DivergenceError(QDiscError):
    """A series whose terms grow persistently instead of converging."""


class ParameterPoleError(QDiscError):
    """A basic hypergeometric series hit a zero denominator parameter."""


class AngularOverflow(QDiscError):
    """A polar conversion produced an angular index beyond the cutoff."""


class NotPolynomial(QDiscError):
    """A polar function without closed polynomial radial parts where one is required."""


class DegreeCapExceeded(QDiscError):
    """A kernel operation produced generator powers beyond the configured cap."""


class DegreeOverflow(QDiscError):
    """A differential-form product outside bidegree (1,1).

    Products of that kind are annihilated by dz^2 = dz*^2 = 0, so the engine
    returns zero instead of raising; the class is kept for API completeness.
    """


class SummabilityError(QDiscError):
    """An integrand whose mode-0 samples are not absolutely summable."""


class ExprSyntaxError(QDiscError, SyntaxError):
    """Expression parse failure; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ExprOverflowError(QDiscError, OverflowError):
    """An expression power beyond the configured degree cap."""


class DivergenceWarning(UserWarning):
    """Partial sums of an invariant-measure integral were not Cauchy."""


class ConvergenceWarning(UserWarning):
    """Two consecutive boundary-limit estimates disagreed beyond tolerance."""
