"""Exception hierarchy shared by all modules."""


class LightlikeError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(LightlikeError, ValueError):
    pass


class DegenerateSpan(LightlikeError):
    """The metric restricted to a span is singular where a direct sum was requested."""


class InvalidStructure(LightlikeError, ValueError):
    pass


class NotOnHypersurface(LightlikeError):
    pass


class NotLightlike(LightlikeError):
    pass


class PolicyFailure(LightlikeError):
    """No admissible auxiliary vector for the transversal section."""


class DegenerateScreen(LightlikeError):
    pass


class FrameInvalid(LightlikeError):
    pass


class Inconsistent(LightlikeError):
    """Classification inputs violate the dichotomy; the frame is broken."""


class ZetaTangent(LightlikeError):
    """The induced (phi, omega) split needs eta(xi) != 0."""


class DimensionTooSmall(LightlikeError):
    pass


class PivotInstability(LightlikeError):
    pass


class EvaluationFailure(LightlikeError):
    pass


class ConfigError(LightlikeError, ValueError):
    pass
