class MalformedElementError(ValueError):
    pass


class NotSelfAdjointError(ValueError):
    pass


class SpectrumError(ValueError):
    pass


class RankError(ValueError):
    pass


class UnevaluableError(LookupError):
    """The measure has no value at the requested projection."""


class RepresentationError(ValueError):
    """The measure representation cannot handle this shape or argument."""


class UnsupportedMeasureError(TypeError):
    pass


class DegenerateMeasureError(ValueError):
    pass


class ExtensionError(RuntimeError):
    """A component of a vector measure failed to extend linearly."""

    def __init__(self, index, result):
        self.index = index
        self.result = result
        super().__init__(
            f"component {index} did not extend: status={result.status.value}, "
            f"residual={result.residual:.3g}")
