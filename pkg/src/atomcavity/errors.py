"""Exception and warning types shared across the package."""


class InvalidArgumentError(ValueError):
    """An input is outside the domain of the model."""


class ResolutionError(ValueError):
    """A numerical grid is too coarse for the requested accuracy."""


class GainError(ValueError):
    """Coupling implies optical gain (Im beta < 0); the model is passive."""


class UnsupportedOperationError(TypeError):
    """Operation needs physical geometry but got an abstract scenario."""


class EstimatorError(RuntimeError):
    """A Monte-Carlo estimator raised; carries the failing sample index."""

    def __init__(self, sample_index, cause):
        super().__init__(f"estimator failed on sample {sample_index}: {cause!r}")
        self.sample_index = sample_index


class PhysicsWarning(UserWarning):
    """Inputs are evaluable but outside the regime where the model is accurate."""
