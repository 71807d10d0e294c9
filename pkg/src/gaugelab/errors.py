"""Exception types shared across the package."""


class GaugelabError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(GaugelabError):
    """A scenario document failed validation (CLI exit code 2)."""


class NumericError(GaugelabError):
    """Base class for runtime numerical failures (CLI exit code 3)."""


class BlowupError(NumericError):
    """A non-finite field value appeared during time evolution.

    `step` is the 1-based index of the offending leapfrog step.
    """

    def __init__(self, step, detail=""):
        self.step = step
        msg = f"non-finite field values at step {step}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class EnergyDriftError(NumericError):
    """Total energy drifted past the configured alarm threshold.

    `step` is the 1-based step index of the observation that tripped the
    alarm; `drift` the measured relative deviation.
    """

    def __init__(self, step, drift, threshold):
        self.step = step
        self.drift = drift
        self.threshold = threshold
        super().__init__(
            f"energy drift {drift:.3e} exceeds alarm threshold "
            f"{threshold:.3e} at step {step}"
        )


class DegeneratePerturbationError(NumericError):
    """The separation between fiducial and perturbed trajectories vanished."""
