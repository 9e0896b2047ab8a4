"""Exception types shared across the simulator."""


class SimulationError(Exception):
    """Base class for all simulator errors."""


class CoincidentPointsError(SimulationError):
    """Two ball centers are too close to define a contact direction."""


class NonUnitDirectionError(SimulationError):
    """A direction vector deviates from unit length beyond tolerance."""


class InvalidSpecError(SimulationError):
    """A lattice or run specification violates its constraints."""


class AnchorError(SimulationError):
    """The initial-condition anchor cannot be resolved on this lattice."""


class DuplicateSeedError(SimulationError):
    """A batch was given the same seed more than once."""


class InsufficientSamplesError(SimulationError):
    """Too few samples for the requested statistic."""


class DegenerateVarianceError(SimulationError):
    """A correlation margin has zero variance."""


class DegenerateSigmaError(SimulationError):
    """A scale parameter is zero or negative where positive is required."""


class AllZeroVelocitiesError(SimulationError):
    """Normalization scale is undefined because every component is zero."""


class BandingUnavailableError(SimulationError):
    """Band statistics requested on a configuration without a boundary."""
