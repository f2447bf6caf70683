"""Error types raised by the lab. Routes turn these into HTTP 400, the CLI into exit code 2."""


class LabError(Exception):
    """Base class for every error the lab raises on purpose."""


class ConfigError(LabError):
    """Experiment file missing, unreadable or invalid."""


class GeometryError(LabError):
    """Sensor geometry or lag set cannot support the requested operation."""


class DegenerateGeometryError(GeometryError):
    """A truncated co-array part is empty, so its block has no rows."""


class SteeringDomainError(LabError, ValueError):
    """Angle outside the open interval (-90, 90) degrees."""


class EstimationError(LabError):
    """Covariance, smoothing or MUSIC step cannot be carried out."""


class OutputError(LabError):
    """Result file could not be written."""
