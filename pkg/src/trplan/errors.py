"""Exception types shared across the planning toolkit."""


class PlanningError(Exception):
    """Base class for all toolkit-specific errors."""


class DegenerateQuery(PlanningError):
    """Steering or distance query between two identical states."""


class OutOfRange(PlanningError):
    """Arc-length query outside [0, path.length]."""


class BadCount(PlanningError):
    """Interpolation count too small (need at least 2 states)."""


class InsideObstacle(PlanningError):
    """A query pose lies inside an obstacle or outside the workspace."""


class SamplingStalled(PlanningError):
    """Rejection sampling failed to find a free position."""


class InvalidEndpoints(PlanningError):
    """Planner start or goal position is not in free space."""


class ParseError(PlanningError):
    """Scenario file is malformed (bad JSON, missing or mistyped fields)."""


class ValidationError(PlanningError):
    """Scenario field violates an invariant; message names the field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
