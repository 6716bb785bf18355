"""Exception types shared across the package."""


class AntnavError(Exception):
    """Base class for all antnav errors."""


class MapParseError(AntnavError):
    """Map file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ScenarioParseError(AntnavError):
    """Scenario or groups file could not be parsed; carries the line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class OutOfBounds(AntnavError):
    """Cell index outside the world map."""


class PoseOutOfBounds(AntnavError):
    """Scan requested from a pose outside the world map."""


class PoseInObstacle(AntnavError):
    """Scan requested from a pose whose cell is occupied."""


class InvalidExtent(AntnavError):
    """Local grid square would exceed the scan disc."""


class NoCandidates(AntnavError):
    """No sub-goal candidates: the robot is enclosed by obstacles/inflation."""


class EmptyCandidates(AntnavError):
    """Sub-goal selection called with an empty candidate set."""


class DeadEnd(AntnavError):
    """An ant has no feasible next cell."""


class UnfinishedPath(AntnavError):
    """Score requested for a path that never reached the sub-goal."""


class NoPathFound(AntnavError):
    """No ant reached the sub-goal in any iteration."""


class NoBestPathYet(AntnavError):
    """Repair requested before any ant has ever reached the sub-goal."""


class CollisionDetected(AntnavError):
    """Robot cell and an obstacle cell coincided at some tick."""


class LocalMinimum(AntnavError):
    """Potential-field step found no neighbor below the current potential."""


class EmptyRuns(AntnavError):
    """Aggregate requested over zero runs."""
