"""Exception hierarchy shared by every module in the package."""


class AlarmCorrError(Exception):
    """Base class for all errors raised by alarmcorr."""


class TopologyError(AlarmCorrError):
    pass


class UnknownClassCode(TopologyError):
    pass


class IllegalParentClass(TopologyError):
    pass


class DanglingParent(TopologyError):
    pass


class ConflictingParent(TopologyError):
    pass


class CycleDetected(TopologyError):
    pass


class UnknownElement(AlarmCorrError, LookupError):
    pass


class ParseError(AlarmCorrError):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class MalformedLine(ParseError):
    pass


class EmptyLog(ParseError):
    pass


class EmptyQueue(AlarmCorrError, ValueError):
    pass


class MixedLengths(AlarmCorrError, ValueError):
    pass


class ConstraintError(AlarmCorrError, ValueError):
    """Invalid constraint or threshold configuration."""


class ZeroAntecedentSupport(AlarmCorrError, ZeroDivisionError):
    pass


class InconsistentInputs(AlarmCorrError, ValueError):
    pass


class NoSequencesAtLength(AlarmCorrError, LookupError):
    pass


class SpecInfeasible(AlarmCorrError, ValueError):
    pass


class InstanceTooLarge(AlarmCorrError, ValueError):
    pass
