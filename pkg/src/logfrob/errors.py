"""Exception hierarchy shared by every logfrob module"""


class LogFrobError(Exception):
    """Base class; ``module`` names the layer that raised the error."""

    module = "logfrob"

    def __init__(self, message="", **context):
        self.message = message
        self.context = context
        super().__init__(message)

    def __str__(self):
        text = f"[{self.module}] {self.message}"
        if self.context:
            details = ", ".join(f"{k}={v}" for k, v in sorted(self.context.items()))
            text += f" ({details})"
        return text

    def to_dict(self):
        return {
            "error": type(self).__name__,
            "module": self.module,
            "message": self.message,
            "context": {k: repr(v) for k, v in sorted(self.context.items())},
        }


# exactlin

class NotCompatible(LogFrobError):
    module = "exactlin"


class NotInvertible(LogFrobError):
    module = "exactlin"


# toricgeom

class NotSmooth(LogFrobError):
    module = "toricgeom"


class NotComplete(LogFrobError):
    module = "toricgeom"


class RadiusTooSmall(LogFrobError):
    module = "toricgeom"


# logdr

class NotInWeightLevel(LogFrobError):
    module = "logdr"


class BadFace(LogFrobError):
    module = "logdr"


class DecompositionFailure(LogFrobError):
    module = "logdr"


# cech

class NotACocycle(LogFrobError):
    module = "cech"


# frobsplit

class NotRegular(LogFrobError):
    module = "frobsplit"


class DegreeTooHigh(LogFrobError):
    module = "frobsplit"


class NoChartAssignment(LogFrobError):
    module = "frobsplit"


class IncompatibleDivisors(NoChartAssignment):
    pass


# specseq

class AxiomViolation(LogFrobError):
    module = "specseq"


class NoDegeneration(LogFrobError):
    module = "specseq"


# flmod

class NotAnFLMorphism(LogFrobError):
    module = "flmod"


# cohomcli

class SpecParseError(LogFrobError):
    module = "cohomcli"
