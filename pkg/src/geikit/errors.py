"""Exception hierarchy.

Every error carries the pipeline ``stage`` it belongs to so the command line
front end can print a one-line diagnostic such as ``cycle: SequenceTooShort``.
"""


class GeiKitError(Exception):
    stage = "geikit"


# silhouette


class EmptySilhouette(GeiKitError, ValueError):
    stage = "silhouette"


class RoiTooWide(GeiKitError, ValueError):
    stage = "silhouette"


# cycle


class SignalTooShort(GeiKitError, ValueError):
    stage = "cycle"


class NoPeriodDetected(GeiKitError, ValueError):
    stage = "cycle"


class SequenceTooShort(GeiKitError, ValueError):
    stage = "cycle"


# gei / matching


class DimensionMismatch(GeiKitError, ValueError):
    stage = "gei"


class EmptyCycle(GeiKitError, ValueError):
    stage = "gei"


class ZeroTested(GeiKitError, ValueError):
    stage = "matching"


# dataset


class PathNotFound(GeiKitError, FileNotFoundError):
    stage = "dataset"


class NoFrames(GeiKitError, ValueError):
    stage = "dataset"


class DecodeError(GeiKitError, ValueError):
    stage = "dataset"

    def __init__(self, file, reason=""):
        self.file = str(file)
        self.reason = reason
        msg = f"cannot decode {self.file}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class SpecInvalid(GeiKitError, ValueError):
    stage = "dataset"


class FormatError(GeiKitError, ValueError):
    stage = "dataset"

    def __init__(self, offset: int, reason: str):
        self.offset = offset
        self.reason = reason
        super().__init__(f"byte {offset}: {reason}")


class VersionUnsupported(GeiKitError, ValueError):
    stage = "dataset"

    def __init__(self, version: int):
        self.version = version
        super().__init__(f"gallery format version {version} is not supported")


# bench


class InsufficientData(GeiKitError, ValueError):
    stage = "bench"
