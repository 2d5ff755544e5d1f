"""Exception types. Every error carries a stable machine-readable ``code``."""


class SclError(Exception):
    code = "ERROR"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def __str__(self):
        return f"{self.code}: {self.args[0]}"


class ParseError(SclError):
    code = "MALFORMED_INPUT"


class InvalidSpec(SclError):
    code = "INVALID_SPEC"


class PathExplosion(SclError):
    code = "PATH_EXPLOSION"

    def __init__(self, count, cap):
        super().__init__(f"more than {cap} taut turn paths (stopped after {count})")
        self.count = count
        self.cap = cap


class OrientationIncoherent(SclError):
    code = "ORIENTATION_INCOHERENT"


class EmptyTurnPaths(SclError):
    code = "EMPTY_TP"


class UnknownPath(SclError):
    code = "UNKNOWN_PATH"


class TooLarge(SclError):
    code = "TOO_LARGE"


class MatchingViolation(SclError):
    code = "MATCHING_VIOLATION"


class NonOrientable(SclError):
    code = "NONORIENTABLE"


class BadPartition(SclError):
    code = "BAD_PARTITION"


class DiskBase(SclError):
    code = "DISK_BASE"


class DegreeMismatch(SclError):
    code = "DEGREE_MISMATCH"
